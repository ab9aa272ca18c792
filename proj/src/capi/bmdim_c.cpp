#include "bmdim/bmdim.h"

#include "complexity.hpp"
#include "fractal_energy.hpp"
#include "runner.hpp"
#include "walk.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

struct bmd_params {
  std::map<std::string, std::string> values;
};

struct bmd_report {
  bmdim::RunReport report;
};

struct bmd_walk {
  bmdim::WalkPath path;
  std::string text;
};

namespace {

thread_local std::string last_error;

bmd_status status_of(bmdim::ErrorKind kind) {
  using bmdim::ErrorKind;
  switch (kind) {
    case ErrorKind::Structural: return BMD_ERR_STRUCTURAL;
    case ErrorKind::Range: return BMD_ERR_RANGE;
    case ErrorKind::Consistency: return BMD_ERR_CONSISTENCY;
    case ErrorKind::Boundary: return BMD_ERR_BOUNDARY;
    case ErrorKind::Budget: return BMD_ERR_BUDGET;
    case ErrorKind::InvalidTest: return BMD_ERR_INVALID_TEST;
    case ErrorKind::Divergent: return BMD_ERR_DIVERGENT;
    case ErrorKind::Config: return BMD_ERR_CONFIG;
  }
  return BMD_ERR_INTERNAL;
}

template <class Fn>
bmd_status guarded(Fn fn) {
  last_error.clear();
  try {
    fn();
    return BMD_OK;
  } catch (const bmdim::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BMD_ERR_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BMD_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return BMD_ERR_INTERNAL;
  }
}

bmd_status bad_argument(const char* what) {
  last_error = what;
  return BMD_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* bmd_version(void) { return "0.1.0"; }

const char* bmd_last_error(void) { return last_error.c_str(); }

const char* bmd_status_name(bmd_status status) {
  switch (status) {
    case BMD_OK: return "ok";
    case BMD_ERR_INTERNAL: return "internal error";
    case BMD_ERR_CONFIG: return "config error";
    case BMD_ERR_BUDGET: return "budget error";
    case BMD_ERR_STRUCTURAL: return "structural error";
    case BMD_ERR_RANGE: return "range error";
    case BMD_ERR_CONSISTENCY: return "consistency error";
    case BMD_ERR_BOUNDARY: return "boundary error";
    case BMD_ERR_INVALID_TEST: return "invalid test";
    case BMD_ERR_DIVERGENT: return "divergent";
    case BMD_ERR_ARGUMENT: return "bad argument";
  }
  return "unknown status";
}

size_t bmd_command_count(void) { return bmdim::command_specs().size(); }

const char* bmd_command_name(size_t index) {
  const auto& s = bmdim::command_specs();
  return index < s.size() ? s[index].name.c_str() : nullptr;
}

const char* bmd_command_description(size_t index) {
  const auto& s = bmdim::command_specs();
  return index < s.size() ? s[index].description.c_str() : nullptr;
}

const char* bmd_command_csv_columns(size_t index) {
  const auto& s = bmdim::command_specs();
  return index < s.size() ? s[index].csv_columns.c_str() : nullptr;
}

size_t bmd_command_param_count(size_t index) {
  const auto& s = bmdim::command_specs();
  return index < s.size() ? s[index].params.size() : 0;
}

bmd_status bmd_command_param(size_t command, size_t param, const char** key, const char** default_value,
                             const char** help, int* is_flag) {
  const auto& s = bmdim::command_specs();
  if (command >= s.size() || param >= s[command].params.size()) return bad_argument("parameter index out of range");
  const auto& p = s[command].params[param];
  if (key) *key = p.key.c_str();
  if (default_value) *default_value = p.default_value.c_str();
  if (help) *help = p.help.c_str();
  if (is_flag) *is_flag = p.is_flag ? 1 : 0;
  return BMD_OK;
}

bmd_params* bmd_params_create(void) { return new (std::nothrow) bmd_params(); }

bmd_status bmd_params_set(bmd_params* params, const char* key, const char* value) {
  if (!params || !key || !value) return bad_argument("bmd_params_set: null argument");
  return guarded([&] { params->values[key] = value; });
}

bmd_status bmd_params_load(bmd_params* params, const char* path) {
  if (!params || !path) return bad_argument("bmd_params_load: null argument");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) bmdim::fail(bmdim::ErrorKind::Config, std::string("cannot open config file '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    for (auto& [k, v] : bmdim::parse_config_text(ss.str())) params->values[k] = v;
  });
}

void bmd_params_destroy(bmd_params* params) { delete params; }

bmd_status bmd_run(const char* command, const bmd_params* params, bmd_report** report) {
  if (!command || !report) return bad_argument("bmd_run: null argument");
  *report = nullptr;
  return guarded([&] {
    bmdim::RunConfig config;
    config.command = command;
    if (params) config.params = params->values;
    auto r = std::make_unique<bmd_report>();
    r->report = bmdim::run_command(config);
    *report = r.release();
  });
}

const char* bmd_report_json(const bmd_report* report) { return report ? report->report.json.c_str() : nullptr; }
const char* bmd_report_csv(const bmd_report* report) { return report ? report->report.csv.c_str() : nullptr; }
int bmd_report_check_requested(const bmd_report* report) { return report && report->report.check_requested ? 1 : 0; }
int bmd_report_check_passed(const bmd_report* report) { return report && report->report.check_passed ? 1 : 0; }
void bmd_report_destroy(bmd_report* report) { delete report; }

bmd_status bmd_walk_generate(uint64_t seed, size_t n, bmd_walk** walk) {
  if (!walk) return bad_argument("bmd_walk_generate: null argument");
  *walk = nullptr;
  return guarded([&] {
    bmdim::BitSource source(seed, "walk");
    auto path = bmdim::WalkPath::generate(source, n);
    *walk = new bmd_walk{path, path.serialize()};
  });
}

bmd_status bmd_walk_parse(const char* text, bmd_walk** walk) {
  if (!text || !walk) return bad_argument("bmd_walk_parse: null argument");
  *walk = nullptr;
  return guarded([&] {
    auto path = bmdim::WalkPath::parse(text);
    *walk = new bmd_walk{path, path.serialize()};
  });
}

size_t bmd_walk_steps(const bmd_walk* walk) { return walk ? walk->path.n() : 0; }

bmd_status bmd_walk_eval(const bmd_walk* walk, const char* t, double* value) {
  if (!walk || !t || !value) return bad_argument("bmd_walk_eval: null argument");
  return guarded([&] { *value = walk->path.eval(bmdim::parse_rational(t)).to_double(); });
}

const char* bmd_walk_serialize(const bmd_walk* walk) { return walk ? walk->text.c_str() : nullptr; }

void bmd_walk_destroy(bmd_walk* walk) { delete walk; }

bmd_status bmd_energy_exact(uint64_t p, uint64_t q, const char* alpha, int* divergent, double* value, double* tail) {
  if (!alpha || !divergent || !value || !tail) return bad_argument("bmd_energy_exact: null argument");
  return guarded([&] {
    const auto e = bmdim::energy_exact(bmdim::ResidueMask(p, q), bmdim::parse_rational(alpha));
    *divergent = e.divergent ? 1 : 0;
    *value = e.value;
    *tail = e.tail;
  });
}

bmd_status bmd_lz_rate(const char* bits, double* rate, size_t* phrases) {
  if (!bits || !rate) return bad_argument("bmd_lz_rate: null argument");
  return guarded([&] {
    const auto r = bmdim::lz_estimate(bmdim::bits_from_string(bits));
    *rate = r.rate;
    if (phrases) *phrases = r.phrases;
  });
}

}  // extern "C"
