#include "runner.hpp"

#include "complexity.hpp"
#include "experiments.hpp"
#include "fractal_energy.hpp"
#include "measure_iso.hpp"
#include "walk.hpp"
#include "wiener_events.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace bmdim {

using nlohmann::ordered_json;

namespace {

const ParamSpec kSeed{"seed", "0", "root seed for every random stream", false};
const ParamSpec kThreads{"threads", "1", "worker threads; results do not depend on it", false};
const ParamSpec kCheck{"check", "false", "evaluate the acceptance check and exit 4 when it fails", true};

std::vector<ParamSpec> with_common(std::vector<ParamSpec> params) {
  params.push_back(kSeed);
  params.push_back(kThreads);
  params.push_back(kCheck);
  return params;
}

std::vector<CommandSpec> build_specs() {
  return {
      {"walk", "generate or decode a walk in C_n and evaluate it exactly", "step,partial_sum",
       with_common({{"n", "16", "number of steps (time step 1/n)"},
                    {"bits", "", "code as a 0/1 string (overrides n and seed)"},
                    {"times", "", "comma separated rationals t in [0,1] to evaluate"},
                    {"level", "", "also report the coarse code at this level (n must be a power of two)"}})},
      {"phi", "build the interval assignment for a generator list", "mask,left,right,exponent",
       with_common({{"generators", "", "events file: one '<time> <threshold>' per line"},
                    {"depth", "3", "number of generators to use"},
                    {"precision", "8", "split measures accurate to 2^-precision"},
                    {"method", "auto", "measure method: auto, quadrature or mc"}})},
      {"measure", "bracket the Wiener measure of one atom", "mask,lower,upper,method,samples",
       with_common({{"generators", "", "events file: one '<time> <threshold>' per line"},
                    {"mask", "", "membership string, one 0/1 per generator (oldest first)"},
                    {"precision", "10", "bracket width at most 2^-precision"},
                    {"method", "auto", "auto, quadrature or mc"},
                    {"samples", "0", "Monte Carlo sample count (0 derives it from precision)"}})},
      {"transfer", "pull a cylinder test back through the assignment and push it forward again",
       "depth,level,bound,cylinder_measure,covered,deficit,forward_length,allowance",
       with_common({{"generators", "", "events file: one '<time> <threshold>' per line"},
                    {"depth", "6", "deepest assignment"},
                    {"precision", "10", "split measures accurate to 2^-precision"},
                    {"cylinders", "", "test levels separated by ';', cylinders by ',' (default: seeded random)"},
                    {"levels", "4", "levels of the random cylinder test"},
                    {"fuel", "64", "presentation indices pulled per containment check"}})},
      {"rate", "compression rate and dimension proxy of a bit sequence", "source,n,phrases,bits,rate,baseline,normalized",
       with_common({{"source", "coin", "coin, zeros, tz or file"},
                    {"n", "131072", "sequence length"},
                    {"p", "2", "mask numerator for source tz"},
                    {"q", "3", "mask modulus for source tz"},
                    {"file", "", "0/1 text file for source file"},
                    {"alpha", "3/4", "dimension threshold (rational)"},
                    {"estimator", "lz76", "lz76 or lz78"},
                    {"min-length", "4096", "calibrated minimum length for the dimension proxy"}})},
      {"energy", "alpha-energy of the cylinder mass distribution on T_Z", "p,q,alpha,value,tail,ci_low,ci_high",
       with_common({{"p", "2", "residues per period carrying free bits"},
                    {"q", "3", "period"},
                    {"alpha", "1/2", "energy exponent (rational)"},
                    {"samples", "1000000", "Monte Carlo pairs"},
                    {"depth", "0", "Monte Carlo truncation depth in bits (0 = automatic)"},
                    {"terms", "64", "series terms summed before the closed-form tail"}})},
      {"density", "largest local mass ratio mu(B(x,r))/r^alpha over sampled x", "p,q,alpha,depth,max_ratio",
       with_common({{"p", "2", "residues per period carrying free bits"},
                    {"q", "3", "period"},
                    {"alpha", "2/3", "exponent (rational)"},
                    {"samples", "1000", "sampled points"},
                    {"depths", "10,20,30,40", "comma separated depths n (r = 2^-n)"},
                    {"bound", "1", "check: every ratio must stay at or below this"}})},
      {"lil", "iterated-logarithm statistic over random paths and times", "path,t,statistic",
       with_common({{"seeds", "200", "number of paths"},
                    {"K", "20", "resolution exponent: paths have 2^K steps"},
                    {"times", "100", "random dyadic times per path"},
                    {"jmin", "6", "largest |h| is 2^-jmin"},
                    {"jmax", "18", "smallest |h| is 2^-jmax"},
                    {"band-low", "0.6", "check: lower end of the median band"},
                    {"band-high", "1.4", "check: upper end of the median band"},
                    {"p99-max", "2.5", "check: bound on the 99th percentile"}})},
      {"zerohit", "probability that the zero set meets X at each dyadic scale",
       "scale,hits,paths,estimate,ci_low,ci_high",
       with_common({{"p", "2", "mask numerator"},
                    {"q", "3", "mask modulus"},
                    {"nmin", "2", "coarsest scale"},
                    {"nmax", "8", "finest scale"},
                    {"seeds", "10000", "number of paths"},
                    {"K", "20", "resolution exponent"},
                    {"rate-threshold", "0.8", "check: normalized witness rate bound"},
                    {"pass-fraction", "0.9", "check: fraction of witnesses that must pass"},
                    {"witnesses", "50", "witnesses listed in the summary"}})},
      {"scaling", "Brownian scaling check by two-sample Kolmogorov-Smirnov", "a,t,ks,critical,pass",
       with_common({{"a", "2", "scale factor"},
                    {"times", "1/8,1/4,1/2", "comma separated dyadic times with a*t <= 1"},
                    {"samples", "100000", "paths per sample"},
                    {"K", "16", "resolution exponent"},
                    {"level", "1/100", "significance level of the critical value"}})},
  };
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Params {
 public:
  Params(const CommandSpec& spec, const std::map<std::string, std::string>& given) {
    for (const auto& [k, v] : given)
      require(std::any_of(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.key == k; }),
              ErrorKind::Config, "unknown parameter '" + k + "' for " + spec.name);
    for (const auto& p : spec.params) {
      auto it = given.find(p.key);
      values_[p.key] = it == given.end() ? p.default_value : it->second;
    }
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }

  std::uint64_t u64(const std::string& key) const {
    const std::string& s = str(key);
    require(!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) && s.size() < 20,
            ErrorKind::Config, "--" + key + " expects a nonnegative integer, got '" + s + "'");
    return std::stoull(s);
  }

  Rational rational(const std::string& key) const {
    try {
      return parse_rational(str(key));
    } catch (const Error& e) {
      fail(ErrorKind::Config, "--" + key + ": " + e.what());
    }
  }

  double real(const std::string& key) const { return to_double(rational(key)); }

  bool flag(const std::string& key) const {
    const std::string& s = str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
    fail(ErrorKind::Config, "--" + key + " expects true/false, got '" + s + "'");
  }

  ordered_json echo() const {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : values_)
      if (k != "threads") j[k] = v;
    return j;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string read_file(const std::string& path) {
  require(!path.empty(), ErrorKind::Config, "missing input file path");
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::Config, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<GeneratorEvent> read_events(const std::string& path) {
  std::vector<GeneratorEvent> events;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    const auto fields = split(line, ' ');
    if (fields.empty()) continue;
    require(fields.size() == 2, ErrorKind::Config,
            path + ":" + std::to_string(lineno) + ": expected '<time> <threshold>'");
    events.emplace_back(parse_rational(fields[0]), parse_rational(fields[1]));
  }
  require(!events.empty(), ErrorKind::Config, path + ": no events");
  return events;
}

MeasureOptions measure_options(const Params& p) {
  MeasureOptions mo;
  const std::string& m = p.str("method");
  if (m == "auto") {
    mo.method = MeasureOptions::Method::Auto;
  } else if (m == "quadrature") {
    mo.method = MeasureOptions::Method::Quadrature;
  } else if (m == "mc") {
    mo.method = MeasureOptions::Method::MonteCarlo;
  } else {
    fail(ErrorKind::Config, "--method must be auto, quadrature or mc");
  }
  mo.seed = p.u64("seed");
  mo.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64("threads")));
  return mo;
}

struct Output {
  ordered_json summary = ordered_json::object();
  std::ostringstream csv;
  std::optional<bool> check;
};

void run_walk(const Params& p, Output& out) {
  WalkPath path = [&] {
    if (!p.str("bits").empty()) return WalkPath::decode(p.str("bits").size(), p.str("bits"));
    BitSource source(p.u64("seed"), "walk");
    return WalkPath::generate(source, p.u64("n"));
  }();
  out.summary["n"] = path.n();
  out.summary["code"] = path.bits();
  out.summary["final_value"] = fmt(path.value_at_step(path.n()));
  ordered_json values = ordered_json::array();
  for (const auto& t : split(p.str("times"), ',')) {
    const WalkValue v = path.eval(parse_rational(t));
    values.push_back({{"t", t}, {"coeff", rational_to_string(v.coeff)}, {"sqrt_of", v.n}, {"value", fmt(v.to_double())}});
  }
  out.summary["values"] = values;
  if (!p.str("level").empty()) {
    const CoarseCode c = coarse_code(path, static_cast<unsigned>(p.u64("level")));
    out.summary["coarse"] = {{"level", p.u64("level")}, {"code", c.bits}, {"ties", c.ties}};
  }
  out.csv << "step,partial_sum\n";
  for (std::size_t i = 0; i <= path.n(); ++i) out.csv << i << ',' << path.partial_sum(i) << '\n';
}

void run_phi(const Params& p, Output& out) {
  auto events = read_events(p.str("generators"));
  PhiBuildOptions options;
  options.precision = static_cast<unsigned>(p.u64("precision"));
  options.measure = measure_options(p);
  const auto depth = static_cast<std::size_t>(p.u64("depth"));
  const auto phi = PhiConstruction::build(events, depth, options);
  const auto& a = phi.final();
  ordered_json atoms = ordered_json::array();
  Dyadic covered(0);
  for (const auto& cell : a.atoms()) {
    atoms.push_back({{"mask", cell.mask}, {"left", cell.interval.left.to_string()}, {"right", cell.interval.right.to_string()}});
    covered += cell.interval.length();
  }
  out.summary["depth"] = depth;
  out.summary["error_budget"] = a.error_budget().to_string();
  out.summary["atoms"] = atoms;
  out.summary["total_length"] = covered.to_string();
  out.check = covered == Dyadic(1);
  out.csv << a.to_table();
}

void run_measure(const Params& p, Output& out) {
  auto events = read_events(p.str("generators"));
  const std::string& mask = p.str("mask");
  require(mask.size() <= events.size(), ErrorKind::Config, "--mask is longer than the generator list");
  require(mask.find_first_not_of("01") == std::string::npos, ErrorKind::Config, "--mask must be a 0/1 string");
  EventAtom atom{std::vector<GeneratorEvent>(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(mask.size())), mask};
  MeasureOptions mo = measure_options(p);
  mo.samples = p.u64("samples");
  const auto precision = static_cast<unsigned>(p.u64("precision"));
  const MeasureEstimate e = atom_measure(atom, precision, mo);
  const char* method = e.method == MeasureMethod::Quadrature ? "quadrature" : "mc";
  out.summary["mask"] = mask;
  out.summary["lower"] = e.lower.to_string();
  out.summary["upper"] = e.upper.to_string();
  out.summary["lower_value"] = fmt(e.lower.to_double());
  out.summary["upper_value"] = fmt(e.upper.to_double());
  out.summary["estimate"] = fmt(e.estimate);
  out.summary["method"] = method;
  out.summary["exact"] = e.exact;
  out.summary["samples"] = e.samples;
  out.summary["confidence"] = e.confidence;
  out.check = e.width() <= Dyadic::pow2(-static_cast<std::int64_t>(precision));
  out.csv << "mask,lower,upper,method,samples\n"
          << mask << ',' << e.lower.to_string() << ',' << e.upper.to_string() << ',' << method << ',' << e.samples << '\n';
}

CylinderTest random_cylinders(std::uint64_t seed, std::size_t levels) {
  BitSource source(seed, "transfer-cylinders");
  CylinderTest test;
  for (std::size_t i = 0; i < levels; ++i) {
    std::set<std::string> level;
    // Two cylinders of length i + 2 have total measure at most 2^-(i+1).
    for (int c = 0; c < 2; ++c) {
      std::string sigma;
      for (std::size_t b = 0; b < i + 2; ++b) sigma.push_back(source.next_bit() ? '1' : '0');
      level.insert(sigma);
    }
    test.emplace_back(level.begin(), level.end());
  }
  return test;
}

void run_transfer(const Params& p, Output& out) {
  auto events = read_events(p.str("generators"));
  PhiBuildOptions options;
  options.precision = static_cast<unsigned>(p.u64("precision"));
  options.measure.seed = p.u64("seed");
  const auto depth = static_cast<std::size_t>(p.u64("depth"));
  const auto phi = PhiConstruction::build(events, depth, options);
  CylinderTest cylinders;
  if (p.str("cylinders").empty()) {
    cylinders = random_cylinders(p.u64("seed"), static_cast<std::size_t>(p.u64("levels")));
  } else {
    for (const auto& level : split(p.str("cylinders"), ';')) cylinders.push_back(split(level, ','));
  }
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    std::vector<HalfOpenInterval> pieces;
    for (const auto& s : cylinders[i]) {
      const auto c = iota(s);
      pieces.emplace_back(c.left, c.right);
    }
    require(IntervalSet(pieces).measure() <= MLTest::bound(i), ErrorKind::InvalidTest,
            "cylinder level " + std::to_string(i + 1) + " exceeds its bound");
  }
  const auto fuel = static_cast<std::size_t>(p.u64("fuel"));
  out.csv << "depth,level,bound,cylinder_measure,covered,deficit,forward_length,allowance\n";
  ordered_json rows = ordered_json::array();
  bool nonincreasing = true;
  std::optional<Dyadic> previous;
  for (std::size_t d = 1; d <= depth; ++d) {
    const auto& assignment = phi.at(d);
    const BackTransfer back = transfer_test_back(cylinders, assignment, fuel);
    MLTest pulled = back.test;
    pulled.slack = Dyadic(0);
    const IntervalTest forward = transfer_test_forward(pulled, assignment);
    for (std::size_t i = 0; i < cylinders.size(); ++i) {
      std::vector<HalfOpenInterval> pieces;
      for (const auto& s : cylinders[i]) {
        const auto c = iota(s);
        pieces.emplace_back(c.left, c.right);
      }
      const Dyadic measure = IntervalSet(pieces).measure();
      out.csv << d << ',' << i + 1 << ',' << MLTest::bound(i).to_string() << ',' << measure.to_string() << ','
              << (measure - back.deficit[i]).to_string() << ',' << back.deficit[i].to_string() << ','
              << forward.levels[i].length.to_string() << ',' << forward.levels[i].allowance.to_string() << '\n';
    }
    rows.push_back({{"depth", d}, {"total_deficit", back.total_deficit.to_string()},
                    {"total_deficit_value", fmt(back.total_deficit.to_double())}});
    if (previous && *previous < back.total_deficit) nonincreasing = false;
    previous = back.total_deficit;
  }
  ordered_json levels = ordered_json::array();
  for (const auto& l : cylinders) levels.push_back(l);
  out.summary["cylinders"] = levels;
  out.summary["depths"] = rows;
  out.summary["deficit_nonincreasing"] = nonincreasing;
  out.check = nonincreasing;
}

Bits rate_input(const Params& p) {
  const std::string& source = p.str("source");
  const auto n = static_cast<std::size_t>(p.u64("n"));
  if (source == "file") return bits_from_string(read_file(p.str("file")));
  require(n >= 1, ErrorKind::Config, "--n must be positive");
  if (source == "zeros") return Bits(n, 0);
  if (source == "coin") {
    BitSource s(p.u64("seed"), "rate-coin");
    Bits b(n);
    for (auto& x : b) x = s.next_bit() ? 1 : 0;
    return b;
  }
  if (source == "tz") {
    BitSource s(p.u64("seed"), "rate-tz");
    return tz_sequence(ResidueMask(p.u64("p"), p.u64("q")), s, n);
  }
  fail(ErrorKind::Config, "--source must be coin, zeros, tz or file");
}

void run_rate(const Params& p, Output& out) {
  const Bits bits = rate_input(p);
  require(!bits.empty(), ErrorKind::Config, "empty bit sequence");
  const std::string& estimator = p.str("estimator");
  require(estimator == "lz76" || estimator == "lz78", ErrorKind::Config, "--estimator must be lz76 or lz78");
  const RateEstimate r = estimator == "lz76" ? lz_estimate(bits) : lz78_estimate(bits);
  out.summary["n"] = r.length;
  out.summary["phrases"] = r.phrases;
  out.summary["bits"] = fmt(r.bits);
  out.summary["rate"] = fmt(r.rate);
  std::string baseline = "";
  std::string normalized = "";
  DimensionProxyOptions dpo;
  dpo.min_length = static_cast<std::size_t>(p.u64("min-length"));
  if (estimator == "lz76" && bits.size() >= dpo.min_length) {
    const auto d = dimension_proxy(bits, p.real("alpha"), dpo);
    baseline = fmt(d.baseline);
    normalized = fmt(d.normalized);
    out.summary["baseline"] = baseline;
    out.summary["normalized"] = normalized;
    out.summary["verdict"] = d.verdict == DimensionVerdict::BelowAlpha ? "BelowAlpha" : "NotBelow";
    out.check = d.verdict == DimensionVerdict::BelowAlpha;
  } else {
    out.summary["verdict"] = nullptr;
    out.check = false;
  }
  out.csv << "source,n,phrases,bits,rate,baseline,normalized\n"
          << p.str("source") << ',' << r.length << ',' << r.phrases << ',' << fmt(r.bits) << ',' << fmt(r.rate) << ','
          << baseline << ',' << normalized << '\n';
}

void run_energy(const Params& p, Output& out) {
  const ResidueMask mask(p.u64("p"), p.u64("q"));
  const Rational alpha = p.rational("alpha");
  const EnergyExact e = energy_exact(mask, alpha, static_cast<std::size_t>(p.u64("terms")));
  out.csv << "p,q,alpha,value,tail,ci_low,ci_high\n";
  out.summary["divergent"] = e.divergent;
  if (e.divergent) {
    out.summary["exact"] = nullptr;
    out.summary["mc"] = nullptr;
    out.check = false;
    out.csv << mask.p() << ',' << mask.q() << ',' << rational_to_string(alpha) << ",inf,,,\n";
    return;
  }
  EnergyMcOptions mo;
  mo.samples = p.u64("samples");
  mo.depth = static_cast<std::size_t>(p.u64("depth"));
  mo.seed = p.u64("seed");
  mo.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64("threads")));
  const EnergyMc mc = energy_mc(mask, alpha, mo);
  out.summary["exact"] = {{"value", fmt(e.value)}, {"partial", fmt(e.partial)}, {"tail", fmt(e.tail)}};
  out.summary["mc"] = {{"mean", fmt(mc.mean)},         {"std_error", fmt(mc.std_error)},
                       {"truncation", fmt(mc.truncation)}, {"ci_low", fmt(mc.ci_low)},
                       {"ci_high", fmt(mc.ci_high)},   {"depth", mc.depth},
                       {"samples", mc.samples}};
  out.check = mc.ci_low <= e.value && e.value <= mc.ci_high;
  out.csv << mask.p() << ',' << mask.q() << ',' << rational_to_string(alpha) << ',' << fmt(e.value) << ','
          << fmt(e.tail) << ',' << fmt(mc.ci_low) << ',' << fmt(mc.ci_high) << '\n';
}

void run_density(const Params& p, Output& out) {
  const ResidueMask mask(p.u64("p"), p.u64("q"));
  const Rational alpha = p.rational("alpha");
  std::vector<std::size_t> depths;
  for (const auto& d : split(p.str("depths"), ',')) depths.push_back(static_cast<std::size_t>(std::stoull(d)));
  require(!depths.empty(), ErrorKind::Config, "--depths is empty");
  const auto rows = density_check(mask, alpha, p.u64("samples"), depths, p.u64("seed"));
  const double bound = p.real("bound");
  ordered_json j = ordered_json::array();
  bool ok = true;
  out.csv << "p,q,alpha,depth,max_ratio\n";
  for (const auto& r : rows) {
    j.push_back({{"depth", r.depth}, {"max_ratio", fmt(r.max_ratio)}});
    ok = ok && r.max_ratio <= bound;
    out.csv << mask.p() << ',' << mask.q() << ',' << rational_to_string(alpha) << ',' << r.depth << ','
            << fmt(r.max_ratio) << '\n';
  }
  out.summary["rows"] = j;
  out.check = ok;
}

void run_lil(const Params& p, Output& out) {
  LilOptions o;
  o.paths = static_cast<std::size_t>(p.u64("seeds"));
  o.resolution = static_cast<unsigned>(p.u64("K"));
  o.times = static_cast<std::size_t>(p.u64("times"));
  o.j_min = static_cast<unsigned>(p.u64("jmin"));
  o.j_max = static_cast<unsigned>(p.u64("jmax"));
  o.seed = p.u64("seed");
  o.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64("threads")));
  const LilReport r = lil_sweep(o);
  out.summary["median"] = fmt(r.median);
  out.summary["p01"] = fmt(r.p01);
  out.summary["p99"] = fmt(r.p99);
  out.summary["min"] = fmt(r.min);
  out.summary["max"] = fmt(r.max);
  out.summary["count"] = r.samples.size();
  out.check = p.real("band-low") <= r.median && r.median <= p.real("band-high") && r.p99 < p.real("p99-max");
  out.csv << "path,t,statistic\n";
  for (const auto& s : r.samples) out.csv << s.path << ',' << s.t.to_string() << ',' << fmt(s.statistic) << '\n';
}

void run_zerohit(const Params& p, Output& out) {
  ZeroHitOptions o;
  o.p = p.u64("p");
  o.q = p.u64("q");
  o.n_min = static_cast<unsigned>(p.u64("nmin"));
  o.n_max = static_cast<unsigned>(p.u64("nmax"));
  o.paths = static_cast<std::size_t>(p.u64("seeds"));
  o.resolution = static_cast<unsigned>(p.u64("K"));
  o.seed = p.u64("seed");
  o.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64("threads")));
  o.rate_threshold = p.real("rate-threshold");
  const ZeroHitReport r = zero_hit_experiment(o);
  out.csv << "scale,hits,paths,estimate,ci_low,ci_high\n";
  ordered_json scales = ordered_json::array();
  for (const auto& s : r.scales) {
    scales.push_back({{"scale", s.scale}, {"hits", s.hits}, {"estimate", fmt(s.probability.estimate)},
                      {"ci_low", fmt(s.probability.low)}, {"ci_high", fmt(s.probability.high)}});
    out.csv << s.scale << ',' << s.hits << ',' << o.paths << ',' << fmt(s.probability.estimate) << ','
            << fmt(s.probability.low) << ',' << fmt(s.probability.high) << '\n';
  }
  ordered_json witnesses = ordered_json::array();
  const auto limit = static_cast<std::size_t>(p.u64("witnesses"));
  for (std::size_t i = 0; i < r.witnesses.size() && i < limit; ++i) {
    const auto& w = r.witnesses[i];
    witnesses.push_back({{"path", w.path}, {"scale", w.scale}, {"time", Dyadic(BigInt(w.index), o.resolution).to_string()},
                         {"expansion", w.expansion}, {"shift", w.shift}, {"certified", w.certified},
                         {"normalized_rate", fmt(w.normalized_rate)}});
  }
  out.summary["scales"] = scales;
  out.summary["origin_rate"] = fmt(r.origin_rate);
  out.summary["baseline_rate"] = fmt(r.baseline_rate);
  out.summary["monotone"] = r.monotone;
  out.summary["all_positive"] = r.all_positive;
  out.summary["witness_count"] = r.witnesses.size();
  out.summary["witness_pass_fraction"] = fmt(r.witness_pass_fraction);
  out.summary["witnesses"] = witnesses;
  out.check = r.monotone && r.all_positive && r.witness_pass_fraction >= p.real("pass-fraction");
}

void run_scaling(const Params& p, Output& out) {
  ScalingOptions o;
  o.a = p.u64("a");
  for (const auto& t : split(p.str("times"), ',')) o.times.push_back(parse_rational(t));
  o.samples = static_cast<std::size_t>(p.u64("samples"));
  o.resolution = static_cast<unsigned>(p.u64("K"));
  o.seed = p.u64("seed");
  o.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, p.u64("threads")));
  o.level = p.real("level");
  const auto rows = scaling_test(o);
  bool ok = true;
  ordered_json j = ordered_json::array();
  out.csv << "a,t,ks,critical,pass\n";
  for (const auto& r : rows) {
    ok = ok && r.pass;
    j.push_back({{"t", rational_to_string(r.t)}, {"ks", fmt(r.ks)}, {"critical", fmt(r.critical)}, {"pass", r.pass}});
    out.csv << o.a << ',' << rational_to_string(r.t) << ',' << fmt(r.ks) << ',' << fmt(r.critical) << ','
            << (r.pass ? 1 : 0) << '\n';
  }
  out.summary["rows"] = j;
  out.check = ok;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& s : command_specs())
    if (s.name == name) return &s;
  return nullptr;
}

RunReport run_command(const RunConfig& config) {
  const CommandSpec* spec = find_command(config.command);
  if (!spec) fail(ErrorKind::Config, "unknown command '" + config.command + "'");
  const Params params(*spec, config.params);
  Output out;
  const std::string& c = config.command;
  if (c == "walk") run_walk(params, out);
  else if (c == "phi") run_phi(params, out);
  else if (c == "measure") run_measure(params, out);
  else if (c == "transfer") run_transfer(params, out);
  else if (c == "rate") run_rate(params, out);
  else if (c == "energy") run_energy(params, out);
  else if (c == "density") run_density(params, out);
  else if (c == "lil") run_lil(params, out);
  else if (c == "zerohit") run_zerohit(params, out);
  else run_scaling(params, out);

  RunReport report;
  report.check_requested = params.flag("check");
  report.check_passed = out.check.value_or(true);
  ordered_json j;
  j["command"] = c;
  j["config"] = params.echo();
  j["result"] = out.summary;
  if (report.check_requested) j["check"] = {{"passed", report.check_passed}};
  report.json = j.dump(2) + "\n";
  report.csv = out.csv.str();
  return report;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Config, "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    require(!key.empty(), ErrorKind::Config, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

}  // namespace bmdim
