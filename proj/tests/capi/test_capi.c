/* Exercises the public C API from C. */
#include "bmdim/bmdim.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static bmd_report* run(const char* command, const char* const* kv) {
  bmd_params* p = bmd_params_create();
  bmd_report* r = NULL;
  for (; kv && kv[0]; kv += 2) EXPECT(bmd_params_set(p, kv[0], kv[1]) == BMD_OK);
  EXPECT(bmd_run(command, p, &r) == BMD_OK);
  bmd_params_destroy(p);
  return r;
}

static void test_schema(void) {
  size_t i, j, found = 0;
  EXPECT(bmd_command_count() == 10);
  for (i = 0; i < bmd_command_count(); ++i) {
    EXPECT(bmd_command_name(i) != NULL);
    EXPECT(strlen(bmd_command_description(i)) > 0);
    EXPECT(strchr(bmd_command_csv_columns(i), ',') != NULL);
    for (j = 0; j < bmd_command_param_count(i); ++j) {
      const char* key = NULL;
      int flag = -1;
      EXPECT(bmd_command_param(i, j, &key, NULL, NULL, &flag) == BMD_OK);
      if (strcmp(key, "seed") == 0) ++found;
    }
  }
  EXPECT(found == bmd_command_count());
  EXPECT(bmd_command_name(99) == NULL);
  EXPECT(bmd_command_param(99, 0, NULL, NULL, NULL, NULL) == BMD_ERR_ARGUMENT);
}

static void test_errors(void) {
  bmd_params* p = bmd_params_create();
  bmd_report* r = NULL;
  EXPECT(bmd_run("nope", p, &r) == BMD_ERR_CONFIG);
  EXPECT(r == NULL);
  EXPECT(strstr(bmd_last_error(), "nope") != NULL);
  EXPECT(bmd_params_set(p, "alpha", "1/0") == BMD_OK);
  EXPECT(bmd_run("energy", p, &r) == BMD_ERR_CONFIG);
  EXPECT(bmd_params_set(p, "alpha", "1/2") == BMD_OK);
  EXPECT(bmd_params_set(p, "unknown-key", "1") == BMD_OK);
  EXPECT(bmd_run("energy", p, &r) == BMD_ERR_CONFIG);
  bmd_params_destroy(p);

  p = bmd_params_create();
  EXPECT(bmd_params_set(p, "generators", "/nonexistent/events.cfg") == BMD_OK);
  EXPECT(bmd_run("phi", p, &r) == BMD_ERR_CONFIG);
  EXPECT(bmd_params_load(p, "/nonexistent/run.cfg") == BMD_ERR_CONFIG);
  bmd_params_destroy(p);
  EXPECT(bmd_run(NULL, NULL, &r) == BMD_ERR_ARGUMENT);
  EXPECT(bmd_params_set(NULL, "a", "b") == BMD_ERR_ARGUMENT);
}

static void test_determinism(void) {
  const char* kv[] = {"p", "2", "q", "3", "alpha", "1/2", "samples", "200000", "seed", "7", NULL};
  const char* kv3[] = {"p", "2", "q", "3", "alpha", "1/2", "samples", "200000", "seed", "7", "threads", "3", NULL};
  bmd_report* a = run("energy", kv);
  bmd_report* b = run("energy", kv);
  bmd_report* c = run("energy", kv3);
  EXPECT(strcmp(bmd_report_csv(a), bmd_report_csv(b)) == 0);
  EXPECT(strcmp(bmd_report_csv(a), bmd_report_csv(c)) == 0);
  EXPECT(strcmp(bmd_report_json(a), bmd_report_json(c)) == 0);
  EXPECT(strstr(bmd_report_json(a), "\"seed\": \"7\"") != NULL);
  EXPECT(strncmp(bmd_report_csv(a), "p,q,alpha,value,tail,ci_low,ci_high\n", 36) == 0);
  EXPECT(!bmd_report_check_requested(a));
  bmd_report_destroy(a);
  bmd_report_destroy(b);
  bmd_report_destroy(c);
}

static void test_check(void) {
  const char* ok[] = {"p", "2", "q", "3", "alpha", "2/3", "check", "true", NULL};
  const char* bad[] = {"p", "2", "q", "3", "alpha", "1", "check", "true", NULL};
  bmd_report* a = run("density", ok);
  bmd_report* b = run("density", bad);
  EXPECT(bmd_report_check_requested(a) && bmd_report_check_passed(a));
  EXPECT(bmd_report_check_requested(b) && !bmd_report_check_passed(b));
  bmd_report_destroy(a);
  bmd_report_destroy(b);
}

static void test_walk(void) {
  bmd_walk* w = NULL;
  bmd_walk* back = NULL;
  double v = 0;
  EXPECT(bmd_walk_parse("4 1111", &w) == BMD_OK);
  EXPECT(bmd_walk_steps(w) == 4);
  EXPECT(bmd_walk_eval(w, "1/8", &v) == BMD_OK);
  EXPECT(fabs(v - 0.25) < 1e-15);
  EXPECT(bmd_walk_eval(w, "2", &v) == BMD_ERR_RANGE);
  EXPECT(strcmp(bmd_walk_serialize(w), "4 1111\n") == 0);
  bmd_walk_destroy(w);
  EXPECT(bmd_walk_parse("4 11", &w) == BMD_ERR_STRUCTURAL);
  EXPECT(w == NULL);
  EXPECT(bmd_walk_generate(5, 100, &w) == BMD_OK);
  EXPECT(bmd_walk_parse(bmd_walk_serialize(w), &back) == BMD_OK);
  EXPECT(strcmp(bmd_walk_serialize(w), bmd_walk_serialize(back)) == 0);
  bmd_walk_destroy(w);
  bmd_walk_destroy(back);
}

static void test_helpers(void) {
  int divergent = -1;
  double value = 0, tail = 0, rate = 0;
  size_t phrases = 0;
  EXPECT(bmd_energy_exact(1, 1, "1/2", &divergent, &value, &tail) == BMD_OK);
  EXPECT(!divergent && fabs(value - 1.7071067811865475) < 1e-9);
  EXPECT(bmd_energy_exact(2, 3, "2/3", &divergent, &value, &tail) == BMD_OK);
  EXPECT(divergent);
  EXPECT(bmd_energy_exact(0, 3, "1/2", &divergent, &value, &tail) == BMD_ERR_STRUCTURAL);
  EXPECT(bmd_lz_rate("1", &rate, &phrases) == BMD_OK);
  EXPECT(rate == 2.0 && phrases == 1);
  EXPECT(bmd_lz_rate("10x", &rate, NULL) == BMD_ERR_CONFIG);
}

int main(void) {
  EXPECT(strlen(bmd_version()) > 0);
  test_schema();
  test_errors();
  test_determinism();
  test_check();
  test_walk();
  test_helpers();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("C API tests passed\n");
  return 0;
}
