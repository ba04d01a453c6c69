#include "uniflow/uniflow.h"

#include <cstring>
#include <string>

#include "errors.hpp"
#include "experiment.hpp"
#include "good_functions.hpp"
#include "km_engine.hpp"

struct uf_session {
  std::string last_error;
  std::string last_summary;
  std::string last_csv;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

uf_status run_common(uf_session* s, uniflow::runner::RunResult result) {
  if (!s) return UF_ERROR;
  s->last_error = result.error;
  s->last_summary = result.summary_json;
  s->last_csv = result.csv;
  switch (result.exit_code) {
    case 0: return UF_OK;
    case 1: return UF_THEOREM_CHECK_FAILED;
    case 2: return UF_INVALID_CONFIG;
    case 3: return UF_BUDGET_EXCEEDED;
    default: return UF_ERROR;
  }
}

uniflow::runner::RunOptions make_options(const char* out_dir, int threads, long long budget,
                                         unsigned long long seed, int has_seed) {
  uniflow::runner::RunOptions opt;
  opt.threads = threads > 0 ? threads : 1;
  opt.budget = budget;
  if (has_seed) opt.seed = seed;
  if (out_dir && out_dir[0]) opt.out_dir = out_dir;
  return opt;
}

}  // namespace

extern "C" {

uf_session* uf_session_new(void) { return new (std::nothrow) uf_session(); }

void uf_session_free(uf_session* s) { delete s; }

const char* uf_session_last_error(const uf_session* s) { return s ? s->last_error.c_str() : ""; }

const char* uf_version(void) { return uniflow::runner::version(); }

uf_status uf_run_experiment(uf_session* s, const char* config_path, const char* out_dir,
                            int threads, long long budget, unsigned long long seed, int has_seed) {
  if (!s || !config_path) return UF_ERROR;
  try {
    auto result = uniflow::runner::run_config_file(
        config_path, make_options(out_dir, threads, budget, seed, has_seed));
    return run_common(s, std::move(result));
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return UF_ERROR;
  }
}

uf_status uf_run_experiment_json(uf_session* s, const char* config_json, const char* name,
                                 const char* out_dir, int threads, long long budget,
                                 unsigned long long seed, int has_seed) {
  if (!s || !config_json) return UF_ERROR;
  try {
    auto result = uniflow::runner::run_config_text(
        config_json, name ? name : "inline", make_options(out_dir, threads, budget, seed, has_seed));
    return run_common(s, std::move(result));
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return UF_ERROR;
  }
}

char* uf_list_specs_json(uf_session* s) {
  try {
    return dup_string(uniflow::runner::list_specs_json());
  } catch (const std::exception& e) {
    if (s) s->last_error = e.what();
    return nullptr;
  }
}

char* uf_last_summary_json(const uf_session* s) {
  if (!s || s->last_summary.empty()) return nullptr;
  return dup_string(s->last_summary);
}

char* uf_last_report_csv(const uf_session* s) {
  if (!s || s->last_csv.empty()) return nullptr;
  return dup_string(s->last_csv);
}

void uf_string_free(char* s) { std::free(s); }

uf_status uf_goodness_constants(int degree, double* c_out, double* alpha_out) {
  if (!c_out || !alpha_out) return UF_ERROR;
  try {
    auto gc = uniflow::good::polynomial_goodness_constants(degree);
    *c_out = gc.c;
    *alpha_out = gc.alpha;
    return UF_OK;
  } catch (const std::exception&) {
    return UF_INVALID_CONFIG;
  }
}

uf_status uf_c_epsilon(int dim, int l_m, double eps, double* value_out, double* log10_out) {
  if (!value_out || !log10_out) return UF_ERROR;
  try {
    auto constants = uniflow::km::KMConstants::for_dim(dim, l_m);
    *value_out = uniflow::km::c_epsilon(eps, constants);
    *log10_out = uniflow::km::c_epsilon_log10(eps, constants);
    return UF_OK;
  } catch (const std::exception&) {
    return UF_INVALID_CONFIG;
  }
}

}  // extern "C"
