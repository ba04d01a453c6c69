#ifndef UNIFLOW_H
#define UNIFLOW_H

/* C interface to the uniflow library: batch experiment runs over the
 * quantitative non-divergence laboratory, plus a few direct constant
 * computations. All state lives behind the opaque session handle; functions
 * return status codes and report details through uf_session_last_error. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uf_status {
  UF_OK = 0,
  UF_THEOREM_CHECK_FAILED = 1, /* a theorem-backed check failed: implementation bug */
  UF_INVALID_CONFIG = 2,
  UF_BUDGET_EXCEEDED = 3,
  UF_ERROR = 4
} uf_status;

typedef struct uf_session uf_session;

uf_session* uf_session_new(void);
void uf_session_free(uf_session* s);

/* Message describing the last failure on this session; "" when none. The
 * pointer stays valid until the next call on the same session. */
const char* uf_session_last_error(const uf_session* s);

const char* uf_version(void);

/* Run one experiment config file. out_dir (may be NULL) receives report.csv
 * and summary.json. threads <= 0 means single-threaded, budget <= 0 keeps
 * defaults, seed applies when has_seed is nonzero. */
uf_status uf_run_experiment(uf_session* s, const char* config_path, const char* out_dir,
                            int threads, long long budget, unsigned long long seed, int has_seed);

/* Same, from an in-memory JSON document named `name` in reports. */
uf_status uf_run_experiment_json(uf_session* s, const char* config_json, const char* name,
                                 const char* out_dir, int threads, long long budget,
                                 unsigned long long seed, int has_seed);

/* JSON catalog of builtin algebra and group specs with hypothesis flags.
 * Free with uf_string_free. NULL on failure. */
char* uf_list_specs_json(uf_session* s);

/* summary.json of the last run on this session; NULL when no run happened. */
char* uf_last_summary_json(const uf_session* s);

/* report.csv of the last run on this session; NULL when no run happened. */
char* uf_last_report_csv(const uf_session* s);

void uf_string_free(char* s);

/* (C, alpha) such that polynomials of degree <= degree are (C, alpha)-good. */
uf_status uf_goodness_constants(int degree, double* c_out, double* alpha_out);

/* c_eps = (eps / C_k)^{k^2} / (8 l_M) for ambient dimension dim; also its
 * log10, which stays finite when the value underflows. */
uf_status uf_c_epsilon(int dim, int l_m, double eps, double* value_out, double* log10_out);

#ifdef __cplusplus
}
#endif

#endif /* UNIFLOW_H */
