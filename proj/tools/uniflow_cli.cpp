// Batch experiment CLI. Links the C API only.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "uniflow/uniflow.h"

namespace {

struct SessionGuard {
  uf_session* s;
  SessionGuard() : s(uf_session_new()) {}
  ~SessionGuard() { uf_session_free(s); }
};

int run_command(const std::string& config, const std::string& out_dir, int threads,
                long long budget, unsigned long long seed, bool has_seed) {
  SessionGuard session;
  if (!session.s) {
    std::fprintf(stderr, "error: cannot create session\n");
    return static_cast<int>(UF_ERROR);
  }
  uf_status st = uf_run_experiment(session.s, config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                   threads, budget, seed, has_seed ? 1 : 0);
  char* summary = uf_last_summary_json(session.s);
  if (summary) {
    std::fputs(summary, stdout);
    uf_string_free(summary);
  }
  const char* err = uf_session_last_error(session.s);
  if (err && err[0]) std::fprintf(stderr, "error: %s\n", err);
  switch (st) {
    case UF_OK:
      std::fprintf(stderr, "all checks passed\n");
      break;
    case UF_THEOREM_CHECK_FAILED:
      std::fprintf(stderr, "theorem-backed check FAILED (implementation bug)\n");
      break;
    case UF_INVALID_CONFIG:
      std::fprintf(stderr, "invalid config\n");
      break;
    case UF_BUDGET_EXCEEDED:
      std::fprintf(stderr, "budget exceeded, partial results flagged\n");
      break;
    default:
      break;
  }
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniflow: desk-scale laboratory for quantitative non-divergence of unipotent flows"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  long long budget = -1;
  unsigned long long seed = 0;
  bool has_seed = false;

  auto* run = app.add_subcommand("run", "run an experiment config and write report.csv + summary.json");
  run->add_option("config", config_path, "path to the experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory for report.csv and summary.json");
  run->add_option("--threads", threads, "worker threads for sweep points");
  run->add_option("--budget", budget, "enumeration budget (candidates)");
  auto* seed_opt = run->add_option("--seed", seed, "override the config RNG seed");

  auto* list = app.add_subcommand("list-specs", "print the builtin spec catalog as JSON");
  auto* version = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    has_seed = seed_opt->count() > 0;
    return run_command(config_path, out_dir, threads, budget, seed, has_seed);
  }
  if (list->parsed()) {
    SessionGuard session;
    char* catalog = uf_list_specs_json(session.s);
    if (!catalog) {
      std::fprintf(stderr, "error: %s\n", uf_session_last_error(session.s));
      return static_cast<int>(UF_ERROR);
    }
    std::fputs(catalog, stdout);
    uf_string_free(catalog);
    return 0;
  }
  if (version->parsed()) {
    std::printf("%s\n", uf_version());
    return 0;
  }
  return 0;
}
