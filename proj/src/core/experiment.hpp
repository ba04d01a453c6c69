#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tolerances.hpp"

namespace uniflow::runner {

inline const char* version() { return "0.1.0"; }
inline const char* csv_schema_version() { return "1"; }

struct RunOptions {
  int threads = 1;
  std::int64_t budget = -1;  // overrides Budget::candidates / ball_size when > 0
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty: do not write files
};

struct ReportRow {
  int index = 0;
  std::string kind;
  std::string extra;
  double delta = std::nan("");
  double eps = std::nan("");
  double horizon = std::nan("");
  int word_radius = -1;
  double measured = std::nan("");
  double bound = std::nan("");
  double c_eps_log10 = std::nan("");
  bool pass = true;
  double wall_ms = 0;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 theorem failure, 2 invalid config, 3 budget
  std::string error;
  std::vector<ReportRow> rows;
  std::string csv;
  std::string summary_json;
  bool partial = false;
};

/// Executes one experiment config (JSON text). Writes report.csv and
/// summary.json under options.out_dir when set.
RunResult run_config_text(const std::string& json_text, const std::string& name,
                          const RunOptions& options);
RunResult run_config_file(const std::string& path, const RunOptions& options);

/// Catalog of builtin algebra and group specs with hypothesis flags.
std::string list_specs_json();

std::string sha1_hex(const std::string& data);

}  // namespace uniflow::runner
