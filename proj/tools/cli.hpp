#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace invpow::cli {

enum class Command { solve, verify, audit, scan, sample, bessel };
enum class Format { csv, json_lines, table };

// Exit codes: 0 success, 1 computation failed or check did not pass,
// 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::solve;
  double A = 0.0;
  std::optional<double> B;
  double C = 0.0;
  double D = 0.0;
  int dimension = 3;
  int angular = 0;

  std::optional<double> r_min, r_max, step;
  bool auto_grid = false;
  std::optional<double> e_lo, e_hi;
  double residual_tol = 1e-10;
  double energy_tol = 1e-3;
  double norm_tol = 1e-6;
  double b_upper = 1e3;
  std::size_t panels = 10000;

  // sample
  double r_lo = 0.1;
  double r_hi = 30.0;
  std::size_t points = 300;
  bool normalized = false;

  // scan
  std::string scan_param;
  double scan_lo = 0.0;
  double scan_hi = 0.0;
  std::size_t scan_steps = 1;

  // bessel
  double nu = 0.0;
  double x = 1.0;

  Format format = Format::table;
  std::string output;  // empty: standard output
};

// Parses argv-style arguments (without the program name). Honours
// --config PATH and the INVPOW_CONFIG environment variable; flags override
// config entries. Throws UsageError.
RunConfig parse_run_config(const std::vector<std::string>& args);

struct UsageError {
  std::string message;
  bool help = false;  // message is help text, exit 0
};

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bessel(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point: parse, dispatch, map every failure to an exit code and a
// single "error: ..." line on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invpow::cli
