#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "invpow/ansatz.hpp"
#include "invpow/auditor.hpp"
#include "invpow/special_functions.hpp"
#include "invpow/verifier.hpp"

namespace invpow::cli {
namespace {

// ---------------------------------------------------------------------------
// Records and their three renderings.

using NumberMap = std::vector<std::pair<std::string, double>>;
using Value = std::variant<double, long long, bool, std::string,
                           std::vector<std::string>, NumberMap>;
using Record = std::vector<std::pair<std::string, Value>>;

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// Flattens nested number maps to "outer.inner" keys; drops list fields.
std::vector<std::pair<std::string, std::string>> flatten(const Record& rec,
                                                         const char* number_fmt) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : rec) {
    if (const auto* d = std::get_if<double>(&value)) {
      out.emplace_back(key, format_double(number_fmt, *d));
    } else if (const auto* i = std::get_if<long long>(&value)) {
      out.emplace_back(key, std::to_string(*i));
    } else if (const auto* b = std::get_if<bool>(&value)) {
      out.emplace_back(key, *b ? "1" : "0");
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out.emplace_back(key, *s);
    } else if (const auto* m = std::get_if<NumberMap>(&value)) {
      for (const auto& [inner, v] : *m) {
        out.emplace_back(key + "." + inner, format_double(number_fmt, v));
      }
    }
  }
  return out;
}

nlohmann::json to_json(const Record& rec) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : rec) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NumberMap>) {
            nlohmann::json inner = nlohmann::json::object();
            for (const auto& [k, x] : v) inner[k] = x;
            j[key] = inner;
          } else {
            j[key] = v;
          }
        },
        value);
  }
  return j;
}

// Writes one or more records. Single records in table format are listed as
// "key value" lines; row streams get a header and aligned columns.
class RecordWriter {
 public:
  RecordWriter(Format format, std::ostream& out, bool rows)
      : format_(format), out_(out), rows_(rows) {}

  void write(const Record& rec) {
    switch (format_) {
      case Format::json_lines:
        out_ << to_json(rec).dump() << '\n';
        break;
      case Format::csv: {
        const auto cells = flatten(rec, "%.10e");
        if (!header_done_) {
          for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i].first;
          }
          out_ << '\n';
          header_done_ = true;
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
          out_ << (i ? "," : "") << cells[i].second;
        }
        out_ << '\n';
        break;
      }
      case Format::table: {
        const auto cells = flatten(rec, "%.10g");
        if (!rows_) {
          std::size_t width = 0;
          for (const auto& c : cells) width = std::max(width, c.first.size());
          for (const auto& [k, v] : cells) {
            out_ << k << std::string(width - k.size() + 2, ' ') << v << '\n';
          }
          for (const auto& [key, value] : rec) {
            if (const auto* notes = std::get_if<std::vector<std::string>>(&value)) {
              for (const auto& n : *notes) out_ << key << ": " << n << '\n';
            }
          }
          break;
        }
        if (!header_done_) {
          for (const auto& c : cells) out_ << pad(c.first);
          out_ << '\n';
          header_done_ = true;
        }
        for (const auto& c : cells) out_ << pad(c.second);
        out_ << '\n';
        break;
      }
    }
  }

 private:
  static std::string pad(const std::string& s) {
    constexpr std::size_t kColumn = 19;
    return s.size() >= kColumn ? s + " " : s + std::string(kColumn - s.size(), ' ');
  }

  Format format_;
  std::ostream& out_;
  bool rows_;
  bool header_done_ = false;
};

// Opens --output or falls back to the given stream.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw invpow::Error("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// ---------------------------------------------------------------------------

Channel channel_of(const RunConfig& cfg) { return Channel(cfg.dimension, cfg.angular); }

BracketOptions bracket_of(const RunConfig& cfg) {
  BracketOptions opts;
  opts.upper = cfg.b_upper;
  opts.panels = cfg.panels;
  return opts;
}

// Fixes B from the constraint when absent. Reports extra roots on err.
Potential resolve_potential(const RunConfig& cfg, std::ostream& err) {
  if (cfg.B) return Potential::checked(cfg.A, *cfg.B, cfg.C, cfg.D);
  if (!(cfg.A > 0.0)) throw DomainError("potential requires A > 0");
  if (!(cfg.D < 0.0)) throw DomainError("potential requires D < 0");
  const BRoots roots = solve_b(cfg.A, cfg.C, cfg.D, channel_of(cfg), bracket_of(cfg));
  const double B = select_default_root(roots);
  if (roots.multiple) {
    err << "note: " << roots.roots.size() << " roots for B; selected "
        << format_double("%.10g", B) << '\n';
  }
  return Potential::checked(cfg.A, B, cfg.C, cfg.D);
}

Record solution_record(const ClosedFormSolution& sol) {
  return {{"B", sol.potential.B()},          {"a", sol.params.a},
          {"b", sol.params.b},               {"c", sol.params.c},
          {"E", sol.energy},                 {"N", sol.normalization},
          {"r_peak", peak_radius(sol.params)}};
}

RadialGrid grid_of(const RunConfig& cfg) {
  const RadialGrid base = default_grid();
  return RadialGrid(cfg.r_min.value_or(base.r_min()), cfg.r_max.value_or(base.r_max()),
                    cfg.step.value_or(base.step()));
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential p = resolve_potential(cfg, err);
  const ClosedFormSolution sol = solve_closed_form(p, channel_of(cfg));
  OutputTarget target(cfg.output, out);
  RecordWriter(cfg.format, target.stream(), false).write(solution_record(sol));
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.r_lo > 0.0) || !(cfg.r_hi > cfg.r_lo) || cfg.points < 2) {
    throw UsageError{"sample requires 0 < r-lo < r-hi and points >= 2"};
  }
  const Potential p = resolve_potential(cfg, err);
  const ClosedFormSolution sol = solve_closed_form(p, channel_of(cfg));
  OutputTarget target(cfg.output, out);
  RecordWriter writer(cfg.format, target.stream(), true);
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double r = cfg.r_lo + (cfg.r_hi - cfg.r_lo) * static_cast<double>(i) /
                                    static_cast<double>(cfg.points - 1);
    writer.write({{"r", r}, {"R", radial_wavefunction(sol, r, cfg.normalized)}});
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential p = resolve_potential(cfg, err);
  VerifyOptions opts;
  opts.tolerances = {cfg.residual_tol, cfg.energy_tol, cfg.norm_tol};
  opts.auto_grid = cfg.auto_grid;
  if (cfg.r_min || cfg.r_max || cfg.step) opts.grid = grid_of(cfg);
  if (cfg.e_lo || cfg.e_hi) {
    if (!cfg.e_lo || !cfg.e_hi) throw UsageError{"--E-lo and --E-hi go together"};
    opts.bracket = EnergyBracket{*cfg.e_lo, *cfg.e_hi};
  }
  const VerificationReport rep = verify(p, channel_of(cfg), opts);
  Record rec = {{"B", p.B()},
                {"residual_max", rep.residual_max},
                {"shot_energy", rep.shot_energy},
                {"analytic_energy", rep.analytic_energy},
                {"energy_rel_err", rep.energy_rel_err},
                {"normalization_integral", rep.normalization_integral},
                {"passed", rep.passed},
                {"grid", NumberMap{{"r_min", rep.grid.r_min()},
                                   {"r_max", rep.grid.r_max()},
                                   {"step", rep.grid.step()}}}};
  if (cfg.format != Format::csv) rec.emplace_back("notes", rep.notes);
  OutputTarget target(cfg.output, out);
  RecordWriter(cfg.format, target.stream(), false).write(rec);
  if (!rep.passed) {
    err << "error: verification failed"
        << (rep.notes.empty() ? std::string() : ": " + rep.notes.front()) << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Potential p = resolve_potential(cfg, err);
  const AuditReport rep = audit(p, channel_of(cfg));
  const Record rec = {{"B", p.B()},
                      {"b_ground", rep.b_ground},
                      {"b_excited", rep.b_excited},
                      {"b_conflict", rep.b_conflict},
                      {"implied_D_ratio", rep.implied_D_ratio},
                      {"d_contradiction", rep.d_contradiction},
                      {"alpha1_from_r_minus1", rep.alpha1_from_r_minus1},
                      {"alpha1_from_r_minus2", rep.alpha1_from_r_minus2},
                      {"alpha_window", NumberMap{{"lo", rep.alpha_window.lo},
                                                 {"hi", rep.alpha_window.hi}}},
                      {"alpha1_at_min", rep.alpha1_at_min},
                      {"system_residual_min", rep.system_residual_min},
                      {"eq10_minus", rep.eq10_minus},
                      {"eq10_plus", rep.eq10_plus},
                      {"minus_matches_eq12", rep.minus_matches_eq12}};
  OutputTarget target(cfg.output, out);
  RecordWriter(cfg.format, target.stream(), false).write(rec);
  if (!(rep.b_conflict && rep.minus_matches_eq12)) {
    err << "error: audit findings differ from the expected inconsistency pattern\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.B) throw UsageError{"scan re-solves B at every step; drop --B"};
  const std::string& param = cfg.scan_param;
  const bool angular = param == "angular" || param == "ell" || param == "m";
  if (!angular && param != "A" && param != "C" && param != "D") {
    throw UsageError{"scan --param must be one of A, C, D, angular"};
  }
  if (cfg.scan_hi < cfg.scan_lo || cfg.scan_steps == 0) {
    throw UsageError{"scan requires lo <= hi and steps >= 1"};
  }
  std::vector<double> values;
  if (angular) {
    if (cfg.scan_lo < 0.0 || std::floor(cfg.scan_lo) != cfg.scan_lo ||
        std::floor(cfg.scan_hi) != cfg.scan_hi) {
      throw UsageError{"angular scan needs non-negative integer bounds"};
    }
    for (double v = cfg.scan_lo; v <= cfg.scan_hi; v += 1.0) values.push_back(v);
  } else if (cfg.scan_steps == 1) {
    values.push_back(cfg.scan_lo);
  } else {
    for (std::size_t i = 0; i < cfg.scan_steps; ++i) {
      values.push_back(cfg.scan_lo + (cfg.scan_hi - cfg.scan_lo) * static_cast<double>(i) /
                                         static_cast<double>(cfg.scan_steps - 1));
    }
  }

  OutputTarget target(cfg.output, out);
  RecordWriter writer(cfg.format, target.stream(), true);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  for (double v : values) {
    RunConfig step = cfg;
    if (angular) step.angular = static_cast<int>(v);
    if (param == "A") step.A = v;
    if (param == "C") step.C = v;
    if (param == "D") step.D = v;
    Record rec = {{"value", v}};
    try {
      std::ostringstream quiet;
      const Potential p = resolve_potential(step, quiet);
      const ClosedFormSolution sol = solve_closed_form(p, channel_of(step));
      for (auto& field : solution_record(sol)) rec.push_back(std::move(field));
      rec.emplace_back("error", std::string());
    } catch (const Error& e) {
      for (const char* k : {"B", "a", "b", "c", "E", "N", "r_peak"}) rec.emplace_back(k, kNaN);
      rec.emplace_back("error", std::string(e.kind()));
    }
    writer.write(rec);
  }
  (void)err;
  return kExitOk;
}

int cmd_bessel(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const double value = bessel_k(cfg.nu, cfg.x);
  OutputTarget target(cfg.output, out);
  RecordWriter(cfg.format, target.stream(), false)
      .write({{"nu", cfg.nu}, {"x", cfg.x}, {"K", value}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

RunConfig parse_run_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Exact ground states of V(r) = A/r^4 + B/r^3 + C/r^2 + D/r", "invpow"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Closed-form ground state");
  auto* verify_cmd = app.add_subcommand("verify", "Check the closed form numerically");
  auto* audit_cmd = app.add_subcommand("audit", "Audit the one-node ansatz");
  auto* scan = app.add_subcommand("scan", "Re-solve over a parameter range");
  auto* sample = app.add_subcommand("sample", "Tabulate R(r)");
  auto* bessel = app.add_subcommand("bessel", "Evaluate K_nu(x)");
  for (auto* sub : {solve, verify_cmd, audit_cmd, scan, sample, bessel}) sub->fallthrough();

  app.set_config("--config", "", "key=value config file")->envname("INVPOW_CONFIG");

  double B = 0.0;
  std::optional<int> ell, m, angular;
  double r_min = 0, r_max = 0, step = 0, e_lo = 0, e_hi = 0;
  std::string format;

  app.add_option("--A", cfg.A, "Coefficient of r^-4 (> 0)");
  auto* b_opt = app.add_option("--B", B, "Coefficient of r^-3; solved from the constraint when absent");
  app.add_option("--C", cfg.C, "Coefficient of r^-2");
  app.add_option("--D", cfg.D, "Coefficient of r^-1 (< 0)");
  app.add_option("--dim", cfg.dimension, "Spatial dimension")->check(CLI::IsMember({2, 3}));
  app.add_option("--ell", ell, "Angular momentum l (3D)")->check(CLI::NonNegativeNumber);
  app.add_option("--m", m, "Angular quantum number m (2D)")->check(CLI::NonNegativeNumber);
  app.add_option("--angular", angular, "Angular quantum number")->check(CLI::NonNegativeNumber);

  auto* rmin_opt = app.add_option("--r-min", r_min, "Grid start");
  auto* rmax_opt = app.add_option("--r-max", r_max, "Grid end");
  auto* step_opt = app.add_option("--step", step, "Grid step");
  app.add_flag("--auto-grid", cfg.auto_grid, "Size the grid from the closed form");
  auto* elo_opt = app.add_option("--E-lo", e_lo, "Lower end of the energy bracket");
  auto* ehi_opt = app.add_option("--E-hi", e_hi, "Upper end of the energy bracket");
  app.add_option("--residual-tol", cfg.residual_tol);
  app.add_option("--energy-tol", cfg.energy_tol);
  app.add_option("--norm-tol", cfg.norm_tol);
  app.add_option("--B-hi", cfg.b_upper, "Upper end of the B search bracket");
  app.add_option("--panels", cfg.panels, "Sign-scan panels for the B search");

  app.add_option("--r-lo", cfg.r_lo);
  app.add_option("--r-hi", cfg.r_hi);
  app.add_option("--points", cfg.points);
  app.add_flag("--normalized", cfg.normalized, "Emit N*R instead of R");

  app.add_option("--param", cfg.scan_param);
  app.add_option("--lo", cfg.scan_lo);
  app.add_option("--hi", cfg.scan_hi);
  app.add_option("--steps", cfg.scan_steps);

  app.add_option("--nu", cfg.nu);
  app.add_option("--x", cfg.x);

  auto* format_opt = app.add_option("--format", format, "csv, json-lines or table")
                         ->check(CLI::IsMember({"csv", "json-lines", "table"}));
  app.add_option("--output", cfg.output, "Output file (default standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError{app.help(), true};
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError{app.help("", CLI::AppFormatMode::All), true};
  } catch (const CLI::ParseError& e) {
    throw UsageError{e.what()};
  }

  const std::vector<std::pair<CLI::App*, Command>> commands = {
      {solve, Command::solve}, {verify_cmd, Command::verify}, {audit_cmd, Command::audit},
      {scan, Command::scan},   {sample, Command::sample},     {bessel, Command::bessel}};
  for (const auto& [sub, cmd] : commands) {
    if (sub->parsed()) cfg.command = cmd;
  }

  if (b_opt->count()) cfg.B = B;
  if (rmin_opt->count()) cfg.r_min = r_min;
  if (rmax_opt->count()) cfg.r_max = r_max;
  if (step_opt->count()) cfg.step = step;
  if (elo_opt->count()) cfg.e_lo = e_lo;
  if (ehi_opt->count()) cfg.e_hi = e_hi;

  const int given = (ell ? 1 : 0) + (m ? 1 : 0) + (angular ? 1 : 0);
  if (given > 1) throw UsageError{"give only one of --ell, --m, --angular"};
  if (ell) cfg.angular = *ell;
  if (m) cfg.angular = *m;
  if (angular) cfg.angular = *angular;

  if (format_opt->count()) {
    cfg.format = format == "csv" ? Format::csv
                 : format == "json-lines" ? Format::json_lines
                                          : Format::table;
  } else {
    cfg.format = cfg.command == Command::sample ? Format::csv : Format::table;
  }

  if (cfg.command != Command::bessel) {
    if (!(cfg.A > 0.0)) throw UsageError{"--A must be > 0"};
    if (!(cfg.D < 0.0)) throw UsageError{"--D must be < 0"};
  }
  return cfg;
}

namespace {
std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}
}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_run_config(args);
  } catch (const UsageError& e) {
    if (e.help) {
      out << e.message;
      return kExitOk;
    }
    err << "error: " << one_line(e.message) << '\n';
    return kExitUsage;
  }

  try {
    switch (cfg.command) {
      case Command::solve:
        return cmd_solve(cfg, out, err);
      case Command::verify:
        return cmd_verify(cfg, out, err);
      case Command::audit:
        return cmd_audit(cfg, out, err);
      case Command::scan:
        return cmd_scan(cfg, out, err);
      case Command::sample:
        return cmd_sample(cfg, out, err);
      case Command::bessel:
        return cmd_bessel(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.message) << '\n';
    return kExitUsage;
  } catch (const ConstraintUnsatisfied& e) {
    err << "error: " << e.kind() << ": residual=" << format_double("%.10g", e.residual())
        << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace invpow::cli
