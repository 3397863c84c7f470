#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "supgmg/benchmarks.hpp"
#include "supgmg/multigrid.hpp"

namespace supgmg {

/// One benchmark sweep over (eps, N). Unset optionals take the case defaults.
struct RunConfig {
  CaseId case_id = CaseId::kSquareExp;
  std::vector<double> eps;
  std::vector<int> n;
  std::optional<int> nu1;
  std::optional<int> nu2;
  int gamma1 = 1;
  int gamma2 = 1;
  std::optional<RelaxKind> relax;
  std::optional<TolForm> tol_form;
  /// Levels per hierarchy; unset coarsens to N = 8.
  std::optional<int> levels;
  std::uint64_t seed = MgOptions{}.seed;
  int max_iterations = 200;
  std::string out;
  std::string export_mesh;
  bool compute_errors = true;
};

const char* relax_name(RelaxKind r);
RelaxKind parse_relax(const std::string& name);

/// Sets one `key = value` entry (keys as the CLI flags without dashes).
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
/// Reads a flat `key = value` file; '#' starts a comment.
void load_config_file(RunConfig& cfg, const std::string& path);
void load_config_text(RunConfig& cfg, std::istream& in);

struct CellResult {
  double eps = 0.0;
  int n = 0;
  std::size_t dofs = 0;
  int levels = 0;
  int iterations = 0;
  bool converged = false;
  std::string failure;
  double tolerance = 0.0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  double max_error = 0.0;
  double energy_error = 0.0;
  double sd_error = 0.0;
  std::vector<double> residual_history;
  std::vector<double> solution;
};

struct RunReport {
  RunConfig config;
  std::vector<CellResult> cells;

  bool all_converged() const;
};

/// Solves one (eps, N) cell. Errors inside the cell are caught and recorded.
CellResult run_cell(const RunConfig& cfg, double eps, int n);

/// Validates the configuration, then runs every cell (eps-major order).
RunReport run_benchmark(const RunConfig& cfg);

/// `metric,eps,N,value` rows, one section per metric, 6 significant digits.
void emit_csv(const RunReport& report, std::ostream& out);
void emit_csv(const RunReport& report, const std::string& path);

/// Residual histories as `eps,N,iteration,residual` rows.
void emit_residual_csv(const RunReport& report, std::ostream& out);

/// Machine-readable report (configuration, cells, environment).
std::string report_json(const RunReport& report);

}  // namespace supgmg
