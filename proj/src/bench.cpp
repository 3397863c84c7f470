#include "supgmg/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "supgmg/error.hpp"
#include "supgmg/io.hpp"
#include "supgmg/krylov.hpp"

namespace supgmg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(ErrorCode::kInvalidArgument, "bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_number<T>(key, item));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  fail(ErrorCode::kInvalidArgument, "bad value for '" + key + "': '" + text + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void validate(const RunConfig& cfg) {
  require(!cfg.eps.empty(), "eps list is empty");
  require(!cfg.n.empty(), "N list is empty");
  for (double e : cfg.eps) require(e > 0.0 && e <= 1.0, "eps values must lie in (0, 1]");
  for (int n : cfg.n) {
    require(n >= 8 && n % 4 == 0, "N must be at least 8 and divisible by 4");
    if (cfg.levels) {
      require(*cfg.levels >= 1 && *cfg.levels <= 30 && n % (1 << (*cfg.levels - 1)) == 0,
              "N = " + std::to_string(n) + " cannot be coarsened " +
                  std::to_string(*cfg.levels - 1) + " times");
      const int nc = n >> (*cfg.levels - 1);
      require(nc >= 8 && nc % 4 == 0,
              "coarsest N must be >= 8 and divisible by 4 for N = " + std::to_string(n));
    }
  }
  require(cfg.gamma1 >= 1 && cfg.gamma2 >= 1, "gamma1 and gamma2 must be >= 1");
  require(!cfg.nu1 || *cfg.nu1 >= 0, "nu1 must be >= 0");
  require(!cfg.nu2 || *cfg.nu2 >= 0, "nu2 must be >= 0");
  require(cfg.max_iterations >= 1, "max-iterations must be >= 1");
}

}  // namespace

const char* relax_name(RelaxKind r) {
  return r == RelaxKind::kChebyshev ? "chebyshev" : "gmres";
}

RelaxKind parse_relax(const std::string& name) {
  if (name == "chebyshev") return RelaxKind::kChebyshev;
  if (name == "gmres") return RelaxKind::kGmres;
  fail(ErrorCode::kInvalidArgument, "unknown relaxation '" + name + "'");
}

void set_config_value(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "case") cfg.case_id = parse_case(value);
  else if (key == "eps") cfg.eps = parse_list<double>(key, value);
  else if (key == "n") cfg.n = parse_list<int>(key, value);
  else if (key == "nu1") cfg.nu1 = parse_number<int>(key, value);
  else if (key == "nu2") cfg.nu2 = parse_number<int>(key, value);
  else if (key == "gamma1") cfg.gamma1 = parse_number<int>(key, value);
  else if (key == "gamma2") cfg.gamma2 = parse_number<int>(key, value);
  else if (key == "relax") cfg.relax = parse_relax(value);
  else if (key == "tol-form") cfg.tol_form = parse_tol_form(value);
  else if (key == "levels") {
    if (value == "max") cfg.levels.reset();
    else cfg.levels = parse_number<int>(key, value);
  } else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "max-iterations") cfg.max_iterations = parse_number<int>(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "export-mesh") cfg.export_mesh = value;
  else if (key == "errors") cfg.compute_errors = parse_bool(key, value);
  else fail(ErrorCode::kInvalidArgument, "unknown configuration key '" + key + "'");
}

void load_config_text(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kInvalidArgument,
           "config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot open config file '" + path + "'");
  load_config_text(cfg, f);
}

bool RunReport::all_converged() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellResult& c) { return c.converged; });
}

CellResult run_cell(const RunConfig& cfg, double eps, int n) {
  CellResult cell;
  cell.eps = eps;
  cell.n = n;
  try {
    const CaseDefaults d = case_defaults(cfg.case_id);
    MgOptions opt;
    opt.nu1 = cfg.nu1.value_or(d.nu1);
    opt.nu2 = cfg.nu2.value_or(d.nu2);
    opt.gamma1 = cfg.gamma1;
    opt.gamma2 = cfg.gamma2;
    opt.relax = cfg.relax.value_or(d.relax);
    opt.lines = d.lines;
    opt.seed = cfg.seed;
    cell.levels = cfg.levels.value_or(default_levels(n));
    cell.tolerance = tolerance(cfg.tol_form.value_or(d.tol), eps, n);

    const auto t0 = std::chrono::steady_clock::now();
    const MeshHierarchy h = case_hierarchy(cfg.case_id, n, eps, cell.levels);
    const ProblemSpec spec = problem_spec(cfg.case_id, eps);
    const MgSolver mg(h, spec, opt);
    cell.setup_seconds = seconds_since(t0);
    cell.dofs = h.levels[0].num_nodes();

    FgmresOptions fo;
    fo.tol_abs = cell.tolerance;
    fo.max_iterations = cfg.max_iterations;
    const auto t1 = std::chrono::steady_clock::now();
    KrylovResult k = fgmres(matrix_operator(mg.matrix(0)), mg.as_preconditioner(), mg.rhs(),
                            {}, fo);
    cell.solve_seconds = seconds_since(t1);
    cell.iterations = k.iterations;
    cell.converged = k.converged;
    cell.residual_history = std::move(k.residual_history);
    if (!k.converged) {
      cell.failure = "no convergence in " + std::to_string(k.iterations) +
                     " iterations (residual " + format_g(k.final_residual) + ")";
    }
    cell.solution = std::move(k.x);

    const QuadMesh& mesh = h.levels[0];
    if (cfg.compute_errors) {
      if (cfg.case_id == CaseId::kHemker) {
        const HemkerErrors e = hemker_errors(hemker_reference(n, eps), mesh, cell.solution);
        cell.max_error = e.max;
        cell.energy_error = e.energy;
        cell.sd_error = e.sd;
      } else {
        cell.max_error = max_nodal_error(cell.solution, cfg.case_id, eps, mesh);
        cell.energy_error = energy_error(cell.solution, cfg.case_id, eps, mesh);
        cell.sd_error = sd_error(cell.solution, cfg.case_id, eps, mesh);
      }
    }
    if (!cfg.export_mesh.empty()) {
      const std::string path = cfg.export_mesh + "_" + case_name(cfg.case_id) + "_eps" +
                               format_g(eps) + "_N" + std::to_string(n) + ".vtk";
      const PointField fields[] = {{"solution", cell.solution}};
      write_vtk(mesh, path, fields);
    }
  } catch (const std::exception& e) {
    cell.converged = false;
    cell.failure = e.what();
  }
  return cell;
}

RunReport run_benchmark(const RunConfig& cfg) {
  validate(cfg);
  RunReport report;
  report.config = cfg;
  for (double eps : cfg.eps) {
    for (int n : cfg.n) report.cells.push_back(run_cell(cfg, eps, n));
  }
  return report;
}

void emit_csv(const RunReport& report, std::ostream& out) {
  out << "metric,eps,N,value\n";
  using Getter = double (*)(const CellResult&);
  const std::pair<const char*, Getter> metrics[] = {
      {"time_seconds", [](const CellResult& c) { return c.setup_seconds + c.solve_seconds; }},
      {"iterations", [](const CellResult& c) { return static_cast<double>(c.iterations); }},
      {"max_error", [](const CellResult& c) { return c.max_error; }},
      {"energy_error", [](const CellResult& c) { return c.energy_error; }},
      {"sd_error", [](const CellResult& c) { return c.sd_error; }},
      {"dofs", [](const CellResult& c) { return static_cast<double>(c.dofs); }},
  };
  for (const auto& [name, get] : metrics) {
    for (const CellResult& c : report.cells) {
      out << name << ',' << format_g(c.eps) << ',' << c.n << ',' << format_g(get(c)) << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing CSV");
}

void emit_csv(const RunReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  emit_csv(report, f);
}

void emit_residual_csv(const RunReport& report, std::ostream& out) {
  out << "eps,N,iteration,residual\n";
  for (const CellResult& c : report.cells) {
    for (std::size_t k = 0; k < c.residual_history.size(); ++k) {
      out << format_g(c.eps) << ',' << c.n << ',' << k << ','
          << format_g(c.residual_history[k]) << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing residual CSV");
}

std::string report_json(const RunReport& report) {
  using nlohmann::json;
  const RunConfig& cfg = report.config;
  const CaseDefaults d = case_defaults(cfg.case_id);
  json j;
  j["config"] = {
      {"case", case_name(cfg.case_id)},
      {"eps", cfg.eps},
      {"N", cfg.n},
      {"nu1", cfg.nu1.value_or(d.nu1)},
      {"nu2", cfg.nu2.value_or(d.nu2)},
      {"gamma1", cfg.gamma1},
      {"gamma2", cfg.gamma2},
      {"relax", relax_name(cfg.relax.value_or(d.relax))},
      {"tol_form", tol_form_name(cfg.tol_form.value_or(d.tol))},
      {"levels", cfg.levels ? json(*cfg.levels) : json("max")},
      {"seed", cfg.seed},
      {"max_iterations", cfg.max_iterations},
  };
  json cells = json::array();
  for (const CellResult& c : report.cells) {
    json jc = {{"eps", c.eps},
               {"N", c.n},
               {"dofs", c.dofs},
               {"levels", c.levels},
               {"iterations", c.iterations},
               {"converged", c.converged},
               {"tolerance", c.tolerance},
               {"setup_seconds", c.setup_seconds},
               {"solve_seconds", c.solve_seconds},
               {"max_error", c.max_error},
               {"energy_error", c.energy_error},
               {"sd_error", c.sd_error},
               {"residual_history", c.residual_history}};
    if (!c.failure.empty()) jc["failure"] = c.failure;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  j["all_converged"] = report.all_converged();
  j["environment"] = {
#if defined(__clang__)
      {"compiler", "clang " __clang_version__},
#elif defined(__GNUC__)
      {"compiler", "gcc " __VERSION__},
#else
      {"compiler", "unknown"},
#endif
      {"cplusplus", static_cast<long>(__cplusplus)},
  };
  return j.dump(2);
}

}  // namespace supgmg
