#include "supgmg/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "supgmg/error.hpp"
#include "supgmg/lu.hpp"
#include "supgmg/quadrature.hpp"

namespace supgmg {

namespace {

constexpr double kPi = std::numbers::pi;

// y-factor (1 - e^{-y/s})(1 - e^{-(1-y)/s}) / (1 - e^{-1/s}), s = sqrt(eps),
// and its first two derivatives.
struct Factor {
  double v, d1, d2;
};

Factor y_factor(double eps, double y) {
  const double s = std::sqrt(eps);
  const double a = std::exp(-y / s);
  const double c = std::exp(-(1.0 - y) / s);
  const double oma = -std::expm1(-y / s);
  const double omc = -std::expm1(-(1.0 - y) / s);
  const double d = -std::expm1(-1.0 / s);
  return {oma * omc / d, ((a / s) * omc - oma * (c / s)) / d, -(a + c) / (s * s * d)};
}

// cos(pi x / 2) - (e^{-x/eps} - e^{-1/eps}) / (1 - e^{-1/eps}).
Factor x_factor_exp(double eps, double x) {
  const double g = std::exp(-x / eps);
  const double e = std::exp(-1.0 / eps);
  const double d = -std::expm1(-1.0 / eps);
  const double h = kPi / 2;
  return {std::cos(h * x) - (g - e) / d, -h * std::sin(h * x) + (g / eps) / d,
          -h * h * std::cos(h * x) - (g / (eps * eps)) / d};
}

Factor x_factor_parab(double x) {
  return {std::sin(kPi * x), kPi * std::cos(kPi * x), -kPi * kPi * std::sin(kPi * x)};
}

void require_analytic(CaseId id) {
  if (id == CaseId::kHemker) {
    fail(ErrorCode::kNoAnalyticSolution, "no analytic solution for the Hemker problem");
  }
}

void check_eps(double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
}

Factor x_factor(CaseId id, double eps, double x) {
  return id == CaseId::kSquareExp ? x_factor_exp(eps, x) : x_factor_parab(x);
}

}  // namespace

const char* case_name(CaseId id) {
  switch (id) {
    case CaseId::kSquareExp: return "square-exp";
    case CaseId::kSquareParab: return "square-parab";
    case CaseId::kHemker: return "hemker";
  }
  return "?";
}

CaseId parse_case(const std::string& name) {
  if (name == "square-exp") return CaseId::kSquareExp;
  if (name == "square-parab") return CaseId::kSquareParab;
  if (name == "hemker") return CaseId::kHemker;
  fail(ErrorCode::kInvalidArgument, "unknown case '" + name + "'");
}

const char* tol_form_name(TolForm t) {
  return t == TolForm::kInvN2 ? "abs-inv-n2" : "abs-sqrt-eps-inv-n2";
}

TolForm parse_tol_form(const std::string& name) {
  if (name == "abs-inv-n2") return TolForm::kInvN2;
  if (name == "abs-sqrt-eps-inv-n2") return TolForm::kSqrtEpsInvN2;
  fail(ErrorCode::kInvalidArgument, "unknown tolerance form '" + name + "'");
}

double tolerance(TolForm t, double eps, int n) {
  const double n2 = static_cast<double>(n) * n;
  return t == TolForm::kInvN2 ? 1.0 / n2 : std::sqrt(eps) / n2;
}

double exact_solution(CaseId id, double eps, double x, double y) {
  require_analytic(id);
  check_eps(eps);
  return x_factor(id, eps, x).v * y_factor(eps, y).v;
}

Vec2 exact_gradient(CaseId id, double eps, double x, double y) {
  require_analytic(id);
  check_eps(eps);
  const Factor fx = x_factor(id, eps, x);
  const Factor fy = y_factor(eps, y);
  return {fx.d1 * fy.v, fx.v * fy.d1};
}

double rhs_f(CaseId id, double eps, double x, double y) {
  if (id == CaseId::kHemker) return 0.0;
  check_eps(eps);
  const Factor fx = x_factor(id, eps, x);
  const Factor fy = y_factor(eps, y);
  const double lap = fx.d2 * fy.v + fx.v * fy.d2;
  const double ux = fx.d1 * fy.v;
  const double u = fx.v * fy.v;
  if (id == CaseId::kSquareExp) return -eps * lap - (2.0 - x) * ux + 1.5 * u;
  return -eps * lap - ux + u;
}

ProblemSpec problem_spec(CaseId id, double eps) {
  check_eps(eps);
  ProblemSpec s;
  s.eps = eps;
  switch (id) {
    case CaseId::kSquareExp:
      s.convection = [](double x, double) { return Vec2{-(2.0 - x), 0.0}; };
      s.reaction = [](double, double) { return 1.5; };
      s.tau_rule = tau_exp_layer_rule(0.5);
      break;
    case CaseId::kSquareParab:
      s.convection = [](double, double) { return Vec2{-1.0, 0.0}; };
      s.reaction = [](double, double) { return 1.0; };
      s.tau_rule = tau_parab_layer_rule();
      break;
    case CaseId::kHemker:
      s.convection = [](double, double) { return Vec2{1.0, 0.0}; };
      s.reaction = [](double, double) { return 0.0; };
      s.tau_rule = tau_hemker_rule(0.55);
      s.neumann_tags = {boundary_tag::kHemkerOutflow};
      break;
  }
  s.rhs = [id, eps](double x, double y) { return rhs_f(id, eps, x, y); };
  s.dirichlet = [](int tag, double, double) {
    return tag == boundary_tag::kHemkerCircle ? 1.0 : 0.0;
  };
  return s;
}

CaseDefaults case_defaults(CaseId id) {
  CaseDefaults d;
  switch (id) {
    case CaseId::kSquareExp:
      break;
    case CaseId::kSquareParab:
      d.lines = LinePlan::kXLines;
      d.tol = TolForm::kSqrtEpsInvN2;
      break;
    case CaseId::kHemker:
      d.nu1 = d.nu2 = 3;
      d.relax = RelaxKind::kGmres;
      d.lines = LinePlan::kHemker;
      break;
  }
  return d;
}

int default_levels(int n) {
  require(n >= 8 && n % 4 == 0, "N must be at least 8 and divisible by 4");
  int levels = 1;
  while (n % 2 == 0 && n / 2 >= 8 && (n / 2) % 4 == 0) {
    n /= 2;
    ++levels;
  }
  return levels;
}

MeshHierarchy case_hierarchy(CaseId id, int n, double eps, int levels) {
  switch (id) {
    case CaseId::kSquareExp:
      return square_hierarchy(n, eps, SquareLayout::kExpAndParab, levels);
    case CaseId::kSquareParab:
      return square_hierarchy(n, eps, SquareLayout::kParabOnly, levels);
    case CaseId::kHemker:
      return hemker_hierarchy(n, eps, levels);
  }
  fail(ErrorCode::kInvalidArgument, "unknown case");
}

double max_nodal_error(std::span<const double> u_h, CaseId id, double eps,
                       const QuadMesh& mesh) {
  require(u_h.size() == mesh.num_nodes(), "solution size does not match the mesh");
  double err = 0.0;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const Point p = mesh.nodes[i];
    err = std::max(err, std::abs(exact_solution(id, eps, p.x, p.y) - u_h[i]));
  }
  return err;
}

ErrorNorms error_norms(const QuadMesh& mesh, std::span<const double> u_h,
                       const FieldWithGradient& exact, const ProblemSpec& spec,
                       std::span<const double> taus) {
  require(u_h.size() == mesh.num_nodes(), "solution size does not match the mesh");
  require(taus.size() == mesh.num_cells(), "one tau per cell required");
  const auto rule = gauss_rule_2d(3);
  double e2 = 0.0, s2 = 0.0;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto corners = mesh.corners(cell);
    const auto& nodes = mesh.cells[cell];
    for (const auto& [ref, w] : rule) {
      const Q1Point q = q1_point(corners, ref[0], ref[1]);
      double v = 0.0, vx = 0.0, vy = 0.0;
      for (int a = 0; a < 4; ++a) {
        const double ua = u_h[nodes[a]];
        v -= q.n[a] * ua;
        vx -= q.dx[a] * ua;
        vy -= q.dy[a] * ua;
      }
      if (exact.value) {
        v += exact.value(q.x.x, q.x.y);
        const Vec2 g = exact.gradient(q.x.x, q.x.y);
        vx += g.x;
        vy += g.y;
      }
      const double wd = w * q.det;
      const double energy = spec.eps * (vx * vx + vy * vy) + v * v;
      const Vec2 beta = spec.convection ? spec.convection(q.x.x, q.x.y) : Vec2{};
      const double stream = beta.x * vx + beta.y * vy;
      e2 += wd * energy;
      s2 += wd * (energy + taus[cell] * stream * stream);
    }
  }
  return {std::sqrt(e2), std::sqrt(s2)};
}

namespace {

ErrorNorms square_norms(std::span<const double> u_h, CaseId id, double eps,
                        const QuadMesh& mesh) {
  require_analytic(id);
  const ProblemSpec spec = problem_spec(id, eps);
  const FieldWithGradient exact{
      [id, eps](double x, double y) { return exact_solution(id, eps, x, y); },
      [id, eps](double x, double y) { return exact_gradient(id, eps, x, y); }};
  return error_norms(mesh, u_h, exact, spec, cell_taus(mesh, spec));
}

}  // namespace

double energy_error(std::span<const double> u_h, CaseId id, double eps,
                    const QuadMesh& mesh) {
  return square_norms(u_h, id, eps, mesh).energy;
}

double sd_error(std::span<const double> u_h, CaseId id, double eps,
                const QuadMesh& mesh) {
  return square_norms(u_h, id, eps, mesh).sd;
}

HemkerReference hemker_reference(int n, double eps) {
  const HemkerGeometry g = hemker_transition_points(n, eps);
  HemkerReference ref;
  ref.n = n;
  ref.eps = eps;
  ref.fine = hemker_mesh(2 * n, g);
  const ProblemSpec spec = problem_spec(CaseId::kHemker, eps);
  LinearSystem sys = assemble_supg(ref.fine, spec);
  apply_dirichlet(sys, ref.fine, spec);
  ref.solution = LuFactorization::sparse(sys.matrix).solve(sys.rhs);
  return ref;
}

std::vector<double> HemkerReference::at_coarse_nodes(const QuadMesh& coarse) const {
  const auto map = coincident_fine_nodes(coarse, fine);
  std::vector<double> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = solution[map[i]];
  return out;
}

HemkerErrors hemker_errors(const HemkerReference& ref, const QuadMesh& coarse,
                           std::span<const double> u_h) {
  require(coarse.hemker.has_value() && ref.fine.hemker.has_value(),
          "Hemker errors need Hemker meshes");
  require(coarse.hemker->n == ref.n && coarse.hemker->sigma1 == ref.fine.hemker->sigma1 &&
              coarse.hemker->sigma2 == ref.fine.hemker->sigma2 &&
              coarse.hemker->sigma3 == ref.fine.hemker->sigma3,
          "coarse mesh does not match the reference mesh");
  require(u_h.size() == coarse.num_nodes(), "solution size does not match the mesh");

  HemkerErrors out;
  const auto at_nodes = ref.at_coarse_nodes(coarse);
  for (std::size_t i = 0; i < at_nodes.size(); ++i) {
    out.max = std::max(out.max, std::abs(at_nodes[i] - u_h[i]));
  }

  const ProblemSpec spec = problem_spec(CaseId::kHemker, ref.eps);
  const CsrMatrix p =
      build_prolongation(coarse, ref.fine, build_parent_map(coarse, ref.fine));
  std::vector<double> diff = spmv(p, u_h);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= ref.solution[i];
  const auto coarse_taus = cell_taus(coarse, spec);
  const auto parents = parent_cells(coarse, ref.fine);
  std::vector<double> taus(ref.fine.num_cells());
  for (std::size_t c = 0; c < taus.size(); ++c) taus[c] = coarse_taus[parents[c]];
  const ErrorNorms norms = error_norms(ref.fine, diff, {}, spec, taus);
  out.energy = norms.energy;
  out.sd = norms.sd;
  return out;
}

}  // namespace supgmg
