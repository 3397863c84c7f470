#include <cmath>
#include <map>

#include "doctest.h"
#include "supgmg/benchmarks.hpp"
#include "supgmg/error.hpp"
#include "supgmg/lu.hpp"

using namespace supgmg;

namespace {

struct Solved {
  MeshHierarchy h;
  std::vector<double> u;
};

Solved direct_solve(CaseId id, int n, double eps) {
  Solved s{case_hierarchy(id, n, eps, 1), {}};
  const MgSolver mg(s.h, problem_spec(id, eps), MgOptions{});
  s.u.resize(mg.rhs().size());
  mg.apply(mg.rhs(), s.u);
  return s;
}

struct Errors {
  double max, energy, sd;
};

Errors square_errors(CaseId id, int n, double eps) {
  const Solved s = direct_solve(id, n, eps);
  const QuadMesh& m = s.h.levels[0];
  return {max_nodal_error(s.u, id, eps, m), energy_error(s.u, id, eps, m),
          sd_error(s.u, id, eps, m)};
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("case and tolerance names") {
  for (CaseId id : {CaseId::kSquareExp, CaseId::kSquareParab, CaseId::kHemker}) {
    CHECK(parse_case(case_name(id)) == id);
  }
  CHECK(std::string(case_name(CaseId::kSquareParab)) == "square-parab");
  CHECK_THROWS_AS(parse_case("square"), Error);
  for (TolForm t : {TolForm::kInvN2, TolForm::kSqrtEpsInvN2}) CHECK(parse_tol_form(tol_form_name(t)) == t);
  CHECK(tolerance(TolForm::kInvN2, 1e-6, 64) == doctest::Approx(1.0 / 4096));
  CHECK(tolerance(TolForm::kSqrtEpsInvN2, 1e-6, 64) == doctest::Approx(1e-3 / 4096));
}

TEST_CASE("default levels") {
  CHECK(default_levels(8) == 1);
  CHECK(default_levels(16) == 2);
  CHECK(default_levels(64) == 4);
  CHECK(default_levels(256) == 6);
  CHECK(default_levels(40) == 2);
}

TEST_CASE("case defaults") {
  CHECK(case_defaults(CaseId::kSquareExp).lines == LinePlan::kBothDirections);
  CHECK(case_defaults(CaseId::kSquareExp).relax == RelaxKind::kChebyshev);
  CHECK(case_defaults(CaseId::kSquareParab).lines == LinePlan::kXLines);
  CHECK(case_defaults(CaseId::kSquareParab).tol == TolForm::kSqrtEpsInvN2);
  const CaseDefaults h = case_defaults(CaseId::kHemker);
  CHECK(h.relax == RelaxKind::kGmres);
  CHECK(h.nu1 == 3);
  CHECK(h.nu2 == 3);
  CHECK(h.lines == LinePlan::kHemker);
}

TEST_CASE("exact solutions vanish on the boundary") {
  for (CaseId id : {CaseId::kSquareExp, CaseId::kSquareParab}) {
    for (double eps : {1.0, 1e-2, 1e-4, 1e-8, 1e-10}) {
      for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        CHECK(std::abs(exact_solution(id, eps, t, 0.0)) <= 1e-10);
        CHECK(std::abs(exact_solution(id, eps, t, 1.0)) <= 1e-10);
        CHECK(std::abs(exact_solution(id, eps, 0.0, t)) <= 1e-10);
        CHECK(std::abs(exact_solution(id, eps, 1.0, t)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("exact solution values") {
  CHECK(exact_solution(CaseId::kSquareParab, 1e-8, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  // Away from the layers the square-exp solution is cos(pi x / 2).
  CHECK(exact_solution(CaseId::kSquareExp, 1e-10, 0.5, 0.5) ==
        doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-14));
  for (double eps : {1e-10, 1e-6}) {
    CHECK(std::isfinite(exact_solution(CaseId::kSquareExp, eps, 1e-12, 1e-12)));
    CHECK(std::isfinite(rhs_f(CaseId::kSquareExp, eps, 1e-12, 1e-12)));
  }
  try {
    exact_solution(CaseId::kHemker, 0.1, 0.0, 2.0);
    FAIL("Hemker has no exact solution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoAnalyticSolution);
  }
  CHECK_THROWS_AS(exact_gradient(CaseId::kHemker, 0.1, 0.0, 2.0), Error);
  CHECK(rhs_f(CaseId::kHemker, 0.1, 0.0, 2.0) == 0.0);
}

TEST_CASE("rhs and gradient against finite differences") {
  const double h = 1e-4;
  const std::pair<double, double> pts[] = {{0.5, 0.5}, {0.3, 0.7}, {0.8, 0.2}, {0.62, 0.41}};
  for (CaseId id : {CaseId::kSquareExp, CaseId::kSquareParab}) {
    const ProblemSpec spec = problem_spec(id, 1.0);
    for (double eps : {1.0, 0.3, 0.1}) {
      const auto u = [&](double x, double y) { return exact_solution(id, eps, x, y); };
      for (auto [x, y] : pts) {
        const double ux = (u(x + h, y) - u(x - h, y)) / (2 * h);
        const double uy = (u(x, y + h) - u(x, y - h)) / (2 * h);
        const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4 * u(x, y)) / (h * h);
        const Vec2 b = spec.convection(x, y);
        const double c = spec.reaction(x, y);
        const double f_fd = -eps * lap + b.x * ux + b.y * uy + c * u(x, y);
        const double f = rhs_f(id, eps, x, y);
        CHECK(f == doctest::Approx(f_fd).epsilon(1e-6));
        const Vec2 g = exact_gradient(id, eps, x, y);
        CHECK(g.x == doctest::Approx(ux).epsilon(1e-7));
        CHECK(g.y == doctest::Approx(uy).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("problem specs") {
  const ProblemSpec e = problem_spec(CaseId::kSquareExp, 1e-4);
  CHECK(e.convection(0.25, 0.0).x == doctest::Approx(-1.75));
  CHECK(e.reaction(0.1, 0.1) == 1.5);
  const ProblemSpec p = problem_spec(CaseId::kSquareParab, 1e-4);
  CHECK(p.convection(0.25, 0.0).x == -1.0);
  CHECK(p.reaction(0.1, 0.1) == 1.0);
  const ProblemSpec h = problem_spec(CaseId::kHemker, 1e-1);
  CHECK(h.convection(0.0, 2.0).x == 1.0);
  CHECK(h.dirichlet(boundary_tag::kHemkerCircle, 1.0, 0.0) == 1.0);
  CHECK(h.dirichlet(boundary_tag::kHemkerOuter, -4.0, 0.0) == 0.0);
  CHECK(h.neumann_tags.count(boundary_tag::kHemkerOutflow) == 1);
  CHECK_THROWS_AS(problem_spec(CaseId::kSquareExp, 0.0), Error);
  CHECK_THROWS_AS(problem_spec(CaseId::kSquareExp, 2.0), Error);
}

TEST_CASE("error measures of simple fields") {
  const QuadMesh m = case_hierarchy(CaseId::kSquareExp, 16, 1e-4, 1).levels[0];
  const ProblemSpec spec = problem_spec(CaseId::kSquareExp, 1e-4);
  const auto taus = cell_taus(m, spec);
  const std::vector<double> zero(m.num_nodes(), 0.0);
  const FieldWithGradient one{[](double, double) { return 1.0; }, [](double, double) { return Vec2{}; }};
  const ErrorNorms n1 = error_norms(m, zero, one, spec, taus);
  CHECK(n1.energy == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(n1.sd == doctest::Approx(1.0).epsilon(1e-13));

  // A bilinear field is represented exactly.
  const auto g = [](double x, double y) { return 1 + x - 2 * y + 3 * x * y; };
  const FieldWithGradient bil{g, [](double x, double y) { return Vec2{1 + 3 * y, -2 + 3 * x}; }};
  std::vector<double> gh(m.num_nodes());
  for (std::size_t i = 0; i < gh.size(); ++i) gh[i] = g(m.nodes[i].x, m.nodes[i].y);
  const ErrorNorms n2 = error_norms(m, gh, bil, spec, taus);
  CHECK(n2.energy <= 1e-13);
  CHECK(n2.sd <= 1e-13);

  // Streamline term: u - u_h = x gives sqrt(int x^2 + eps + sum tau |beta_x|^2).
  const FieldWithGradient lin{[](double x, double) { return x; }, [](double, double) { return Vec2{1, 0}; }};
  const ErrorNorms n3 = error_norms(m, zero, lin, spec, taus);
  CHECK(n3.energy == doctest::Approx(std::sqrt(1.0 / 3 + 1e-4)).epsilon(1e-13));
  CHECK(n3.sd > n3.energy);

  std::vector<double> interp(m.num_nodes());
  for (std::size_t i = 0; i < interp.size(); ++i) {
    interp[i] = exact_solution(CaseId::kSquareExp, 1e-4, m.nodes[i].x, m.nodes[i].y);
  }
  CHECK(max_nodal_error(interp, CaseId::kSquareExp, 1e-4, m) == 0.0);
}

TEST_CASE("square-exp discretization order and eps robustness") {
  std::map<std::pair<int, double>, Errors> e;
  for (int n : {32, 64, 128}) {
    for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) e[{n, eps}] = square_errors(CaseId::kSquareExp, n, eps);
  }
  for (double eps : {1e-4, 1e-8}) {
    CHECK(e[{64, eps}].max < e[{32, eps}].max);
    CHECK(e[{128, eps}].max < e[{64, eps}].max);
  }
  for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
    const double ratio = e[{64, eps}].energy / e[{128, eps}].energy;
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.0);
  }
  for (int n : {64, 128}) {
    for (auto pick : {&Errors::max, &Errors::energy, &Errors::sd}) {
      double lo = 1e300, hi = 0.0;
      for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
        lo = std::min(lo, e[{n, eps}].*pick);
        hi = std::max(hi, e[{n, eps}].*pick);
      }
      CHECK((hi - lo) / lo < 0.03);
    }
  }
  for (const auto& [key, v] : e) CHECK(v.sd >= v.energy);
}

TEST_CASE("square-parab energy error scales like eps^(1/4)") {
  const Errors a = square_errors(CaseId::kSquareParab, 64, 1e-4);
  const Errors b = square_errors(CaseId::kSquareParab, 64, 1e-6);
  const double ratio = a.energy / b.energy;
  CHECK(ratio >= 2.9);
  CHECK(ratio <= 3.5);
  CHECK(a.sd >= a.energy);
  CHECK(b.sd >= b.energy);
}

TEST_CASE("Hemker double-mesh reference") {
  const HemkerReference ref = hemker_reference(32, 1.0);
  REQUIRE(ref.fine.hemker.has_value());
  const HemkerGeometry g = hemker_transition_points(32, 1.0);
  CHECK(ref.fine.hemker->sigma1 == g.sigma1);
  CHECK(ref.fine.hemker->sigma3 == g.sigma3);
  CHECK(ref.fine.hemker->n == 64);

  const ProblemSpec spec = problem_spec(CaseId::kHemker, 1.0);
  const auto bc = dirichlet_values(ref.fine, spec);
  for (std::size_t i = 0; i < bc.size(); ++i) {
    if (!std::isnan(bc[i])) CHECK(ref.solution[i] == doctest::Approx(bc[i]).epsilon(1e-12));
  }
  LinearSystem sys = assemble_supg(ref.fine, spec);
  apply_dirichlet(sys, ref.fine, spec);
  std::vector<double> r(ref.solution.size());
  residual(sys.matrix, ref.solution, sys.rhs, r);
  CHECK(norm2(r) <= 1e-10 * std::max(1.0, norm2(sys.rhs)));

  // The reference compared with itself has no error.
  const QuadMesh coarse = hemker_mesh(32, g);
  const auto at = ref.at_coarse_nodes(coarse);
  const HemkerErrors self = hemker_errors(ref, coarse, at);
  CHECK(self.max == 0.0);

  // A mesh with different transition points is rejected.
  const QuadMesh other = hemker_mesh(32, hemker_transition_points(32, 0.01));
  CHECK_THROWS_AS(hemker_errors(ref, other, at), Error);
}

TEST_CASE("Hemker errors are positive and ordered") {
  const HemkerReference ref = hemker_reference(32, 0.1);
  const MeshHierarchy h = case_hierarchy(CaseId::kHemker, 32, 0.1, 1);
  const MgSolver mg(h, problem_spec(CaseId::kHemker, 0.1), MgOptions{});
  std::vector<double> u(mg.rhs().size());
  mg.apply(mg.rhs(), u);
  const HemkerErrors e = hemker_errors(ref, h.levels[0], u);
  CHECK(e.max > 0.0);
  CHECK(e.energy > 0.0);
  CHECK(e.sd >= e.energy);
}

}  // TEST_SUITE
