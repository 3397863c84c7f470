#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supgmg/block_relax.hpp"
#include "supgmg/fem.hpp"
#include "supgmg/mesh.hpp"
#include "supgmg/multigrid.hpp"

namespace supgmg {

enum class CaseId {
  kSquareExp,    // exponential + parabolic layers, beta = (-(2-x), 0), c = 3/2
  kSquareParab,  // parabolic layers only, beta = (-1, 0), c = 1
  kHemker,       // flow past a circle, beta = (1, 0), c = 0, f = 0
};

const char* case_name(CaseId id);
CaseId parse_case(const std::string& name);

/// How the residual tolerance of the outer FGMRES scales with N.
enum class TolForm {
  kInvN2,         // 1 / N^2
  kSqrtEpsInvN2,  // sqrt(eps) / N^2
};
const char* tol_form_name(TolForm t);
TolForm parse_tol_form(const std::string& name);
double tolerance(TolForm t, double eps, int n);

double exact_solution(CaseId id, double eps, double x, double y);
Vec2 exact_gradient(CaseId id, double eps, double x, double y);
double rhs_f(CaseId id, double eps, double x, double y);

ProblemSpec problem_spec(CaseId id, double eps);

/// Per-case solver defaults.
struct CaseDefaults {
  int nu1 = 2;
  int nu2 = 2;
  RelaxKind relax = RelaxKind::kChebyshev;
  LinePlan lines = LinePlan::kBothDirections;
  TolForm tol = TolForm::kInvN2;
};
CaseDefaults case_defaults(CaseId id);

/// Levels that halve N while the coarse N stays >= 8 and divisible by 4
/// (down to 8 for N = 8 * 2^k).
int default_levels(int n);

MeshHierarchy case_hierarchy(CaseId id, int n, double eps, int levels);

/// max_i |u(x_i) - u_h,i| over all nodes.
double max_nodal_error(std::span<const double> u_h, CaseId id, double eps,
                       const QuadMesh& mesh);

struct ErrorNorms {
  double energy = 0.0;
  double sd = 0.0;
};

/// Exact field with gradient, for the error norms.
struct FieldWithGradient {
  std::function<double(double, double)> value;
  std::function<Vec2(double, double)> gradient;
};

/// Energy and SD norms of u - u_h by 3x3 Gauss quadrature on every cell;
/// `taus` gives tau_T per cell.
ErrorNorms error_norms(const QuadMesh& mesh, std::span<const double> u_h,
                       const FieldWithGradient& exact, const ProblemSpec& spec,
                       std::span<const double> taus);

double energy_error(std::span<const double> u_h, CaseId id, double eps,
                    const QuadMesh& mesh);
double sd_error(std::span<const double> u_h, CaseId id, double eps,
                const QuadMesh& mesh);

/// Double-mesh reference for the Hemker problem: a direct solve on the mesh
/// with 2N cells per logical direction and the transition points of N.
struct HemkerReference {
  int n = 0;
  double eps = 0.0;
  QuadMesh fine;
  std::vector<double> solution;

  /// Reference values at the nodes of the N mesh.
  std::vector<double> at_coarse_nodes(const QuadMesh& coarse) const;
};
HemkerReference hemker_reference(int n, double eps);

struct HemkerErrors {
  double max = 0.0;
  double energy = 0.0;
  double sd = 0.0;
};

/// Errors of u_h on the N mesh against the reference. Energy and SD norms
/// are integrated on the reference mesh with u_h interpolated to it and tau
/// taken from the parent cell of the N mesh.
HemkerErrors hemker_errors(const HemkerReference& ref, const QuadMesh& coarse,
                           std::span<const double> u_h);

}  // namespace supgmg
