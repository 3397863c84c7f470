#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "supgmg/mesh.hpp"
#include "supgmg/sparse.hpp"

namespace supgmg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Per-cell SUPG parameter as a function of region, diameter and mesh Peclet
/// number.
struct TauRule {
  std::string name;
  std::function<double(Region region, double h, double peclet)> classifier;
};

/// tau = 0 everywhere (plain Galerkin).
TauRule tau_galerkin();
/// tau0 h if Pe > 1, tau1 h^2 / eps otherwise.
TauRule tau_peclet_switched(double tau0, double tau1, double eps);
/// 0 inside the exponential layer, tau0 h elsewhere.
TauRule tau_exp_layer_rule(double tau0 = 0.5);
/// h^(4/3) inside the parabolic layers, h elsewhere.
TauRule tau_parab_layer_rule();
/// 0 in the radial layers of the polar block, tau0 h elsewhere.
TauRule tau_hemker_rule(double tau0 = 0.55);

/// -eps lap u + beta . grad u + c u = f with Dirichlet data per boundary tag.
struct ProblemSpec {
  double eps = 1.0;
  std::function<Vec2(double, double)> convection;
  std::function<double(double, double)> reaction;
  std::function<double(double, double)> rhs;
  std::function<double(int tag, double x, double y)> dirichlet;
  std::set<int> neumann_tags;
  TauRule tau_rule;
  /// Gauss points per direction for the load vector.
  int load_quadrature = 2;
};

/// ||beta|| h / (2 eps) with h the cell diameter.
double cell_peclet(const QuadMesh& mesh, std::size_t cell, Vec2 beta_center,
                   double eps);

/// tau_T of one cell; coefficients taken at the cell center.
double stabilization_tau(const TauRule& rule, const QuadMesh& mesh,
                         std::size_t cell, const ProblemSpec& spec);

/// tau_T for every cell.
std::vector<double> cell_taus(const QuadMesh& mesh, const ProblemSpec& spec);

/// Q1 element matrix and load vector of one cell with 2x2 Gauss quadrature
/// (`quadrature` points per direction for both, overriding the spec).
struct ElementSystem {
  std::array<double, 16> matrix{};
  std::array<double, 4> load{};
};
ElementSystem element_system(const QuadMesh& mesh, std::size_t cell,
                             const ProblemSpec& spec, double tau,
                             int matrix_quadrature = 2);

/// Pattern of the Q1 stiffness matrix (node couplings through cells).
CsrMatrix q1_pattern(const QuadMesh& mesh);

struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};

/// Assembles a_S(phi_j, phi_i) and f_S(f, phi_i); boundary conditions are not
/// applied.
LinearSystem assemble_supg(const QuadMesh& mesh, const ProblemSpec& spec,
                           int matrix_quadrature = 2);

/// Dirichlet values per node (NaN for free nodes). Conflicting values on one
/// node raise kInvalidArgument.
std::vector<double> dirichlet_values(const QuadMesh& mesh, const ProblemSpec& spec);

/// Replaces Dirichlet rows by identity rows and sets the rhs to the boundary
/// value. Columns are left untouched.
void apply_dirichlet(LinearSystem& system, const QuadMesh& mesh,
                     const ProblemSpec& spec);

}  // namespace supgmg
