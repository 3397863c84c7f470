#include "supgmg/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "supgmg/error.hpp"
#include "supgmg/quadrature.hpp"

namespace supgmg {

TauRule tau_galerkin() {
  return {"galerkin", [](Region, double, double) { return 0.0; }};
}

TauRule tau_peclet_switched(double tau0, double tau1, double eps) {
  return {"peclet-switched", [=](Region, double h, double pe) {
            return pe > 1.0 ? tau0 * h : h * h * tau1 / eps;
          }};
}

TauRule tau_exp_layer_rule(double tau0) {
  return {"exp-layer", [=](Region r, double h, double) {
            switch (r) {
              case Region::kExpLayer:
              case Region::kExpParabCornerBottom:
              case Region::kExpParabCornerTop:
                return 0.0;
              case Region::kInterior:
              case Region::kParabLayerBottom:
              case Region::kParabLayerTop:
                return tau0 * h;
              default:
                fail(ErrorCode::kInvalidArgument,
                     std::string("exp-layer tau rule: unknown region ") + region_name(r));
            }
          }};
}

TauRule tau_parab_layer_rule() {
  return {"parab-layer", [](Region r, double h, double) {
            switch (r) {
              case Region::kParabLayerBottom:
              case Region::kParabLayerTop:
              case Region::kExpParabCornerBottom:
              case Region::kExpParabCornerTop:
                return std::pow(h, 4.0 / 3.0);
              case Region::kInterior:
              case Region::kExpLayer:
                return h;
              default:
                fail(ErrorCode::kInvalidArgument,
                     std::string("parab-layer tau rule: unknown region ") + region_name(r));
            }
          }};
}

TauRule tau_hemker_rule(double tau0) {
  return {"hemker", [=](Region r, double h, double) {
            switch (r) {
              case Region::kHemkerRadialLayer1:
              case Region::kHemkerRadialLayer2:
              case Region::kHemkerRadialLayer3:
                return 0.0;
              case Region::kHemkerPolarOuter:
              case Region::kHemkerRight:
                return tau0 * h;
              default:
                fail(ErrorCode::kInvalidArgument,
                     std::string("hemker tau rule: unknown region ") + region_name(r));
            }
          }};
}

double cell_peclet(const QuadMesh& mesh, std::size_t cell, Vec2 beta_center,
                   double eps) {
  const double b = norm(beta_center);
  if (b == 0.0) return 0.0;
  const double h = cell_diameter(mesh, cell);
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return b * h / (2.0 * eps);
}

namespace {

Point cell_center(const QuadMesh& mesh, std::size_t cell) {
  return map_to_physical(mesh.corners(cell), 0.5, 0.5);
}

}  // namespace

double stabilization_tau(const TauRule& rule, const QuadMesh& mesh,
                         std::size_t cell, const ProblemSpec& spec) {
  const Point c = cell_center(mesh, cell);
  const Vec2 beta = spec.convection ? spec.convection(c.x, c.y) : Vec2{};
  const double pe = cell_peclet(mesh, cell, beta, spec.eps);
  const double tau = rule.classifier(mesh.regions[cell], cell_diameter(mesh, cell), pe);
  require(tau >= 0.0, "stabilization parameter must be nonnegative");
  return tau;
}

std::vector<double> cell_taus(const QuadMesh& mesh, const ProblemSpec& spec) {
  std::vector<double> taus(mesh.num_cells(), 0.0);
  if (!spec.tau_rule.classifier) return taus;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    taus[c] = stabilization_tau(spec.tau_rule, mesh, c, spec);
  }
  return taus;
}

ElementSystem element_system(const QuadMesh& mesh, std::size_t cell,
                             const ProblemSpec& spec, double tau,
                             int matrix_quadrature) {
  const auto corners = mesh.corners(cell);
  for (double xi : {0.0, 1.0}) {
    for (double eta : {0.0, 1.0}) {
      if (!(cell_jacobian(mesh, cell, xi, eta) > 0.0)) {
        fail(ErrorCode::kDegenerateCell,
             "degenerate or inverted cell " + std::to_string(cell));
      }
    }
  }

  ElementSystem es;
  const auto add_point = [&](const Q1Point& q, double w, bool matrix, bool load) {
    const double det = q.det;
    if (!(det > 0.0)) {
      fail(ErrorCode::kDegenerateCell,
           "nonpositive Jacobian in cell " + std::to_string(cell));
    }
    const double x = q.x.x;
    const double y = q.x.y;
    const Vec2 beta = spec.convection ? spec.convection(x, y) : Vec2{};
    const double c = spec.reaction ? spec.reaction(x, y) : 0.0;
    double streamline[4];
    for (int a = 0; a < 4; ++a) {
      streamline[a] = beta.x * q.dx[a] + beta.y * q.dy[a];
    }
    const double wd = w * det;
    if (matrix) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const double diffusion = spec.eps * (q.dx[j] * q.dx[i] + q.dy[j] * q.dy[i]);
          const double galerkin = streamline[j] * q.n[i] + c * q.n[j] * q.n[i];
          const double supg = tau * (streamline[j] + c * q.n[j]) * streamline[i];
          es.matrix[4 * i + j] += wd * (diffusion + galerkin + supg);
        }
      }
    }
    if (load) {
      const double f = spec.rhs ? spec.rhs(x, y) : 0.0;
      for (int i = 0; i < 4; ++i) es.load[i] += wd * f * (q.n[i] + tau * streamline[i]);
    }
  };

  const int load_q = spec.load_quadrature;
  if (load_q == matrix_quadrature) {
    for (const auto& [ref, w] : gauss_rule_2d(matrix_quadrature)) {
      add_point(q1_point(corners, ref[0], ref[1]), w, true, true);
    }
  } else {
    for (const auto& [ref, w] : gauss_rule_2d(matrix_quadrature)) {
      add_point(q1_point(corners, ref[0], ref[1]), w, true, false);
    }
    for (const auto& [ref, w] : gauss_rule_2d(load_q)) {
      add_point(q1_point(corners, ref[0], ref[1]), w, false, true);
    }
  }
  return es;
}

CsrMatrix q1_pattern(const QuadMesh& mesh) {
  const int n = static_cast<int>(mesh.num_nodes());
  std::vector<std::vector<int>> adj(n);
  for (const auto& c : mesh.cells) {
    for (int a : c) {
      for (int b : c) adj[a].push_back(b);
    }
  }
  std::vector<std::size_t> off(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> ci;
  for (int r = 0; r < n; ++r) {
    auto& row = adj[r];
    row.push_back(r);
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    ci.insert(ci.end(), row.begin(), row.end());
    off[r + 1] = ci.size();
  }
  std::vector<double> v(ci.size(), 0.0);
  return CsrMatrix(n, n, std::move(off), std::move(ci), std::move(v));
}

LinearSystem assemble_supg(const QuadMesh& mesh, const ProblemSpec& spec,
                           int matrix_quadrature) {
  LinearSystem sys{q1_pattern(mesh), std::vector<double>(mesh.num_nodes(), 0.0)};
  auto& vals = sys.matrix.values();
  const auto taus = cell_taus(mesh, spec);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const ElementSystem es =
        element_system(mesh, cell, spec, taus[cell], matrix_quadrature);
    const auto& nodes = mesh.cells[cell];
    for (int i = 0; i < 4; ++i) {
      sys.rhs[nodes[i]] += es.load[i];
      for (int j = 0; j < 4; ++j) {
        vals[static_cast<std::size_t>(sys.matrix.find(nodes[i], nodes[j]))] += es.matrix[4 * i + j];
      }
    }
  }
  return sys;
}

std::vector<double> dirichlet_values(const QuadMesh& mesh, const ProblemSpec& spec) {
  std::vector<double> values(mesh.num_nodes(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& e : mesh.boundary_edges) {
    if (spec.neumann_tags.count(e.tag)) continue;
    require(static_cast<bool>(spec.dirichlet), "problem has no Dirichlet data");
    for (int node : {e.a, e.b}) {
      const Point p = mesh.nodes[node];
      const double v = spec.dirichlet(e.tag, p.x, p.y);
      if (std::isnan(values[node])) {
        values[node] = v;
      } else if (values[node] != v) {
        fail(ErrorCode::kInvalidArgument,
             "conflicting Dirichlet values at node " + std::to_string(node));
      }
    }
  }
  return values;
}

void apply_dirichlet(LinearSystem& system, const QuadMesh& mesh,
                     const ProblemSpec& spec) {
  const auto values = dirichlet_values(mesh, spec);
  auto& a = system.matrix;
  for (int r = 0; r < a.rows(); ++r) {
    if (std::isnan(values[r])) continue;
    for (std::size_t k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      a.values()[k] = a.col_indices()[k] == r ? 1.0 : 0.0;
    }
    system.rhs[r] = values[r];
  }
}

}  // namespace supgmg
