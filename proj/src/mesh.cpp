#include "supgmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "supgmg/error.hpp"

namespace supgmg {

namespace {

// Breakpoints of consecutive uniformly subdivided pieces [knots[p], knots[p+1]].
// Knots are stored exactly; interior points are knot + (len * k) / count.
Partition1D piecewise_partition(const std::vector<double>& knots,
                                const std::vector<int>& counts) {
  std::vector<double> bp{knots.front()};
  std::vector<std::size_t> transitions;
  for (std::size_t p = 0; p < counts.size(); ++p) {
    const double a = knots[p];
    const double len = knots[p + 1] - a;
    for (int k = 1; k < counts[p]; ++k) {
      bp.push_back(a + (len * k) / counts[p]);
    }
    bp.push_back(knots[p + 1]);
    if (p + 1 < counts.size()) transitions.push_back(bp.size() - 1);
  }
  return Partition1D(std::move(bp), std::move(transitions));
}

void check_eps(double eps) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
}

}  // namespace

Partition1D::Partition1D(std::vector<double> breakpoints,
                         std::vector<std::size_t> transition_indices)
    : breakpoints_(std::move(breakpoints)),
      transitions_(std::move(transition_indices)) {
  require(breakpoints_.size() >= 2, "partition needs at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    require(breakpoints_[i] > breakpoints_[i - 1],
            "partition breakpoints must be strictly increasing");
  }
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    require(transitions_[i] > 0 && transitions_[i] + 1 < breakpoints_.size(),
            "transition index out of range");
    require(i == 0 || transitions_[i] > transitions_[i - 1],
            "transition indices must be increasing");
  }
}

Partition1D Partition1D::uniform(int intervals, double a, double b) {
  require(intervals >= 1, "uniform partition needs at least one interval");
  return piecewise_partition({a, b}, {intervals});
}

Partition1D Partition1D::coarsened(int factor) const {
  require(factor >= 1 && intervals() % factor == 0,
          "coarsening factor must divide the interval count");
  std::vector<double> bp;
  for (std::size_t i = 0; i < breakpoints_.size(); i += factor) {
    bp.push_back(breakpoints_[i]);
  }
  std::vector<std::size_t> tr;
  for (std::size_t t : transitions_) {
    require(t % factor == 0, "coarsening would drop a transition point");
    tr.push_back(t / factor);
  }
  return Partition1D(std::move(bp), std::move(tr));
}

Partition1D Partition1D::refined() const {
  std::vector<double> bp;
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    bp.push_back(breakpoints_[i]);
    bp.push_back(0.5 * (breakpoints_[i] + breakpoints_[i + 1]));
  }
  bp.push_back(breakpoints_.back());
  std::vector<std::size_t> tr;
  for (std::size_t t : transitions_) tr.push_back(2 * t);
  return Partition1D(std::move(bp), std::move(tr));
}

double exp_transition_point(int n, double eps, double sigma) {
  return std::min(0.5, sigma * eps * std::log(static_cast<double>(n)));
}

double parab_transition_point(int n, double eps, double sigma) {
  return std::min(0.25,
                  sigma * std::sqrt(eps) * std::log(static_cast<double>(n)));
}

Partition1D exp_partition(int n, double eps, double sigma) {
  require(n >= 4 && n % 2 == 0, "exp_partition needs an even N >= 4");
  check_eps(eps);
  require(sigma > 0.0, "sigma must be positive");
  const double lambda = exp_transition_point(n, eps, sigma);
  return piecewise_partition({0.0, lambda, 1.0}, {n / 2, n / 2});
}

Partition1D parab_partition(int n, double eps, double sigma) {
  require(n >= 8 && n % 4 == 0, "parab_partition needs N >= 8 divisible by 4");
  check_eps(eps);
  require(sigma > 0.0, "sigma must be positive");
  const double lambda = parab_transition_point(n, eps, sigma);
  return piecewise_partition({0.0, lambda, 1.0 - lambda, 1.0},
                             {n / 4, n / 2, n / 4});
}

const char* region_name(Region r) {
  switch (r) {
    case Region::kInterior: return "interior";
    case Region::kExpLayer: return "exp-layer";
    case Region::kParabLayerBottom: return "parab-layer-bottom";
    case Region::kParabLayerTop: return "parab-layer-top";
    case Region::kExpParabCornerBottom: return "exp-parab-corner-bottom";
    case Region::kExpParabCornerTop: return "exp-parab-corner-top";
    case Region::kHemkerRadialLayer1: return "hemker-radial-layer-1";
    case Region::kHemkerRadialLayer2: return "hemker-radial-layer-2";
    case Region::kHemkerRadialLayer3: return "hemker-radial-layer-3";
    case Region::kHemkerPolarOuter: return "hemker-polar-outer";
    case Region::kHemkerRight: return "hemker-right";
  }
  return "unknown";
}

bool in_exp_layer(Region r) {
  return r == Region::kExpLayer || r == Region::kExpParabCornerBottom ||
         r == Region::kExpParabCornerTop;
}

bool in_parab_layer(Region r) {
  return r == Region::kParabLayerBottom || r == Region::kParabLayerTop ||
         r == Region::kExpParabCornerBottom || r == Region::kExpParabCornerTop;
}

bool in_hemker_radial_layer(Region r) {
  return r == Region::kHemkerRadialLayer1 || r == Region::kHemkerRadialLayer2 ||
         r == Region::kHemkerRadialLayer3;
}

std::array<Point, 4> QuadMesh::corners(std::size_t cell) const {
  const auto& c = cells[cell];
  return {nodes[c[0]], nodes[c[1]], nodes[c[2]], nodes[c[3]]};
}

double cell_diameter(const QuadMesh& mesh, std::size_t cell) {
  const auto c = mesh.corners(cell);
  double h = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      h = std::max(h, std::hypot(c[a].x - c[b].x, c[a].y - c[b].y));
    }
  }
  return h;
}

Point map_to_physical(const std::array<Point, 4>& c, double xi, double eta) {
  const double w[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta,
                       (1 - xi) * eta};
  Point p;
  for (int a = 0; a < 4; ++a) {
    p.x += w[a] * c[a].x;
    p.y += w[a] * c[a].y;
  }
  return p;
}

namespace {

// d(x,y)/d(xi,eta) of the bilinear map, row major.
std::array<double, 4> bilinear_jacobian(const std::array<Point, 4>& c,
                                        double xi, double eta) {
  const double dxi[4] = {-(1 - eta), (1 - eta), eta, -eta};
  const double deta[4] = {-(1 - xi), -xi, xi, (1 - xi)};
  std::array<double, 4> j{};
  for (int a = 0; a < 4; ++a) {
    j[0] += dxi[a] * c[a].x;
    j[1] += deta[a] * c[a].x;
    j[2] += dxi[a] * c[a].y;
    j[3] += deta[a] * c[a].y;
  }
  return j;
}

}  // namespace

double cell_jacobian(const QuadMesh& mesh, std::size_t cell, double xi,
                     double eta) {
  const auto j = bilinear_jacobian(mesh.corners(cell), xi, eta);
  return j[0] * j[3] - j[1] * j[2];
}

std::array<double, 2> map_to_reference(const std::array<Point, 4>& c,
                                       Point p) {
  double xi = 0.5;
  double eta = 0.5;
  for (int it = 0; it < 50; ++it) {
    const Point q = map_to_physical(c, xi, eta);
    const double rx = p.x - q.x;
    const double ry = p.y - q.y;
    const auto j = bilinear_jacobian(c, xi, eta);
    const double det = j[0] * j[3] - j[1] * j[2];
    require(det != 0.0, "singular bilinear map during point location");
    const double dxi = (j[3] * rx - j[1] * ry) / det;
    const double deta = (-j[2] * rx + j[0] * ry) / det;
    xi += dxi;
    eta += deta;
    if (std::abs(dxi) + std::abs(deta) < 1e-15) break;
  }
  return {xi, eta};
}

QuadMesh tensor_product_mesh(const Partition1D& px, const Partition1D& py) {
  const int nx = px.intervals();
  const int ny = py.intervals();
  const auto& xs = px.breakpoints();
  const auto& ys = py.breakpoints();

  QuadMesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) mesh.nodes.push_back({xs[i], ys[j]});
  }

  MeshBlock block;
  block.cells_i = nx;
  block.cells_j = ny;
  block.first_cell = 0;
  block.node_ids.resize(mesh.nodes.size());
  for (std::size_t k = 0; k < block.node_ids.size(); ++k) {
    block.node_ids[k] = static_cast<int>(k);
  }

  // Exponential layer: x below the single x-transition of a two-piece
  // partition. Parabolic layers: y outside the two y-transitions.
  const auto& tx = px.transition_indices();
  const auto& ty = py.transition_indices();
  const int exp_end = tx.size() == 1 ? static_cast<int>(tx[0]) : 0;
  const int parab_lo = ty.size() == 2 ? static_cast<int>(ty[0]) : 0;
  const int parab_hi = ty.size() == 2 ? static_cast<int>(ty[1]) : ny;

  mesh.cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.cells.push_back({block.node(i, j), block.node(i + 1, j),
                            block.node(i + 1, j + 1), block.node(i, j + 1)});
      const bool exp = i < exp_end;
      const bool bottom = j < parab_lo;
      const bool top = j >= parab_hi;
      Region r = Region::kInterior;
      if (exp && bottom) r = Region::kExpParabCornerBottom;
      else if (exp && top) r = Region::kExpParabCornerTop;
      else if (exp) r = Region::kExpLayer;
      else if (bottom) r = Region::kParabLayerBottom;
      else if (top) r = Region::kParabLayerTop;
      mesh.regions.push_back(r);
    }
  }

  const int wall = boundary_tag::kSquareWall;
  for (int i = 0; i < nx; ++i) {
    mesh.boundary_edges.push_back({block.node(i, 0), block.node(i + 1, 0), wall});
    mesh.boundary_edges.push_back(
        {block.node(i + 1, ny), block.node(i, ny), wall});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_edges.push_back(
        {block.node(nx, j), block.node(nx, j + 1), wall});
    mesh.boundary_edges.push_back({block.node(0, j + 1), block.node(0, j), wall});
  }

  mesh.blocks.push_back(std::move(block));
  mesh.axes = TensorAxes{px, py};
  return mesh;
}

ParentMap build_parent_map(const QuadMesh& coarse, const QuadMesh& fine) {
  require(coarse.blocks.size() == fine.blocks.size() && !fine.blocks.empty(),
          "parent map needs matching logical block structure");
  ParentMap map(fine.num_nodes(), ParentEntry{-1, 0.0, 0.0});
  for (std::size_t b = 0; b < fine.blocks.size(); ++b) {
    const MeshBlock& fb = fine.blocks[b];
    const MeshBlock& cb = coarse.blocks[b];
    require(fb.cells_i == 2 * cb.cells_i && fb.cells_j == 2 * cb.cells_j,
            "fine block must have twice the coarse resolution");
    for (int j = 0; j <= fb.cells_j; ++j) {
      for (int i = 0; i <= fb.cells_i; ++i) {
        const int node = fb.node(i, j);
        if (map[node].coarse_cell >= 0) continue;
        const int ci = std::min(i / 2, cb.cells_i - 1);
        const int cj = std::min(j / 2, cb.cells_j - 1);
        const int cell = cb.cell(ci, cj);
        const auto ref = map_to_reference(coarse.corners(cell), fine.nodes[node]);
        map[node] = {cell, ref[0], ref[1]};
      }
    }
  }
  for (const auto& e : map) {
    require(e.coarse_cell >= 0, "fine node without coarse parent");
  }
  return map;
}

std::vector<int> coincident_fine_nodes(const QuadMesh& coarse,
                                       const QuadMesh& fine) {
  require(coarse.blocks.size() == fine.blocks.size(),
          "meshes need matching logical block structure");
  std::vector<int> out(coarse.num_nodes(), -1);
  for (std::size_t b = 0; b < coarse.blocks.size(); ++b) {
    const MeshBlock& cb = coarse.blocks[b];
    const MeshBlock& fb = fine.blocks[b];
    for (int j = 0; j <= cb.cells_j; ++j) {
      for (int i = 0; i <= cb.cells_i; ++i) {
        out[cb.node(i, j)] = fb.node(2 * i, 2 * j);
      }
    }
  }
  return out;
}

std::vector<int> parent_cells(const QuadMesh& coarse, const QuadMesh& fine) {
  std::vector<int> out(fine.num_cells(), -1);
  for (std::size_t b = 0; b < fine.blocks.size(); ++b) {
    const MeshBlock& cb = coarse.blocks[b];
    const MeshBlock& fb = fine.blocks[b];
    for (int j = 0; j < fb.cells_j; ++j) {
      for (int i = 0; i < fb.cells_i; ++i) {
        out[fb.cell(i, j)] = cb.cell(i / 2, j / 2);
      }
    }
  }
  return out;
}

MeshHierarchy square_hierarchy(int n_fine, double eps, SquareLayout layout,
                               int levels, double sigma) {
  require(levels >= 1, "hierarchy needs at least one level");
  require(levels <= 30 && n_fine % (1 << (levels - 1)) == 0,
          "square hierarchy needs N_fine divisible by 2^(levels-1)");
  const int n_coarse = n_fine >> (levels - 1);
  require(n_coarse >= 8 && n_coarse % 4 == 0,
          "square hierarchy needs a coarsest N >= 8 divisible by 4");
  const Partition1D px = layout == SquareLayout::kExpAndParab
                             ? exp_partition(n_fine, eps, sigma)
                             : Partition1D::uniform(n_fine);
  const Partition1D py = parab_partition(n_fine, eps, sigma);

  MeshHierarchy h;
  for (int l = 0; l < levels; ++l) {
    const int factor = 1 << l;
    h.levels.push_back(
        tensor_product_mesh(px.coarsened(factor), py.coarsened(factor)));
  }
  for (int l = 0; l + 1 < levels; ++l) {
    h.parents.push_back(build_parent_map(h.levels[l + 1], h.levels[l]));
  }
  return h;
}

HemkerGeometry hemker_transition_points(int n, double eps) {
  check_eps(eps);
  require(n >= 8 && n % 4 == 0, "Hemker mesh needs N >= 8 divisible by 4");
  const double ln_n = std::log(static_cast<double>(n));
  HemkerGeometry g;
  g.n = n;
  g.sigma1 = std::min(0.25, eps * ln_n);
  g.sigma2 = std::min(0.3, std::pow(eps, 2.0 / 3.0) * ln_n);
  g.sigma3 = std::min(0.35, std::sqrt(eps) * ln_n);
  return g;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct HemkerBand {
  double phi0, phi1;  // angles on the unit circle
  double y0, y1;      // heights on the outflow boundary x = 4
};

std::array<HemkerBand, 3> hemker_bands(const HemkerGeometry& g) {
  const double a = 1.0 - g.sigma3;
  const double phi = std::asin(a);
  return {HemkerBand{-kPi / 2, -phi, -1.0, -a},
          HemkerBand{-phi, phi, -a, a}, HemkerBand{phi, kPi / 2, a, 1.0}};
}

// Point on the unit circle at angle phi; band edges are snapped so that the
// interface rows are exactly horizontal.
Point circle_point(double phi, const HemkerGeometry& g) {
  const double a = 1.0 - g.sigma3;
  if (phi == -kPi / 2) return {0.0, -1.0};
  if (phi == kPi / 2) return {0.0, 1.0};
  if (phi == std::asin(a)) return {std::sqrt(1.0 - a * a), a};
  if (phi == -std::asin(a)) return {std::sqrt(1.0 - a * a), -a};
  return {std::cos(phi), std::sin(phi)};
}

Partition1D hemker_radial_partition(int n, const HemkerGeometry& g) {
  return piecewise_partition(
      {1.0, 1.0 + g.sigma1, 1.0 + g.sigma2, 1.0 + g.sigma3, 4.0},
      {n / 4, n / 4, n / 4, n / 2});
}

}  // namespace

QuadMesh hemker_mesh(int n, const HemkerGeometry& transitions) {
  require(n >= 8 && n % 4 == 0, "Hemker mesh needs N >= 8 divisible by 4");
  require(transitions.sigma1 > 0.0 && transitions.sigma1 < transitions.sigma2 &&
              transitions.sigma2 < transitions.sigma3 &&
              transitions.sigma3 < 1.0,
          "Hemker transition points must satisfy 0 < s1 < s2 < s3 < 1");
  const Partition1D radial = hemker_radial_partition(n, transitions);
  const auto& r = radial.breakpoints();
  const int m_cells = 5 * n / 4;  // radial intervals
  const int q_cells = n / 2;      // horizontal intervals, right half
  const int b_cells = n / 2;      // intervals per band of |y| <= 1
  const int j_cells = 2 * m_cells + 3 * b_cells;

  QuadMesh mesh;
  HemkerGeometry geom = transitions;
  geom.n = n;
  mesh.hemker = geom;

  // Polar block: i = radial index, j = angular index, theta from pi/2 to 3pi/2.
  MeshBlock polar;
  polar.cells_i = m_cells;
  polar.cells_j = n;
  polar.first_cell = 0;
  for (int k = 0; k <= n; ++k) {
    const double theta = kPi / 2 + (k * kPi) / n;
    double c = std::cos(theta);
    double s = std::sin(theta);
    if (k == 0) { c = 0.0; s = 1.0; }
    if (k == n) { c = 0.0; s = -1.0; }
    if (2 * k == n) { c = -1.0; s = 0.0; }
    for (int m = 0; m <= m_cells; ++m) {
      polar.node_ids.push_back(static_cast<int>(mesh.nodes.size()));
      mesh.nodes.push_back({r[m] * c, r[m] * s});
    }
  }

  // Right block: i along x, j upward from y = -4 to y = 4. The lower and upper
  // channel rows continue the radial distribution; rows in |y| <= 1 run from
  // the circle to x = 4.
  const auto bands = hemker_bands(geom);
  auto right_point = [&](int i, int j) -> Point {
    const double s = static_cast<double>(i) / q_cells;
    if (j <= m_cells) return {4.0 * s, -r[m_cells - j]};
    if (j >= m_cells + 3 * b_cells) return {4.0 * s, r[j - m_cells - 3 * b_cells]};
    const int jj = j - m_cells;
    const int band = std::min(jj / b_cells, 2);
    const int t_idx = jj - band * b_cells;
    const HemkerBand& bd = bands[band];
    const double phi = t_idx == 0 ? bd.phi0
                                  : (t_idx == b_cells
                                         ? bd.phi1
                                         : bd.phi0 + ((bd.phi1 - bd.phi0) * t_idx) / b_cells);
    const double yr = t_idx == 0 ? bd.y0
                                 : bd.y0 + ((bd.y1 - bd.y0) * t_idx) / b_cells;
    const Point left = circle_point(phi, geom);
    if (i == 0) return left;
    if (i == q_cells) return {4.0, yr};
    return {left.x + s * (4.0 - left.x), left.y + s * (yr - left.y)};
  };

  MeshBlock right;
  right.cells_i = q_cells;
  right.cells_j = j_cells;
  right.node_ids.assign(static_cast<std::size_t>(q_cells + 1) * (j_cells + 1), -1);
  auto right_slot = [&](int i, int j) -> int& {
    return right.node_ids[i + j * (q_cells + 1)];
  };
  // Column i = 0 shares its channel rows (and the circle end points) with the
  // two radial edges of the polar block.
  for (int j = 0; j <= m_cells; ++j) right_slot(0, j) = polar.node(m_cells - j, n);
  for (int m = 0; m <= m_cells; ++m) {
    right_slot(0, m_cells + 3 * b_cells + m) = polar.node(m, 0);
  }
  for (int i = 0; i <= q_cells; ++i) {
    for (int j = 0; j <= j_cells; ++j) {
      if (right_slot(i, j) >= 0) continue;
      right_slot(i, j) = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back(right_point(i, j));
    }
  }

  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < m_cells; ++m) {
      mesh.cells.push_back({polar.node(m, k), polar.node(m + 1, k),
                            polar.node(m + 1, k + 1), polar.node(m, k + 1)});
      Region reg = Region::kHemkerPolarOuter;
      if (m < n / 4) reg = Region::kHemkerRadialLayer1;
      else if (m < n / 2) reg = Region::kHemkerRadialLayer2;
      else if (m < 3 * n / 4) reg = Region::kHemkerRadialLayer3;
      mesh.regions.push_back(reg);
    }
  }
  right.first_cell = static_cast<int>(mesh.cells.size());
  for (int j = 0; j < j_cells; ++j) {
    for (int i = 0; i < q_cells; ++i) {
      mesh.cells.push_back({right.node(i, j), right.node(i + 1, j),
                            right.node(i + 1, j + 1), right.node(i, j + 1)});
      mesh.regions.push_back(Region::kHemkerRight);
    }
  }

  using namespace boundary_tag;
  for (int k = 0; k < n; ++k) {
    mesh.boundary_edges.push_back(
        {polar.node(0, k + 1), polar.node(0, k), kHemkerCircle});
    mesh.boundary_edges.push_back(
        {polar.node(m_cells, k), polar.node(m_cells, k + 1), kHemkerOuter});
  }
  for (int j = m_cells; j < m_cells + 3 * b_cells; ++j) {
    mesh.boundary_edges.push_back(
        {right.node(0, j + 1), right.node(0, j), kHemkerCircle});
  }
  for (int i = 0; i < q_cells; ++i) {
    mesh.boundary_edges.push_back(
        {right.node(i, 0), right.node(i + 1, 0), kHemkerOuter});
    mesh.boundary_edges.push_back(
        {right.node(i + 1, j_cells), right.node(i, j_cells), kHemkerOuter});
  }
  for (int j = 0; j < j_cells; ++j) {
    mesh.boundary_edges.push_back(
        {right.node(q_cells, j), right.node(q_cells, j + 1), kHemkerOutflow});
  }

  mesh.blocks.push_back(std::move(polar));
  mesh.blocks.push_back(std::move(right));
  return mesh;
}

MeshHierarchy hemker_hierarchy(int n_fine, double eps, int levels,
                               std::optional<int> n_for_transitions) {
  require(levels >= 1, "hierarchy needs at least one level");
  require(n_fine % 4 == 0, "Hemker N must be divisible by 4");
  require(levels <= 30 && n_fine % (1 << (levels - 1)) == 0,
          "Hemker N must be divisible by 2^(levels-1)");
  const int n_coarse = n_fine >> (levels - 1);
  require(n_coarse >= 8 && n_coarse % 4 == 0,
          "Hemker coarsest mesh needs N >= 8 divisible by 4");
  const HemkerGeometry g =
      hemker_transition_points(n_for_transitions.value_or(n_fine), eps);

  MeshHierarchy h;
  for (int l = 0; l < levels; ++l) h.levels.push_back(hemker_mesh(n_fine >> l, g));
  for (int l = 0; l + 1 < levels; ++l) {
    h.parents.push_back(build_parent_map(h.levels[l + 1], h.levels[l]));
  }
  return h;
}

}  // namespace supgmg
