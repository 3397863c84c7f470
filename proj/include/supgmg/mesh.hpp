#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace supgmg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Default Shishkin mesh parameter for bilinear elements with reaction bounded
/// below by one.
inline constexpr double kShishkinSigma = 2.5;

/// Nonuniform 1D mesh made of uniformly subdivided pieces. Transition indices
/// point into the breakpoint array and mark where the spacing changes.
class Partition1D {
 public:
  Partition1D(std::vector<double> breakpoints,
              std::vector<std::size_t> transition_indices);

  static Partition1D uniform(int intervals, double a = 0.0, double b = 1.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::size_t>& transition_indices() const {
    return transitions_;
  }
  int intervals() const { return static_cast<int>(breakpoints_.size()) - 1; }
  double front() const { return breakpoints_.front(); }
  double back() const { return breakpoints_.back(); }

  /// Keeps every `factor`-th breakpoint. Transition indices must be divisible
  /// by the factor so that every transition point survives.
  Partition1D coarsened(int factor) const;

  /// Bisects every interval.
  Partition1D refined() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<std::size_t> transitions_;
};

/// lambda1 = min(1/2, sigma eps ln N).
double exp_transition_point(int n, double eps, double sigma = kShishkinSigma);
/// lambda2 = min(1/4, sigma sqrt(eps) ln N).
double parab_transition_point(int n, double eps, double sigma = kShishkinSigma);

/// Two-piece Shishkin mesh on [0,1] resolving an exponential layer at 0.
Partition1D exp_partition(int n, double eps, double sigma = kShishkinSigma);
/// Three-piece Shishkin mesh on [0,1] resolving parabolic layers at 0 and 1.
Partition1D parab_partition(int n, double eps, double sigma = kShishkinSigma);

// Cell regions. The first six are the subregions of the unit square cut out by
// the transition points; the rest belong to the Hemker mesh.
enum class Region : std::uint8_t {
  kInterior,
  kExpLayer,
  kParabLayerBottom,
  kParabLayerTop,
  kExpParabCornerBottom,
  kExpParabCornerTop,
  kHemkerRadialLayer1,
  kHemkerRadialLayer2,
  kHemkerRadialLayer3,
  kHemkerPolarOuter,
  kHemkerRight,
};

const char* region_name(Region r);
bool in_exp_layer(Region r);
bool in_parab_layer(Region r);
bool in_hemker_radial_layer(Region r);

/// Boundary tag ids; the problem definition decides which are Dirichlet.
namespace boundary_tag {
inline constexpr int kSquareWall = 1;
inline constexpr int kHemkerCircle = 2;
inline constexpr int kHemkerOuter = 3;
inline constexpr int kHemkerOutflow = 4;
}  // namespace boundary_tag

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int tag = 0;
};

/// Logically structured patch of a mesh. Node (i, j) lives at
/// node_ids[i + j * (cells_i + 1)] and cell (i, j) at first_cell + i + j * cells_i.
struct MeshBlock {
  int cells_i = 0;
  int cells_j = 0;
  int first_cell = 0;
  std::vector<int> node_ids;

  int node(int i, int j) const { return node_ids[i + j * (cells_i + 1)]; }
  int cell(int i, int j) const { return first_cell + i + j * cells_i; }
};

struct TensorAxes {
  Partition1D x;
  Partition1D y;
};

/// Transition data of the Hemker mesh; also the parameterization needed to
/// recover logical line coordinates from node positions.
struct HemkerGeometry {
  int n = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
};

/// Quadrilateral mesh. Cells list their corners counterclockwise.
struct QuadMesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 4>> cells;
  std::vector<Region> regions;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<MeshBlock> blocks;
  std::optional<TensorAxes> axes;
  std::optional<HemkerGeometry> hemker;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_cells() const { return cells.size(); }
  std::array<Point, 4> corners(std::size_t cell) const;
};

/// Largest distance between two corners of a cell.
double cell_diameter(const QuadMesh& mesh, std::size_t cell);

/// Jacobian determinant of the bilinear map of `cell` at reference (xi, eta).
double cell_jacobian(const QuadMesh& mesh, std::size_t cell, double xi,
                     double eta);

/// Bilinear map of a cell evaluated at reference coordinates.
Point map_to_physical(const std::array<Point, 4>& c, double xi, double eta);

/// Newton inversion of the bilinear map. Returns reference coordinates that
/// may lie outside [0,1]^2 for points outside the cell.
std::array<double, 2> map_to_reference(const std::array<Point, 4>& c, Point p);

/// Tensor-product mesh, lexicographic numbering (x fastest), all four sides
/// tagged as Dirichlet walls.
QuadMesh tensor_product_mesh(const Partition1D& px, const Partition1D& py);

/// Fine node -> coarse cell plus reference coordinates in that cell.
struct ParentEntry {
  int coarse_cell = 0;
  double xi = 0.0;
  double eta = 0.0;
};
using ParentMap = std::vector<ParentEntry>;

/// levels[0] is the finest mesh (level 1), levels.back() the coarsest.
/// parents[l] maps nodes of levels[l] into cells of levels[l + 1].
struct MeshHierarchy {
  std::vector<QuadMesh> levels;
  std::vector<ParentMap> parents;

  std::size_t num_levels() const { return levels.size(); }
};

enum class SquareLayout { kExpAndParab, kParabOnly };

/// Unit-square Shishkin hierarchy. Transition points are those of the finest
/// mesh on every level; coarse partitions are subsampled from the fine ones.
MeshHierarchy square_hierarchy(int n_fine, double eps, SquareLayout layout,
                               int levels, double sigma = kShishkinSigma);

/// Transition points of the Hemker mesh for mesh parameter n.
HemkerGeometry hemker_transition_points(int n, double eps);

/// Single Hemker mesh with resolution n and the given transition points.
QuadMesh hemker_mesh(int n, const HemkerGeometry& transitions);

/// Hemker hierarchy. `n_for_transitions` overrides the N used in the
/// transition point formulas (defaults to n_fine).
MeshHierarchy hemker_hierarchy(int n_fine, double eps, int levels,
                               std::optional<int> n_for_transitions = {});

/// Parent map of the fine mesh in the coarse mesh, using the shared logical
/// block structure (fine block index i maps to coarse cell i/2).
ParentMap build_parent_map(const QuadMesh& coarse, const QuadMesh& fine);

/// For every coarse node, the coincident fine node (logical index doubling).
std::vector<int> coincident_fine_nodes(const QuadMesh& coarse,
                                       const QuadMesh& fine);

/// For every fine cell, the coarse cell that contains it logically.
std::vector<int> parent_cells(const QuadMesh& coarse, const QuadMesh& fine);

}  // namespace supgmg
