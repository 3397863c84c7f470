#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "supgmg/krylov.hpp"
#include "supgmg/lu.hpp"
#include "supgmg/mesh.hpp"
#include "supgmg/sparse.hpp"

namespace supgmg {

/// Ordered list of DoF index sets; each block is sorted by DoF index.
struct BlockSet {
  std::vector<std::vector<int>> blocks;
  std::string source;

  std::size_t size() const { return blocks.size(); }
};

using KeyFunction = std::function<double(double x, double y)>;

/// Groups DoFs by key value. Bin k holds keys in [d_{k-1}, d_k) with
/// d_{-1} = -inf and d_m = +inf, so m divisions give m + 1 blocks. DoFs with
/// mask[i] == 0 are skipped (an empty mask keeps all). An empty bin is an
/// error.
BlockSet build_line_blocks(std::span<const Point> coords, const KeyFunction& key,
                           std::span<const double> divisions,
                           std::span<const char> mask = {}, std::string source = {});

/// `count` bins of equal width between the smallest and largest key.
BlockSet build_line_blocks(std::span<const Point> coords, const KeyFunction& key,
                           int count, std::span<const char> mask = {},
                           std::string source = {});

/// Midpoints between consecutive line positions.
std::vector<double> midpoint_divisions(std::span<const double> line_values);

/// Midpoints between consecutive distinct key values of the masked DoFs;
/// keys within rel_tol (relative to the key range) count as equal.
std::vector<double> distinct_key_divisions(std::span<const Point> coords,
                                           const KeyFunction& key,
                                           std::span<const char> mask = {},
                                           double rel_tol = 1e-9);

BlockSet concatenate(const BlockSet& a, const BlockSet& b);

/// Merges even- and odd-numbered blocks into two blocks (zebra grouping).
BlockSet zebra_groups(const BlockSet& lines);

/// One line of space-separated indices per block.
void write_blockset(const BlockSet& bs, std::ostream& out);

/// Which lines relax on a benchmark mesh.
enum class LinePlan {
  kBothDirections,  // x-lines and y-lines on a tensor mesh
  kXLines,          // lines parallel to the x-axis
  kHemker,          // radial lines for x <= 0, vertical lines for x > 0
};

/// Key for Hemker lines: atan2 in [0, 2pi) on the polar side, 10 + s on the
/// right, with s the logical column coordinate in [0, 1].
KeyFunction hemker_line_key(const HemkerGeometry& g);

/// Line blocks of a benchmark mesh over the nodes with free[i] != 0.
BlockSet mesh_line_blocks(const QuadMesh& mesh, LinePlan plan,
                          std::span<const char> free);

/// Additive block relaxation: z = sum_j E_j A_j^{-1} E_j^T r. With
/// `multiplicative` the residual is updated after every block.
class BlockRelaxer {
 public:
  BlockRelaxer(const CsrMatrix& a, BlockSet blocks, bool multiplicative = false);

  void apply(std::span<const double> r, std::span<double> z) const;
  std::vector<double> apply(std::span<const double> r) const;
  LinearOperator as_operator() const;

  const BlockSet& blocks() const { return blocks_; }
  const CsrMatrix& block_matrix(std::size_t j) const { return sub_[j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  BlockSet blocks_;
  bool multiplicative_ = false;
  CsrMatrix at_;
  std::vector<CsrMatrix> sub_;
  std::vector<LuFactorization> lu_;
};

}  // namespace supgmg
