#include "supgmg/block_relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "supgmg/error.hpp"

namespace supgmg {

namespace {

bool keep(std::span<const char> mask, std::size_t i) {
  return mask.empty() || mask[i] != 0;
}

void check_mask(std::span<const Point> coords, std::span<const char> mask) {
  require(mask.empty() || mask.size() == coords.size(),
          "block mask size does not match the number of DoFs");
}

}  // namespace

BlockSet build_line_blocks(std::span<const Point> coords, const KeyFunction& key,
                           std::span<const double> divisions,
                           std::span<const char> mask, std::string source) {
  check_mask(coords, mask);
  for (std::size_t k = 1; k < divisions.size(); ++k) {
    require(divisions[k - 1] < divisions[k], "divisions must be strictly increasing");
  }
  BlockSet bs;
  bs.source = std::move(source);
  bs.blocks.resize(divisions.size() + 1);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!keep(mask, i)) continue;
    const double k = key(coords[i].x, coords[i].y);
    require(std::isfinite(k), "key function returned a non-finite value");
    const auto bin = std::upper_bound(divisions.begin(), divisions.end(), k) -
                     divisions.begin();
    bs.blocks[static_cast<std::size_t>(bin)].push_back(static_cast<int>(i));
  }
  for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
    if (bs.blocks[b].empty()) {
      fail(ErrorCode::kInvalidArgument,
           "division bin " + std::to_string(b) + " received no DoFs");
    }
  }
  return bs;
}

BlockSet build_line_blocks(std::span<const Point> coords, const KeyFunction& key,
                           int count, std::span<const char> mask,
                           std::string source) {
  check_mask(coords, mask);
  require(count >= 1, "need at least one division bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!keep(mask, i)) continue;
    const double k = key(coords[i].x, coords[i].y);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  require(lo <= hi, "no DoFs to group");
  std::vector<double> div;
  for (int k = 1; k < count; ++k) div.push_back(lo + ((hi - lo) * k) / count);
  return build_line_blocks(coords, key, div, mask, std::move(source));
}

std::vector<double> midpoint_divisions(std::span<const double> line_values) {
  std::vector<double> div;
  for (std::size_t k = 1; k < line_values.size(); ++k) {
    require(line_values[k - 1] < line_values[k], "line positions must increase");
    div.push_back(0.5 * (line_values[k - 1] + line_values[k]));
  }
  return div;
}

std::vector<double> distinct_key_divisions(std::span<const Point> coords,
                                           const KeyFunction& key,
                                           std::span<const char> mask,
                                           double rel_tol) {
  check_mask(coords, mask);
  std::vector<double> keys;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (keep(mask, i)) keys.push_back(key(coords[i].x, coords[i].y));
  }
  std::vector<double> div;
  if (keys.empty()) return div;
  std::sort(keys.begin(), keys.end());
  const double tol = rel_tol * std::max(keys.back() - keys.front(), 1.0);
  for (std::size_t k = 1; k < keys.size(); ++k) {
    if (keys[k] - keys[k - 1] > tol) div.push_back(0.5 * (keys[k - 1] + keys[k]));
  }
  return div;
}

BlockSet concatenate(const BlockSet& a, const BlockSet& b) {
  BlockSet r = a;
  r.blocks.insert(r.blocks.end(), b.blocks.begin(), b.blocks.end());
  r.source = a.source + " + " + b.source;
  return r;
}

BlockSet zebra_groups(const BlockSet& lines) {
  BlockSet r;
  r.source = "zebra(" + lines.source + ")";
  r.blocks.resize(std::min<std::size_t>(2, lines.size()));
  for (std::size_t j = 0; j < lines.size(); ++j) {
    auto& dst = r.blocks[j % 2];
    dst.insert(dst.end(), lines.blocks[j].begin(), lines.blocks[j].end());
  }
  for (auto& b : r.blocks) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  return r;
}

void write_blockset(const BlockSet& bs, std::ostream& out) {
  for (const auto& b : bs.blocks) {
    for (std::size_t k = 0; k < b.size(); ++k) out << (k ? " " : "") << b[k];
    out << '\n';
  }
}

KeyFunction hemker_line_key(const HemkerGeometry& g) {
  constexpr double kPi = std::numbers::pi;
  const double a = 1.0 - g.sigma3;
  const double phi_a = std::asin(a);
  return [=](double x, double y) {
    if (x <= 0.0) {
      const double t = std::atan2(y, x);
      return t < 0.0 ? t + 2.0 * kPi : t;
    }
    if (y <= -1.0 || y >= 1.0) return 10.0 + x / 4.0;
    // Locate the mapped row through (x, y), then project onto it.
    double phi0 = -phi_a, phi1 = phi_a, y0 = -a, y1 = a;
    if (y < -a) {
      phi0 = -kPi / 2;
      phi1 = -phi_a;
      y0 = -1.0;
      y1 = -a;
    } else if (y > a) {
      phi0 = phi_a;
      phi1 = kPi / 2;
      y0 = a;
      y1 = 1.0;
    }
    auto row = [&](double t, Point& l, Point& r) {
      const double phi = phi0 + t * (phi1 - phi0);
      l = {std::cos(phi), std::sin(phi)};
      r = {4.0, y0 + t * (y1 - y0)};
    };
    auto side = [&](double t) {
      Point l, r;
      row(t, l, r);
      return (r.x - l.x) * (y - l.y) - (r.y - l.y) * (x - l.x);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (side(mid) > 0.0) lo = mid;
      else hi = mid;
    }
    Point l, r;
    row(0.5 * (lo + hi), l, r);
    const double dx = r.x - l.x, dy = r.y - l.y;
    const double s = ((x - l.x) * dx + (y - l.y) * dy) / (dx * dx + dy * dy);
    return 10.0 + s;
  };
}

namespace {

// Breakpoints of `p` that carry at least one free node (coordinate picked by
// `coord`), in increasing order.
std::vector<double> occupied_lines(const QuadMesh& mesh, const Partition1D& p,
                                   std::span<const char> free,
                                   double Point::*coord) {
  const auto& bp = p.breakpoints();
  std::vector<char> used(bp.size(), 0);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (!keep(free, i)) continue;
    const double v = mesh.nodes[i].*coord;
    const auto it = std::lower_bound(bp.begin(), bp.end(), v);
    require(it != bp.end() && *it == v, "tensor mesh node off its partition");
    used[static_cast<std::size_t>(it - bp.begin())] = 1;
  }
  std::vector<double> lines;
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (used[k]) lines.push_back(bp[k]);
  }
  return lines;
}

}  // namespace

BlockSet mesh_line_blocks(const QuadMesh& mesh, LinePlan plan,
                          std::span<const char> free) {
  require(free.empty() || free.size() == mesh.num_nodes(),
          "free mask size does not match the mesh");
  if (plan == LinePlan::kHemker) {
    require(mesh.hemker.has_value(), "Hemker line plan needs a Hemker mesh");
    const KeyFunction key = hemker_line_key(*mesh.hemker);
    const auto div = distinct_key_divisions(mesh.nodes, key, free);
    return build_line_blocks(mesh.nodes, key, div, free,
                             "radial lines (x <= 0), vertical lines (x > 0)");
  }
  require(mesh.axes.has_value(), "line plan needs a tensor-product mesh");
  const KeyFunction key_y = [](double, double y) { return y; };
  const auto div_y = midpoint_divisions(occupied_lines(mesh, mesh.axes->y, free, &Point::y));
  BlockSet xlines = build_line_blocks(mesh.nodes, key_y, div_y, free, "key=y");
  if (plan == LinePlan::kXLines) return xlines;
  const KeyFunction key_x = [](double x, double) { return x; };
  const auto div_x = midpoint_divisions(occupied_lines(mesh, mesh.axes->x, free, &Point::x));
  return concatenate(xlines, build_line_blocks(mesh.nodes, key_x, div_x, free, "key=x"));
}

BlockRelaxer::BlockRelaxer(const CsrMatrix& a, BlockSet blocks, bool multiplicative)
    : n_(static_cast<std::size_t>(a.rows())),
      blocks_(std::move(blocks)),
      multiplicative_(multiplicative) {
  require(a.rows() == a.cols(), "block relaxation needs a square matrix");
  if (multiplicative_) at_ = a.transposed();
  sub_.reserve(blocks_.size());
  lu_.reserve(blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& b = blocks_.blocks[j];
    require(!b.empty(), "block " + std::to_string(j) + " is empty");
    for (int i : b) {
      require(i >= 0 && i < a.rows(),
              "block " + std::to_string(j) + " has an index out of range");
    }
    sub_.push_back(a.submatrix(b));
    try {
      lu_.push_back(LuFactorization::banded(sub_.back()));
    } catch (const Error& e) {
      fail(e.code(), "block " + std::to_string(j) + ": " + e.what());
    }
  }
}

void BlockRelaxer::apply(std::span<const double> r, std::span<double> z) const {
  require(r.size() == n_ && z.size() == n_, "block relaxation dimension mismatch");
  std::fill(z.begin(), z.end(), 0.0);
  std::vector<double> rr;
  if (multiplicative_) rr.assign(r.begin(), r.end());
  const std::span<const double> res = multiplicative_ ? std::span<const double>(rr) : r;
  std::vector<double> rhs, local;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& b = blocks_.blocks[j];
    rhs.resize(b.size());
    local.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) rhs[k] = res[b[k]];
    lu_[j].solve(rhs, local);
    for (std::size_t k = 0; k < b.size(); ++k) z[b[k]] += local[k];
    if (!multiplicative_) continue;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const int c = b[k];
      for (std::size_t p = at_.row_offsets()[c]; p < at_.row_offsets()[c + 1]; ++p) {
        rr[at_.col_indices()[p]] -= at_.values()[p] * local[k];
      }
    }
  }
}

std::vector<double> BlockRelaxer::apply(std::span<const double> r) const {
  std::vector<double> z(r.size());
  apply(r, z);
  return z;
}

LinearOperator BlockRelaxer::as_operator() const {
  return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
}

}  // namespace supgmg
