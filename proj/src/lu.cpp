#include "supgmg/lu.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "supgmg/error.hpp"

namespace supgmg {

namespace {

std::pair<int, int> bandwidths(const CsrMatrix& a) {
  int kl = 0, ku = 0;
  for (int r = 0; r < a.rows(); ++r) {
    for (std::size_t k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      const int c = a.col_indices()[k];
      kl = std::max(kl, r - c);
      ku = std::max(ku, c - r);
    }
  }
  return {kl, ku};
}

}  // namespace

BandLu::BandLu(const CsrMatrix& a) : n_(a.rows()) {
  require(a.rows() == a.cols(), "LU needs a square matrix");
  std::tie(kl_, ku_) = bandwidths(a);
  ldab_ = 2 * kl_ + ku_ + 1;
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
  piv_.resize(n_);

  double scale = 0.0;
  for (int r = 0; r < n_; ++r) {
    for (std::size_t k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      band(r, a.col_indices()[k]) = a.values()[k];
      scale = std::max(scale, std::abs(a.values()[k]));
    }
  }
  const double tiny = std::max(n_, 1) * std::numeric_limits<double>::epsilon() * scale;

  int ju = 0;
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);
    int jp = 0;
    double best = std::abs(band(j, j));
    for (int p = 1; p <= km; ++p) {
      const double v = std::abs(band(j + p, j));
      if (v > best) {
        best = v;
        jp = p;
      }
    }
    piv_[j] = j + jp;
    if (!(best > tiny)) {
      fail(ErrorCode::kSingularMatrix,
           "zero pivot in LU factorization at column " + std::to_string(j));
    }
    ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
    if (jp != 0) {
      for (int c = j; c <= ju; ++c) std::swap(band(j, c), band(j + jp, c));
    }
    if (km > 0) {
      const double inv = 1.0 / band(j, j);
      for (int p = 1; p <= km; ++p) band(j + p, j) *= inv;
      for (int c = j + 1; c <= ju; ++c) {
        const double u = band(j, c);
        if (u == 0.0) continue;
        for (int p = 1; p <= km; ++p) band(j + p, c) -= band(j + p, j) * u;
      }
    }
  }
}

void BandLu::solve_in_place(std::span<double> x) const {
  require(x.size() == static_cast<std::size_t>(n_), "LU solve dimension mismatch");
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
    const int km = std::min(kl_, n_ - 1 - j);
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int p = 1; p <= km; ++p) x[j + p] -= band(j + p, j) * xj;
  }
  const int kw = kl_ + ku_;
  for (int j = n_ - 1; j >= 0; --j) {
    x[j] /= band(j, j);
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int i = std::max(0, j - kw); i < j; ++i) x[i] -= band(i, j) * xj;
  }
}

struct LuFactorization::SparseImpl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

LuFactorization::LuFactorization() = default;
LuFactorization::~LuFactorization() = default;
LuFactorization::LuFactorization(LuFactorization&&) noexcept = default;
LuFactorization& LuFactorization::operator=(LuFactorization&&) noexcept = default;

LuFactorization LuFactorization::dense(const CsrMatrix& a) {
  require(a.rows() == a.cols(), "LU needs a square matrix");
  // Store every entry explicitly so the band covers the whole matrix.
  const int n = a.rows();
  std::vector<double> d = a.to_dense();
  std::vector<std::size_t> off(static_cast<std::size_t>(n) + 1);
  std::vector<int> ci(static_cast<std::size_t>(n) * n);
  for (int r = 0; r <= n; ++r) off[r] = static_cast<std::size_t>(r) * n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) ci[static_cast<std::size_t>(r) * n + c] = c;
  }
  LuFactorization f;
  f.variant_ = Variant::kDense;
  f.n_ = n;
  f.band_ = BandLu(CsrMatrix(n, n, std::move(off), std::move(ci), std::move(d)));
  return f;
}

LuFactorization LuFactorization::banded(const CsrMatrix& a) {
  LuFactorization f;
  f.variant_ = Variant::kBanded;
  f.n_ = a.rows();
  f.band_ = BandLu(a);
  return f;
}

LuFactorization LuFactorization::sparse(const CsrMatrix& a) {
  require(a.rows() == a.cols(), "LU needs a square matrix");
  const int n = a.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  for (int r = 0; r < n; ++r) {
    for (std::size_t k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      t.emplace_back(r, a.col_indices()[k], a.values()[k]);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();

  LuFactorization f;
  f.variant_ = Variant::kSparse;
  f.n_ = n;
  f.sparse_ = std::make_unique<SparseImpl>();
  f.sparse_->lu.analyzePattern(m);
  f.sparse_->lu.factorize(m);
  if (f.sparse_->lu.info() != Eigen::Success) {
    fail(ErrorCode::kSingularMatrix,
         "sparse LU failed: " + f.sparse_->lu.lastErrorMessage());
  }
  return f;
}

void LuFactorization::solve(std::span<const double> b, std::span<double> x) const {
  require(b.size() == static_cast<std::size_t>(n_) && x.size() == b.size(),
          "LU solve dimension mismatch");
  if (variant_ == Variant::kSparse) {
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n_);
    Eigen::Map<Eigen::VectorXd> xv(x.data(), n_);
    xv = sparse_->lu.solve(bv);
    return;
  }
  std::copy(b.begin(), b.end(), x.begin());
  band_.solve_in_place(x);
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

}  // namespace supgmg
