#pragma once

#include <memory>
#include <span>
#include <vector>

#include "supgmg/sparse.hpp"

namespace supgmg {

/// Band LU with partial pivoting (row interchanges), LAPACK gbtrf layout.
/// A dense matrix is the special case kl = ku = n - 1.
class BandLu {
 public:
  BandLu() = default;
  /// Factors the square matrix `a`; throws kSingularMatrix on a zero pivot.
  explicit BandLu(const CsrMatrix& a);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  /// Overwrites `x` (holding b on entry) with the solution.
  void solve_in_place(std::span<double> x) const;

 private:
  double& band(int i, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j]; }
  double band(int i, int j) const { return ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_ + i - j]; }

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  int ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> piv_;
};

/// LU factorization of a square sparse matrix behind one solve interface.
class LuFactorization {
 public:
  enum class Variant { kDense, kBanded, kSparse };

  static LuFactorization dense(const CsrMatrix& a);
  static LuFactorization banded(const CsrMatrix& a);
  /// Sparse LU with partial pivoting and a fill-reducing column ordering.
  static LuFactorization sparse(const CsrMatrix& a);

  LuFactorization();
  ~LuFactorization();
  LuFactorization(LuFactorization&&) noexcept;
  LuFactorization& operator=(LuFactorization&&) noexcept;

  Variant variant() const { return variant_; }
  int size() const { return n_; }

  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct SparseImpl;

  Variant variant_ = Variant::kDense;
  int n_ = 0;
  BandLu band_;
  std::unique_ptr<SparseImpl> sparse_;
};

}  // namespace supgmg
