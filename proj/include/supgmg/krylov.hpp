#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "supgmg/sparse.hpp"

namespace supgmg {

/// y = Op(x). Operators may be nonlinear (e.g. an inner Krylov smoother).
using LinearOperator =
    std::function<void(std::span<const double> x, std::span<double> y)>;

LinearOperator matrix_operator(const CsrMatrix& a);
LinearOperator identity_operator();

struct FgmresOptions {
  double tol_abs = 1e-10;
  int max_iterations = 100;
  /// 0 means no restart (full FGMRES).
  int restart = 0;
  /// Smoother use: skip the closing true-residual check and return after
  /// max_iterations regardless of convergence.
  bool fixed_steps = false;
};

struct KrylovResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  /// Residual 2-norms, starting with the initial residual.
  std::vector<double> residual_history;
};

/// Right-preconditioned flexible GMRES. The preconditioned Arnoldi vectors are
/// stored, so `precond` may change from one application to the next.
KrylovResult fgmres(const LinearOperator& op, const LinearOperator& precond,
                    std::span<const double> b, std::span<const double> x0,
                    const FgmresOptions& options);

/// Largest-magnitude Ritz value (real part) of `steps` Arnoldi steps on
/// precond(op(.)), started from a uniform [0,1) vector drawn from `seed`.
double estimate_max_eigenvalue(const LinearOperator& op,
                               const LinearOperator& precond, std::size_t n,
                               int steps, std::uint64_t seed);

struct ChebyshevInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Interval [lower_factor * safety * M, safety * M]; the defaults give
/// [1.1M/4, 1.1M], which targets the upper three quarters of the spectrum.
ChebyshevInterval chebyshev_interval(double max_eig, double safety = 1.1,
                                     double lower_fraction = 0.25);

/// `degree` steps of the preconditioned Chebyshev iteration for op x = b on
/// the interval, starting from x (updated in place). The error propagator is
/// the scaled Chebyshev residual polynomial of precond*op.
void chebyshev_apply(const LinearOperator& op, const LinearOperator& precond,
                     ChebyshevInterval interval, int degree,
                     std::span<const double> b, std::span<double> x);

}  // namespace supgmg
