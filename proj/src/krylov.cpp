#include "supgmg/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "supgmg/error.hpp"

namespace supgmg {

LinearOperator matrix_operator(const CsrMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) { spmv(a, x, y); };
}

LinearOperator identity_operator() {
  return [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
}

namespace {

// Generates a plane rotation (c, s) with [c s; -s c] [a; b] = [r; 0].
void givens(double a, double b, double& c, double& s) {
  if (b == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  const double r = std::hypot(a, b);
  c = a / r;
  s = b / r;
}

}  // namespace

KrylovResult fgmres(const LinearOperator& op, const LinearOperator& precond,
                    std::span<const double> b, std::span<const double> x0,
                    const FgmresOptions& options) {
  const std::size_t n = b.size();
  require(x0.empty() || x0.size() == n, "fgmres initial guess has wrong size");
  require(options.max_iterations >= 0, "fgmres max_iterations must be >= 0");

  KrylovResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), res.x.begin());

  std::vector<double> r(n), w(n);
  op(res.x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double beta = norm2(r);
  res.residual_history.push_back(beta);
  res.final_residual = beta;
  if (beta <= options.tol_abs || beta == 0.0) {
    res.converged = true;
    return res;
  }

  const int m = options.restart > 0 ? options.restart
                                    : std::max(options.max_iterations, 1);
  std::vector<std::vector<double>> v, z;
  std::vector<double> h, cs(m), sn(m), g(m + 1), y(m);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };

  while (true) {
    v.assign(1, std::vector<double>(n));
    z.clear();
    h.assign(static_cast<std::size_t>(m + 1) * m, 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    g[0] = beta;

    int k = 0;
    bool breakdown = false;
    double estimate = beta;
    while (k < m && res.iterations < options.max_iterations) {
      z.emplace_back(n);
      precond(v[k], z[k]);
      op(z[k], w);
      const double wnorm0 = norm2(w);
      for (int i = 0; i <= k; ++i) {
        const double hij = dot(w, v[i]);
        H(i, k) = hij;
        axpy(-hij, v[i], w);
      }
      double hnext = norm2(w);
      // One reorthogonalization pass when cancellation was severe.
      if (hnext < 0.5 * wnorm0) {
        for (int i = 0; i <= k; ++i) {
          const double hij = dot(w, v[i]);
          H(i, k) += hij;
          axpy(-hij, v[i], w);
        }
        hnext = norm2(w);
      }
      H(k + 1, k) = hnext;

      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      givens(H(k, k), H(k + 1, k), cs[k], sn[k]);
      H(k, k) = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      estimate = std::abs(g[k + 1]);
      ++res.iterations;
      ++k;
      res.residual_history.push_back(estimate);

      breakdown = hnext <= 1e-14 * std::max(wnorm0, beta);
      if (breakdown || estimate <= options.tol_abs) break;
      v.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) v[k][i] = w[i] / hnext;
    }

    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = s / H(i, i);
    }
    for (int j = 0; j < k; ++j) axpy(y[j], z[j], res.x);

    if (options.fixed_steps) {
      res.final_residual = estimate;
      res.converged = estimate <= options.tol_abs;
      return res;
    }

    op(res.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    beta = norm2(r);
    res.final_residual = beta;
    if (beta <= options.tol_abs || breakdown) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= options.max_iterations) {
      res.converged = false;
      return res;
    }
  }
}

double estimate_max_eigenvalue(const LinearOperator& op,
                               const LinearOperator& precond, std::size_t n,
                               int steps, std::uint64_t seed) {
  require(steps >= 1, "eigenvalue estimate needs at least one Arnoldi step");
  require(n >= 1, "eigenvalue estimate needs a nonempty space");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> v(1, std::vector<double>(n));
  // 53 random mantissa bits -> uniform [0,1), identical on every platform.
  for (auto& e : v[0]) e = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double nrm = norm2(v[0]);
  for (auto& e : v[0]) e /= nrm;

  const int k_max = static_cast<int>(std::min<std::size_t>(steps, n));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k_max + 1, k_max);
  std::vector<double> t(n), w(n);
  int k = 0;
  while (k < k_max) {
    op(v[k], t);
    precond(t, w);
    const double wnorm0 = norm2(w);
    for (int i = 0; i <= k; ++i) {
      const double hij = dot(w, v[i]);
      h(i, k) = hij;
      axpy(-hij, v[i], w);
    }
    for (int i = 0; i <= k; ++i) {
      const double hij = dot(w, v[i]);
      h(i, k) += hij;
      axpy(-hij, v[i], w);
    }
    const double hnext = norm2(w);
    h(k + 1, k) = hnext;
    ++k;
    if (hnext <= 1e-12 * std::max(wnorm0, 1e-300)) break;
    if (k < k_max) {
      v.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) v[k][i] = w[i] / hnext;
    }
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(k, k), false);
  const auto ev = es.eigenvalues();
  double best_abs = -1.0;
  double best = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > best_abs) {
      best_abs = std::abs(ev[i]);
      best = ev[i].real();
    }
  }
  return best;
}

ChebyshevInterval chebyshev_interval(double max_eig, double safety,
                                     double lower_fraction) {
  return {lower_fraction * safety * max_eig, safety * max_eig};
}

void chebyshev_apply(const LinearOperator& op, const LinearOperator& precond,
                     ChebyshevInterval interval, int degree,
                     std::span<const double> b, std::span<double> x) {
  require(interval.lower > 0.0 && interval.upper > interval.lower,
          "Chebyshev interval must satisfy 0 < lower < upper");
  require(degree >= 1, "Chebyshev degree must be at least 1");
  require(b.size() == x.size(), "Chebyshev dimension mismatch");
  const std::size_t n = b.size();
  const double theta = 0.5 * (interval.upper + interval.lower);
  const double delta = 0.5 * (interval.upper - interval.lower);
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;

  std::vector<double> r(n), z(n), d(n);
  op(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  precond(r, z);
  for (std::size_t i = 0; i < n; ++i) d[i] = z[i] / theta;

  for (int k = 1; k <= degree; ++k) {
    axpy(1.0, d, x);
    if (k == degree) break;
    op(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    precond(r, z);
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    const double c1 = rho_next * rho;
    const double c2 = 2.0 * rho_next / delta;
    for (std::size_t i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * z[i];
    rho = rho_next;
  }
}

}  // namespace supgmg
