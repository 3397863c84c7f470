#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "supgmg/error.hpp"
#include "supgmg/krylov.hpp"
#include "supgmg/lu.hpp"
#include "supgmg/sparse.hpp"

using namespace supgmg;

namespace {

std::vector<double> random_dense(int rows, int cols, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(rows) * cols);
  for (auto& v : a) v = u(rng) < density ? d(rng) : 0.0;
  return a;
}

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd to_eigen(const CsrMatrix& a) {
  const auto d = a.to_dense();
  return Eigen::Map<const RowMajor>(d.data(), a.rows(), a.cols());
}

CsrMatrix diag(std::initializer_list<double> v) {
  std::vector<Triplet> t;
  int i = 0;
  for (double x : v) {
    t.push_back({i, i, x});
    ++i;
  }
  return CsrMatrix::from_triplets(i, i, t);
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("csr construction") {
  const CsrMatrix a = CsrMatrix::from_triplets(3, 3, {{0, 1, 2.0}, {2, 0, 1.0}, {0, 1, 3.0}, {1, 1, 4.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.at(0, 1) == 5.0);
  CHECK(a.at(2, 2) == 0.0);
  CHECK(a.find(2, 2) == -1);
  const CsrMatrix t = a.transposed();
  CHECK(t.at(1, 0) == 5.0);
  CHECK(t.at(0, 2) == 1.0);
  const int idx[] = {1, 0};
  const CsrMatrix s = a.submatrix(idx);
  CHECK(s.at(0, 0) == 4.0);
  CHECK(s.at(1, 0) == 5.0);
  CHECK(s.at(0, 1) == 0.0);
  CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 1, 2}, {1, 5}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
}

TEST_CASE("spmv examples") {
  const std::vector<double> x{1.0, -2.0, 3.5};
  CHECK(spmv(CsrMatrix::identity(3), x) == x);
  const std::vector<double> ones{1.0, 1.0};
  CHECK(spmv(diag({2.0, 3.0}), ones) == std::vector<double>{2.0, 3.0});
  std::vector<double> y(3);
  CHECK_THROWS_AS(spmv(CsrMatrix::identity(2), x, y), Error);
}

TEST_CASE("spmv matches a dense product") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = random_dense(5, 5, rng, 0.6);
    const CsrMatrix a = CsrMatrix::from_dense(5, 5, d);
    const auto x = random_dense(5, 1, rng);
    const auto y = spmv(a, x);
    std::vector<double> yt(5);
    spmv_transposed(a, x, yt);
    for (int i = 0; i < 5; ++i) {
      double s = 0.0, st = 0.0;
      for (int j = 0; j < 5; ++j) {
        s += d[i * 5 + j] * x[j];
        st += d[j * 5 + i] * x[j];
      }
      CHECK(std::abs(y[i] - s) <= 1e-14);
      CHECK(std::abs(yt[i] - st) <= 1e-14);
    }
  }
}

TEST_CASE("vector helpers") {
  const std::vector<double> a{3.0, 4.0};
  std::vector<double> b{1.0, 1.0};
  CHECK(norm2(a) == 5.0);
  CHECK(dot(a, b) == 7.0);
  axpy(2.0, a, b);
  CHECK(b == std::vector<double>{7.0, 9.0});
  std::vector<double> r(2);
  residual(diag({1.0, 2.0}), b, a, r);
  CHECK(r == std::vector<double>{-4.0, -14.0});
}

TEST_CASE("Matrix Market round trip") {
  std::mt19937_64 rng(9);
  const CsrMatrix a = CsrMatrix::from_dense(4, 6, random_dense(4, 6, rng, 0.5));
  std::stringstream ss;
  write_matrix_market(a, ss);
  const CsrMatrix b = read_matrix_market(ss);
  CHECK(b.rows() == 4);
  CHECK(b.cols() == 6);
  CHECK(b.row_offsets() == a.row_offsets());
  CHECK(b.col_indices() == a.col_indices());
  CHECK(b.values() == a.values());
  std::istringstream bad("%%MatrixMarket matrix array real general\n2 2\n");
  CHECK_THROWS_AS(read_matrix_market(bad), Error);
}

TEST_CASE("LU examples") {
  for (auto make : {&LuFactorization::dense, &LuFactorization::banded, &LuFactorization::sparse}) {
    const std::vector<double> b{1.0, -2.0, 7.0};
    CHECK(make(CsrMatrix::identity(3)).solve(b) == b);
    const std::vector<double> m{2, 1, 1, 2};
    const std::vector<double> rhs{3, 3};
    const auto x = make(CsrMatrix::from_dense(2, 2, m)).solve(rhs);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<double> s{1, 1, 1, 1};
    try {
      make(CsrMatrix::from_dense(2, 2, s));
      FAIL("singular matrix accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingularMatrix);
    }
  }
}

TEST_CASE("LU reproduces PA = LU on random probes") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 30;
    auto d = random_dense(n, n, rng, 0.15);
    for (int i = 0; i < n; ++i) {
      // A banded part plus scattered entries; the diagonal is not dominant, so
      // pivoting is exercised.
      if (i + 1 < n) d[i * n + i + 1] += 1.0;
      d[i * n + i] += 0.1;
    }
    const CsrMatrix a = CsrMatrix::from_dense(n, n, d);
    const Eigen::MatrixXd ea = to_eigen(a);
    for (auto make : {&LuFactorization::dense, &LuFactorization::banded, &LuFactorization::sparse}) {
      const LuFactorization f = make(a);
      // Probe with unit vectors: A * (A^{-1} e_k) = e_k.
      double worst = 0.0;
      for (int k = 0; k < n; ++k) {
        std::vector<double> e(n, 0.0);
        e[k] = 1.0;
        const auto x = f.solve(e);
        const Eigen::VectorXd r =
            ea * Eigen::Map<const Eigen::VectorXd>(x.data(), n) - Eigen::Map<const Eigen::VectorXd>(e.data(), n);
        worst = std::max(worst, r.norm() / (ea.norm() * Eigen::Map<const Eigen::VectorXd>(x.data(), n).norm()));
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("LU is exact on integer matrices") {
  const std::vector<double> m{4, 1, 0, 2, 1, 5, 1, 0, 0, 2, 6, 1, 1, 0, 1, 3};
  const CsrMatrix a = CsrMatrix::from_dense(4, 4, m);
  const std::vector<double> want{1, -2, 3, 4};
  const auto b = spmv(a, want);
  for (auto make : {&LuFactorization::dense, &LuFactorization::banded, &LuFactorization::sparse}) {
    const auto x = make(a).solve(b);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - want[i]) <= 1e-12);
  }
}

TEST_CASE("band LU bandwidths") {
  std::vector<Triplet> t;
  for (int i = 0; i < 6; ++i) {
    t.push_back({i, i, 4.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 2 < 6) t.push_back({i, i + 2, -1.0});
  }
  const BandLu lu(CsrMatrix::from_triplets(6, 6, t));
  CHECK(lu.lower_bandwidth() == 1);
  CHECK(lu.upper_bandwidth() == 2);
}

TEST_CASE("FGMRES examples") {
  FgmresOptions o;
  o.tol_abs = 1e-12;
  const std::vector<double> b{1.0, 2.0};
  {
    const CsrMatrix i2 = CsrMatrix::identity(2);
    const KrylovResult r = fgmres(matrix_operator(i2), identity_operator(), b, {}, o);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
  }
  {
    const CsrMatrix d = diag({1.0, 2.0});
    const KrylovResult r = fgmres(matrix_operator(d), identity_operator(), b, {}, o);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    FgmresOptions loose = o;
    loose.tol_abs = 10.0;
    const CsrMatrix d = diag({1.0, 2.0});
    const KrylovResult r = fgmres(matrix_operator(d), identity_operator(), b, {}, loose);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.x == std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("FGMRES on an SPD system matches a dense solve") {
  std::mt19937_64 rng(4);
  const int n = 10;
  const auto g = random_dense(n, n, rng);
  Eigen::Map<const RowMajor> gm(g.data(), n, n);
  const Eigen::MatrixXd spd = gm * gm.transpose() + Eigen::MatrixXd::Identity(n, n);
  std::vector<double> d(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d[i * n + j] = spd(i, j);
  }
  const CsrMatrix a = CsrMatrix::from_dense(n, n, d);
  const auto b = random_dense(n, 1, rng);
  FgmresOptions o;
  o.tol_abs = 1e-12;
  o.max_iterations = n;
  const KrylovResult r = fgmres(matrix_operator(a), identity_operator(), b, {}, o);
  CHECK(r.converged);
  CHECK(r.iterations <= n);
  const Eigen::VectorXd want = spd.ldlt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  for (int i = 0; i < n; ++i) CHECK(std::abs(r.x[i] - want(i)) <= 1e-10);
  for (std::size_t k = 1; k < r.residual_history.size(); ++k) {
    CHECK(r.residual_history[k] <= r.residual_history[k - 1]);
  }
}

TEST_CASE("FGMRES restart, max iterations and flexible preconditioner") {
  std::mt19937_64 rng(8);
  const int n = 25;
  auto d = random_dense(n, n, rng, 0.3);
  for (int i = 0; i < n; ++i) d[i * n + i] += 3.0;
  const CsrMatrix a = CsrMatrix::from_dense(n, n, d);
  const auto b = random_dense(n, 1, rng);
  FgmresOptions o;
  o.tol_abs = 1e-10;
  o.max_iterations = 200;
  o.restart = 5;
  const KrylovResult restarted = fgmres(matrix_operator(a), identity_operator(), b, {}, o);
  CHECK(restarted.converged);
  std::vector<double> r(n);
  residual(a, restarted.x, b, r);
  CHECK(norm2(r) <= 1e-10);

  FgmresOptions few = o;
  few.restart = 0;
  few.max_iterations = 2;
  const KrylovResult capped = fgmres(matrix_operator(a), identity_operator(), b, {}, few);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 2);

  // A preconditioner that changes on every call (Jacobi with a drifting
  // weight) still converges since the preconditioned vectors are stored.
  int calls = 0;
  const LinearOperator drifting = [&](std::span<const double> x, std::span<double> y) {
    const double w = 1.0 + 0.3 * std::sin(static_cast<double>(calls++));
    for (int i = 0; i < n; ++i) y[i] = w * x[i] / a.at(i, i);
  };
  FgmresOptions full = o;
  full.restart = 0;
  full.max_iterations = n;
  const KrylovResult flex = fgmres(matrix_operator(a), drifting, b, {}, full);
  CHECK(flex.converged);
  residual(a, flex.x, b, r);
  CHECK(norm2(r) <= 1e-9);

  // Nonzero initial guess.
  const KrylovResult warm = fgmres(matrix_operator(a), identity_operator(), b, flex.x, full);
  CHECK(warm.iterations <= 1);
}

TEST_CASE("largest eigenvalue estimates") {
  const CsrMatrix i3 = CsrMatrix::identity(3);
  CHECK(estimate_max_eigenvalue(matrix_operator(i3), identity_operator(), 3, 10, 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const CsrMatrix d = diag({1.0, 2.0, 3.0});
  const double m = estimate_max_eigenvalue(matrix_operator(d), identity_operator(), 3, 3, 42);
  CHECK(std::abs(m - 3.0) <= 1e-10);
  const double again = estimate_max_eigenvalue(matrix_operator(d), identity_operator(), 3, 3, 42);
  CHECK(m == again);
  CHECK_THROWS_AS(estimate_max_eigenvalue(matrix_operator(d), identity_operator(), 3, 0, 1), Error);
}

TEST_CASE("Chebyshev interval rule") {
  const ChebyshevInterval iv = chebyshev_interval(4.0);
  CHECK(iv.lower == doctest::Approx(1.1));
  CHECK(iv.upper == doctest::Approx(4.4));
}

TEST_CASE("Chebyshev on the identity") {
  const CsrMatrix i4 = CsrMatrix::identity(4);
  const std::vector<double> b{1.0, -1.0, 2.0, 0.5};
  std::vector<double> x(4, 0.0);
  chebyshev_apply(matrix_operator(i4), identity_operator(), {0.99, 1.01}, 1, b, x);
  std::vector<double> r(4);
  residual(i4, x, b, r);
  CHECK(norm2(r) <= norm2(b) / 100.0);
}

TEST_CASE("degree-one Chebyshev is weighted Richardson") {
  std::mt19937_64 rng(2);
  const int n = 6;
  auto d = random_dense(n, n, rng);
  for (int i = 0; i < n; ++i) d[i * n + i] += 4.0;
  const CsrMatrix a = CsrMatrix::from_dense(n, n, d);
  const auto b = random_dense(n, 1, rng);
  const auto x0 = random_dense(n, 1, rng);
  const ChebyshevInterval iv{0.7, 5.3};
  std::vector<double> x = x0;
  chebyshev_apply(matrix_operator(a), identity_operator(), iv, 1, b, x);
  std::vector<double> r(n);
  residual(a, x0, b, r);
  const double w = 2.0 / (iv.lower + iv.upper);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x0[i] + w * r[i]).epsilon(1e-14));
}

TEST_CASE("Chebyshev residual polynomial on scalar systems") {
  // For op = lambda and b = 0, x_nu = p(lambda) x_0 with
  // p(lambda) = T_nu((theta - lambda)/delta) / T_nu(theta/delta).
  const ChebyshevInterval iv{0.5, 2.0};
  const double theta = 1.25, delta = 0.75;
  const auto cheb_t = [](int k, double t) {
    if (std::abs(t) <= 1.0) return std::cos(k * std::acos(t));
    return std::cosh(k * std::acosh(std::abs(t))) * (t < 0 && k % 2 ? -1.0 : 1.0);
  };
  for (double lambda : {0.0, 0.3, 0.5, 1.0, 1.7, 2.0, 2.5}) {
    for (int nu = 1; nu <= 5; ++nu) {
      const CsrMatrix a = diag({lambda});
      const std::vector<double> b{0.0};
      std::vector<double> x{1.0};
      chebyshev_apply(matrix_operator(a), identity_operator(), iv, nu, b, x);
      const double want = cheb_t(nu, (theta - lambda) / delta) / cheb_t(nu, theta / delta);
      CHECK(x[0] == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // A-null component is untouched.
  const CsrMatrix a = diag({0.0, 1.0});
  const std::vector<double> b{0.0, 0.0};
  std::vector<double> x{1.0, 1.0};
  chebyshev_apply(matrix_operator(a), identity_operator(), iv, 3, b, x);
  CHECK(x[0] == 1.0);
  CHECK(std::abs(x[1]) < 1.0);
}

TEST_CASE("Chebyshev argument errors") {
  const CsrMatrix i1 = CsrMatrix::identity(1);
  std::vector<double> x{0.0};
  const std::vector<double> b{1.0};
  CHECK_THROWS_AS(chebyshev_apply(matrix_operator(i1), identity_operator(), {0.0, 1.0}, 2, b, x), Error);
  CHECK_THROWS_AS(chebyshev_apply(matrix_operator(i1), identity_operator(), {2.0, 1.0}, 2, b, x), Error);
  CHECK_THROWS_AS(chebyshev_apply(matrix_operator(i1), identity_operator(), {0.5, 1.0}, 0, b, x), Error);
}

}  // TEST_SUITE
