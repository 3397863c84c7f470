#include "supgmg/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "supgmg/error.hpp"

namespace supgmg {

namespace {

double snap(double t) {
  if (std::abs(t) < 1e-12) return 0.0;
  if (std::abs(t - 1.0) < 1e-12) return 1.0;
  return t;
}

}  // namespace

CsrMatrix build_prolongation(const QuadMesh& coarse, const QuadMesh& fine,
                             const ParentMap& parents) {
  require(parents.size() == fine.num_nodes(), "parent map does not match fine mesh");
  std::vector<Triplet> t;
  t.reserve(parents.size() * 4);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const ParentEntry& e = parents[i];
    if (e.coarse_cell < 0 || static_cast<std::size_t>(e.coarse_cell) >= coarse.num_cells()) {
      fail(ErrorCode::kInvalidArgument,
           "fine node " + std::to_string(i) + " has no coarse parent");
    }
    const double xi = snap(e.xi);
    const double eta = snap(e.eta);
    const double w[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
    const auto& c = coarse.cells[e.coarse_cell];
    for (int a = 0; a < 4; ++a) {
      if (w[a] != 0.0) t.push_back({static_cast<int>(i), c[a], w[a]});
    }
  }
  return CsrMatrix::from_triplets(static_cast<int>(fine.num_nodes()),
                                  static_cast<int>(coarse.num_nodes()), std::move(t));
}

CsrMatrix mask_prolongation(const CsrMatrix& p, std::span<const char> fine_free,
                            std::span<const char> coarse_free) {
  require(fine_free.size() == static_cast<std::size_t>(p.rows()) &&
              coarse_free.size() == static_cast<std::size_t>(p.cols()),
          "prolongation mask size mismatch");
  std::vector<Triplet> t;
  for (int r = 0; r < p.rows(); ++r) {
    if (!fine_free[r]) continue;
    for (std::size_t k = p.row_offsets()[r]; k < p.row_offsets()[r + 1]; ++k) {
      const int c = p.col_indices()[k];
      if (coarse_free[c]) t.push_back({r, c, p.values()[k]});
    }
  }
  return CsrMatrix::from_triplets(p.rows(), p.cols(), std::move(t));
}

struct MgSolver::Level {
  CsrMatrix a;
  std::vector<char> free;
  std::vector<double> dirichlet;  // NaN on free nodes
  CsrMatrix p;                    // from the next coarser level
  CsrMatrix r;                    // transpose of p
  std::unique_ptr<BlockRelaxer> relaxer;
  ChebyshevInterval interval;
  double max_eig = 0.0;
};

MgSolver::MgSolver(const MeshHierarchy& h, const ProblemSpec& spec,
                   const MgOptions& options)
    : options_(options) {
  require(h.num_levels() >= 1, "hierarchy needs at least one level");
  require(h.parents.size() + 1 == h.num_levels(), "hierarchy parent maps incomplete");
  require(options.nu1 >= 0 && options.nu2 >= 0, "relaxation counts must be >= 0");
  require(options.gamma1 >= 1 && options.gamma2 >= 1, "cycle indices must be >= 1");

  const std::size_t nl = h.num_levels();
  for (std::size_t l = 0; l < nl; ++l) {
    const QuadMesh& mesh = h.levels[l];
    auto lv = std::make_unique<Level>();
    LinearSystem sys = assemble_supg(mesh, spec);
    apply_dirichlet(sys, mesh, spec);
    lv->dirichlet = dirichlet_values(mesh, spec);
    lv->free.resize(mesh.num_nodes());
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      lv->free[i] = std::isnan(lv->dirichlet[i]) ? 1 : 0;
    }
    lv->a = std::move(sys.matrix);
    if (l == 0) rhs_ = std::move(sys.rhs);
    levels_.push_back(std::move(lv));
  }

  for (std::size_t l = 0; l + 1 < nl; ++l) {
    Level& lv = *levels_[l];
    lv.p = mask_prolongation(build_prolongation(h.levels[l + 1], h.levels[l], h.parents[l]),
                             lv.free, levels_[l + 1]->free);
    lv.r = lv.p.transposed();
    lv.relaxer = std::make_unique<BlockRelaxer>(
        lv.a, mesh_line_blocks(h.levels[l], options.lines, lv.free));
    if (options.relax == RelaxKind::kChebyshev) {
      lv.max_eig = estimate_max_eigenvalue(matrix_operator(lv.a), lv.relaxer->as_operator(),
                                           lv.a.rows(), options.eig_steps, options.seed);
      if (!(lv.max_eig > 0.0)) {
        fail(ErrorCode::kInvalidArgument,
             "nonpositive eigenvalue estimate on level " + std::to_string(l + 1));
      }
      lv.interval = chebyshev_interval(lv.max_eig, options.cheb_safety,
                                       options.cheb_lower_fraction);
    }
  }
  coarse_lu_ = LuFactorization::sparse(levels_.back()->a);
}

MgSolver::~MgSolver() = default;
MgSolver::MgSolver(MgSolver&&) noexcept = default;
MgSolver& MgSolver::operator=(MgSolver&&) noexcept = default;

const CsrMatrix& MgSolver::matrix(std::size_t level) const { return levels_.at(level)->a; }

const CsrMatrix& MgSolver::prolongation(std::size_t level) const {
  require(level + 1 < levels_.size(), "no prolongation below the coarsest level");
  return levels_[level]->p;
}

const std::vector<char>& MgSolver::free_mask(std::size_t level) const {
  return levels_.at(level)->free;
}

const BlockRelaxer& MgSolver::relaxer(std::size_t level) const {
  require(level + 1 < levels_.size(), "the coarsest level has no relaxer");
  return *levels_[level]->relaxer;
}

double MgSolver::max_eigenvalue(std::size_t level) const {
  return levels_.at(level)->max_eig;
}

void MgSolver::relax(const Level& lv, int steps, std::span<double> u,
                     std::span<const double> b) const {
  if (steps <= 0) return;
  if (options_.relax == RelaxKind::kChebyshev) {
    chebyshev_apply(matrix_operator(lv.a), lv.relaxer->as_operator(), lv.interval,
                    steps, b, u);
    return;
  }
  std::vector<double> r(u.size());
  residual(lv.a, u, b, r);
  FgmresOptions o;
  o.tol_abs = 0.0;
  o.max_iterations = steps;
  o.fixed_steps = true;
  const KrylovResult k = fgmres(matrix_operator(lv.a), lv.relaxer->as_operator(), r, {}, o);
  axpy(1.0, k.x, u);
}

void MgSolver::cycle(std::size_t level, std::span<double> u,
                     std::span<const double> b, CycleTrace* trace) const {
  cycle(level, u, b, options_.gamma1, options_.gamma2, trace);
}

void MgSolver::cycle(std::size_t level, std::span<double> u,
                     std::span<const double> b, int gamma1, int gamma2,
                     CycleTrace* trace) const {
  require(level < levels_.size(), "cycle level out of range");
  const Level& lv = *levels_[level];
  require(u.size() == static_cast<std::size_t>(lv.a.rows()) && b.size() == u.size(),
          "cycle vector size mismatch");
  if (trace) {
    if (trace->calls.size() < levels_.size()) trace->calls.resize(levels_.size(), 0);
    ++trace->calls[level];
  }
  if (level + 1 == levels_.size()) {
    coarse_lu_.solve(b, u);
    return;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!lv.free[i]) u[i] = b[i];
  }

  std::vector<double> r(u.size());
  if (options_.log) {
    residual(lv.a, u, b, r);
    *options_.log << "level " << level + 1 << " start " << norm2(r) << '\n';
  }
  relax(lv, options_.nu1, u, b);
  residual(lv.a, u, b, r);
  if (options_.log) *options_.log << "level " << level + 1 << " pre " << norm2(r) << '\n';

  const Level& cv = *levels_[level + 1];
  std::vector<double> rc(static_cast<std::size_t>(cv.a.rows()));
  spmv(lv.r, r, rc);
  std::vector<double> e(rc.size(), 0.0);
  if (level + 2 == levels_.size()) {
    if (trace) ++trace->calls[level + 1];
    coarse_lu_.solve(rc, e);
  } else {
    for (int i = 1; i <= gamma2; ++i) {
      if (i == 1) cycle(level + 1, e, rc, gamma1, gamma2, trace);
      else cycle(level + 1, e, rc, gamma2, gamma1, trace);
    }
  }
  std::vector<double> pe(u.size());
  spmv(lv.p, e, pe);
  axpy(1.0, pe, u);

  relax(lv, options_.nu2, u, b);
  if (options_.log) {
    residual(lv.a, u, b, r);
    *options_.log << "level " << level + 1 << " post " << norm2(r) << '\n';
  }
}

void MgSolver::apply(std::span<const double> b, std::span<double> u) const {
  std::fill(u.begin(), u.end(), 0.0);
  cycle(0, u, b);
}

LinearOperator MgSolver::as_preconditioner() const {
  return [this](std::span<const double> b, std::span<double> u) { apply(b, u); };
}

}  // namespace supgmg
