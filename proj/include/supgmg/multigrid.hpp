#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "supgmg/block_relax.hpp"
#include "supgmg/fem.hpp"
#include "supgmg/krylov.hpp"
#include "supgmg/lu.hpp"
#include "supgmg/mesh.hpp"
#include "supgmg/sparse.hpp"

namespace supgmg {

/// Q1 interpolation from `coarse` to `fine`: row i holds the coarse basis
/// values at fine node i. Reference coordinates within 1e-12 of 0 or 1 are
/// snapped and zero weights dropped.
CsrMatrix build_prolongation(const QuadMesh& coarse, const QuadMesh& fine,
                             const ParentMap& parents);

/// Zeroes rows of fine constrained nodes and columns of coarse constrained
/// nodes (free[i] == 0 marks a constrained node).
CsrMatrix mask_prolongation(const CsrMatrix& p, std::span<const char> fine_free,
                            std::span<const char> coarse_free);

enum class RelaxKind {
  kChebyshev,  // Chebyshev iteration of degree nu around the block relaxer
  kGmres,      // nu right-preconditioned GMRES steps around the block relaxer
};

struct MgOptions {
  int nu1 = 2;
  int nu2 = 2;
  int gamma1 = 1;
  int gamma2 = 1;
  RelaxKind relax = RelaxKind::kChebyshev;
  LinePlan lines = LinePlan::kBothDirections;
  int eig_steps = 10;
  std::uint64_t seed = 20240229;
  double cheb_safety = 1.1;
  double cheb_lower_fraction = 0.25;
  /// Per-cycle residual log (level, residual before and after); null = off.
  std::ostream* log = nullptr;
};

/// Calls of the cycle routine per level (index 0 = finest).
struct CycleTrace {
  std::vector<int> calls;
};

/// Multigrid hierarchy of rediscretized SUPG operators with Dirichlet rows
/// replaced by identity rows.
class MgSolver {
 public:
  MgSolver(const MeshHierarchy& hierarchy, const ProblemSpec& spec,
           const MgOptions& options);
  ~MgSolver();
  MgSolver(MgSolver&&) noexcept;
  MgSolver& operator=(MgSolver&&) noexcept;

  std::size_t num_levels() const { return levels_.size(); }
  const CsrMatrix& matrix(std::size_t level) const;
  /// Finest-level load vector with boundary values in the Dirichlet rows.
  const std::vector<double>& rhs() const { return rhs_; }
  /// Prolongation from level + 1 to level.
  const CsrMatrix& prolongation(std::size_t level) const;
  const std::vector<char>& free_mask(std::size_t level) const;
  const BlockRelaxer& relaxer(std::size_t level) const;
  /// Estimated largest eigenvalue of the block-preconditioned operator (0 if
  /// Chebyshev is not used on the level).
  double max_eigenvalue(std::size_t level) const;
  const MgOptions& options() const { return options_; }

  /// One multigrid cycle on `level`, updating u in place.
  void cycle(std::size_t level, std::span<double> u, std::span<const double> b,
             CycleTrace* trace = nullptr) const;

  /// u = MG(1, 0, b): one cycle from the zero vector.
  void apply(std::span<const double> b, std::span<double> u) const;
  /// The cycle as a preconditioner; the solver must outlive the operator.
  LinearOperator as_preconditioner() const;

 private:
  struct Level;

  void cycle(std::size_t level, std::span<double> u, std::span<const double> b,
             int gamma1, int gamma2, CycleTrace* trace) const;
  void relax(const Level& lv, int steps, std::span<double> u,
             std::span<const double> b) const;

  MgOptions options_;
  std::vector<std::unique_ptr<Level>> levels_;
  std::vector<double> rhs_;
  LuFactorization coarse_lu_;
};

}  // namespace supgmg
