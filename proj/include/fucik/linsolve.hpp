#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "fucik/domain.hpp"

namespace fucik {

/// Shared symmetric positive definite solve backend.  Factors once, then
/// serves repeated right-hand sides; solve() is const and safe to call from
/// several threads.  Large 3-D operators fall back to preconditioned CG where
/// a direct factorization would not fit in memory.
class SymSolver {
public:
  SymSolver(const SpMat& A, bool prefer_iterative);
  Vec solve(const Vec& rhs) const;
  bool iterative() const { return iterative_; }

private:
  SpMat A_;
  bool iterative_ = false;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  Eigen::IncompleteCholesky<double> ic_;
};

/// Backend choice for a whole domain: direct for 1-D/2-D, iterative for big
/// 3-D grids.
class StiffnessSolver {
public:
  explicit StiffnessSolver(DomainPtr d);
  Vec solve(const Vec& rhs) const { return sym_->solve(rhs); }
  const DomainPtr& domain() const { return dom_; }

private:
  DomainPtr dom_;
  std::shared_ptr<const SymSolver> sym_;
};

struct GeneralizedPair {
  double lambda = 0.0;
  Vec e;               // normalized to e^T W e = 1
  double residual = 0.0;
  int iterations = 0;
};

/// k smallest eigenpairs of A e = lambda W e (A SPD, W diagonal positive) by
/// block inverse iteration with Rayleigh-Ritz extraction, block size k + 2.
/// The block form stays fast on clustered eigenvalues (masked balls split
/// degenerate pairs only at grid accuracy).  The first start vector is
/// all-ones; further starts are seeded deterministically.  Residual measure:
/// |A e - lambda W e| / (lambda |W e|).
std::vector<GeneralizedPair> smallest_pairs(const SpMat& A, const Vec& w, int k, double tol,
                                            int max_iter, bool prefer_iterative = false);

/// Principal submatrix restricted to `nodes` (masked Dirichlet subgrid).
SpMat principal_submatrix(const SpMat& A, const std::vector<Index>& nodes);

/// Principal eigenpair of the subgrid spanned by `nodes` inside d.  The
/// returned vector lives on the subset, W-normalized with the subset weights.
GeneralizedPair subgrid_principal_pair(const Domain& d, const std::vector<Index>& nodes,
                                       double tol = 1e-10, int max_iter = 400);

/// Fill the entries of `values` listed in `unknowns` with the discrete
/// harmonic extension of the remaining entries (A-harmonic interior solve).
void harmonic_fill(const Domain& d, const std::vector<Index>& unknowns, Vec& values);

} // namespace fucik
