#include "fucik/linsolve.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fucik {

SymSolver::SymSolver(const SpMat& A, bool prefer_iterative)
    : A_(A), iterative_(prefer_iterative) {
  if (iterative_) {
    ic_.compute(A_);
    require(ic_.info() == Eigen::Success, errc::internal,
            "incomplete Cholesky preconditioner failed");
  } else {
    ldlt_.compute(A_);
    require(ldlt_.info() == Eigen::Success, errc::internal,
            "sparse LDLT factorization failed (operator not SPD?)");
  }
}

Vec SymSolver::solve(const Vec& rhs) const {
  if (!iterative_) return ldlt_.solve(rhs);

  // Hand-rolled PCG: Eigen's solver object carries mutable iteration state,
  // which would not be shareable across threads.
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Vec::Zero(rhs.size());
  const double tol = 1e-12 * rhs_norm;
  Vec x = Vec::Zero(rhs.size());
  Vec r = rhs;
  Vec z = ic_.solve(r);
  Vec p = z;
  double rz = r.dot(z);
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    const Vec Ap = A_ * p;
    const double alpha = rz / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    if (r.norm() <= tol) return x;
    z = ic_.solve(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  fail(errc::convergence_failure, "PCG did not reach tolerance");
}

namespace {

bool big_3d(const DomainPtr& d) { return d->dimension() == 3 && d->size() > 40000; }

} // namespace

StiffnessSolver::StiffnessSolver(DomainPtr d)
    : dom_(std::move(d)), sym_(std::make_shared<SymSolver>(dom_->stiffness(), big_3d(dom_))) {}

std::vector<GeneralizedPair> smallest_pairs(const SpMat& A, const Vec& w, int k, double tol,
                                            int max_iter, bool prefer_iterative) {
  const Index m = w.size();
  require(A.rows() == m && A.cols() == m, errc::invalid_argument,
          "smallest_pairs: operator/mass size mismatch");
  require(k >= 1 && k <= m, errc::invalid_argument, "smallest_pairs: bad pair count");
  require(tol > 0.0, errc::invalid_argument, "smallest_pairs: tolerance must be positive");

  SymSolver solver(A, prefer_iterative);

  // Block inverse iteration with Rayleigh-Ritz. Single-vector deflation stalls on
  // clustered eigenvalues (masked balls split degenerate pairs only at O(h)), while
  // the block converges to the invariant subspace at the rate of the gap past the buffer.
  const Index kb = std::min<Index>(m, static_cast<Index>(k) + 2);
  Eigen::MatrixXd X(m, kb);
  std::mt19937 rng(0xf00d);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  X.col(0).setOnes();
  for (Index j = 1; j < kb; ++j)
    for (Index i = 0; i < m; ++i) X(i, j) = unif(rng);

  auto orthonormalize = [&](Eigen::MatrixXd& Y) {
    // twice-is-enough Gram-Schmidt in the mass inner product
    for (int round = 0; round < 2; ++round) {
      for (Index j = 0; j < Y.cols(); ++j) {
        for (Index i = 0; i < j; ++i) Y.col(j) -= Y.col(i).dot(w.cwiseProduct(Y.col(j))) * Y.col(i);
        const double nrm = std::sqrt(Y.col(j).dot(w.cwiseProduct(Y.col(j))));
        require(nrm > 0.0 && std::isfinite(nrm), errc::convergence_failure,
                "inverse iteration block collapsed");
        Y.col(j) /= nrm;
      }
    }
  };
  orthonormalize(X);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(kb);
  Eigen::VectorXd resid = Eigen::VectorXd::Constant(kb, std::numeric_limits<double>::infinity());
  int sweeps = 0;
  bool converged = false;
  for (; sweeps < max_iter && !converged; ++sweeps) {
    Eigen::MatrixXd Y(m, kb);
    for (Index j = 0; j < kb; ++j) Y.col(j) = solver.solve(w.cwiseProduct(X.col(j)));
    orthonormalize(Y);
    Eigen::MatrixXd AY(m, kb);
    for (Index j = 0; j < kb; ++j) AY.col(j) = A * Y.col(j);
    const Eigen::MatrixXd S = Y.transpose() * AY;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 * (S + S.transpose()));
    require(small.info() == Eigen::Success, errc::internal, "Rayleigh-Ritz solve failed");
    X = Y * small.eigenvectors();
    theta = small.eigenvalues();

    converged = true;
    for (Index j = 0; j < static_cast<Index>(k); ++j) {
      const Vec Ax = A * X.col(j);
      const Vec wx = w.cwiseProduct(X.col(j));
      resid[j] = (Ax - theta[j] * wx).norm() / (theta[j] * wx.norm());
      if (resid[j] > tol) converged = false;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "eigenpairs did not converge: worst residual " << resid.head(k).maxCoeff() << " after "
        << sweeps << " sweeps (tol " << tol << ")";
    fail(errc::convergence_failure, msg.str());
  }

  std::vector<GeneralizedPair> out;
  out.reserve(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    GeneralizedPair pair;
    pair.lambda = theta[j];
    pair.e = X.col(j);
    pair.residual = resid[j];
    pair.iterations = sweeps;
    out.push_back(std::move(pair));
  }
  return out;
}

SpMat principal_submatrix(const SpMat& A, const std::vector<Index>& nodes) {
  std::vector<Index> where(static_cast<size_t>(A.rows()), -1);
  for (size_t s = 0; s < nodes.size(); ++s) {
    const Index node = nodes[s];
    require(node >= 0 && node < A.rows(), errc::invalid_argument,
            "principal_submatrix: node index out of range");
    require(where[static_cast<size_t>(node)] < 0, errc::invalid_argument,
            "principal_submatrix: duplicate node index");
    where[static_cast<size_t>(node)] = static_cast<Index>(s);
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (Index col = 0; col < A.outerSize(); ++col) {
    const Index sc = where[static_cast<size_t>(col)];
    if (sc < 0) continue;
    for (SpMat::InnerIterator entry(A, col); entry; ++entry) {
      const Index sr = where[static_cast<size_t>(entry.row())];
      if (sr >= 0) trip.emplace_back(sr, sc, entry.value());
    }
  }
  SpMat sub(static_cast<Index>(nodes.size()), static_cast<Index>(nodes.size()));
  sub.setFromTriplets(trip.begin(), trip.end());
  sub.makeCompressed();
  return sub;
}

GeneralizedPair subgrid_principal_pair(const Domain& d, const std::vector<Index>& nodes,
                                       double tol, int max_iter) {
  require(!nodes.empty(), errc::degenerate_domain, "subgrid has no nodes");
  const SpMat sub = principal_submatrix(d.stiffness(), nodes);
  Vec wsub(static_cast<Index>(nodes.size()));
  for (size_t s = 0; s < nodes.size(); ++s) wsub[static_cast<Index>(s)] = d.mass()[nodes[s]];
  auto pairs = smallest_pairs(sub, wsub, 1, tol, max_iter);
  GeneralizedPair pair = std::move(pairs.front());
  // the ground state of a connected subgrid is one-signed; fix the orientation
  Index imax = 0;
  pair.e.cwiseAbs().maxCoeff(&imax);
  if (pair.e[imax] < 0.0) pair.e = -pair.e;
  return pair;
}

void harmonic_fill(const Domain& d, const std::vector<Index>& unknowns, Vec& values) {
  require(values.size() == d.size(), errc::domain_mismatch, "harmonic_fill: field length mismatch");
  if (unknowns.empty()) return;
  const SpMat& A = d.stiffness();
  const SpMat sub = principal_submatrix(A, unknowns);

  std::vector<Index> where(static_cast<size_t>(A.rows()), -1);
  for (size_t s = 0; s < unknowns.size(); ++s) where[static_cast<size_t>(unknowns[s])] = static_cast<Index>(s);

  // rhs = -A[unknown, known] * values[known]
  Vec rhs = Vec::Zero(static_cast<Index>(unknowns.size()));
  for (Index col = 0; col < A.outerSize(); ++col) {
    if (where[static_cast<size_t>(col)] >= 0) continue;
    const double v = values[col];
    if (v == 0.0) continue;
    for (SpMat::InnerIterator entry(A, col); entry; ++entry) {
      const Index sr = where[static_cast<size_t>(entry.row())];
      if (sr >= 0) rhs[sr] -= entry.value() * v;
    }
  }
  SymSolver solver(sub, false);
  const Vec x = solver.solve(rhs);
  for (size_t s = 0; s < unknowns.size(); ++s) values[unknowns[s]] = x[static_cast<Index>(s)];
}

} // namespace fucik
