#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fucik/functional.hpp"
#include "fucik/linsolve.hpp"
#include "fucik/spectral.hpp"

namespace fucik {

/// Per-domain context shared by point solves: the factored stiffness operator
/// and the low eigenpairs.  Build once, reuse across beta.
struct Problem {
  DomainPtr domain;
  std::shared_ptr<const StiffnessSolver> solver;
  std::shared_ptr<const Spectrum> spectrum;

  static Problem make(DomainPtr d, int pairs = 3, double eig_tol = 1e-9);
  double lambda1() const { return spectrum->lambda1; }
  double lambda2() const { return spectrum->lambda2; }
};

struct SpectrumPoint {
  double beta = 0.0;
  double alpha = 0.0;
  double mu = 0.0;             // L2 norm of the positive part at |u^-| = 1
  double residual = 0.0;       // relative Euler residual at (alpha, beta)
  double epsilon_final = 0.0;
  int iterations = 0;
  bool converged = false;
  Field u;                     // solution normalized by |u^-|_L2 = 1
  std::vector<double> alpha_checkpoints; // one per continuation stage
  double beta_check = 0.0;     // Dirichlet energy of the renormalized positive part

  std::string to_json() const; // fixed record: beta, alpha, mu, residual,
                               // epsilon_final, iterations, converged
};

/// Relative strong-form residual |W^{-1} A u - beta u^+ + alpha u^-|_L2
/// normalized by |u|_L2 * max(alpha, beta).
double residual_norm(const Domain& d, const Vec& u, double alpha, double beta);
double residual_norm(const Domain& d, const Field& u, double alpha, double beta);

/// Glued two-eigenfunction seed: principal function of the domain minus the
/// ball B(x0, r) on the negative side, principal function of the retained
/// ball piece as the positive boundary bump.  x0 must sit on the boundary and
/// 0 < r < diam/2.  Feasibility under a given beta additionally needs the
/// bump eigenvalue below beta; see seed_bank.
Field seed_feasible(const Problem& p, const Coord& x0, double r);

/// Candidate starts for a cold solve at beta: boundary-anchored glued seeds in
/// both sign orientations (smallest feasible radius per anchor) plus the
/// second-eigenfunction seeds that carry the curve near lambda2.
std::vector<Field> seed_bank(const Problem& p, double beta);

struct MinimizeResult {
  MState state;
  bool converged = false;
  bool want_reseed = false;  // positive support collapsed below 3 nodes
  int iterations = 0;
};

/// Projected descent on the constraint set at fixed kink width eps:
/// stiffness-preconditioned gradient direction, backtracking line search with
/// Armijo sufficient decrease, re-projection after every trial step.  f is
/// nonincreasing across accepted steps.
MinimizeResult minimize_on_M(const Problem& p, double beta, double eps, const FucikParams& prm,
                             MState start, double stat_tol, std::vector<double>* f_log = nullptr);

/// Full point solve: seed (or warm start), kink-width continuation
/// eps_0 > eps_0/2 > ... > eps_floor with warm restarts, multiplier and
/// residual extraction at the final stage.
SpectrumPoint solve_point(const Problem& p, double beta, const FucikParams& prm = {},
                          const Field* warm = nullptr);

} // namespace fucik
