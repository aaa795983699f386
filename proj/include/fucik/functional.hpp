#pragma once

#include "fucik/domain.hpp"

namespace fucik {

/// Solver knobs.  Tolerances are relative to the natural scale of the point
/// (max(alpha, beta) times the field norm for residuals).
struct FucikParams {
  double fiber_tol = 1e-12;   // relative width of the fiber-scale bracket
  double stat_tol = 2e-6;     // stationarity target at the final continuation stage
  double point_tol = 1e-4;    // certified relative Euler residual for a converged point
  double armijo = 1e-4;       // sufficient-decrease factor in the line search
  int max_iter = 600;         // descent iterations per continuation stage
  double eps_initial = 0.0;   // absolute; <= 0 selects 0.1 * max of the seed positive part
  double eps_decay = 0.5;     // geometric kink-width decay per stage
  double eps_floor = 0.0;     // absolute; <= 0 selects max(1e-8, min_spacing^2/8)
  double guard = 10.0;        // refuse beta below lambda1 + guard * eigenvalue tolerance
  int spectral_pairs = 3;     // eigenpairs cached alongside the domain
  double eig_tol = 1e-9;

  void validate() const;
};

/// Regularized slope: 0 for tau <= eps, beta * (tau - eps) beyond.  The ratio
/// g(tau)/tau increases strictly on (eps, inf), which pins a unique fiber root.
double g_eval(double beta, double eps, double tau);
/// Primitive of g with G(0) = 0.
double G_eval(double beta, double eps, double tau);

/// f(u) = u^T A u - 2 sum_i w_i G(u_i).
double f_value(const Domain& d, double beta, double eps, const Vec& u);
/// Euclidean gradient of f: 2 (A u - W g(u)).
Vec f_gradient(const Domain& d, double beta, double eps, const Vec& u);

/// Discrete counterpart of the constraint multiplier: -<u^-, A u>.  Equals the
/// Dirichlet energy of u^- plus the sign-edge cross energy, i.e. the split
/// that makes the stationarity identity exact on the grid.
double multiplier_alpha(const Domain& d, const Vec& u);

/// Unique t > 0 with d/dt f(-u^- + t u^+) = 0, found by bracketing and
/// bisection on the full quadratic form (cross terms included).  Throws
/// fiber_infeasible when the positive part is too stiff for beta (no root),
/// degenerate_sign when u has no positive part.
double fiber_scale(const Domain& d, double beta, double eps, const Vec& u, double tol = 1e-12);

/// Iterate pinned to the constraint set:  |u^-|_L2 = 1  and fiber-critical
/// positive part.
struct MState {
  Vec u;
  double f = 0.0;          // f(u) at the current (beta, eps)
  double alpha = 0.0;      // multiplier_alpha(u)
  double grad_norm = 0.0;  // weighted norm of the projected gradient
  int iterations = 0;
};

/// Normalize the negative part to unit L2 norm, then rescale the positive part
/// to its fiber-critical size.  Idempotent on points already pinned.
MState project_to_M(const Domain& d, double beta, double eps, const Vec& u,
                    double fiber_tol = 1e-12);

} // namespace fucik
