#pragma once

#include "fucik/types.hpp"

namespace fucik {

/// First-curve reference values on an interval (0, L).  The minimizer is a
/// positive half sine of width pi/sqrt(beta) glued to a negative half sine of
/// width pi/sqrt(alpha), so alpha solves pi/sqrt(alpha) + pi/sqrt(beta) = L.
double first_curve_analytic(double length, double beta);

struct ShootResult {
  double alpha = 0.0;
  double beta = 0.0;
  double node = 0.0;        // position of the single interior zero
  double mismatch = 0.0;    // |u(L)| at the returned alpha
  int sign_changes = 0;     // interior zeros of the converged profile
  int bisections = 0;
};

/// Independent check: integrate u'' = -beta u^+ + alpha u^- with u(0)=0 by
/// fixed-step RK4 and bisect alpha until u(L)=0 with one interior zero.
/// positive_first selects the sign of u'(0), i.e. which arc comes first;
/// the default starts negative (sign pattern -,+).
ShootResult shoot_first_curve(double length, double beta, bool positive_first = false,
                              double alpha_tol = 1e-10, int steps = 100000);

} // namespace fucik
