#include "fucik/oracle1d.hpp"

#include <cmath>
#include <numbers>

namespace fucik {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sweep {
  double endpoint = 0.0;     // u(L)
  double first_zero = 0.0;   // position of the first interior crossing
  double second_zero = 0.0;  // position of the second zero, 2L if it never shows
  int interior_zeros = 0;    // crossings at least one step away from x = L
};

// Fixed-step RK4 for u'' = -beta u^+ + alpha u^-, u(0)=0, u'(0)=slope.
Sweep sweep(double length, double beta, double alpha, double slope, int steps) {
  const double h = length / steps;
  double u = 0.0, v = slope;
  Sweep out;
  out.second_zero = 2.0 * length;
  bool second_found = false;
  int crossings = 0;
  auto f = [beta, alpha](double y) { return y > 0.0 ? -beta * y : -alpha * y; };
  // march to 2L so a sluggish negative arc still reports its landing point
  for (int k = 0; k < 2 * steps; ++k) {
    const double x0 = k * h;
    const double uprev = u;
    const double k1u = v, k1v = f(u);
    const double k2u = v + 0.5 * h * k1v, k2v = f(u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = f(u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = f(u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (k == steps - 1) out.endpoint = u;
    if (uprev * u < 0.0) {
      ++crossings;
      // sub-step refinement by linear interpolation
      const double cross = x0 + h * uprev / (uprev - u);
      if (crossings == 1) out.first_zero = cross;
      if (crossings == 2 && !second_found) {
        out.second_zero = cross;
        second_found = true;
      }
      if (x0 + h <= length - h) ++out.interior_zeros;
    }
    if (second_found && x0 > length) break;
  }
  return out;
}

} // namespace

double first_curve_analytic(double length, double beta) {
  require(length > 0.0 && std::isfinite(length), errc::invalid_argument,
          "first_curve_analytic: length must be positive");
  const double lam1 = kPi * kPi / (length * length);
  require(beta > lam1, errc::out_of_range,
          "first_curve_analytic: beta must exceed pi^2/L^2");
  const double gap = length - kPi / std::sqrt(beta);
  return kPi * kPi / (gap * gap);
}

ShootResult shoot_first_curve(double length, double beta, bool positive_first,
                              double alpha_tol, int steps) {
  require(length > 0.0 && std::isfinite(length), errc::invalid_argument,
          "shoot_first_curve: length must be positive");
  require(steps >= 100, errc::invalid_argument, "shoot_first_curve: too few steps");
  require(alpha_tol > 0.0, errc::invalid_argument, "shoot_first_curve: alpha_tol > 0");
  const double lam1 = kPi * kPi / (length * length);
  require(beta > lam1, errc::out_of_range,
          "shoot_first_curve: beta must exceed pi^2/L^2");

  const double slope = positive_first ? 1.0 : -1.0;
  // The second zero sits at the end of the two-arc profile and recedes
  // monotonically as alpha grows, so "second zero past L" brackets from below.
  auto overshoot = [&](double alpha) {
    return sweep(length, beta, alpha, slope, steps).second_zero - length;
  };

  double lo = lam1 * (1.0 + 1e-9);
  require(overshoot(lo) > 0.0, errc::internal, "shoot_first_curve: lower bracket failed");
  double hi = 2.0 * lam1;
  int expand = 0;
  while (overshoot(hi) >= 0.0) {
    hi *= 2.0;
    require(++expand <= 120, errc::convergence_failure,
            "shoot_first_curve: two-arc profile never fits inside the interval");
  }

  ShootResult out;
  while (hi - lo > alpha_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (overshoot(mid) < 0.0 ? hi : lo) = mid;
    ++out.bisections;
  }
  out.alpha = 0.5 * (lo + hi);
  out.beta = beta;
  const Sweep s = sweep(length, beta, out.alpha, slope, steps);
  out.node = s.first_zero;
  out.mismatch = std::abs(s.endpoint);
  out.sign_changes = s.interior_zeros;
  require(out.sign_changes == 1, errc::convergence_failure,
          "shoot_first_curve: converged profile is not a two-arc pattern");
  return out;
}

} // namespace fucik
