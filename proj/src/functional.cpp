#include "fucik/functional.hpp"

#include <algorithm>
#include <cmath>

namespace fucik {

void FucikParams::validate() const {
  require(fiber_tol > 0.0 && fiber_tol < 1e-2, errc::invalid_argument, "fiber_tol out of range");
  require(stat_tol > 0.0 && stat_tol < 1.0, errc::invalid_argument, "stat_tol out of range");
  require(point_tol > 0.0 && point_tol < 1.0, errc::invalid_argument, "point_tol out of range");
  require(armijo > 0.0 && armijo < 0.5, errc::invalid_argument, "armijo factor out of range");
  require(max_iter >= 1, errc::invalid_argument, "max_iter must be at least 1");
  require(eps_decay > 0.0 && eps_decay < 1.0, errc::invalid_argument, "eps_decay must be in (0,1)");
  require(guard >= 0.0, errc::invalid_argument, "guard must be nonnegative");
  require(spectral_pairs >= 2, errc::invalid_argument, "need at least two spectral pairs");
  require(eig_tol > 0.0 && eig_tol < 1e-2, errc::invalid_argument, "eig_tol out of range");
}

double g_eval(double beta, double eps, double tau) {
  require(beta > 0.0 && eps >= 0.0, errc::invalid_argument, "g_eval: beta > 0, eps >= 0 required");
  return tau <= eps ? 0.0 : beta * (tau - eps);
}

double G_eval(double beta, double eps, double tau) {
  require(beta > 0.0 && eps >= 0.0, errc::invalid_argument, "G_eval: beta > 0, eps >= 0 required");
  if (tau <= eps) return 0.0;
  const double s = tau - eps;
  return 0.5 * beta * s * s;
}

double f_value(const Domain& d, double beta, double eps, const Vec& u) {
  require(u.size() == d.size(), errc::domain_mismatch, "f_value: field length mismatch");
  double bulk = 0.0;
  const Vec& w = d.mass();
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] > eps) {
      const double s = u[i] - eps;
      bulk += w[i] * s * s;
    }
  }
  return u.dot(d.stiffness() * u) - beta * bulk;
}

Vec f_gradient(const Domain& d, double beta, double eps, const Vec& u) {
  require(u.size() == d.size(), errc::domain_mismatch, "f_gradient: field length mismatch");
  Vec grad = 2.0 * (d.stiffness() * u);
  const Vec& w = d.mass();
  for (Index i = 0; i < u.size(); ++i)
    if (u[i] > eps) grad[i] -= 2.0 * w[i] * beta * (u[i] - eps);
  return grad;
}

double multiplier_alpha(const Domain& d, const Vec& u) {
  require(u.size() == d.size(), errc::domain_mismatch, "multiplier_alpha: field length mismatch");
  const Vec au = d.stiffness() * u;
  double acc = 0.0;
  for (Index i = 0; i < u.size(); ++i)
    if (u[i] < 0.0) acc += (-u[i]) * au[i];
  return -acc;
}

namespace {

struct FiberData {
  Vec p;          // positive part
  double app;     // p^T A p
  double apm;     // p^T A m  (nonpositive on monotone stencils)
  double pwp;     // |p|_L2^2
  double pmax;
};

FiberData fiber_data(const Domain& d, const Vec& u) {
  FiberData fd;
  fd.p = positive_part(u);
  fd.pmax = fd.p.maxCoeff();
  require(fd.pmax > 0.0, errc::degenerate_sign, "fiber: field has no positive part");
  const Vec ap = d.stiffness() * fd.p;
  const Vec m = negative_part(u);
  fd.app = fd.p.dot(ap);
  fd.apm = m.dot(ap);
  fd.pwp = fd.p.dot(d.mass().cwiseProduct(fd.p));
  return fd;
}

double phi(const Domain& d, double beta, double eps, const FiberData& fd, double t) {
  double gsum = 0.0;
  const Vec& w = d.mass();
  for (Index i = 0; i < fd.p.size(); ++i) {
    const double tp = t * fd.p[i];
    if (tp > eps) gsum += w[i] * beta * (tp - eps) * fd.p[i];
  }
  return t * fd.app - fd.apm - gsum;
}

} // namespace

double fiber_scale(const Domain& d, double beta, double eps, const Vec& u, double tol) {
  require(beta > 0.0 && eps >= 0.0, errc::invalid_argument, "fiber_scale: bad parameters");
  require(tol > 0.0, errc::invalid_argument, "fiber_scale: bad tolerance");
  const FiberData fd = fiber_data(d, u);

  // Large-t slope of the fiber derivative; no root unless it turns negative,
  // i.e. unless the Rayleigh quotient of the positive part sits below beta.
  const double slope = fd.app - beta * fd.pwp;
  if (slope >= 0.0)
    fail(errc::fiber_infeasible,
         "fiber has no critical point: positive-part Rayleigh quotient exceeds beta");

  if (eps == 0.0) {
    // Piecewise-linear case: phi(t) = t * slope - apm.
    if (fd.apm == 0.0)
      fail(errc::fiber_infeasible, "fiber degenerate at eps = 0: decoupled homogeneous ray");
    return fd.apm / slope;
  }

  // phi > 0 below the first kink, and phi -> -inf linearly; bisect the unique
  // sign change.
  double lo = 0.5 * eps / fd.pmax;
  double hi = std::max(2.0 * lo, (-fd.apm + beta * eps * fd.p.sum()) / (-slope) + lo);
  int guard = 0;
  while (phi(d, beta, eps, fd, hi) > 0.0) {
    hi *= 2.0;
    require(++guard < 200, errc::internal, "fiber bracket expansion failed");
  }
  while ((hi - lo) > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (phi(d, beta, eps, fd, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

MState project_to_M(const Domain& d, double beta, double eps, const Vec& u, double fiber_tol) {
  require(u.size() == d.size(), errc::domain_mismatch, "project_to_M: field length mismatch");
  const Vec m = negative_part(u);
  const double nm = std::sqrt(m.dot(d.mass().cwiseProduct(m)));
  require(nm > 0.0, errc::degenerate_sign, "project_to_M: field has no negative part");

  Vec v = positive_part(u) - m / nm;
  const double t = fiber_scale(d, beta, eps, v, fiber_tol);
  Vec res = t * positive_part(v) - m / nm;

  MState st;
  st.f = f_value(d, beta, eps, res);
  st.alpha = multiplier_alpha(d, res);
  st.u = std::move(res);
  return st;
}

} // namespace fucik
