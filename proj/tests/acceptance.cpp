// Acceptance suite: one line per criterion, exit code = number of failures.
// Every numeric claim is checked against an independent reference (closed
// form, finite differences, dense scans) or against the library's own
// recorded residuals at the stated tolerances.

#include "fucik/asymptotics.hpp"
#include "fucik/oracle1d.hpp"
#include "fucik/tracer.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fucik;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return v;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// low-mode random field: Rayleigh quotient stays O(1) so fibers exist at
// moderate beta, unlike white noise whose quotient scales like 1/h^2
Vec low_mode_field(const Domain& d, std::mt19937& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto& xs = d.coords();
  Vec u = Vec::Zero(d.size());
  for (;;) {
    for (int k = 1; k <= 5; ++k) {
      const double c = coef(rng);
      for (Index i = 0; i < d.size(); ++i)
        u[i] += c * std::sin(k * xs[static_cast<size_t>(i)][0]);
    }
    if (positive_part(u).maxCoeff() > 0.0 && negative_part(u).maxCoeff() > 0.0) return u;
    u.setZero();
  }
}

} // namespace

int main() {
  std::printf("first-curve acceptance suite\n");

  // shared problems
  const auto t_setup = std::chrono::steady_clock::now();
  Problem line = Problem::make(Domain::interval(kPi, 799));
  Problem square = Problem::make(Domain::rectangle(kPi, kPi, 199, 199));
  std::printf("setup: interval(pi,799) lambda1=%.6f, square(pi^2,199^2) lambda1=%.6f "
              "lambda2=%.6f [%.1fs]\n",
              line.lambda1(), square.lambda1(), square.lambda2(), elapsed_s(t_setup));

  // ---- criterion 1: 1D oracle agreement over [4.5, 40], 40 points ----
  CurveTrace t1;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    t1 = trace_curve(line, geometric(4.5, 40.0, 40));
    const double secs = elapsed_s(t0);
    double worst = 0.0;
    int converged = 0;
    for (const auto& pt : t1.points) {
      if (!pt.converged) continue;
      ++converged;
      const double ref = first_curve_analytic(kPi, pt.beta);
      worst = std::max(worst, std::abs(pt.alpha - ref) / ref);
    }
    const bool pass = converged == 40 && worst <= 0.01 && secs <= 120.0;
    report(1, pass,
           fmt("%d/40 converged, max relative error vs closed form %.2e <= 1e-2, %.1fs <= 120s",
               converged, worst, secs));
  } catch (const std::exception& e) {
    report(1, false, e.what());
  }

  // ---- criteria 2/3/4 share the interval trace over [lambda2/2, 40] ----
  CurveTrace t14;
  try {
    t14 = trace_curve(line, geometric(0.5 * 4.0, 40.0, 36));
  } catch (const std::exception& e) {
    t14 = CurveTrace{};
    std::printf("interval trace [2,40] failed: %s\n", e.what());
  }

  // ---- criterion 2: lambda2 crossing on interval and square ----
  CurveTrace t2sq;
  try {
    const CrossingReport c1d = check_lambda2_crossing(t14, 4.0, 0.02);
    t2sq = trace_curve(square, geometric(4.55, 8.0, 6));
    const CrossingReport c2d = check_lambda2_crossing(t2sq, 5.0, 0.02);
    report(2, c1d.pass && c2d.pass,
           fmt("interval crossing at beta=%.4f (gap %.2e), square crossing at beta=%.4f "
               "(gap %.2e), both <= 2e-2",
               c1d.beta_at_diagonal, c1d.relative_gap, c2d.beta_at_diagonal, c2d.relative_gap));
  } catch (const std::exception& e) {
    report(2, false, e.what());
  }

  // ---- criterion 5/6 share the square tail over [50, 200] ----
  CurveTrace t5;
  try {
    t5 = trace_curve(square, geometric(50.0, 200.0, 8));
  } catch (const std::exception& e) {
    t5 = CurveTrace{};
    std::printf("square trace [50,200] failed: %s\n", e.what());
  }

  // ---- criterion 3: strict monotonicity of every trace, slack 2e-4 ----
  try {
    bool pass = true;
    std::ostringstream os;
    const CurveTrace* traces[] = {&t1, &t14, &t2sq, &t5};
    const char* names[] = {"interval[4.5,40]", "interval[2,40]", "square[4.55,8]",
                           "square[50,200]"};
    for (int i = 0; i < 4; ++i) {
      const CheckReport r = check_monotone(*traces[i], 2e-4);
      pass = pass && r.pass && !traces[i]->points.empty();
      os << names[i] << ": " << (r.pass ? "ok" : r.detail) << (i < 3 ? "; " : "");
    }
    report(3, pass, os.str());
  } catch (const std::exception& e) {
    report(3, false, e.what());
  }

  // ---- criterion 4: symmetry of the interval trace ----
  try {
    const SymmetryReport r = check_symmetry(t14, 0.02);
    report(4, r.pass,
           fmt("max reflection mismatch %.2e <= 2e-2 over %d points", r.max_mismatch, r.compared));
  } catch (const std::exception& e) {
    report(4, false, e.what());
  }

  // ---- criterion 5: D(beta) decreasing over the square tail ----
  try {
    const DecayReport r = diagnostic_decay(t5, 8, 0.0);
    std::ostringstream os;
    os.precision(3);
    os << "D = ";
    for (size_t i = 0; i < r.tail.size(); ++i) os << (i ? ", " : "") << r.tail[i];
    os << (r.decaying ? " strictly decreasing" : ": " + r.detail);
    report(5, r.decaying, os.str());
  } catch (const std::exception& e) {
    report(5, false, e.what());
  }

  // ---- criterion 6: D(beta) below the k=1 asymptote 16/pi ----
  try {
    const double limit = 16.0 / kPi;
    double worst = 0.0;
    int counted = 0;
    for (const auto& pt : t5.points) {
      if (!pt.converged) continue;
      worst = std::max(worst, pt.diag_value);
      ++counted;
    }
    const bool pass = counted == 8 && worst < limit;
    report(6, pass,
           fmt("max D %.4f < 16/pi = %.4f over %d tail points", worst, limit, counted));
  } catch (const std::exception& e) {
    report(6, false, e.what());
  }

  // ---- criterion 7: certificates at y = (0.5, 0.5), then a boundary sweep ----
  try {
    const Coord y{0.5, 0.5, 0.0};
    bool pass = true;
    int used = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    // the five largest traced betas keep the transition shell inside the square
    std::vector<const TracePoint*> tail;
    for (const auto& pt : t5.points)
      if (pt.converged) tail.push_back(&pt);
    for (size_t i = tail.size() >= 5 ? tail.size() - 5 : 0; i < tail.size(); ++i) {
      const TracePoint& pt = *tail[i];
      const CertificateReport rep = certify_upper_bound(square, pt.beta, y, pt.alpha);
      pass = pass && rep.bound >= pt.alpha * (1.0 - 2e-4);
      worst_margin = std::min(worst_margin, rep.bound - pt.alpha);
      ++used;
    }
    pass = pass && used == 5;

    // moving y toward the boundary lowers e1 and with it the bound
    const double bmax = tail.empty() ? 200.0 : tail.back()->beta;
    double prev = std::numeric_limits<double>::infinity();
    std::ostringstream sweep;
    sweep.precision(4);
    for (double c : {kPi / 2.0, 1.1, 0.8, 0.55}) {
      const double b = certify_upper_bound(square, bmax, {c, c, 0.0}).bound;
      sweep << (c == kPi / 2.0 ? "" : " > ") << b;
      pass = pass && b < prev;
      prev = b;
    }
    report(7, pass,
           fmt("%d certificates dominate traced alpha (min margin %.3f), sweep at beta=%.0f: %s",
               used, worst_margin, bmax, sweep.str().c_str()));
  } catch (const std::exception& e) {
    report(7, false, e.what());
  }

  // ---- criterion 8: every converged point satisfies the Euler residual ----
  try {
    double worst = 0.0;
    int counted = 0;
    for (const CurveTrace* t : {&t1, &t14, &t2sq, &t5}) {
      for (const auto& pt : t->points) {
        if (!pt.converged) continue;
        worst = std::max(worst, pt.residual);
        ++counted;
      }
    }
    report(8, counted > 0 && worst <= 1e-4,
           fmt("max relative Euler residual %.2e <= 1e-4 over %d converged points", worst,
               counted));
  } catch (const std::exception& e) {
    report(8, false, e.what());
  }

  // ---- criterion 9: negative parts approach e1 on the interval ----
  try {
    const Vec e1 = line.spectrum->e1().values();
    double prev = std::numeric_limits<double>::infinity();
    double at40 = 0.0;
    bool pass = true;
    std::ostringstream os;
    os.precision(4);
    for (double beta : {10.0, 20.0, 40.0}) {
      const SpectrumPoint pt = solve_point(line, beta);
      pass = pass && pt.converged;
      const Vec diff = negative_part(pt.u.values()) - e1;
      const double dist2 = l2_inner(*line.domain, diff, diff);
      os << (beta == 10.0 ? "" : " > ") << dist2;
      pass = pass && dist2 < prev;
      prev = dist2;
      if (beta == 40.0) at40 = dist2;
    }
    pass = pass && at40 <= 0.1;
    report(9, pass,
           fmt("squared L2 distance to e1: %s, decreasing; %.4f <= 0.1 at beta=40",
               os.str().c_str(), at40));
  } catch (const std::exception& e) {
    report(9, false, e.what());
  }

  // ---- criterion 10: property suite ----
  try {
    std::ostringstream os;
    bool pass = true;

    // g(tau)/tau strictly increasing past the kink, capped by beta
    {
      bool ok = true;
      for (double beta : {7.0, 40.0}) {
        for (double eps : {1e-3, 0.05}) {
          double prev_ratio = -1.0;
          for (double tau = eps * 1.01; tau < 50.0; tau *= 1.17) {
            const double ratio = g_eval(beta, eps, tau) / tau;
            ok = ok && ratio >= prev_ratio && ratio < beta;
            if (tau > eps) ok = ok && (prev_ratio < 0.0 || ratio > prev_ratio);
            prev_ratio = ratio;
          }
        }
      }
      pass = pass && ok;
      os << "g-ratio monotone " << (ok ? "ok" : "VIOLATED");
    }

    // G' = g by central differences
    {
      bool ok = true;
      double worst = 0.0;
      for (double tau : {0.01, 0.3, 0.5, 0.7, 2.0, 9.0}) {
        const double beta = 23.0, eps = 0.5, dt = 1e-6;
        const double fd = (G_eval(beta, eps, tau + dt) - G_eval(beta, eps, tau - dt)) / (2 * dt);
        worst = std::max(worst, std::abs(fd - g_eval(beta, eps, tau)));
        ok = ok && worst <= 1e-5 * std::max(1.0, beta * tau);
      }
      pass = pass && ok;
      os << "; dG vs g max err " << fmt("%.1e", worst);
    }

    // fiber-root uniqueness against a dense scan, 100 random fields
    {
      DomainPtr d = Domain::interval(kPi, 99);
      std::mt19937 rng(0x5eed);
      int unique_ok = 0, feasible = 0;
      for (int trial = 0; trial < 100; ++trial) {
        const double beta = 35.0 + 2.0 * (trial % 30);
        const double eps = 0.01 + 0.004 * (trial % 9);
        const Vec u = low_mode_field(*d, rng);
        double tbar = 0.0;
        try {
          tbar = fiber_scale(*d, beta, eps, u);
        } catch (const Error&) {
          continue; // infeasible draws do not probe uniqueness
        }
        ++feasible;
        // dense scan of the fiber derivative sign over 3 decades around tbar
        const Vec um = negative_part(u), up = positive_part(u);
        auto phi = [&](double t) {
          const Vec v = (t * up - um).eval();
          const double dt = 1e-7 * std::max(1.0, t);
          return (f_value(*d, beta, eps, (v + (dt * up)).eval()) -
                  f_value(*d, beta, eps, (v - (dt * up)).eval())) /
                 (2 * dt);
        };
        int sign_changes = 0;
        double prev = phi(tbar * 1e-3);
        bool order_ok = prev > 0.0;
        for (int k = 1; k <= 120; ++k) {
          const double t = tbar * std::pow(10.0, -3.0 + 6.0 * k / 120.0);
          const double cur = phi(t);
          if (prev > 0.0 && cur <= 0.0) ++sign_changes;
          if (prev <= 0.0 && cur > 0.0) order_ok = false; // must stay negative
          prev = cur;
        }
        if (sign_changes == 1 && order_ok) ++unique_ok;
        else pass = false;
      }
      pass = pass && feasible >= 80; // the draw must actually exercise the scan
      os << "; fiber uniqueness " << unique_ok << "/" << feasible << " feasible draws";
    }

    // gradient vs finite differences
    {
      DomainPtr d = Domain::interval(kPi, 49);
      std::mt19937 rng(0xfeed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      double worst = 0.0;
      for (int trial = 0; trial < 4; ++trial) {
        Vec u(d->size());
        for (Index i = 0; i < u.size(); ++i) u[i] = dist(rng);
        const double beta = 9.0 + 8.0 * trial, eps = 0.03;
        const Vec grad = f_gradient(*d, beta, eps, u);
        for (Index i = 0; i < u.size(); i += 7) {
          const double dt = 1e-6;
          Vec up = u, dn = u;
          up[i] += dt;
          dn[i] -= dt;
          const double fd = (f_value(*d, beta, eps, up) - f_value(*d, beta, eps, dn)) / (2 * dt);
          worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
        }
      }
      pass = pass && worst <= 1e-6;
      os << "; grad FD err " << fmt("%.1e", worst);
    }

    // no fiber root at or below lambda1
    {
      DomainPtr d = Domain::interval(kPi, 99);
      Problem p99 = Problem::make(d);
      std::mt19937 rng(0xabcd);
      bool ok = true;
      for (int trial = 0; trial < 10; ++trial) {
        const Vec u = low_mode_field(*d, rng);
        for (double beta : {0.5 * p99.lambda1(), p99.lambda1()}) {
          try {
            fiber_scale(*d, beta, 1e-3, u);
            ok = false; // a root below lambda1 contradicts feasibility
          } catch (const Error& e) {
            ok = ok && e.code() == errc::fiber_infeasible;
          }
        }
      }
      pass = pass && ok;
      os << "; infeasible at beta<=lambda1 " << (ok ? "ok" : "VIOLATED");
    }

    // continuation checkpoints never increase alpha beyond roundoff
    {
      bool ok = true;
      for (double beta : {6.0, 12.0}) {
        const SpectrumPoint pt = solve_point(line, beta);
        for (size_t i = 0; i + 1 < pt.alpha_checkpoints.size(); ++i)
          ok = ok && pt.alpha_checkpoints[i + 1] <=
                         pt.alpha_checkpoints[i] * (1.0 + 1e-6);
        ok = ok && pt.alpha_checkpoints.size() >= 2;
      }
      pass = pass && ok;
      os << "; checkpoint monotonicity " << (ok ? "ok" : "VIOLATED");
    }

    report(10, pass, os.str());
  } catch (const std::exception& e) {
    report(10, false, e.what());
  }

  std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
  return g_failures;
}
