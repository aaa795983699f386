#include "fucik/tracer.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace fucik {

namespace {

constexpr const char* kCsvHeader = "beta,alpha,mu,residual,iterations,converged,diag_value";

int thread_budget(size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("FUCIK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(std::min<long>(v, 256));
  }
  return static_cast<int>(std::min<size_t>(hw, jobs));
}

TracePoint make_point(const Domain& d, double lambda1, const SpectrumPoint& sp) {
  TracePoint tp;
  tp.beta = sp.beta;
  tp.alpha = sp.alpha;
  tp.mu = sp.mu;
  tp.residual = sp.residual;
  tp.iterations = sp.iterations;
  tp.converged = sp.converged;
  tp.diag_value = asymptotic_diagnostic_value(d.dimension(), sp.beta, sp.alpha, lambda1);
  return tp;
}

TracePoint failed_point(double beta) {
  TracePoint tp;
  tp.beta = beta;
  tp.alpha = std::numeric_limits<double>::quiet_NaN();
  tp.mu = std::numeric_limits<double>::quiet_NaN();
  tp.residual = std::numeric_limits<double>::quiet_NaN();
  tp.diag_value = std::numeric_limits<double>::quiet_NaN();
  tp.converged = false;
  return tp;
}

// Piecewise-linear evaluation of alpha over the converged points.
double interp_alpha(const std::vector<TracePoint>& pts, double beta) {
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double b0 = pts[i].beta, b1 = pts[i + 1].beta;
    if (beta >= b0 && beta <= b1) {
      const double t = (beta - b0) / (b1 - b0);
      return pts[i].alpha + t * (pts[i + 1].alpha - pts[i].alpha);
    }
  }
  fail(errc::out_of_range, "interp_alpha: beta outside the traced range");
}

std::vector<TracePoint> converged_points(const CurveTrace& t) {
  std::vector<TracePoint> pts;
  for (const auto& p : t.points)
    if (p.converged) pts.push_back(p);
  return pts;
}

} // namespace

std::vector<double> default_beta_grid(const Problem& p, int n) {
  require(n >= 2, errc::invalid_argument, "default_beta_grid: need at least 2 points");
  const double lam1 = p.lambda1();
  double lo = p.lambda2() / 1.1;
  const double hi = 50.0 * lam1;
  lo = std::max(lo, 1.05 * lam1);
  require(hi > lo, errc::invalid_argument, "default_beta_grid: degenerate range");
  std::vector<double> betas(static_cast<size_t>(n));
  const double ratio = hi / lo;
  for (int i = 0; i < n; ++i)
    betas[static_cast<size_t>(i)] = lo * std::pow(ratio, double(i) / double(n - 1));
  return betas;
}

CurveTrace trace_curve(const Problem& p, std::vector<double> betas, const FucikParams& prm,
                       bool warm) {
  require(!betas.empty(), errc::invalid_argument, "trace_curve: empty beta list");
  prm.validate();
  std::sort(betas.begin(), betas.end());
  const Domain& d = *p.domain;
  const double lam1 = p.lambda1();
  for (double b : betas)
    require(std::isfinite(b) && b > lam1 + prm.guard * prm.eig_tol * lam1, errc::out_of_range,
            "trace_curve: every beta must exceed lambda1 plus the guard band");

  CurveTrace t;
  t.domain = p.domain;
  t.lambda1 = lam1;
  t.lambda2 = p.lambda2();
  t.points.resize(betas.size());

  if (warm) {
    Field carry;
    bool have_carry = false;
    double prev_alpha = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < betas.size(); ++i) {
      const double beta = betas[i];
      SpectrumPoint warm_sp;
      bool warm_ok = false;
      if (have_carry) {
        try {
          warm_sp = solve_point(p, beta, prm, &carry);
          warm_ok = true;
        } catch (const Error&) {
        }
      }
      SpectrumPoint sp;
      bool have = false;
      if (warm_ok && warm_sp.converged &&
          warm_sp.alpha <= prev_alpha * (1.0 + 10.0 * prm.point_tol)) {
        sp = std::move(warm_sp);
        have = true;
      } else {
        // a suspect warm point (failed, or alpha jumped back up) gets a cold
        // re-solve; keep whichever run found the lower level
        SpectrumPoint cold_sp;
        bool cold_ok = false;
        try {
          cold_sp = solve_point(p, beta, prm, nullptr);
          cold_ok = true;
        } catch (const Error&) {
        }
        auto better = [](const SpectrumPoint& a, const SpectrumPoint& b) {
          return a.converged != b.converged ? a.converged : a.alpha < b.alpha;
        };
        if (cold_ok && (!warm_ok || better(cold_sp, warm_sp))) {
          sp = std::move(cold_sp);
          have = true;
        } else if (warm_ok) {
          sp = std::move(warm_sp);
          have = true;
        }
      }
      if (!have) {
        t.points[i] = failed_point(beta);
        have_carry = false;
        continue;
      }
      t.points[i] = make_point(d, lam1, sp);
      carry = sp.u;
      have_carry = sp.converged;
      if (sp.converged) prev_alpha = sp.alpha;
    }
    return t;
  }

  const int nthreads = thread_budget(betas.size());
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  std::atomic<size_t> next{0};
  for (int w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w]() {
      // independent factorizations per worker: shared solves would contend
      Problem local = w == 0 ? p : Problem::make(p.domain, prm.spectral_pairs, prm.eig_tol);
      for (size_t i = next.fetch_add(1); i < betas.size(); i = next.fetch_add(1)) {
        try {
          t.points[i] = make_point(d, lam1, solve_point(local, betas[i], prm, nullptr));
        } catch (const Error&) {
          t.points[i] = failed_point(betas[i]);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return t;
}

CheckReport check_monotone(const CurveTrace& t, double slack) {
  require(slack >= 0.0, errc::invalid_argument, "check_monotone: slack >= 0");
  CheckReport r;
  const auto pts = converged_points(t);
  if (pts.size() < 2) {
    r.detail = "fewer than 2 converged points";
    return r;
  }
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1].alpha > pts[i].alpha * (1.0 + slack)) {
      std::ostringstream os;
      os << "alpha rose from " << pts[i].alpha << " to " << pts[i + 1].alpha << " between beta="
         << pts[i].beta << " and beta=" << pts[i + 1].beta;
      r.detail = os.str();
      return r;
    }
  }
  r.pass = true;
  std::ostringstream os;
  os << "alpha non-increasing over " << pts.size() << " of " << t.points.size() << " points";
  r.detail = os.str();
  return r;
}

SymmetryReport check_symmetry(const CurveTrace& t, double rtol) {
  require(rtol > 0.0, errc::invalid_argument, "check_symmetry: rtol > 0");
  SymmetryReport r;
  const auto pts = converged_points(t);
  if (pts.size() < 2) {
    r.detail = "fewer than 2 converged points";
    return r;
  }
  const double blo = pts.front().beta, bhi = pts.back().beta;
  for (const auto& q : pts) {
    if (q.alpha < blo || q.alpha > bhi) continue;
    const double mirrored = interp_alpha(pts, q.alpha);
    const double mismatch = std::abs(mirrored - q.beta) / q.beta;
    r.max_mismatch = std::max(r.max_mismatch, mismatch);
    ++r.compared;
  }
  if (r.compared == 0) {
    r.detail = "no point reflects into the traced beta range";
    return r;
  }
  r.pass = r.max_mismatch <= rtol;
  std::ostringstream os;
  os << "max mismatch " << r.max_mismatch << " over " << r.compared << " reflected points";
  r.detail = os.str();
  return r;
}

CrossingReport check_lambda2_crossing(const CurveTrace& t, double lambda2, double rtol) {
  require(lambda2 > 0.0 && rtol > 0.0, errc::invalid_argument,
          "check_lambda2_crossing: lambda2, rtol > 0");
  CrossingReport r;
  const auto pts = converged_points(t);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double s0 = pts[i].alpha - pts[i].beta;
    const double s1 = pts[i + 1].alpha - pts[i + 1].beta;
    if (s0 >= 0.0 && s1 < 0.0) {
      r.beta_at_diagonal = pts[i].beta + s0 * (pts[i + 1].beta - pts[i].beta) / (s0 - s1);
      r.relative_gap = std::abs(r.beta_at_diagonal - lambda2) / lambda2;
      r.pass = r.relative_gap <= rtol;
      std::ostringstream os;
      os << "diagonal crossing at beta=" << r.beta_at_diagonal << ", relative gap "
         << r.relative_gap;
      r.detail = os.str();
      return r;
    }
  }
  r.detail = "trace does not straddle the diagonal";
  return r;
}

double asymptotic_diagnostic_value(int dimension, double beta, double alpha, double lambda1) {
  require(dimension >= 1 && dimension <= 3, errc::unsupported,
          "asymptotic_diagnostic_value: dimension must be 1, 2 or 3");
  require(beta > 0.0, errc::invalid_argument, "asymptotic_diagnostic_value: beta > 0");
  const double gap = alpha - lambda1;
  if (dimension == 1) return gap;
  if (dimension == 2) return gap * std::log(beta);
  return gap * std::pow(beta, 0.5 * (dimension - 2));
}

DecayReport diagnostic_decay(const CurveTrace& t, int count, double slack) {
  require(slack >= 0.0, errc::invalid_argument, "diagnostic_decay: slack >= 0");
  DecayReport r;
  const auto pts = converged_points(t);
  if (pts.size() < 2) {
    r.detail = "fewer than 2 converged points";
    return r;
  }
  if (count <= 0) count = static_cast<int>(pts.size()) / 2;
  count = std::clamp(count, 2, static_cast<int>(pts.size()));
  const size_t first = pts.size() - static_cast<size_t>(count);
  for (size_t i = first; i < pts.size(); ++i) r.tail.push_back(pts[i].diag_value);
  for (size_t i = 0; i + 1 < r.tail.size(); ++i) {
    if (r.tail[i + 1] > r.tail[i] + slack * std::abs(r.tail[i])) {
      std::ostringstream os;
      os << "diagnostic rose from " << r.tail[i] << " to " << r.tail[i + 1] << " at beta="
         << pts[first + i + 1].beta;
      r.detail = os.str();
      return r;
    }
  }
  r.decaying = true;
  std::ostringstream os;
  os << "diagnostic decreasing over the trailing " << r.tail.size() << " points";
  r.detail = os.str();
  return r;
}

void write_csv(const CurveTrace& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, errc::io_error, "write_csv: cannot open " + path);
  bool ok = std::fprintf(f, "# first-curve trace lambda1=%.17g lambda2=%.17g\n%s\n", t.lambda1,
                         t.lambda2, kCsvHeader) > 0;
  for (const auto& p : t.points) {
    ok = ok && std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n", p.beta, p.alpha, p.mu,
                            p.residual, p.iterations, p.converged ? 1 : 0, p.diag_value) > 0;
  }
  ok = std::fclose(f) == 0 && ok;
  require(ok, errc::io_error, "write_csv: write failed for " + path);
}

CurveTrace read_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "read_csv: cannot open " + path);
  CurveTrace t;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(line.c_str(), "# first-curve trace lambda1=%lf lambda2=%lf", &t.lambda1,
                  &t.lambda2);
      continue;
    }
    if (!header_seen) {
      require(line == kCsvHeader, errc::io_error,
              "read_csv: unrecognized header at line " + std::to_string(lineno));
      header_seen = true;
      continue;
    }
    TracePoint p;
    int conv = 0;
    const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d,%d,%lf", &p.beta, &p.alpha, &p.mu,
                              &p.residual, &p.iterations, &conv, &p.diag_value);
    require(n == 7, errc::io_error, "read_csv: malformed row at line " + std::to_string(lineno));
    p.converged = conv != 0;
    t.points.push_back(p);
  }
  require(header_seen, errc::io_error, "read_csv: missing header in " + path);
  return t;
}

void emit_plot_data(const CurveTrace& t, const std::string& curve_path,
                    const std::string& diag_path) {
  require(!t.points.empty(), errc::invalid_argument, "emit_plot_data: empty trace");
  std::FILE* f = std::fopen(curve_path.c_str(), "w");
  require(f != nullptr, errc::io_error, "emit_plot_data: cannot open " + curve_path);
  bool ok = std::fprintf(f, "# beta alpha\n") > 0;
  for (const auto& p : t.points)
    ok = ok && std::fprintf(f, "%.17g %.17g\n", p.beta, p.alpha) > 0;
  ok = std::fclose(f) == 0 && ok;
  require(ok, errc::io_error, "emit_plot_data: write failed for " + curve_path);

  f = std::fopen(diag_path.c_str(), "w");
  require(f != nullptr, errc::io_error, "emit_plot_data: cannot open " + diag_path);
  ok = std::fprintf(f, "# beta diagnostic\n") > 0;
  for (const auto& p : t.points)
    ok = ok && std::fprintf(f, "%.17g %.17g\n", p.beta, p.diag_value) > 0;
  ok = std::fclose(f) == 0 && ok;
  require(ok, errc::io_error, "emit_plot_data: write failed for " + diag_path);
}

std::string CurveTrace::to_json() const {
  nlohmann::json j;
  j["lambda1"] = lambda1;
  j["lambda2"] = lambda2;
  auto arr = nlohmann::json::array();
  for (const auto& p : points) {
    arr.push_back({{"beta", p.beta},
                   {"alpha", p.alpha},
                   {"mu", p.mu},
                   {"residual", p.residual},
                   {"iterations", p.iterations},
                   {"converged", p.converged},
                   {"diag_value", p.diag_value}});
  }
  j["points"] = std::move(arr);
  return j.dump();
}

} // namespace fucik
