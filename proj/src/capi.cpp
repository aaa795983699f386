#include "fucik/fucik.h"

#include "fucik/asymptotics.hpp"
#include "fucik/oracle1d.hpp"
#include "fucik/solver.hpp"
#include "fucik/tracer.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct fucik_domain {
  fucik::DomainPtr d;
};
struct fucik_problem {
  fucik::Problem p;
};
struct fucik_trace {
  fucik::CurveTrace t;
};

namespace {

thread_local std::string g_last_error;

fucik_status map_code(fucik::errc c) {
  using fucik::errc;
  switch (c) {
    case errc::ok: return FUCIK_OK;
    case errc::invalid_argument: return FUCIK_EINVAL;
    case errc::degenerate_domain: return FUCIK_EDEGENERATE_DOMAIN;
    case errc::domain_mismatch: return FUCIK_EDOMAIN_MISMATCH;
    case errc::degenerate_sign: return FUCIK_EDEGENERATE_SIGN;
    case errc::fiber_infeasible: return FUCIK_EFIBER_INFEASIBLE;
    case errc::convergence_failure: return FUCIK_ECONVERGENCE;
    case errc::out_of_range: return FUCIK_ERANGE;
    case errc::infeasible_certificate: return FUCIK_ECERTIFICATE;
    case errc::not_applicable: return FUCIK_ENOT_APPLICABLE;
    case errc::io_error: return FUCIK_EIO;
    case errc::unsupported: return FUCIK_EUNSUPPORTED;
    case errc::internal: return FUCIK_EINTERNAL;
  }
  return FUCIK_EINTERNAL;
}

template <class F>
fucik_status guarded(F&& body) {
  try {
    body();
    return FUCIK_OK;
  } catch (const fucik::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FUCIK_EINTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FUCIK_EINTERNAL;
  }
}

fucik_status einval(const char* msg) {
  g_last_error = msg;
  return FUCIK_EINVAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fucik::FucikParams to_params(const fucik_params* prm) {
  fucik::FucikParams q;
  if (prm == nullptr) return q;
  q.fiber_tol = prm->fiber_tol;
  q.stat_tol = prm->stat_tol;
  q.point_tol = prm->point_tol;
  q.armijo = prm->armijo;
  q.max_iter = prm->max_iter;
  q.eps_initial = prm->eps_initial;
  q.eps_decay = prm->eps_decay;
  q.eps_floor = prm->eps_floor;
  q.guard = prm->guard;
  q.spectral_pairs = prm->spectral_pairs;
  q.eig_tol = prm->eig_tol;
  return q;
}

void fill_point(const fucik::SpectrumPoint& sp, fucik_point* out) {
  out->beta = sp.beta;
  out->alpha = sp.alpha;
  out->mu = sp.mu;
  out->residual = sp.residual;
  out->epsilon_final = sp.epsilon_final;
  out->diag_value = 0.0;
  out->iterations = sp.iterations;
  out->converged = sp.converged ? 1 : 0;
}

void fill_check(bool pass, double value, const std::string& detail, fucik_check* out) {
  out->pass = pass ? 1 : 0;
  out->value = value;
  std::snprintf(out->detail, sizeof(out->detail), "%s", detail.c_str());
}

} // namespace

extern "C" {

const char* fucik_status_name(fucik_status s) {
  switch (s) {
    case FUCIK_OK: return "ok";
    case FUCIK_EINVAL: return "invalid-argument";
    case FUCIK_EDEGENERATE_DOMAIN: return "degenerate-domain";
    case FUCIK_EDOMAIN_MISMATCH: return "domain-mismatch";
    case FUCIK_EDEGENERATE_SIGN: return "degenerate-sign";
    case FUCIK_EFIBER_INFEASIBLE: return "fiber-infeasible";
    case FUCIK_ECONVERGENCE: return "convergence-failure";
    case FUCIK_ERANGE: return "out-of-range";
    case FUCIK_ECERTIFICATE: return "infeasible-certificate";
    case FUCIK_ENOT_APPLICABLE: return "not-applicable";
    case FUCIK_EIO: return "io-error";
    case FUCIK_EUNSUPPORTED: return "unsupported";
    case FUCIK_EINTERNAL: return "internal";
  }
  return "unknown";
}

const char* fucik_last_error(void) { return g_last_error.c_str(); }

fucik_status fucik_domain_interval(double length, int n, fucik_domain** out) {
  if (out == nullptr) return einval("fucik_domain_interval: null out");
  *out = nullptr;
  return guarded([&] { *out = new fucik_domain{fucik::Domain::interval(length, n)}; });
}

fucik_status fucik_domain_rectangle(double lx, double ly, int nx, int ny, fucik_domain** out) {
  if (out == nullptr) return einval("fucik_domain_rectangle: null out");
  *out = nullptr;
  return guarded([&] { *out = new fucik_domain{fucik::Domain::rectangle(lx, ly, nx, ny)}; });
}

fucik_status fucik_domain_ball(int dimension, double radius, int n, fucik_domain** out) {
  if (out == nullptr) return einval("fucik_domain_ball: null out");
  *out = nullptr;
  return guarded([&] { *out = new fucik_domain{fucik::Domain::ball(dimension, radius, n)}; });
}

void fucik_domain_destroy(fucik_domain* d) { delete d; }

fucik_status fucik_domain_describe(const fucik_domain* d, char** json_out) {
  if (d == nullptr || json_out == nullptr) return einval("fucik_domain_describe: null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(d->d->to_json()); });
}

fucik_status fucik_problem_create(const fucik_domain* d, fucik_problem** out) {
  if (d == nullptr || out == nullptr) return einval("fucik_problem_create: null argument");
  *out = nullptr;
  return guarded([&] { *out = new fucik_problem{fucik::Problem::make(d->d)}; });
}

void fucik_problem_destroy(fucik_problem* p) { delete p; }

fucik_status fucik_problem_eigenvalues(const fucik_problem* p, double* lambda1, double* lambda2) {
  if (p == nullptr) return einval("fucik_problem_eigenvalues: null problem");
  return guarded([&] {
    if (lambda1 != nullptr) *lambda1 = p->p.lambda1();
    if (lambda2 != nullptr) *lambda2 = p->p.lambda2();
  });
}

void fucik_params_init(fucik_params* prm) {
  if (prm == nullptr) return;
  const fucik::FucikParams q;
  prm->fiber_tol = q.fiber_tol;
  prm->stat_tol = q.stat_tol;
  prm->point_tol = q.point_tol;
  prm->armijo = q.armijo;
  prm->max_iter = q.max_iter;
  prm->eps_initial = q.eps_initial;
  prm->eps_decay = q.eps_decay;
  prm->eps_floor = q.eps_floor;
  prm->guard = q.guard;
  prm->spectral_pairs = q.spectral_pairs;
  prm->eig_tol = q.eig_tol;
}

fucik_status fucik_solve_point(const fucik_problem* p, double beta, const fucik_params* prm,
                               fucik_point* out) {
  if (p == nullptr || out == nullptr) return einval("fucik_solve_point: null argument");
  return guarded([&] { fill_point(fucik::solve_point(p->p, beta, to_params(prm)), out); });
}

fucik_status fucik_solve_point_json(const fucik_problem* p, double beta,
                                    const fucik_params* prm, char** json_out) {
  if (p == nullptr || json_out == nullptr) return einval("fucik_solve_point_json: null argument");
  *json_out = nullptr;
  return guarded(
      [&] { *json_out = dup_string(fucik::solve_point(p->p, beta, to_params(prm)).to_json()); });
}

fucik_status fucik_trace_default_grid(const fucik_problem* p, int n, double** betas_out,
                                      size_t* count_out) {
  if (p == nullptr || betas_out == nullptr || count_out == nullptr)
    return einval("fucik_trace_default_grid: null argument");
  *betas_out = nullptr;
  *count_out = 0;
  return guarded([&] {
    const auto grid = fucik::default_beta_grid(p->p, n);
    double* buf = static_cast<double*>(std::malloc(grid.size() * sizeof(double)));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, grid.data(), grid.size() * sizeof(double));
    *betas_out = buf;
    *count_out = grid.size();
  });
}

fucik_status fucik_trace_curve(const fucik_problem* p, const double* betas, size_t count,
                               const fucik_params* prm, int parallel, fucik_trace** out) {
  if (p == nullptr || betas == nullptr || out == nullptr)
    return einval("fucik_trace_curve: null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<double> bs(betas, betas + count);
    *out = new fucik_trace{fucik::trace_curve(p->p, std::move(bs), to_params(prm), parallel == 0)};
  });
}

void fucik_trace_destroy(fucik_trace* t) { delete t; }

size_t fucik_trace_size(const fucik_trace* t) { return t == nullptr ? 0 : t->t.points.size(); }

fucik_status fucik_trace_get(const fucik_trace* t, size_t index, fucik_point* out) {
  if (t == nullptr || out == nullptr) return einval("fucik_trace_get: null argument");
  if (index >= t->t.points.size()) {
    g_last_error = "fucik_trace_get: index out of range";
    return FUCIK_ERANGE;
  }
  const auto& q = t->t.points[index];
  out->beta = q.beta;
  out->alpha = q.alpha;
  out->mu = q.mu;
  out->residual = q.residual;
  out->epsilon_final = 0.0;
  out->diag_value = q.diag_value;
  out->iterations = q.iterations;
  out->converged = q.converged ? 1 : 0;
  return FUCIK_OK;
}

fucik_status fucik_trace_write_csv(const fucik_trace* t, const char* path) {
  if (t == nullptr || path == nullptr) return einval("fucik_trace_write_csv: null argument");
  return guarded([&] { fucik::write_csv(t->t, path); });
}

fucik_status fucik_trace_read_csv(const char* path, fucik_trace** out) {
  if (path == nullptr || out == nullptr) return einval("fucik_trace_read_csv: null argument");
  *out = nullptr;
  return guarded([&] { *out = new fucik_trace{fucik::read_csv(path)}; });
}

fucik_status fucik_trace_to_json(const fucik_trace* t, char** json_out) {
  if (t == nullptr || json_out == nullptr) return einval("fucik_trace_to_json: null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(t->t.to_json()); });
}

fucik_status fucik_trace_emit_plot(const fucik_trace* t, const char* curve_path,
                                   const char* diag_path) {
  if (t == nullptr || curve_path == nullptr || diag_path == nullptr)
    return einval("fucik_trace_emit_plot: null argument");
  return guarded([&] {
    fucik::require(!t->t.points.empty(), fucik::errc::invalid_argument,
                   "fucik_trace_emit_plot: empty trace");
    fucik::emit_plot_data(t->t, curve_path, diag_path);
  });
}

fucik_status fucik_check_monotone(const fucik_trace* t, double slack, fucik_check* out) {
  if (t == nullptr || out == nullptr) return einval("fucik_check_monotone: null argument");
  return guarded([&] {
    const auto r = fucik::check_monotone(t->t, slack);
    double worst = 0.0;
    const fucik::TracePoint* prev = nullptr;
    for (const auto& q : t->t.points) {
      if (!q.converged) continue;
      if (prev != nullptr && q.alpha > prev->alpha)
        worst = std::max(worst, (q.alpha - prev->alpha) / prev->alpha);
      prev = &q;
    }
    fill_check(r.pass, worst, r.detail, out);
  });
}

fucik_status fucik_check_symmetry(const fucik_trace* t, double rtol, fucik_check* out) {
  if (t == nullptr || out == nullptr) return einval("fucik_check_symmetry: null argument");
  return guarded([&] {
    const auto r = fucik::check_symmetry(t->t, rtol);
    fill_check(r.pass, r.max_mismatch, r.detail, out);
  });
}

fucik_status fucik_check_crossing(const fucik_trace* t, double lambda2, double rtol,
                                  fucik_check* out) {
  if (t == nullptr || out == nullptr) return einval("fucik_check_crossing: null argument");
  return guarded([&] {
    const auto r = fucik::check_lambda2_crossing(t->t, lambda2, rtol);
    fill_check(r.pass, r.beta_at_diagonal, r.detail, out);
  });
}

fucik_status fucik_check_decay(const fucik_trace* t, int count, double slack, fucik_check* out) {
  if (t == nullptr || out == nullptr) return einval("fucik_check_decay: null argument");
  return guarded([&] {
    const auto r = fucik::diagnostic_decay(t->t, count, slack);
    fill_check(r.decaying, r.tail.empty() ? 0.0 : r.tail.back(), r.detail, out);
  });
}

fucik_status fucik_check_separation(const fucik_trace* t, const fucik_problem* p, int k,
                                    fucik_check* out) {
  if (t == nullptr || p == nullptr || out == nullptr)
    return einval("fucik_check_separation: null argument");
  return guarded([&] {
    const auto r = fucik::separation_check(t->t, fucik::asymptote_model(p->p, k));
    fill_check(r.pass, r.max_diag, r.detail, out);
  });
}

fucik_status fucik_rbar1(int dimension, double* out) {
  if (out == nullptr) return einval("fucik_rbar1: null out");
  return guarded([&] { *out = fucik::rbar1(dimension); });
}

fucik_status fucik_capacity(double radius, int dimension, double* out) {
  if (out == nullptr) return einval("fucik_capacity: null out");
  return guarded([&] { *out = fucik::capacity(radius, dimension); });
}

fucik_status fucik_epsilon_beta(int dimension, double beta, double* out) {
  if (out == nullptr) return einval("fucik_epsilon_beta: null out");
  return guarded([&] { *out = fucik::epsilon_beta(dimension, beta); });
}

fucik_status fucik_k_curve_asymptote(const fucik_problem* p, int k, double* out) {
  if (p == nullptr || out == nullptr) return einval("fucik_k_curve_asymptote: null argument");
  return guarded([&] { *out = fucik::k_curve_asymptote(fucik::asymptote_model(p->p, k)); });
}

fucik_status fucik_certify(const fucik_problem* p, double beta, const double y[3],
                           double alpha_traced, double* bound_out, char** json_out) {
  if (p == nullptr || y == nullptr) return einval("fucik_certify: null argument");
  if (json_out != nullptr) *json_out = nullptr;
  return guarded([&] {
    const auto rep =
        fucik::certify_upper_bound(p->p, beta, fucik::Coord{y[0], y[1], y[2]}, alpha_traced);
    if (bound_out != nullptr) *bound_out = rep.bound;
    if (json_out != nullptr) *json_out = dup_string(rep.to_json());
  });
}

fucik_status fucik_oracle_analytic(double length, double beta, double* alpha_out) {
  if (alpha_out == nullptr) return einval("fucik_oracle_analytic: null out");
  return guarded([&] { *alpha_out = fucik::first_curve_analytic(length, beta); });
}

fucik_status fucik_oracle_shoot(double length, double beta, double* alpha_out) {
  if (alpha_out == nullptr) return einval("fucik_oracle_shoot: null out");
  return guarded([&] { *alpha_out = fucik::shoot_first_curve(length, beta).alpha; });
}

void fucik_string_free(char* s) { std::free(s); }
void fucik_buffer_free(double* b) { std::free(b); }

} // extern "C"
