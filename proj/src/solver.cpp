#include "fucik/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fucik {

Problem Problem::make(DomainPtr d, int pairs, double eig_tol) {
  require(d != nullptr, errc::invalid_argument, "Problem::make: null domain");
  Problem p;
  p.domain = d;
  p.solver = std::make_shared<StiffnessSolver>(d);
  p.spectrum = std::make_shared<Spectrum>(Spectrum::compute(d, pairs, eig_tol));
  return p;
}

double residual_norm(const Domain& d, const Vec& u, double alpha, double beta) {
  require(u.size() == d.size(), errc::domain_mismatch, "residual_norm: field length mismatch");
  require(alpha > 0.0 && beta > 0.0, errc::invalid_argument, "residual_norm: alpha, beta > 0");
  const Vec& w = d.mass();
  const Vec r = (d.stiffness() * u).cwiseQuotient(w) - beta * positive_part(u) + alpha * negative_part(u);
  const double unorm = std::sqrt(u.dot(w.cwiseProduct(u)));
  require(unorm > 0.0, errc::degenerate_sign, "residual_norm: zero field");
  return std::sqrt(r.dot(w.cwiseProduct(r))) / (unorm * std::max(alpha, beta));
}

double residual_norm(const Domain& d, const Field& u, double alpha, double beta) {
  check_domain(d, u, "residual_norm");
  return residual_norm(d, u.values(), alpha, beta);
}

namespace {

std::vector<Index> nodes_within(const Domain& d, const Coord& x0, double r, bool inside) {
  std::vector<Index> out;
  const auto& xs = d.coords();
  for (Index i = 0; i < d.size(); ++i) {
    const auto& x = xs[static_cast<size_t>(i)];
    double dist2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double t = x[static_cast<size_t>(a)] - x0[static_cast<size_t>(a)];
      dist2 += t * t;
    }
    const bool in = std::sqrt(dist2) < r;
    if (in == inside) out.push_back(i);
  }
  return out;
}

Vec glue_seed(const Domain& d, const std::vector<Index>& bump, const GeneralizedPair& bump_pair,
              const std::vector<Index>& rest, const Vec& rest_values) {
  Vec u = Vec::Zero(d.size());
  for (size_t s = 0; s < bump.size(); ++s) u[bump[s]] = std::abs(bump_pair.e[static_cast<Index>(s)]);
  for (size_t s = 0; s < rest.size(); ++s) u[rest[s]] = -std::abs(rest_values[static_cast<Index>(s)]);
  return u;
}

std::vector<Coord> boundary_anchors(const Domain& d) {
  switch (d.shape()) {
    case Shape::interval:
      return {{0.0, 0.0, 0.0}, {d.extent()[0], 0.0, 0.0}};
    case Shape::rectangle: {
      const double lx = d.extent()[0], ly = d.extent()[1];
      return {{0.0, 0.0, 0.0}, {lx, 0.0, 0.0},     {0.0, ly, 0.0},      {lx, ly, 0.0},
              {lx / 2, 0.0, 0.0}, {lx / 2, ly, 0.0}, {0.0, ly / 2, 0.0}, {lx, ly / 2, 0.0}};
    }
    case Shape::ball: {
      const double R = d.extent()[0];
      std::vector<Coord> a = {{R, 0.0, 0.0}, {-R, 0.0, 0.0}, {0.0, R, 0.0}, {0.0, -R, 0.0}};
      if (d.dimension() == 3) {
        a.push_back({0.0, 0.0, R});
        a.push_back({0.0, 0.0, -R});
      }
      return a;
    }
  }
  return {};
}

constexpr double kSeedRayleighMargin = 0.95; // bump eigenvalue must clear beta by this factor

/// Smallest scanned bump radius at x0 that yields a usable glued seed.  With
/// the bump on the positive side its retained-ball ground state must be soft
/// enough for beta.  Flipped seeds carry the bump on the negative side; there
/// the wide complement takes the positive sign, its stiffness is near lambda1
/// for small radii, and the fiber projection is the authoritative gate, so
/// only the node counts constrain the radius.
std::optional<Vec> anchor_seed(const Problem& p, const Coord& x0, double beta,
                               double radius_scale, bool bump_positive) {
  const Domain& d = *p.domain;
  const double half_diam = 0.5 * d.diameter();
  for (double frac : {0.04, 0.08, 0.15, 0.25, 0.40, 0.60, 0.90}) {
    const double r = radius_scale * frac * half_diam;
    if (r >= half_diam) continue;
    auto bump = nodes_within(d, x0, r, true);
    if (bump.size() < 3) continue;
    auto rest = nodes_within(d, x0, r, false);
    if (rest.size() < 3) continue;
    const auto pair = subgrid_principal_pair(d, bump);
    if (bump_positive && pair.lambda >= kSeedRayleighMargin * beta) continue;

    Vec rest_values(static_cast<Index>(rest.size()));
    const Vec& e1 = p.spectrum->e1().values();
    for (size_t s = 0; s < rest.size(); ++s) rest_values[static_cast<Index>(s)] = e1[rest[s]];
    const double nrm = rest_values.norm();
    if (nrm == 0.0) continue;
    return glue_seed(d, bump, pair, rest, rest_values);
  }
  return std::nullopt;
}

int positive_support(const Vec& u) {
  int n = 0;
  for (Index i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) ++n;
  return n;
}

struct StageSchedule {
  std::vector<double> eps;
};

StageSchedule make_schedule(double eps0, double decay, double floor) {
  StageSchedule s;
  double e = std::max(eps0, floor);
  while (e > floor) {
    s.eps.push_back(e);
    e = std::max(e * decay, floor);
  }
  s.eps.push_back(floor);
  return s;
}

struct CandidateResult {
  MState state;
  bool converged = false;
  int iterations = 0;
  std::vector<double> checkpoints;
  double eps_final = 0.0;
};

std::optional<CandidateResult> run_continuation(const Problem& p, double beta,
                                                const FucikParams& prm, const Vec& seed,
                                                bool warm) {
  const Domain& d = *p.domain;
  const double hmin = d.min_spacing();
  const double floor_eps =
      prm.eps_floor > 0.0 ? prm.eps_floor : std::max(1e-8, 0.125 * hmin * hmin);
  const double pmax = positive_part(seed).maxCoeff();
  if (pmax <= 0.0) return std::nullopt;
  // a warm start already sits in the basin: skip most of the ladder
  const double eps0 =
      prm.eps_initial > 0.0 ? prm.eps_initial : (warm ? 4.0 * floor_eps : 0.1 * pmax);
  const auto schedule = make_schedule(eps0, prm.eps_decay, floor_eps);

  CandidateResult res;
  MState st;
  try {
    st = project_to_M(d, beta, schedule.eps.front(), seed, prm.fiber_tol);
  } catch (const Error& e) {
    if (e.code() == errc::fiber_infeasible || e.code() == errc::degenerate_sign)
      return std::nullopt;
    throw;
  }

  bool all_converged = true;
  for (size_t k = 0; k < schedule.eps.size(); ++k) {
    const double eps = schedule.eps[k];
    const bool final_stage = (k + 1 == schedule.eps.size());
    const double stage_tol = final_stage ? prm.stat_tol : std::max(prm.stat_tol, 2e-4);
    MinimizeResult mr;
    try {
      mr = minimize_on_M(p, beta, eps, prm, std::move(st), stage_tol);
    } catch (const Error& e) {
      if (e.code() == errc::fiber_infeasible || e.code() == errc::degenerate_sign)
        return std::nullopt;
      throw;
    }
    res.iterations += mr.iterations;
    if (mr.want_reseed) return std::nullopt; // caller retries with a wider bump
    st = std::move(mr.state);
    res.checkpoints.push_back(st.alpha);
    if (final_stage) all_converged = mr.converged;
    res.eps_final = eps;
  }
  res.state = std::move(st);
  res.converged = all_converged;
  return res;
}

} // namespace

Field seed_feasible(const Problem& p, const Coord& x0, double r) {
  const Domain& d = *p.domain;
  const double diam = d.diameter();
  require(r > 0.0 && r < 0.5 * diam, errc::out_of_range,
          "seed radius must lie in (0, diam/2)");
  const double bd = d.boundary_distance(x0);
  require(std::abs(bd) <= 0.51 * d.min_spacing(), errc::invalid_argument,
          "seed anchor must lie on the domain boundary");

  auto bump = nodes_within(d, x0, r, true);
  auto rest = nodes_within(d, x0, r, false);
  require(bump.size() >= 3, errc::degenerate_domain, "seed bump holds fewer than 3 nodes");
  require(rest.size() >= 3, errc::degenerate_domain, "seed remainder holds fewer than 3 nodes");

  const auto bump_pair = subgrid_principal_pair(d, bump);
  const auto rest_pair = subgrid_principal_pair(d, rest);
  Vec rv(static_cast<Index>(rest.size()));
  for (Index s = 0; s < rv.size(); ++s) rv[s] = rest_pair.e[s];
  return Field(p.domain, glue_seed(d, bump, bump_pair, rest, rv));
}

std::vector<Field> seed_bank(const Problem& p, double beta) {
  const Domain& d = *p.domain;
  std::vector<Field> bank;
  for (const auto& x0 : boundary_anchors(d)) {
    if (auto s = anchor_seed(p, x0, beta, 1.0, true)) bank.emplace_back(p.domain, *s);
    // swapped sign roles: smallest-radius negative bump, complement positive
    if (auto s = anchor_seed(p, x0, beta, 1.0, false)) bank.emplace_back(p.domain, Vec(-*s));
  }
  // Second-eigenfunction seeds carry the curve through the crossing at
  // (lambda2, lambda2), where the minimizer balances both nodal domains.
  const Vec& e2 = p.spectrum->e2().values();
  bank.emplace_back(p.domain, e2);
  bank.emplace_back(p.domain, Vec(-e2));
  return bank;
}

MinimizeResult minimize_on_M(const Problem& p, double beta, double eps, const FucikParams& prm,
                             MState start, double stat_tol, std::vector<double>* f_log) {
  const Domain& d = *p.domain;
  const Vec& w = d.mass();
  MinimizeResult out;
  MState cur = std::move(start);
  auto inner = [&w](const Vec& a, const Vec& b) { return a.dot(w.cwiseProduct(b)); };

  // limited-memory quasi-Newton correction of the stiffness preconditioner;
  // pairs live in the mass inner product, the seed operator is A^{-1}W
  constexpr size_t kMemory = 10;
  std::vector<Vec> mem_s, mem_y;
  std::vector<double> mem_rho;
  Vec prev_u, prev_grad;
  bool have_prev = false;

  for (int it = 0; it < prm.max_iter; ++it) {
    const Vec au = d.stiffness() * cur.u;
    const Vec um = negative_part(cur.u);
    const double alpha = -um.dot(au);
    Vec grad = au.cwiseQuotient(w) + alpha * um;
    for (Index i = 0; i < grad.size(); ++i) grad[i] -= g_eval(beta, eps, cur.u[i]);

    const double unorm = std::sqrt(inner(cur.u, cur.u));
    const double rnorm = std::sqrt(inner(grad, grad));
    const double scale = std::max(alpha, beta) * unorm;
    cur.alpha = alpha;
    cur.grad_norm = rnorm / scale;
    cur.iterations = it;
    out.iterations = it;
    if (rnorm <= stat_tol * scale) {
      out.converged = true;
      break;
    }

    if (have_prev) {
      Vec sv = cur.u - prev_u;
      Vec yv = grad - prev_grad;
      const double sy = inner(sv, yv);
      if (sy > 1e-12 * std::sqrt(inner(sv, sv) * inner(yv, yv))) {
        if (mem_s.size() == kMemory) {
          mem_s.erase(mem_s.begin());
          mem_y.erase(mem_y.begin());
          mem_rho.erase(mem_rho.begin());
        }
        mem_s.push_back(std::move(sv));
        mem_y.push_back(std::move(yv));
        mem_rho.push_back(1.0 / sy);
      }
    }
    prev_u = cur.u;
    prev_grad = grad;
    have_prev = true;

    // two-loop recursion
    Vec q = grad;
    const size_t mlen = mem_s.size();
    std::vector<double> a(mlen);
    for (size_t i = mlen; i-- > 0;) {
      a[i] = mem_rho[i] * inner(mem_s[i], q);
      q -= a[i] * mem_y[i];
    }
    q = p.solver->solve(w.cwiseProduct(q));
    for (size_t i = 0; i < mlen; ++i) {
      const double b = mem_rho[i] * inner(mem_y[i], q);
      q += (a[i] - b) * mem_s[i];
    }
    Vec dir = -q;
    double sigma = inner(grad, dir);
    if (!(sigma < -1e-14 * rnorm * std::sqrt(inner(dir, dir)))) {
      dir = -p.solver->solve(w.cwiseProduct(grad)); // fall back to the plain step
      sigma = inner(grad, dir);
      mem_s.clear();
      mem_y.clear();
      mem_rho.clear();
    }

    bool accepted = false;
    double s = 1.0;
    for (int ls = 0; ls < 60 && !accepted; ++ls, s *= 0.5) {
      Vec trial = cur.u + s * dir;
      try {
        MState proj = project_to_M(d, beta, eps, trial, prm.fiber_tol);
        if (proj.f <= cur.f + prm.armijo * s * 2.0 * sigma) {
          proj.iterations = it + 1;
          cur = std::move(proj);
          accepted = true;
        }
      } catch (const Error& e) {
        if (e.code() != errc::fiber_infeasible && e.code() != errc::degenerate_sign) throw;
      }
    }
    if (!accepted) break; // line search stalled at this kink width
    if (f_log) f_log->push_back(cur.f);
    if (positive_support(cur.u) < 3) {
      out.want_reseed = true;
      break;
    }
  }
  out.state = std::move(cur);
  return out;
}

SpectrumPoint solve_point(const Problem& p, double beta, const FucikParams& prm,
                          const Field* warm) {
  prm.validate();
  const Domain& d = *p.domain;
  const double lam1 = p.lambda1();
  require(std::isfinite(beta), errc::invalid_argument, "solve_point: beta must be finite");
  require(beta > lam1 + prm.guard * prm.eig_tol * lam1, errc::out_of_range,
          "solve_point: beta must exceed lambda1 plus the guard band");

  std::vector<Vec> candidates;
  if (warm != nullptr) {
    check_domain(d, *warm, "solve_point");
    candidates.push_back(warm->values());
  } else {
    for (auto& f : seed_bank(p, beta)) candidates.push_back(f.values());
    require(!candidates.empty(), errc::fiber_infeasible,
            "solve_point: no feasible seed for this beta");
  }

  // On big grids rank the seeds by their projected multiplier and run the
  // continuation only on the best few.
  if (d.size() > 5000 && candidates.size() > 2) {
    std::vector<std::pair<double, size_t>> ranked;
    for (size_t i = 0; i < candidates.size(); ++i) {
      const double pmax = positive_part(candidates[i]).maxCoeff();
      if (pmax <= 0.0) continue;
      const double eps0 = prm.eps_initial > 0.0 ? prm.eps_initial : 0.1 * pmax;
      try {
        ranked.emplace_back(project_to_M(d, beta, eps0, candidates[i], prm.fiber_tol).alpha, i);
      } catch (const Error& e) {
        if (e.code() != errc::fiber_infeasible && e.code() != errc::degenerate_sign) throw;
      }
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<Vec> kept;
    for (size_t j = 0; j < ranked.size() && j < 2; ++j)
      kept.push_back(std::move(candidates[ranked[j].second]));
    candidates = std::move(kept);
  }

  std::optional<CandidateResult> best;
  int total_iters = 0;
  for (const auto& cand : candidates) {
    auto res = run_continuation(p, beta, prm, cand, warm != nullptr);
    if (!res) continue;
    total_iters += res->iterations;
    const bool better =
        !best || (res->converged && !best->converged) ||
        (res->converged == best->converged && res->state.alpha < best->state.alpha);
    if (better) best = std::move(res);
  }
  require(best.has_value(), errc::fiber_infeasible,
          "solve_point: every candidate start was infeasible at this beta");

  SpectrumPoint pt;
  pt.beta = beta;
  pt.alpha = best->state.alpha;
  pt.epsilon_final = best->eps_final;
  pt.iterations = total_iters;
  pt.alpha_checkpoints = best->checkpoints;

  const Vec& u = best->state.u;
  const Vec up = positive_part(u);
  pt.mu = std::sqrt(up.dot(d.mass().cwiseProduct(up)));
  pt.residual = residual_norm(d, u, pt.alpha, beta);

  // Renormalized view: the positive part scaled to unit L2 norm must carry
  // Dirichlet energy beta (up to the kink-width and sign-edge corrections).
  const Vec ubar = up / pt.mu - negative_part(u);
  pt.beta_check = (up / pt.mu).dot(d.stiffness() * ubar);

  pt.converged = best->converged && pt.residual <= prm.point_tol &&
                 std::abs(pt.beta_check - beta) <= 0.05 * beta;
  pt.u = Field(p.domain, u);
  return pt;
}

std::string SpectrumPoint::to_json() const {
  nlohmann::json j;
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["mu"] = mu;
  j["residual"] = residual;
  j["epsilon_final"] = epsilon_final;
  j["iterations"] = iterations;
  j["converged"] = converged;
  return j.dump();
}

} // namespace fucik
