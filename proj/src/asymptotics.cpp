#include "fucik/asymptotics.hpp"

#include "fucik/linsolve.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace fucik {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rbar1(int dimension) {
  if (dimension == 2) return kBesselJ01;
  if (dimension == 3) return kPi;
  fail(errc::unsupported, "rbar1: dimension must be 2 or 3");
}

double capacity(double radius, int dimension) {
  require(radius > 0.0 && std::isfinite(radius), errc::invalid_argument,
          "capacity: radius must be positive");
  require(dimension >= 3, errc::unsupported,
          "capacity: finite only for dimension >= 3 (planar case is logarithmic)");
  // (N-2) * |S^{N-1}| * r^{N-2}
  const double n = dimension;
  const double sphere = 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
  return (n - 2.0) * sphere * std::pow(radius, n - 2.0);
}

void AsymptoteModel::validate() const {
  require(dimension >= 2 && dimension <= 3, errc::unsupported,
          "AsymptoteModel: dimension must be 2 or 3");
  require(rbar1 > 0.0 && max_e1 > 0.0, errc::invalid_argument,
          "AsymptoteModel: lengths and amplitudes must be positive");
  require(k >= 1, errc::invalid_argument, "AsymptoteModel: k >= 1");
  if (dimension >= 3)
    require(cap > 0.0, errc::invalid_argument, "AsymptoteModel: capacity must be positive");
}

AsymptoteModel asymptote_model(const Problem& p, int k) {
  AsymptoteModel m;
  m.dimension = p.domain->dimension();
  m.rbar1 = rbar1(m.dimension);
  m.cap = m.dimension >= 3 ? capacity(m.rbar1, m.dimension) : 0.0;
  m.max_e1 = max_of_e1(p.spectrum->pairs.front());
  m.k = k;
  m.validate();
  return m;
}

double k_curve_asymptote(const AsymptoteModel& m) {
  m.validate();
  if (m.dimension == 2) return 4.0 * kPi * m.max_e1 * m.max_e1 * m.k;
  return m.cap * m.max_e1 * m.max_e1 * m.k;
}

double epsilon_beta(int dimension, double beta) {
  require(dimension >= 2 && dimension <= 3, errc::unsupported,
          "epsilon_beta: dimension must be 2 or 3");
  require(beta > std::numbers::e, errc::out_of_range, "epsilon_beta: beta must exceed e");
  if (dimension == 2) return 1.0 / std::log(beta);
  const double q = 0.5 - 0.5 / dimension; // midpoint of (1/2 - 1/N, 1/2)
  return std::pow(beta, -q);
}

CertificateReport certify_upper_bound(const Problem& p, double beta, const Coord& y,
                                      double alpha_traced) {
  const Domain& d = *p.domain;
  const int N = d.dimension();
  require(N >= 2, errc::unsupported, "certify_upper_bound: needs a 2D or 3D domain");
  require(std::isfinite(beta) && beta > p.lambda1(), errc::out_of_range,
          "certify_upper_bound: beta must exceed lambda1");

  CertificateReport rep;
  rep.beta = beta;
  rep.y = y;
  rep.epsilon_beta = epsilon_beta(N, beta);

  const double r_target = rbar1(N) / std::sqrt(beta);
  const double r_out = r_target + rep.epsilon_beta;
  const double clearance = d.boundary_distance(y);
  require(clearance > r_out, errc::infeasible_certificate,
          "certify_upper_bound: transition shell does not fit inside the domain");

  // Smallest node ball at y whose discrete ground energy drops to beta.  The
  // eigenvalue is a staircase in r (it only moves when the node set grows),
  // so bisect to sub-spacing width.
  const double beta_strict = beta * (1.0 - 1e-12);
  std::map<size_t, double> seen; // node count -> eigenvalue (same count = same set)
  auto lam_of = [&](double r) {
    const auto nodes = nodes_in_ball(d, y, r);
    if (nodes.size() < 3) return std::numeric_limits<double>::infinity();
    auto it = seen.find(nodes.size());
    if (it != seen.end()) return it->second;
    const double lam = subgrid_principal_pair(d, nodes).lambda;
    seen.emplace(nodes.size(), lam);
    return lam;
  };

  double hi = r_out - 0.51 * d.min_spacing();
  require(hi > 0.0 && lam_of(hi) <= beta_strict, errc::infeasible_certificate,
          "certify_upper_bound: grid too coarse to reach beta inside the bump ball");
  double lo = 0.0;
  while (hi - lo > 1e-3 * d.min_spacing()) {
    const double mid = 0.5 * (lo + hi);
    (lam_of(mid) <= beta_strict ? hi : lo) = mid;
  }
  rep.radius_used = hi;

  const auto bump = nodes_in_ball(d, y, hi);
  const auto pair = subgrid_principal_pair(d, bump);
  rep.inner_nodes = static_cast<Index>(bump.size());
  rep.inner_lambda = pair.lambda;
  require(beta - pair.lambda > 1e-9 * beta, errc::infeasible_certificate,
          "certify_upper_bound: bump eigenvalue coincides with beta");

  // Glued negative piece: 0 on the bump, harmonic across the shell, the
  // domain ground state outside, renormalized to unit weighted L2 norm.
  std::vector<char> in_bump(static_cast<size_t>(d.size()), 0);
  for (Index i : bump) in_bump[static_cast<size_t>(i)] = 1;
  std::vector<Index> shell;
  for (Index i : nodes_in_ball(d, y, r_out))
    if (!in_bump[static_cast<size_t>(i)]) shell.push_back(i);
  std::vector<char> in_shell(static_cast<size_t>(d.size()), 0);
  for (Index i : shell) in_shell[static_cast<size_t>(i)] = 1;

  Vec v = p.spectrum->e1().values();
  for (Index i = 0; i < d.size(); ++i)
    if (in_bump[static_cast<size_t>(i)] || in_shell[static_cast<size_t>(i)]) v[i] = 0.0;
  if (!shell.empty()) harmonic_fill(d, shell, v);

  const Vec& w = d.mass();
  const double nm = std::sqrt(v.dot(w.cwiseProduct(v)));
  require(nm > 0.0, errc::infeasible_certificate,
          "certify_upper_bound: degenerate exterior piece");
  v /= nm;

  // The competitor pairs this negative piece with the bump ground state, whose
  // energy-to-mass ratio equals beta by the radius bisection; the objective of
  // the constrained infimum only sees the negative part, so its Dirichlet
  // energy is the certified value.
  rep.bound = v.dot(d.stiffness() * v);
  rep.alpha_traced = alpha_traced;
  rep.margin = rep.bound - alpha_traced;
  return rep;
}

std::string CertificateReport::to_json() const {
  nlohmann::json j;
  j["beta"] = beta;
  j["y"] = {y[0], y[1], y[2]};
  j["radius_used"] = radius_used;
  j["epsilon_beta"] = epsilon_beta;
  j["bound"] = bound;
  j["inner_nodes"] = inner_nodes;
  j["inner_lambda"] = inner_lambda;
  if (std::isnan(alpha_traced)) {
    j["alpha_traced"] = nullptr;
    j["margin"] = nullptr;
  } else {
    j["alpha_traced"] = alpha_traced;
    j["margin"] = margin;
  }
  j["log_convention"] = "natural";
  return j.dump();
}

SeparationReport separation_check(const CurveTrace& t, const AsymptoteModel& m) {
  m.validate();
  SeparationReport r;
  r.threshold = k_curve_asymptote(m);
  std::vector<const TracePoint*> tail;
  double bmax = 0.0;
  for (const auto& q : t.points)
    if (q.converged) bmax = std::max(bmax, q.beta);
  for (const auto& q : t.points)
    if (q.converged && q.beta >= 0.1 * bmax) tail.push_back(&q);
  require(tail.size() >= 2, errc::not_applicable,
          "separation_check: fewer than 2 converged points in the last decade");
  r.tail_points = static_cast<int>(tail.size());
  bool below = true;
  for (const auto* q : tail) {
    r.max_diag = std::max(r.max_diag, q->diag_value);
    below = below && q->diag_value < r.threshold;
  }
  r.pass = below;
  std::ostringstream os;
  os << "max diagnostic " << r.max_diag << (below ? " below" : " not below") << " asymptote "
     << r.threshold << " over " << r.tail_points << " tail points";
  r.detail = os.str();
  return r;
}

} // namespace fucik
