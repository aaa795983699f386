#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fucik/oracle1d.hpp"
#include "fucik/solver.hpp"

#include "helpers.hpp"

#include <cmath>
#include <numbers>

using namespace fucik;
using testutil::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;

const Problem& interval_problem() {
  static Problem p = Problem::make(Domain::interval(kPi, 399));
  return p;
}
} // namespace

TEST_CASE("interval points land on the analytic curve") {
  const Problem& p = interval_problem();
  for (double beta : {4.0, 9.0, 16.0}) {
    const SpectrumPoint pt = solve_point(p, beta);
    CHECK(pt.converged);
    CHECK(rel_err(pt.alpha, first_curve_analytic(kPi, beta)) <= 0.02);
    CHECK(pt.alpha > p.lambda1());
    CHECK(pt.mu > 0.0);
    CHECK(pt.residual <= 1e-4);

    const Vec um = negative_part(pt.u.values());
    CHECK(std::abs(l2_inner(*p.domain, um, um) - 1.0) <= 1e-8);
    CHECK(std::abs(pt.beta_check - beta) <= 0.05 * beta);
    // the recorded residual is reproducible from the stored field
    CHECK(residual_norm(*p.domain, pt.u, pt.alpha, beta) ==
          doctest::Approx(pt.residual).epsilon(1e-12));
  }
}

TEST_CASE("residual of pure eigenfunctions") {
  const Problem& p = interval_problem();
  const Vec e1 = p.spectrum->e1().values();
  CHECK(residual_norm(*p.domain, Vec(-e1), p.lambda1(), 33.0) <= 1e-7);
  CHECK(residual_norm(*p.domain, e1, 0.77, p.lambda1()) <= 1e-7);
}

TEST_CASE("continuation checkpoints are monotone in the kink width") {
  const Problem& p = interval_problem();
  const SpectrumPoint pt = solve_point(p, 9.0);
  REQUIRE(pt.alpha_checkpoints.size() >= 2);
  for (size_t i = 0; i + 1 < pt.alpha_checkpoints.size(); ++i)
    CHECK(pt.alpha_checkpoints[i + 1] <=
          pt.alpha_checkpoints[i] + 1e-6 * std::abs(pt.alpha_checkpoints[i]));
  CHECK(pt.epsilon_final == doctest::Approx(std::max(1e-8, 0.125 * std::pow(p.domain->min_spacing(), 2))));
}

TEST_CASE("beta guard band") {
  const Problem& p = interval_problem();
  const double lam1 = p.lambda1();
  CHECK_THROWS_AS(solve_point(p, lam1), Error);
  CHECK_THROWS_AS(solve_point(p, 0.5 * lam1), Error);
  try {
    solve_point(p, lam1 * (1.0 + 1e-12));
    FAIL("expected out_of_range inside the guard band");
  } catch (const Error& e) {
    CHECK(e.code() == errc::out_of_range);
  }
}

TEST_CASE("warm start reproduces the cold solution") {
  const Problem& p = interval_problem();
  const SpectrumPoint cold9 = solve_point(p, 9.0);
  REQUIRE(cold9.converged);

  const SpectrumPoint warm10 = solve_point(p, 10.0, {}, &cold9.u);
  const SpectrumPoint cold10 = solve_point(p, 10.0);
  REQUIRE(warm10.converged);
  REQUIRE(cold10.converged);
  CHECK(std::abs(warm10.alpha - cold10.alpha) <= 2e-4 * cold10.alpha);
}

TEST_CASE("seed construction") {
  const Problem& p = interval_problem();
  const Field s = seed_feasible(p, {kPi, 0.0, 0.0}, 0.3);
  const auto& xs = p.domain->coords();
  for (Index i = 0; i < s.size(); ++i) {
    if (xs[size_t(i)][0] < kPi - 0.3 - 1e-12) CHECK(s.values()[i] <= 0.0);
    if (xs[size_t(i)][0] > kPi - 0.3 + 1e-12) CHECK(s.values()[i] >= 0.0);
  }
  CHECK(positive_part(s.values()).maxCoeff() > 0.0);
  CHECK(negative_part(s.values()).maxCoeff() > 0.0);

  // the boundary bump is the hard side: its ground energy must clear beta,
  // which pins the smallest usable radius near pi/sqrt(beta)
  const double beta = 9.0;
  const double r = 1.2 * kPi / std::sqrt(beta);
  const Field good = seed_feasible(p, {kPi, 0.0, 0.0}, r);
  CHECK_NOTHROW(project_to_M(*p.domain, beta, 1e-3, good.values()));

  // anchors must sit on the boundary, radii inside (0, diam/2)
  CHECK_THROWS_AS(seed_feasible(p, {1.0, 0.0, 0.0}, 0.3), Error);
  CHECK_THROWS_AS(seed_feasible(p, {kPi, 0.0, 0.0}, kPi), Error);
  CHECK_THROWS_AS(seed_feasible(p, {kPi, 0.0, 0.0}, -0.1), Error);
}

TEST_CASE("seed bank carries both orientations") {
  const Problem& p = interval_problem();
  // beta below lambda2: only the swapped orientation is feasible, the bank
  // must still produce a solvable start
  auto bank = seed_bank(p, 2.0);
  CHECK(bank.size() >= 2);
  const SpectrumPoint pt = solve_point(p, 2.0);
  CHECK(pt.converged);
  CHECK(rel_err(pt.alpha, first_curve_analytic(kPi, 2.0)) <= 0.02);
}

TEST_CASE("descent never increases f") {
  const Problem& p = interval_problem();
  const double beta = 9.0, eps = 1e-3;
  auto bank = seed_bank(p, beta);
  REQUIRE(!bank.empty());
  MState st;
  bool started = false;
  for (const auto& s : bank) {
    try {
      st = project_to_M(*p.domain, beta, eps, s.values());
      started = true;
      break;
    } catch (const Error&) {
    }
  }
  REQUIRE(started);
  std::vector<double> flog;
  FucikParams prm;
  auto res = minimize_on_M(p, beta, eps, prm, st, prm.stat_tol, &flog);
  CHECK(res.converged);
  CHECK(res.state.alpha > p.lambda1());
  REQUIRE(flog.size() >= 2);
  for (size_t i = 0; i + 1 < flog.size(); ++i) CHECK(flog[i + 1] <= flog[i] + 1e-12);
}

TEST_CASE("square crossing region") {
  Problem p = Problem::make(Domain::rectangle(kPi, kPi, 99, 99));
  // at beta just above lambda2 the level sits just below it
  const SpectrumPoint pt = solve_point(p, 1.1 * p.lambda2());
  CHECK(pt.alpha > p.lambda1());
  CHECK(pt.alpha < p.lambda2());
  CHECK(pt.residual <= 5e-4); // kink-floor limited on this coarse grid
  CHECK(std::abs(pt.beta_check - 1.1 * p.lambda2()) <= 0.05 * 1.1 * p.lambda2());
}

TEST_CASE("solve point on the disk") {
  Problem p = Problem::make(Domain::ball(2, 1.0, 81));
  const double beta = 4.0 * p.lambda1();
  const SpectrumPoint pt = solve_point(p, beta);
  CHECK(pt.converged);
  CHECK(pt.alpha > p.lambda1());
  CHECK(pt.alpha < p.lambda2());
}

TEST_CASE("json record carries the fixed keys") {
  const Problem& p = interval_problem();
  const SpectrumPoint pt = solve_point(p, 9.0);
  const std::string j = pt.to_json();
  for (const char* key :
       {"\"beta\"", "\"alpha\"", "\"mu\"", "\"residual\"", "\"epsilon_final\"", "\"iterations\"",
        "\"converged\""})
    CHECK(j.find(key) != std::string::npos);
}
