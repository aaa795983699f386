#pragma once

#include "fucik/solver.hpp"
#include "fucik/tracer.hpp"

#include <limits>
#include <string>

namespace fucik {

/// First zero of the Bessel function J0.
inline constexpr double kBesselJ01 = 2.404825557695773;

/// Radius of the ball in R^N whose principal Dirichlet eigenvalue is 1.
double rbar1(int dimension);

/// Harmonic capacity of a ball: minimal Dirichlet energy over potentials
/// equal to 1 on the ball and vanishing at infinity.  Finite only for N >= 3.
double capacity(double radius, int dimension);

struct AsymptoteModel {
  int dimension = 0;
  double rbar1 = 0.0;
  double cap = 0.0; // populated for dimension >= 3 only
  double max_e1 = 0.0;
  int k = 1;
  void validate() const;
};

AsymptoteModel asymptote_model(const Problem& p, int k = 1);

/// Limit of the weighted distance of the k-th upper curve to lambda1:
/// cap(rbar1)*(max e1)^2*k for N>=3, 4*pi*(max e1)^2*k for N=2.
double k_curve_asymptote(const AsymptoteModel& m);

/// Transition-shell width for the certificate field: beta^{-(1/2-1/(2N))}
/// for N>=3 (midpoint exponent of the admissible interval), 1/ln(beta) for
/// N=2.  Natural logarithm throughout; reports echo that convention.
double epsilon_beta(int dimension, double beta);

struct CertificateReport {
  double beta = 0.0;
  Coord y{};
  double radius_used = 0.0;
  double epsilon_beta = 0.0;
  double bound = 0.0;
  double alpha_traced = 0.0; // NaN when not supplied
  double margin = 0.0;       // bound - alpha_traced, NaN when not supplied
  Index inner_nodes = 0;
  double inner_lambda = 0.0; // discrete principal eigenvalue of the bump set
  std::string to_json() const;
};

/// Upper bound on the first-curve level at beta from an explicit competitor:
/// a discrete ball ground state at y (radius bisected until its eigenvalue
/// matches beta), a harmonic transition shell of width epsilon_beta, and the
/// negated domain ground state outside.  The returned bound is the exact
/// objective value of that competitor, so it dominates the solved level.
CertificateReport certify_upper_bound(const Problem& p, double beta, const Coord& y,
                                      double alpha_traced =
                                          std::numeric_limits<double>::quiet_NaN());

struct SeparationReport {
  bool pass = false;
  double threshold = 0.0;
  double max_diag = 0.0;
  int tail_points = 0;
  std::string detail;
};

/// The trace's asymptotic diagnostic must sit below the k-curve asymptote
/// over the last sampled decade of beta.
SeparationReport separation_check(const CurveTrace& t, const AsymptoteModel& m);

} // namespace fucik
