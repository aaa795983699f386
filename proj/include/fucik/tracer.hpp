#pragma once

#include "fucik/solver.hpp"

#include <string>
#include <vector>

namespace fucik {

struct TracePoint {
  double beta = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double diag_value = 0.0; // dimension-weighted distance to lambda1, see below
};

struct CurveTrace {
  DomainPtr domain; // null for traces loaded from disk
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<TracePoint> points; // ascending beta
  std::string to_json() const;
};

/// Geometric grid from lambda2/1.1 to 50*lambda1 (clipped to stay above the
/// solvable range's lower edge).
std::vector<double> default_beta_grid(const Problem& p, int n);

/// Solve the curve over the given betas.  warm=true marches in ascending
/// order reusing the previous minimizer; warm=false solves points
/// independently across threads (capped by FUCIK_THREADS).
CurveTrace trace_curve(const Problem& p, std::vector<double> betas,
                       const FucikParams& prm = {}, bool warm = true);

struct CheckReport {
  bool pass = false;
  std::string detail;
};

/// alpha must not increase along beta by more than slack (relative).
CheckReport check_monotone(const CurveTrace& t, double slack);

struct SymmetryReport {
  bool pass = false;
  int compared = 0;
  double max_mismatch = 0.0; // relative, over compared points
  std::string detail;
};

/// The curve is its own mirror across alpha=beta: evaluating it at beta=alpha_i
/// by interpolation must return (close to) beta_i.  Points whose alpha falls
/// outside the traced beta range are skipped.
SymmetryReport check_symmetry(const CurveTrace& t, double rtol);

struct CrossingReport {
  bool pass = false;
  double beta_at_diagonal = 0.0;
  double relative_gap = 0.0;
  std::string detail;
};

/// Interpolated intersection with the diagonal, compared against lambda2.
CrossingReport check_lambda2_crossing(const CurveTrace& t, double lambda2, double rtol);

/// (alpha - lambda1) * { beta^{(N-2)/2} for N>=3, ln beta for N=2, 1 for N=1 }.
double asymptotic_diagnostic_value(int dimension, double beta, double alpha, double lambda1);

struct DecayReport {
  bool decaying = false;
  std::vector<double> tail; // diagnostic over the inspected points
  std::string detail;
};

/// Inspect the trailing count points (default: half): the diagnostic must
/// decrease within the given relative slack from one point to the next.
DecayReport diagnostic_decay(const CurveTrace& t, int count = 0, double slack = 0.0);

/// Round-trips bit-exactly (values printed with %.17g).
void write_csv(const CurveTrace& t, const std::string& path);
CurveTrace read_csv(const std::string& path);

/// Two whitespace-delimited tables for plotting: (beta, alpha) pairs and
/// (beta, diagnostic) pairs, each with a single leading comment line.
void emit_plot_data(const CurveTrace& t, const std::string& curve_path,
                    const std::string& diag_path);

} // namespace fucik
