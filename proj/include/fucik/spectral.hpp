#pragma once

#include <memory>
#include <vector>

#include "fucik/domain.hpp"

namespace fucik {

struct EigenPair {
  double lambda = 0.0;
  Field e;              // W-normalized; pairs are mutually W-orthogonal
  double residual = 0.0;
  int iterations = 0;
};

/// k smallest Dirichlet eigenpairs of the domain.  The principal function is
/// sign-fixed to be strictly positive; a nonpositive entry after refinement is
/// reported as convergence failure.
std::vector<EigenPair> smallest_eigenpairs(const DomainPtr& d, int k, double tol = 1e-9,
                                           int max_iter = 800);

double max_of_e1(const EigenPair& p);

/// Indices of pairs whose eigenvalue agrees with pairs[which].lambda to rtol
/// (eigenvalue multiplicity at grid accuracy).
std::vector<int> multiplicity_group(const std::vector<EigenPair>& pairs, int which,
                                    double rtol = 1e-6);

/// Cached spectral data shared by the solver and the tracer.
struct Spectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<EigenPair> pairs;
  double eig_tol = 0.0;

  const Field& e1() const { return pairs.at(0).e; }
  const Field& e2() const { return pairs.at(1).e; }

  static Spectrum compute(const DomainPtr& d, int k = 3, double tol = 1e-9);
};

} // namespace fucik
