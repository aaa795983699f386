#include "fucik/spectral.hpp"

#include "fucik/linsolve.hpp"

#include <cmath>

namespace fucik {

std::vector<EigenPair> smallest_eigenpairs(const DomainPtr& d, int k, double tol, int max_iter) {
  require(d != nullptr, errc::invalid_argument, "smallest_eigenpairs: null domain");
  const bool iterative = d->dimension() == 3 && d->size() > 40000;
  auto raw = smallest_pairs(d->stiffness(), d->mass(), k, tol, max_iter, iterative);

  std::vector<EigenPair> out;
  out.reserve(raw.size());
  for (size_t j = 0; j < raw.size(); ++j) {
    EigenPair p;
    p.lambda = raw[j].lambda;
    Vec e = std::move(raw[j].e);
    if (j == 0) {
      Index imax = 0;
      e.cwiseAbs().maxCoeff(&imax);
      if (e[imax] < 0.0) e = -e;
      require(e.minCoeff() > 0.0, errc::convergence_failure,
              "principal eigenfunction is not strictly positive");
    }
    p.e = Field(d, std::move(e));
    p.residual = raw[j].residual;
    p.iterations = raw[j].iterations;
    out.push_back(std::move(p));
  }
  return out;
}

double max_of_e1(const EigenPair& p) { return p.e.values().maxCoeff(); }

std::vector<int> multiplicity_group(const std::vector<EigenPair>& pairs, int which, double rtol) {
  require(which >= 0 && which < static_cast<int>(pairs.size()), errc::invalid_argument,
          "multiplicity_group: index out of range");
  const double ref = pairs[static_cast<size_t>(which)].lambda;
  std::vector<int> group;
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
    if (std::abs(pairs[static_cast<size_t>(i)].lambda - ref) <= rtol * std::abs(ref)) group.push_back(i);
  return group;
}

Spectrum Spectrum::compute(const DomainPtr& d, int k, double tol) {
  require(k >= 2, errc::invalid_argument, "spectrum needs at least two pairs");
  Spectrum s;
  s.pairs = smallest_eigenpairs(d, k, tol);
  s.lambda1 = s.pairs[0].lambda;
  s.lambda2 = s.pairs[1].lambda;
  s.eig_tol = tol;
  return s;
}

} // namespace fucik
