#pragma once

#include "fucik/domain.hpp"

#include <Eigen/Dense>
#include <random>

namespace testutil {

using fucik::Coord;
using fucik::Domain;
using fucik::DomainPtr;
using fucik::Index;
using fucik::Vec;

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline Vec random_field(Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vec u(n);
  for (Index i = 0; i < n; ++i) u[i] = unif(rng());
  return u;
}

// Independent dense re-assembly of the Dirichlet stencil from node
// coordinates alone.  Neighbors are nodes at distance exactly one spacing
// along one axis; missing neighbors are boundary zeros.
inline Eigen::MatrixXd dense_stiffness(const Domain& d) {
  const Index m = d.size();
  const auto& xs = d.coords();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  const int dim = d.dimension();
  for (int axis = 0; axis < dim; ++axis) {
    const double h = d.spacing(axis);
    const double cell = d.mass()[0]; // uniform lumped weights
    const double coef = cell / (h * h);
    for (Index i = 0; i < m; ++i) {
      A(i, i) += 2.0 * coef;
      for (Index j = 0; j < m; ++j) {
        if (i == j) continue;
        double diff = 0.0;
        bool along = true;
        for (int a = 0; a < dim; ++a) {
          const double t = xs[size_t(j)][size_t(a)] - xs[size_t(i)][size_t(a)];
          if (a == axis)
            diff = t;
          else if (std::abs(t) > 1e-12 * h)
            along = false;
        }
        if (along && std::abs(std::abs(diff) - h) < 1e-9 * h) A(i, j) -= coef;
      }
    }
  }
  return A;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

} // namespace testutil
