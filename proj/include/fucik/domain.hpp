#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fucik/types.hpp"

namespace fucik {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;
using Coord = std::array<double, 3>;

enum class Shape { interval, rectangle, ball };

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// Uniform Cartesian grid over a bounded Dirichlet domain.
///
/// Only interior nodes carry unknowns; the homogeneous boundary condition is
/// folded into the stiffness stencil, so u^T A u approximates the Dirichlet
/// energy of the zero extension of u.  The mass is lumped: inner products use
/// the diagonal weights returned by mass().  Immutable after construction and
/// safe to share across threads.
class Domain {
public:
  /// (0, length) with n interior nodes, spacing length/(n+1).
  static DomainPtr interval(double length, int n);
  /// (0, lx) x (0, ly) with nx * ny interior nodes.
  static DomainPtr rectangle(double lx, double ly, int nx, int ny);
  /// Ball of radius r about the origin (dim 2 or 3), masked out of the
  /// bounding box [-r, r]^dim with n grid nodes per axis.  The Dirichlet
  /// condition is imposed on the staircase boundary: every stencil neighbour
  /// falling outside the ball reads as zero.
  static DomainPtr ball(int dim, double radius, int n);

  int dimension() const { return dim_; }
  Shape shape() const { return shape_; }
  Index size() const { return w_.size(); }
  const SpMat& stiffness() const { return A_; }
  const Vec& mass() const { return w_; }
  double spacing(int axis) const { return h_.at(static_cast<size_t>(axis)); }
  double min_spacing() const;
  double diameter() const;
  const std::vector<Coord>& coords() const { return coords_; }
  const std::vector<double>& extent() const { return extent_; }
  const std::vector<int>& grid_points() const { return npts_; }
  double total_mass() const { return w_.sum(); }
  std::uint64_t id() const { return id_; }
  bool same(const Domain& other) const { return id_ == other.id_; }

  /// Euclidean distance from x to the domain boundary (negative outside).
  double boundary_distance(const Coord& x) const;

  std::string to_json() const;

private:
  Domain() = default;

  int dim_ = 0;
  Shape shape_ = Shape::interval;
  std::array<double, 3> h_{};
  std::vector<double> extent_; // interval {L}; rectangle {lx, ly}; ball {radius}
  std::vector<int> npts_;      // grid nodes per axis
  SpMat A_;
  Vec w_;
  std::vector<Coord> coords_;
  std::uint64_t id_ = 0;
};

/// Nodal values over the interior nodes of one Domain.
class Field {
public:
  Field() = default;
  Field(DomainPtr d, Vec v);

  const DomainPtr& domain() const { return dom_; }
  const Vec& values() const { return v_; }
  Vec& values() { return v_; }
  Index size() const { return v_.size(); }
  bool empty() const { return v_.size() == 0; }

private:
  DomainPtr dom_;
  Vec v_;
};

// Nodewise sign split: u = plus - minus with both parts nonnegative and of
// disjoint support.
Vec positive_part(const Vec& u);
Vec negative_part(const Vec& u);
Field positive_part(const Field& u);
Field negative_part(const Field& u);

double dirichlet_energy(const Domain& d, const Vec& u);
double l2_inner(const Domain& d, const Vec& u, const Vec& v);
double l2_norm(const Domain& d, const Vec& u);

double dirichlet_energy(const Domain& d, const Field& u);
double l2_inner(const Domain& d, const Field& u, const Field& v);
double l2_norm(const Domain& d, const Field& u);

/// Edges of the stiffness stencil whose endpoints carry strictly opposite
/// signs.  The energy split E(u+) + E(u-) undershoots E(u) by exactly twice
/// the (nonpositive) cross term accumulated on these edges.
Index sign_change_edges(const Domain& d, const Vec& u);

/// Indices of nodes with Euclidean distance to the center strictly below r.
std::vector<Index> nodes_in_ball(const Domain& d, const Coord& center, double r);

void check_domain(const Domain& d, const Field& u, const char* where);

} // namespace fucik
