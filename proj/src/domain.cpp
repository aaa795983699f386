#include "fucik/domain.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <deque>
#include <limits>

namespace fucik {

namespace {

std::uint64_t next_domain_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

void require_length(double value, const char* name) {
  require(std::isfinite(value) && value > 0.0, errc::invalid_argument,
          std::string(name) + " must be positive and finite");
}

} // namespace

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid-argument";
    case errc::degenerate_domain: return "degenerate-domain";
    case errc::domain_mismatch: return "domain-mismatch";
    case errc::degenerate_sign: return "degenerate-sign";
    case errc::fiber_infeasible: return "fiber-infeasible";
    case errc::convergence_failure: return "convergence-failure";
    case errc::out_of_range: return "out-of-range";
    case errc::infeasible_certificate: return "infeasible-certificate";
    case errc::not_applicable: return "not-applicable";
    case errc::io_error: return "io-error";
    case errc::unsupported: return "unsupported";
    case errc::internal: return "internal";
  }
  return "unknown";
}

DomainPtr Domain::interval(double length, int n) {
  require_length(length, "interval length");
  require(n >= 1, errc::invalid_argument, "interval needs n >= 1");
  require(n >= 3, errc::degenerate_domain, "interval grid needs at least 3 interior nodes");

  auto d = std::shared_ptr<Domain>(new Domain());
  const double h = length / (n + 1);
  d->dim_ = 1;
  d->shape_ = Shape::interval;
  d->h_ = {h, 0.0, 0.0};
  d->extent_ = {length};
  d->npts_ = {n};
  d->w_ = Vec::Constant(n, h);
  d->coords_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) d->coords_[static_cast<size_t>(i)] = {(i + 1) * h, 0.0, 0.0};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(3 * n));
  const double c = 1.0 / h;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0 * c);
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, -c);
      trip.emplace_back(i + 1, i, -c);
    }
  }
  d->A_.resize(n, n);
  d->A_.setFromTriplets(trip.begin(), trip.end());
  d->A_.makeCompressed();
  d->id_ = next_domain_id();
  return d;
}

DomainPtr Domain::rectangle(double lx, double ly, int nx, int ny) {
  require_length(lx, "rectangle lx");
  require_length(ly, "rectangle ly");
  require(nx >= 1 && ny >= 1, errc::invalid_argument, "rectangle needs nx, ny >= 1");
  require(nx >= 3 && ny >= 3, errc::degenerate_domain,
          "rectangle grid needs at least 3 interior nodes per axis");

  auto d = std::shared_ptr<Domain>(new Domain());
  const double hx = lx / (nx + 1);
  const double hy = ly / (ny + 1);
  const Index m = static_cast<Index>(nx) * ny;
  d->dim_ = 2;
  d->shape_ = Shape::rectangle;
  d->h_ = {hx, hy, 0.0};
  d->extent_ = {lx, ly};
  d->npts_ = {nx, ny};
  d->w_ = Vec::Constant(m, hx * hy);
  d->coords_.resize(static_cast<size_t>(m));

  const double cx = hy / hx;
  const double cy = hx / hy;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(5 * m));
  auto at = [nx](int i, int j) { return static_cast<Index>(j) * nx + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index k = at(i, j);
      d->coords_[static_cast<size_t>(k)] = {(i + 1) * hx, (j + 1) * hy, 0.0};
      trip.emplace_back(k, k, 2.0 * (cx + cy));
      if (i + 1 < nx) {
        trip.emplace_back(k, at(i + 1, j), -cx);
        trip.emplace_back(at(i + 1, j), k, -cx);
      }
      if (j + 1 < ny) {
        trip.emplace_back(k, at(i, j + 1), -cy);
        trip.emplace_back(at(i, j + 1), k, -cy);
      }
    }
  }
  d->A_.resize(m, m);
  d->A_.setFromTriplets(trip.begin(), trip.end());
  d->A_.makeCompressed();
  d->id_ = next_domain_id();
  return d;
}

DomainPtr Domain::ball(int dim, double radius, int n) {
  require(dim == 2 || dim == 3, errc::unsupported, "ball grids support dim 2 and 3");
  require_length(radius, "ball radius");
  require(n >= 1, errc::invalid_argument, "ball needs n >= 1");

  const double h = 2.0 * radius / (n + 1);
  const int nz = (dim == 3) ? n : 1;
  auto pos = [&](int i) { return -radius + (i + 1) * h; };

  // Mask: nodes strictly inside the ball get unknown indices.
  std::vector<Index> map(static_cast<size_t>(n) * n * nz, -1);
  auto lin = [&](int i, int j, int k) {
    return (static_cast<size_t>(k) * n + static_cast<size_t>(j)) * n + static_cast<size_t>(i);
  };
  std::vector<Coord> coords;
  for (int k = 0; k < nz; ++k) {
    const double z = (dim == 3) ? pos(k) : 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double x = pos(i), y = pos(j);
        if (std::sqrt(x * x + y * y + z * z) < radius) {
          map[lin(i, j, k)] = static_cast<Index>(coords.size());
          coords.push_back({x, y, z});
        }
      }
    }
  }
  const Index m = static_cast<Index>(coords.size());
  require(m >= 3, errc::degenerate_domain, "ball grid too coarse: fewer than 3 interior nodes");

  const double vol = (dim == 3) ? h * h * h : h * h;
  const double c = vol / (h * h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(2 * dim + 1) * static_cast<size_t>(m));
  auto neighbor = [&](int i, int j, int k, int axis, int step) -> Index {
    int ii = i + (axis == 0 ? step : 0);
    int jj = j + (axis == 1 ? step : 0);
    int kk = k + (axis == 2 ? step : 0);
    if (ii < 0 || ii >= n || jj < 0 || jj >= n || kk < 0 || kk >= nz) return -1;
    return map[lin(ii, jj, kk)];
  };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Index row = map[lin(i, j, k)];
        if (row < 0) continue;
        trip.emplace_back(row, row, 2.0 * dim * c);
        for (int axis = 0; axis < dim; ++axis) {
          for (int step : {-1, 1}) {
            const Index col = neighbor(i, j, k, axis, step);
            if (col >= 0) trip.emplace_back(row, col, -c);
          }
        }
      }
    }
  }

  auto d = std::shared_ptr<Domain>(new Domain());
  d->dim_ = dim;
  d->shape_ = Shape::ball;
  d->h_ = {h, h, (dim == 3) ? h : 0.0};
  d->extent_ = {radius};
  d->npts_.assign(static_cast<size_t>(dim), n);
  d->w_ = Vec::Constant(m, vol);
  d->coords_ = std::move(coords);
  d->A_.resize(m, m);
  d->A_.setFromTriplets(trip.begin(), trip.end());
  d->A_.makeCompressed();

  // The staircase mask must stay connected for the domain to make sense.
  {
    std::vector<char> seen(static_cast<size_t>(m), 0);
    std::deque<Index> queue{0};
    seen[0] = 1;
    Index reached = 1;
    while (!queue.empty()) {
      const Index r = queue.front();
      queue.pop_front();
      for (SpMat::InnerIterator it(d->A_, r); it; ++it) {
        const Index cidx = it.row();
        if (cidx != r && !seen[static_cast<size_t>(cidx)]) {
          seen[static_cast<size_t>(cidx)] = 1;
          ++reached;
          queue.push_back(cidx);
        }
      }
    }
    require(reached == m, errc::degenerate_domain, "ball grid mask is disconnected");
  }

  d->id_ = next_domain_id();
  return d;
}

double Domain::min_spacing() const {
  double h = h_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, h_[static_cast<size_t>(a)]);
  return h;
}

double Domain::diameter() const {
  switch (shape_) {
    case Shape::interval: return extent_[0];
    case Shape::rectangle: return std::hypot(extent_[0], extent_[1]);
    case Shape::ball: return 2.0 * extent_[0];
  }
  return 0.0;
}

double Domain::boundary_distance(const Coord& x) const {
  switch (shape_) {
    case Shape::interval:
      return std::min(x[0], extent_[0] - x[0]);
    case Shape::rectangle:
      return std::min(std::min(x[0], extent_[0] - x[0]), std::min(x[1], extent_[1] - x[1]));
    case Shape::ball: {
      double r2 = x[0] * x[0] + x[1] * x[1];
      if (dim_ == 3) r2 += x[2] * x[2];
      return extent_[0] - std::sqrt(r2);
    }
  }
  return -std::numeric_limits<double>::infinity();
}

std::string Domain::to_json() const {
  nlohmann::json j;
  j["dimension"] = dim_;
  switch (shape_) {
    case Shape::interval: j["shape"] = "interval"; break;
    case Shape::rectangle: j["shape"] = "rectangle"; break;
    case Shape::ball: j["shape"] = "ball"; break;
  }
  j["extent"] = extent_;
  j["grid"] = npts_;
  std::vector<double> h(h_.begin(), h_.begin() + dim_);
  j["spacing"] = h;
  j["nodes"] = size();
  return j.dump();
}

Field::Field(DomainPtr d, Vec v) : dom_(std::move(d)), v_(std::move(v)) {
  require(dom_ != nullptr, errc::invalid_argument, "field needs a domain");
  require(v_.size() == dom_->size(), errc::domain_mismatch,
          "field length does not match domain node count");
}

void check_domain(const Domain& d, const Field& u, const char* where) {
  require(u.domain() && u.domain()->same(d), errc::domain_mismatch,
          std::string(where) + ": field belongs to a different domain");
}

Vec positive_part(const Vec& u) { return u.cwiseMax(0.0); }
Vec negative_part(const Vec& u) { return (-u).cwiseMax(0.0); }

Field positive_part(const Field& u) { return Field(u.domain(), positive_part(u.values())); }
Field negative_part(const Field& u) { return Field(u.domain(), negative_part(u.values())); }

double dirichlet_energy(const Domain& d, const Vec& u) {
  require(u.size() == d.size(), errc::domain_mismatch, "dirichlet_energy: field length mismatch");
  return u.dot(d.stiffness() * u);
}

double l2_inner(const Domain& d, const Vec& u, const Vec& v) {
  require(u.size() == d.size() && v.size() == d.size(), errc::domain_mismatch,
          "l2_inner: field length mismatch");
  return u.dot(d.mass().cwiseProduct(v));
}

double l2_norm(const Domain& d, const Vec& u) { return std::sqrt(l2_inner(d, u, u)); }

double dirichlet_energy(const Domain& d, const Field& u) {
  check_domain(d, u, "dirichlet_energy");
  return dirichlet_energy(d, u.values());
}

double l2_inner(const Domain& d, const Field& u, const Field& v) {
  check_domain(d, u, "l2_inner");
  check_domain(d, v, "l2_inner");
  return l2_inner(d, u.values(), v.values());
}

double l2_norm(const Domain& d, const Field& u) {
  check_domain(d, u, "l2_norm");
  return l2_norm(d, u.values());
}

Index sign_change_edges(const Domain& d, const Vec& u) {
  require(u.size() == d.size(), errc::domain_mismatch, "sign_change_edges: field length mismatch");
  const SpMat& A = d.stiffness();
  Index count = 0;
  for (Index col = 0; col < A.outerSize(); ++col) {
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      if (it.row() <= col) continue; // each undirected edge once
      if (u[it.row()] > 0.0 && u[col] < 0.0) ++count;
      if (u[it.row()] < 0.0 && u[col] > 0.0) ++count;
    }
  }
  return count;
}

std::vector<Index> nodes_in_ball(const Domain& d, const Coord& center, double r) {
  require(r >= 0.0 && std::isfinite(r), errc::invalid_argument, "nodes_in_ball: bad radius");
  std::vector<Index> out;
  const auto& xs = d.coords();
  for (Index i = 0; i < d.size(); ++i) {
    double dist2 = 0.0;
    for (size_t a = 0; a < 3; ++a) {
      const double t = xs[static_cast<size_t>(i)][a] - center[a];
      dist2 += t * t;
    }
    if (dist2 < r * r) out.push_back(i);
  }
  return out;
}

} // namespace fucik
