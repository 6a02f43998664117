#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polybasin/error.hpp"
#include "polybasin/params.hpp"
#include "polybasin/rng.hpp"

namespace polybasin {

using Point = std::vector<double>;

inline constexpr int kPlacementRetries = 10'000;

/// Ground truth about every local minimizer of one function.
/// Row 0 is the paraboloid vertex T, row 1 the global minimizer x*.
struct MinimaTable {
  std::size_t dim = 0;
  std::vector<double> local_min;  // row-major, size() * dim
  std::vector<double> f;
  std::vector<double> rho;
  std::vector<double> peak;
  std::vector<double> w_rho;

  std::size_t size() const noexcept { return f.size(); }

  std::span<const double> point(std::size_t i) const {
    return {local_min.data() + i * dim, dim};
  }

  bool operator==(const MinimaTable&) const = default;
};

/// Global minimizers (indices into MinimaTable, zero based) come first in
/// `gm_index`, followed by the remaining local minimizers; both groups ascend.
struct GlobalInfo {
  std::size_t num_global_minima = 0;
  std::vector<std::size_t> gm_index;

  bool operator==(const GlobalInfo&) const = default;
};

/// Immutable record of one generated test function. A default-constructed
/// record is "unassembled": evaluating it reports NoFunction.
class GeneratedFunction {
 public:
  GeneratedFunction() = default;

  static GeneratedFunction assemble(ClassParams params, int nf, MinimaTable minima,
                                    GlobalInfo glob, double delta) {
    GeneratedFunction g;
    g.params_ = std::move(params);
    g.nf_ = nf;
    g.minima_ = std::move(minima);
    g.glob_ = std::move(glob);
    g.delta_ = delta;
    return g;
  }

  bool empty() const noexcept { return minima_.size() == 0; }
  const ClassParams& params() const noexcept { return params_; }
  int nf() const noexcept { return nf_; }
  const MinimaTable& minima() const noexcept { return minima_; }
  const GlobalInfo& glob() const noexcept { return glob_; }
  double delta() const noexcept { return delta_; }
  std::size_t dim() const noexcept { return minima_.dim; }

  std::span<const double> vertex() const { return minima_.point(kVertexIndex); }
  std::span<const double> global_minimizer() const { return minima_.point(kGlobalIndex); }

  bool operator==(const GeneratedFunction&) const = default;

 private:
  ClassParams params_;
  int nf_ = 0;
  MinimaTable minima_;
  GlobalInfo glob_;
  double delta_ = 0.0;
};

namespace detail {

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool interior(double v, double lo, double hi, double eps) {
  return lo + eps < v && v < hi - eps;
}

inline Point uniform_interior_point(const ClassParams& p, LaggedFibonacci& rng) {
  Point x(p.dim);
  for (std::size_t k = 0; k < p.dim; ++k) {
    const double lo = p.domain_left[k];
    const double hi = p.domain_right[k];
    do {
      x[k] = lo + rng.next_uniform() * (hi - lo);
    } while (!interior(x[k], lo, hi, p.precision));
  }
  return x;
}

}  // namespace detail

/// x* := T + r* * (generalized spherical direction from `angles`), where
/// angles holds phi_1..phi_{N-1}. Coordinates leaving the interior of the
/// box are reflected through T: x*_k := 2 T_k - x*_k.
inline Point place_global_from_angles(std::span<const double> vertex,
                                      std::span<const double> angles, double r_star,
                                      std::span<const double> lo, std::span<const double> hi,
                                      double eps = kDefaultPrecision) {
  const std::size_t n = vertex.size();
  if (angles.size() + 1 != n) throw std::invalid_argument("need N-1 angles");
  Point x(n);
  double sin_prod = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    x[j] = vertex[j] + r_star * std::cos(angles[j]) * sin_prod;
    sin_prod *= std::sin(angles[j]);
  }
  x[n - 1] = vertex[n - 1] + r_star * sin_prod;

  for (std::size_t k = 0; k < n; ++k) {
    if (!detail::interior(x[k], lo[k], hi[k], eps)) {
      x[k] = 2.0 * vertex[k] - x[k];
      if (!detail::interior(x[k], lo[k], hi[k], eps)) {
        throw std::logic_error("reflected global minimizer left the admissible region");
      }
    }
  }
  return x;
}

/// Draws T uniformly in int(Omega), then x* at distance r* from T.
inline std::pair<Point, Point> place_vertex_and_global(const ClassParams& p,
                                                       LaggedFibonacci& rng) {
  Point vertex = detail::uniform_interior_point(p, rng);
  std::vector<double> angles(p.dim - 1);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const double span = j == 0 ? std::numbers::pi : 2.0 * std::numbers::pi;
    angles[j] = span * rng.next_uniform();
  }
  Point global = place_global_from_angles(vertex, angles, p.global_dist, p.domain_left,
                                          p.domain_right, p.precision);
  return {std::move(vertex), std::move(global)};
}

/// Rejection-samples M_3..M_m: interior, pairwise distinct (> eps) and at
/// least rho* + zeta away from x*.
inline Expected<std::vector<Point>> place_local_minimizers(const ClassParams& p,
                                                           const Point& vertex,
                                                           const Point& global,
                                                           LaggedFibonacci& rng) {
  std::vector<Point> placed;
  if (p.num_minima <= 2) return placed;
  placed.reserve(p.num_minima - 2);
  const double min_gap_dist = p.global_radius + p.effective_gap();

  for (std::size_t i = 2; i < p.num_minima; ++i) {
    bool accepted = false;
    for (int attempt = 0; attempt < kPlacementRetries && !accepted; ++attempt) {
      Point candidate = detail::uniform_interior_point(p, rng);
      if (detail::distance(candidate, global) < min_gap_dist) continue;
      if (detail::distance(candidate, vertex) <= p.precision) continue;
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Point& q) {
        return detail::distance(candidate, q) <= p.precision;
      });
      if (clash) continue;
      placed.push_back(std::move(candidate));
      accepted = true;
    }
    if (!accepted) {
      return Error{ErrorCode::NumMinimaError,
                   "cannot place minimizers: minimizer " + std::to_string(i + 1) +
                       " rejected " + std::to_string(kPlacementRetries) + " times"};
    }
  }
  return placed;
}

/// Attraction radii for all minimizers (row 1 is x*).
///
/// Initial radius is half the nearest-neighbour distance, additionally capped
/// by the clearance to the fixed global ball. Radii are then expanded in
/// ascending index order against the current radii of the others, and
/// finally scaled by the weights.
inline std::vector<double> compute_radii(const std::vector<Point>& points, const ClassParams& p) {
  const std::size_t m = points.size();
  std::vector<double> dist(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      dist[i * m + j] = dist[j * m + i] = detail::distance(points[i], points[j]);

  std::vector<double> rho(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == kGlobalIndex) {
      rho[i] = p.global_radius;
      continue;
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) nearest = std::min(nearest, dist[i * m + j]);
    rho[i] = std::min(0.5 * nearest, dist[i * m + kGlobalIndex] - p.global_radius);
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (i == kGlobalIndex) continue;
    double room = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) room = std::min(room, dist[i * m + j] - rho[j]);
    rho[i] = std::max(rho[i], room);
  }

  for (std::size_t i = 0; i < m; ++i) rho[i] *= p.weight(i);
  return rho;
}

/// min of ||x - T||^2 + t over the sphere ||x - M|| = rho, for T outside it.
inline double paraboloid_min_on_sphere(std::span<const double> vertex,
                                       std::span<const double> center, double rho, double t) {
  const double gap = detail::distance(vertex, center) - rho;
  return gap * gap + t;
}

struct MinimaValues {
  std::vector<double> f;
  std::vector<double> peak;
};

/// f_1 = t, f_2 = f*, and for i >= 3: f_i = Z_{B_i} - gamma_i with
/// gamma_i = min(U(rho_i, 2 rho_i), U(0, Z_{B_i} - f*)).
inline MinimaValues compute_minima_values(const std::vector<Point>& points,
                                          const std::vector<double>& rho, const ClassParams& p,
                                          LaggedFibonacci& rng) {
  const std::size_t m = points.size();
  MinimaValues out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  out.f[kVertexIndex] = p.paraboloid_min;
  out.f[kGlobalIndex] = p.global_value;
  const Point& vertex = points[kVertexIndex];
  for (std::size_t i = 2; i < m; ++i) {
    const double z = paraboloid_min_on_sphere(vertex, points[i], rho[i], p.paraboloid_min);
    if (!(z - p.global_value > p.precision)) {
      throw std::logic_error("paraboloid minimum over a ball boundary is not above f*");
    }
    const double by_radius = rho[i] * (1.0 + rng.next_open_uniform());
    const double by_depth = (z - p.global_value) * rng.next_open_uniform();
    out.peak[i] = std::min(by_radius, by_depth);
    out.f[i] = z - out.peak[i];
  }
  return out;
}

/// Indices i with f_i <= f* + eps first (ascending), then the rest.
inline GlobalInfo identify_globals(std::span<const double> f, double global_value, double eps) {
  GlobalInfo info;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= global_value + eps) {
      info.gm_index.push_back(i);
    } else {
      rest.push_back(i);
    }
  }
  info.num_global_minima = info.gm_index.size();
  info.gm_index.insert(info.gm_index.end(), rest.begin(), rest.end());
  return info;
}

/// Generates function `nf` (1..100) of the class described by `p`.
inline Expected<GeneratedFunction> generate(const ClassParams& p, int nf) {
  if (nf < 1 || nf > kFunctionsPerClass) {
    return Error{ErrorCode::FuncNumberError,
                 "function number " + std::to_string(nf) + " exceeds 100 or is less than 1"};
  }
  if (auto errors = check(p); !errors.empty()) return errors.front();

  LaggedFibonacci rng(function_seed(nf, p.num_minima, p.dim));
  auto [vertex, global] = place_vertex_and_global(p, rng);
  auto locals = place_local_minimizers(p, vertex, global, rng);
  if (!locals) return locals.error();

  std::vector<Point> points;
  points.reserve(p.num_minima);
  points.push_back(std::move(vertex));
  points.push_back(std::move(global));
  for (const Point& q : *locals) points.push_back(q);

  MinimaTable table;
  table.dim = p.dim;
  table.local_min.reserve(p.num_minima * p.dim);
  for (const Point& q : points) table.local_min.insert(table.local_min.end(), q.begin(), q.end());
  table.rho = compute_radii(points, p);
  auto values = compute_minima_values(points, table.rho, p, rng);
  table.f = std::move(values.f);
  table.peak = std::move(values.peak);
  table.w_rho = p.effective_weights();

  const double delta = p.delta_max * rng.next_open_uniform();
  GlobalInfo glob = identify_globals(table.f, p.global_value, p.precision);
  return GeneratedFunction::assemble(p, nf, std::move(table), std::move(glob), delta);
}

}  // namespace polybasin
