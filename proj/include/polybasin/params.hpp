#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polybasin/error.hpp"

namespace polybasin {

inline constexpr std::size_t kDefaultMaxDim = 100;
inline constexpr std::size_t kDefaultNumMinima = 10;
inline constexpr double kDefaultGlobalValue = -1.0;
inline constexpr double kDefaultParaboloidMin = 0.0;
inline constexpr double kDefaultDeltaMax = 10.0;
inline constexpr double kDefaultPrecision = 1e-10;
inline constexpr double kDefaultWeight = 0.99;
inline constexpr double kGlobalWeight = 1.0;
inline constexpr int kFunctionsPerClass = 100;

/// Minimizer numbering: row 0 is the paraboloid vertex T, row 1 the
/// user-placed global minimizer x*.
inline constexpr std::size_t kVertexIndex = 0;
inline constexpr std::size_t kGlobalIndex = 1;

/// Parameters defining one class of 100 test functions.
///
/// `gap` and `weights` are optional: when unset they follow the global
/// radius (gap = rho*) and the default weight rule (1 for x*, 0.99 else).
struct ClassParams {
  std::size_t dim = 2;
  std::size_t num_minima = kDefaultNumMinima;
  double global_value = kDefaultGlobalValue;
  double global_dist = 2.0 / 3.0;
  double global_radius = 1.0 / 3.0;
  std::vector<double> domain_left;
  std::vector<double> domain_right;
  double paraboloid_min = kDefaultParaboloidMin;
  double delta_max = kDefaultDeltaMax;
  std::optional<double> gap;
  std::vector<double> weights;
  double precision = kDefaultPrecision;
  std::size_t max_dim = kDefaultMaxDim;

  double effective_gap() const { return gap.value_or(global_radius); }

  double weight(std::size_t i) const {
    if (!weights.empty()) return weights.at(i);
    return i == kGlobalIndex ? kGlobalWeight : kDefaultWeight;
  }

  std::vector<double> effective_weights() const {
    std::vector<double> w(num_minima);
    for (std::size_t i = 0; i < num_minima; ++i) w[i] = weight(i);
    return w;
  }

  /// min_j |b_j - a_j|, or 0 when the boundary vectors are unusable.
  double min_side() const {
    if (domain_left.size() != dim || domain_right.size() != dim || dim == 0) return 0.0;
    double side = std::abs(domain_right[0] - domain_left[0]);
    for (std::size_t j = 1; j < dim; ++j)
      side = std::min(side, std::abs(domain_right[j] - domain_left[j]));
    return side;
  }

  /// Defaults for `dim` without validating it: Omega = [-1,1]^N, m = 10,
  /// f* = -1, r* = min side / 3, rho* = min side / 6.
  static ClassParams with_defaults(std::size_t dim) {
    ClassParams p;
    p.dim = dim;
    p.domain_left.assign(dim, -1.0);
    p.domain_right.assign(dim, 1.0);
    p.reset_distances();
    return p;
  }

  /// Recompute r* and rho* from the current domain.
  void reset_distances() {
    const double side = dim > 0 ? min_side() : 2.0;
    global_dist = side / 3.0;
    global_radius = side / 6.0;
  }

  bool operator==(const ClassParams&) const = default;
};

/// Defaults for a valid dimension, or DimError.
inline Expected<ClassParams> default_params(std::size_t dim,
                                            std::size_t max_dim = kDefaultMaxDim) {
  if (dim < 2 || dim > max_dim) {
    return Error{ErrorCode::DimError, "dimension must satisfy 2 <= N <= " +
                                          std::to_string(max_dim) + ", got " +
                                          std::to_string(dim)};
  }
  ClassParams p = ClassParams::with_defaults(dim);
  p.max_dim = max_dim;
  return p;
}

/// Every violated class condition; empty means the parameters are valid.
///
/// Tuning constants are reported under the nearest class error code: weights under
/// NumMinimaError, the gap under GlobalRadiusError, delta_max and precision
/// under BoundaryError.
inline std::vector<Error> check(const ClassParams& p) {
  std::vector<Error> errors;
  auto report = [&](ErrorCode code, std::string detail) {
    errors.push_back(Error{code, std::move(detail)});
  };

  if (p.dim < 2 || p.dim > p.max_dim) {
    report(ErrorCode::DimError, "dimension must satisfy 2 <= N <= " + std::to_string(p.max_dim) +
                                    ", got " + std::to_string(p.dim));
  }
  if (p.num_minima < 2) {
    report(ErrorCode::NumMinimaError,
           "number of minima must be >= 2, got " + std::to_string(p.num_minima));
  }
  if (!p.weights.empty()) {
    if (p.weights.size() != p.num_minima) {
      report(ErrorCode::NumMinimaError, "weights must have one entry per minimizer");
    } else {
      for (double w : p.weights) {
        if (!(w > 0.0 && w <= 1.0)) {
          report(ErrorCode::NumMinimaError, "weights must lie in (0, 1]");
          break;
        }
      }
    }
  }

  bool boundary_ok = p.domain_left.size() == p.dim && p.domain_right.size() == p.dim;
  if (!boundary_ok) {
    report(ErrorCode::BoundaryError, "boundary vectors a, b must both have length N");
  } else {
    for (std::size_t j = 0; j < p.dim; ++j) {
      if (!(std::isfinite(p.domain_left[j]) && std::isfinite(p.domain_right[j]) &&
            p.domain_left[j] < p.domain_right[j])) {
        report(ErrorCode::BoundaryError,
               "admissible region requires a < b componentwise (coordinate " +
                   std::to_string(j + 1) + ")");
        boundary_ok = false;
        break;
      }
    }
  }
  if (!(p.delta_max > 0.0) || !std::isfinite(p.delta_max)) {
    report(ErrorCode::BoundaryError, "delta_max must be positive and finite");
  }
  if (!(p.precision > 0.0) || !std::isfinite(p.precision)) {
    report(ErrorCode::BoundaryError, "precision must be positive and finite");
  }

  if (!(p.global_value < p.paraboloid_min) || !std::isfinite(p.global_value) ||
      !std::isfinite(p.paraboloid_min)) {
    report(ErrorCode::GlobalMinValueError,
           "global minimum value f* must be below the paraboloid minimum t (f* < t)");
  }

  const double half_side = boundary_ok ? 0.5 * p.min_side() : 0.0;
  if (!(p.global_dist > 0.0) || (boundary_ok && !(p.global_dist < half_side))) {
    report(ErrorCode::GlobalDistError,
           "distance r* must satisfy 0 < r* < 0.5 min|b_j - a_j|" +
               (boundary_ok ? " = " + std::to_string(half_side) : std::string()));
  }
  if (!(p.global_radius > 0.0 && p.global_radius <= 0.5 * p.global_dist)) {
    report(ErrorCode::GlobalRadiusError, "radius rho* must satisfy 0 < rho* <= 0.5 r*");
  }
  if (!(p.effective_gap() > 0.0) || !std::isfinite(p.effective_gap())) {
    report(ErrorCode::GlobalRadiusError, "gap zeta must be positive");
  }
  return errors;
}

}  // namespace polybasin
