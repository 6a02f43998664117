#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polybasin/error.hpp"
#include "polybasin/generator.hpp"

namespace polybasin {

/// Smoothness family: ND is continuous, D is C^1, D2 is C^2.
enum class FunctionType { ND, D, D2 };

constexpr std::string_view to_string(FunctionType type) noexcept {
  switch (type) {
    case FunctionType::ND: return "ND";
    case FunctionType::D: return "D";
    case FunctionType::D2: return "D2";
  }
  return "?";
}

inline std::optional<FunctionType> parse_function_type(std::string_view name) {
  if (name == "ND" || name == "nd") return FunctionType::ND;
  if (name == "D" || name == "d") return FunctionType::D;
  if (name == "D2" || name == "d2") return FunctionType::D2;
  return std::nullopt;
}

using EvalOutcome = Expected<double>;

/// Dense row-major square matrix.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit Matrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Which modified ball (index >= 1, zero based) contains x, if any.
struct BallLocation {
  std::optional<std::size_t> index;
  double r = 0.0;
};

/// Linear scan over the closed balls S_2..S_m.
inline BallLocation locate_ball(const GeneratedFunction& func, std::span<const double> x) {
  const MinimaTable& mt = func.minima();
  for (std::size_t i = 1; i < mt.size(); ++i) {
    const auto center = mt.point(i);
    double r2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - center[k];
      r2 += d * d;
    }
    if (r2 <= mt.rho[i] * mt.rho[i]) return {i, std::sqrt(r2)};
  }
  return {};
}

namespace detail {

inline std::optional<Error> precheck(const GeneratedFunction& func, std::span<const double> x) {
  if (func.empty()) return Error{ErrorCode::NoFunction, "no test function has been generated"};
  const ClassParams& p = func.params();
  if (x.size() != func.dim()) {
    return Error{ErrorCode::OutOfDomain, "point has " + std::to_string(x.size()) +
                                             " coordinates, expected " +
                                             std::to_string(func.dim())};
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= p.domain_left[k] && x[k] <= p.domain_right[k])) {
      return Error{ErrorCode::OutOfDomain,
                   "point does not belong to the admissible region (coordinate " +
                       std::to_string(k + 1) + ")"};
    }
  }
  return std::nullopt;
}

inline std::optional<Error> check_index(const GeneratedFunction& func, std::size_t j) {
  if (j >= func.dim()) {
    return Error{ErrorCode::BadVariableIndex,
                 "variable index " + std::to_string(j + 1) + " is out of the range [1, " +
                     std::to_string(func.dim()) + "]"};
  }
  return std::nullopt;
}

inline double paraboloid(const GeneratedFunction& func, std::span<const double> x) {
  const auto vertex = func.vertex();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - vertex[k];
    s += d * d;
  }
  return s + func.params().paraboloid_min;
}

/// Quantities shared by every polynomial branch inside ball i:
///   d = x - M_i, e = T - M_i, r = ||d||, p = <d, e>, s = p / r,
///   A = ||e||^2 + t - f_i.
struct Basin {
  std::vector<double> d;
  std::vector<double> e;
  double r = 0.0;
  double p = 0.0;
  double s = 0.0;
  double a = 0.0;
  double rho = 0.0;
  double f = 0.0;

  Basin(const GeneratedFunction& func, std::size_t i, std::span<const double> x, double radius)
      : d(x.size()), e(x.size()), r(radius) {
    const MinimaTable& mt = func.minima();
    const auto center = mt.point(i);
    const auto vertex = func.vertex();
    double ee = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      d[k] = x[k] - center[k];
      e[k] = vertex[k] - center[k];
      p += d[k] * e[k];
      ee += e[k] * e[k];
    }
    s = r > 0.0 ? p / r : 0.0;
    rho = mt.rho[i];
    f = mt.f[i];
    a = ee + func.params().paraboloid_min - f;
  }

  /// h_j = e_j r - p d_j / r
  double h(std::size_t j) const { return e[j] * r - p * d[j] / r; }
};

/// Cubic coefficients: C = c3 r^3 + c2 r^2 + f.
struct CubicCoeffs {
  double c3, c2;
  explicit CubicCoeffs(const Basin& b) {
    const double rho = b.rho;
    c3 = 2.0 * b.s / (rho * rho) - 2.0 * b.a / (rho * rho * rho);
    c2 = 1.0 - 4.0 * b.s / rho + 3.0 * b.a / (rho * rho);
  }
};

/// Quintic coefficients: Q = c5 r^5 + c4 r^4 + c3 r^3 + delta/2 r^2 + f.
struct QuinticCoeffs {
  double c5, c4, c3;
  QuinticCoeffs(const Basin& b, double delta) {
    const double rho = b.rho;
    const double rho2 = rho * rho;
    const double rho3 = rho2 * rho;
    const double rho4 = rho3 * rho;
    const double rho5 = rho4 * rho;
    const double bend = 1.0 - 0.5 * delta;
    c5 = -6.0 * b.s / rho4 + 6.0 * b.a / rho5 + bend / rho3;
    c4 = 16.0 * b.s / rho3 - 15.0 * b.a / rho4 - 3.0 * bend / rho2;
    c3 = -12.0 * b.s / rho2 + 10.0 * b.a / rho3 + 3.0 * bend / rho;
  }
};

template <class Branch>
EvalOutcome evaluate(const GeneratedFunction& func, std::span<const double> x, Branch branch) {
  if (auto err = precheck(func, x)) return *err;
  const BallLocation loc = locate_ball(func, x);
  if (!loc.index) return paraboloid(func, x);
  const std::size_t i = *loc.index;
  if (loc.r < func.params().precision) return func.minima().f[i];
  return branch(Basin(func, i, x, loc.r));
}

}  // namespace detail

/// Non-differentiable type: P_i = (1 - 2 s / rho + A / rho^2) r^2 + f_i.
inline EvalOutcome eval_nd(const GeneratedFunction& func, std::span<const double> x) {
  return detail::evaluate(func, x, [](const detail::Basin& b) {
    const double c2 = 1.0 - 2.0 * b.s / b.rho + b.a / (b.rho * b.rho);
    return c2 * b.r * b.r + b.f;
  });
}

/// Continuously differentiable type (cubic C_i inside the balls).
inline EvalOutcome eval_d(const GeneratedFunction& func, std::span<const double> x) {
  return detail::evaluate(func, x, [](const detail::Basin& b) {
    const detail::CubicCoeffs c(b);
    return (c.c3 * b.r + c.c2) * b.r * b.r + b.f;
  });
}

/// Twice continuously differentiable type (quintic Q_i inside the balls).
inline EvalOutcome eval_d2(const GeneratedFunction& func, std::span<const double> x) {
  const double delta = func.delta();
  return detail::evaluate(func, x, [delta](const detail::Basin& b) {
    const detail::QuinticCoeffs c(b, delta);
    const double r = b.r;
    return (((c.c5 * r + c.c4) * r + c.c3) * r + 0.5 * delta) * r * r + b.f;
  });
}

inline EvalOutcome eval(const GeneratedFunction& func, FunctionType type,
                        std::span<const double> x) {
  switch (type) {
    case FunctionType::ND: return eval_nd(func, x);
    case FunctionType::D: return eval_d(func, x);
    case FunctionType::D2: return eval_d2(func, x);
  }
  return Error{ErrorCode::NoFunction, "unknown function type"};
}

/// dC/dx_j (zero-based j) for the D type.
inline EvalOutcome d_deriv(const GeneratedFunction& func, std::size_t j,
                           std::span<const double> x) {
  if (auto err = detail::precheck(func, x)) return *err;
  if (auto err = detail::check_index(func, j)) return *err;
  const BallLocation loc = locate_ball(func, x);
  if (!loc.index) return 2.0 * (x[j] - func.vertex()[j]);
  if (loc.r < func.params().precision) return 0.0;

  const detail::Basin b(func, *loc.index, x, loc.r);
  const detail::CubicCoeffs c(b);
  const double rho = b.rho;
  const double hj = b.h(j);
  return 2.0 / (rho * rho) * hj * b.r + 3.0 * c.c3 * b.d[j] * b.r - 4.0 / rho * hj +
         2.0 * c.c2 * b.d[j];
}

/// dQ/dx_j (zero-based j) for the D2 type.
inline EvalOutcome d2_deriv1(const GeneratedFunction& func, std::size_t j,
                             std::span<const double> x) {
  if (auto err = detail::precheck(func, x)) return *err;
  if (auto err = detail::check_index(func, j)) return *err;
  const BallLocation loc = locate_ball(func, x);
  if (!loc.index) return 2.0 * (x[j] - func.vertex()[j]);
  if (loc.r < func.params().precision) return 0.0;

  const detail::Basin b(func, *loc.index, x, loc.r);
  const detail::QuinticCoeffs c(b, func.delta());
  const double rho2 = b.rho * b.rho;
  const double rho3 = rho2 * b.rho;
  const double rho4 = rho3 * b.rho;
  const double r = b.r;
  const double hj = b.h(j);
  const double dj = b.d[j];
  return -6.0 / rho4 * hj * r * r * r + 5.0 * dj * r * r * r * c.c5 +
         16.0 / rho3 * hj * r * r + 4.0 * dj * r * r * c.c4 - 12.0 / rho2 * hj * r +
         3.0 * dj * r * c.c3 + func.delta() * dj;
}

/// d^2 Q / dx_j dx_k (zero-based j, k) for the D2 type.
inline EvalOutcome d2_deriv2(const GeneratedFunction& func, std::size_t j, std::size_t k,
                             std::span<const double> x) {
  if (auto err = detail::precheck(func, x)) return *err;
  if (auto err = detail::check_index(func, j)) return *err;
  if (auto err = detail::check_index(func, k)) return *err;
  const BallLocation loc = locate_ball(func, x);
  if (!loc.index) return j == k ? 2.0 : 0.0;
  if (loc.r < func.params().precision) return j == k ? func.delta() : 0.0;
  // Same operand order for (j, k) and (k, j) keeps the matrix exactly symmetric.
  if (j > k) std::swap(j, k);

  const detail::Basin b(func, *loc.index, x, loc.r);
  const detail::QuinticCoeffs c(b, func.delta());
  const double rho2 = b.rho * b.rho;
  const double rho3 = rho2 * b.rho;
  const double rho4 = rho3 * b.rho;
  const double r = b.r;
  const double hj = b.h(j);
  const double dj = b.d[j];

  if (j != k) {
    const double hk = b.h(k);
    const double dk = b.d[k];
    const double dhj = b.e[j] * dk / r - hk * dj / (r * r);
    return -6.0 / rho4 * (dhj * r * r * r + 3.0 * hj * dk * r) - 30.0 / rho4 * hk * dj * r +
           15.0 * dj * dk * r * c.c5 + 16.0 / rho3 * (dhj * r * r + 2.0 * hj * dk) +
           64.0 / rho3 * hk * dj + 8.0 * dj * dk * c.c4 -
           12.0 / rho2 * (dhj * r + hj * dk / r) - 36.0 / rho2 * hk * dj / r +
           3.0 * dj * dk / r * c.c3;
  }
  const double dhj = b.e[j] * dj / r - hj * dj / (r * r) - b.p / r;
  return -6.0 / rho4 * (dhj * r * r * r + 3.0 * hj * dj * r) +
         (5.0 * r * r * r + 15.0 * dj * dj * r) * c.c5 - 30.0 / rho4 * hj * dj * r +
         16.0 / rho3 * (dhj * r * r + 2.0 * hj * dj) + 64.0 / rho3 * hj * dj +
         (4.0 * r * r + 8.0 * dj * dj) * c.c4 - 12.0 / rho2 * (dhj * r + hj * dj / r) -
         36.0 / rho2 * hj * dj / r + (3.0 * r + 3.0 * dj * dj / r) * c.c3 + func.delta();
}

namespace detail {

inline Error component_failure(const Error& cause, std::string_view what) {
  return Error{ErrorCode::DerivEvalError,
               std::string(what) + " component failed: " + cause.message()};
}

template <class Component>
Expected<std::vector<double>> assemble_gradient(const GeneratedFunction& func,
                                                std::span<const double> x, Component component) {
  if (auto err = precheck(func, x)) return component_failure(*err, "gradient");
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    EvalOutcome v = component(func, j, x);
    if (!v) return component_failure(v.error(), "gradient");
    g[j] = *v;
  }
  return g;
}

}  // namespace detail

/// Errors from any component are reported as DerivEvalError, with the
/// underlying cause in the detail string.
inline Expected<std::vector<double>> d_gradient(const GeneratedFunction& func,
                                                std::span<const double> x) {
  return detail::assemble_gradient(func, x, d_deriv);
}

inline Expected<std::vector<double>> d2_gradient(const GeneratedFunction& func,
                                                 std::span<const double> x) {
  return detail::assemble_gradient(func, x, d2_deriv1);
}

inline Expected<Matrix> d2_hessian(const GeneratedFunction& func, std::span<const double> x) {
  if (auto err = detail::precheck(func, x)) return detail::component_failure(*err, "Hessian");
  Matrix h(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      EvalOutcome v = d2_deriv2(func, j, k, x);
      if (!v) return detail::component_failure(v.error(), "Hessian");
      h(j, k) = *v;
    }
  }
  return h;
}

}  // namespace polybasin
