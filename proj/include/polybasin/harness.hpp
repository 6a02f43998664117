#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polybasin/classio.hpp"
#include "polybasin/eval.hpp"
#include "polybasin/generator.hpp"
#include "polybasin/rng.hpp"

namespace polybasin {

/// Budgeted access to one test function. Every value or gradient query costs
/// one evaluation, including rejected out-of-domain queries, which never
/// reach the function. The oracle tracks the best feasible value seen.
class Oracle {
 public:
  Oracle(const GeneratedFunction& func, FunctionType type, std::size_t budget, double value_tol)
      : func_(&func), type_(type), budget_(budget), value_tol_(value_tol) {}

  std::size_t dim() const { return func_->dim(); }
  std::span<const double> lower() const { return func_->params().domain_left; }
  std::span<const double> upper() const { return func_->params().domain_right; }
  FunctionType type() const { return type_; }
  int nf() const { return func_->nf(); }

  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_ - used_; }
  bool exhausted() const { return used_ >= budget_; }

  /// Ground truth, for replay-style reference solvers only.
  const GeneratedFunction& ground_truth() const { return *func_; }

  std::optional<double> value(std::span<const double> x) {
    if (!charge()) return std::nullopt;
    auto v = eval(*func_, type_, x);
    if (!v) return std::nullopt;
    record(x, *v);
    return *v;
  }

  /// Analytic gradient (D and D2 types only).
  std::optional<std::vector<double>> gradient(std::span<const double> x) {
    if (type_ == FunctionType::ND) return std::nullopt;
    if (!charge()) return std::nullopt;
    auto g = type_ == FunctionType::D ? d_gradient(*func_, x) : d2_gradient(*func_, x);
    if (!g) return std::nullopt;
    return std::move(g).value();
  }

  bool has_best() const { return !best_point_.empty(); }
  double best_value() const { return best_value_; }
  const std::vector<double>& best_point() const { return best_point_; }
  std::optional<std::size_t> evals_to_success() const { return evals_to_success_; }

  /// ||x - some global minimizer|| <= rho*
  bool hits_global_ball(std::span<const double> x) const {
    const auto& mt = func_->minima();
    const auto& glob = func_->glob();
    for (std::size_t g = 0; g < glob.num_global_minima; ++g) {
      if (detail::distance(x, mt.point(glob.gm_index[g])) <= func_->params().global_radius)
        return true;
    }
    return false;
  }

  bool hits_value(double v) const { return v <= func_->params().global_value + value_tol_; }

 private:
  bool charge() {
    if (used_ >= budget_) return false;
    ++used_;
    return true;
  }

  void record(std::span<const double> x, double v) {
    if (has_best() && !(v < best_value_)) return;
    best_value_ = v;
    best_point_.assign(x.begin(), x.end());
    if (!evals_to_success_ && (hits_value(v) || hits_global_ball(x))) evals_to_success_ = used_;
  }

  const GeneratedFunction* func_;
  FunctionType type_;
  std::size_t budget_;
  double value_tol_;
  std::size_t used_ = 0;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_point_;
  std::optional<std::size_t> evals_to_success_;
};

/// A solver drives the oracle until it is satisfied or the budget runs out.
using Solver = std::function<void(Oracle&)>;

struct FunctionRun {
  int nf = 0;
  std::size_t evaluations = 0;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_point;
  bool hit_ball = false;
  bool hit_value = false;
  bool success = false;
  std::optional<std::size_t> evals_to_success;
  std::string failure;
};

struct SolverReport {
  std::string solver;
  FunctionType type = FunctionType::D;
  std::size_t budget = 0;
  double value_tol = 0.0;
  std::vector<FunctionRun> runs;
  int success_count = 0;
  double mean_evals_to_success = std::numeric_limits<double>::quiet_NaN();
  double median_evals_to_success = std::numeric_limits<double>::quiet_NaN();
};

inline double default_value_tol(const ClassParams& p) {
  return 1e-4 * (p.paraboloid_min - p.global_value);
}

namespace detail {

inline std::vector<double> clamp_to_box(std::span<const double> x, std::span<const double> lo,
                                        std::span<const double> hi) {
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = std::clamp(x[k], lo[k], hi[k]);
  return y;
}

inline std::vector<double> random_point(Oracle& oracle, LaggedFibonacci& rng) {
  std::vector<double> x(oracle.dim());
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = oracle.lower()[k] + rng.next_uniform() * (oracle.upper()[k] - oracle.lower()[k]);
  return x;
}

inline std::uint32_t solver_seed(std::uint32_t seed, int nf) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(seed) + 7919u * nf) %
                                    LaggedFibonacci::kModulus);
}

/// Compass search for the non-differentiable type.
inline std::vector<double> coordinate_search(Oracle& oracle, std::vector<double> x,
                                             std::size_t max_steps) {
  auto fx = oracle.value(x);
  if (!fx) return x;
  double step = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    step = std::max(step, 0.1 * (oracle.upper()[k] - oracle.lower()[k]));
  for (std::size_t it = 0; it < max_steps && step > 1e-10; ++it) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size() && !improved; ++k) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> y = x;
        y[k] = std::clamp(y[k] + sign * step, oracle.lower()[k], oracle.upper()[k]);
        auto fy = oracle.value(y);
        if (!fy) return x;
        if (*fy < *fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace detail

/// Projected steepest descent with Armijo backtracking (D and D2 types);
/// falls back to compass search for the ND type. Returns the final iterate.
inline std::vector<double> local_descent(Oracle& oracle, std::vector<double> x,
                                         std::size_t max_steps) {
  if (oracle.type() == FunctionType::ND)
    return detail::coordinate_search(oracle, std::move(x), max_steps);

  auto fx = oracle.value(x);
  if (!fx) return x;
  double step = 0.1;
  for (std::size_t it = 0; it < max_steps; ++it) {
    auto g = oracle.gradient(x);
    if (!g) break;
    double gnorm2 = 0.0;
    for (double gk : *g) gnorm2 += gk * gk;
    if (gnorm2 < 1e-28) break;

    bool accepted = false;
    while (step > 1e-16) {
      std::vector<double> trial(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - step * (*g)[k];
      trial = detail::clamp_to_box(trial, oracle.lower(), oracle.upper());
      double decrease = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) decrease += (*g)[k] * (x[k] - trial[k]);
      auto ft = oracle.value(trial);
      if (!ft) return x;
      if (*ft <= *fx - 1e-4 * decrease && decrease > 0.0) {
        x = std::move(trial);
        fx = ft;
        step = std::min(2.0 * step, 1.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return x;
}

/// Uniform random restarts, each followed by `local_steps` of local descent.
inline Solver builtin_multistart(std::size_t local_steps, std::size_t starts,
                                 std::uint32_t seed) {
  return [=](Oracle& oracle) {
    LaggedFibonacci rng(detail::solver_seed(seed, oracle.nf()));
    for (std::size_t s = 0; s < starts && !oracle.exhausted(); ++s)
      local_descent(oracle, detail::random_point(oracle, rng), local_steps);
  };
}

/// Pure random search until the budget is spent.
inline Solver random_search(std::uint32_t seed) {
  return [=](Oracle& oracle) {
    LaggedFibonacci rng(detail::solver_seed(seed, oracle.nf()));
    while (!oracle.exhausted()) oracle.value(detail::random_point(oracle, rng));
  };
}

/// Replays the stored global minimizer: one evaluation per function.
inline Solver oracle_replay() {
  return [](Oracle& oracle) {
    const auto x = oracle.ground_truth().global_minimizer();
    oracle.value(x);
  };
}

/// Runs `solver` on all 100 functions of the class and scores it against
/// the ground truth.
inline Expected<SolverReport> run_solver(const ClassParams& params, FunctionType type,
                                         const Solver& solver, std::size_t budget,
                                         double value_tol, std::string solver_name = "custom") {
  if (budget < 1) return Error{ErrorCode::InvalidArgument, "budget must be at least 1"};
  if (!(value_tol >= 0.0)) return Error{ErrorCode::InvalidArgument, "value_tol must be >= 0"};
  if (auto errors = check(params); !errors.empty()) return errors.front();

  SolverReport report;
  report.solver = std::move(solver_name);
  report.type = type;
  report.budget = budget;
  report.value_tol = value_tol;
  std::vector<double> to_success;

  for (int nf = 1; nf <= kFunctionsPerClass; ++nf) {
    auto func = generate(params, nf);
    if (!func) return func.error();
    Oracle oracle(*func, type, budget, value_tol);
    FunctionRun run;
    run.nf = nf;
    try {
      solver(oracle);
    } catch (const std::exception& e) {
      run.failure = e.what();
    } catch (...) {
      run.failure = "solver raised a non-standard exception";
    }
    run.evaluations = oracle.used();
    if (oracle.has_best()) {
      run.best_value = oracle.best_value();
      run.best_point = oracle.best_point();
      run.hit_ball = oracle.hits_global_ball(run.best_point);
      run.hit_value = oracle.hits_value(run.best_value);
    }
    run.success = run.failure.empty() && (run.hit_ball || run.hit_value);
    if (run.success) {
      run.evals_to_success = oracle.evals_to_success();
      ++report.success_count;
      if (run.evals_to_success) to_success.push_back(static_cast<double>(*run.evals_to_success));
    }
    report.runs.push_back(std::move(run));
  }

  if (!to_success.empty()) {
    double sum = 0.0;
    for (double v : to_success) sum += v;
    report.mean_evals_to_success = sum / static_cast<double>(to_success.size());
    std::sort(to_success.begin(), to_success.end());
    const std::size_t n = to_success.size();
    report.median_evals_to_success =
        n % 2 ? to_success[n / 2] : 0.5 * (to_success[n / 2 - 1] + to_success[n / 2]);
  }
  return report;
}

inline Json report_to_json(const SolverReport& r) {
  auto number_or_null = [](double v) { return std::isnan(v) ? Json() : Json(v); };
  Json j;
  j["solver"] = r.solver;
  j["function_type"] = std::string(to_string(r.type));
  j["budget"] = r.budget;
  j["value_tol"] = r.value_tol;
  j["success_count"] = r.success_count;
  j["num_functions"] = r.runs.size();
  j["mean_evals_to_success"] = number_or_null(r.mean_evals_to_success);
  j["median_evals_to_success"] = number_or_null(r.median_evals_to_success);
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json e;
    e["nf"] = run.nf;
    e["evaluations"] = run.evaluations;
    e["best_value"] = number_or_null(std::isfinite(run.best_value)
                                         ? run.best_value
                                         : std::numeric_limits<double>::quiet_NaN());
    e["best_point"] = run.best_point;
    e["hit_ball"] = run.hit_ball;
    e["hit_value"] = run.hit_value;
    e["success"] = run.success;
    e["evals_to_success"] = run.evals_to_success ? Json(*run.evals_to_success) : Json();
    e["failure"] = run.failure;
    runs.push_back(std::move(e));
  }
  j["runs"] = std::move(runs);
  return j;
}

inline std::string report_to_csv(const SolverReport& r) {
  std::string out = "nf,evaluations,best_value,hit_ball,hit_value,success,evals_to_success\n";
  for (const auto& run : r.runs) {
    out += std::to_string(run.nf) + "," + std::to_string(run.evaluations) + "," +
           format_real(run.best_value) + "," + (run.hit_ball ? "1" : "0") + "," +
           (run.hit_value ? "1" : "0") + "," + (run.success ? "1" : "0") + "," +
           (run.evals_to_success ? std::to_string(*run.evals_to_success) : std::string()) + "\n";
  }
  return out;
}

}  // namespace polybasin
