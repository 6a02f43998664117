#include <stdexcept>

#include <gtest/gtest.h>

#include "polybasin/harness.hpp"
#include "test_support.hpp"

using namespace polybasin;

namespace {

ClassParams defaults(std::size_t n = 2) { return default_params(n).value(); }

}  // namespace

TEST(Oracle, ChargesEveryQueryAndRejectsOutOfDomain) {
  const auto g = testsupport::hand_built();
  Oracle oracle(g, FunctionType::D, 3, 1e-4);
  const std::vector<double> outside{2.0, 0.0};
  const std::vector<double> x{0.3, -0.1};
  EXPECT_FALSE(oracle.value(outside).has_value());
  EXPECT_EQ(oracle.used(), 1u);
  EXPECT_FALSE(oracle.has_best());
  EXPECT_NEAR(*oracle.value(x), 0.1, 1e-15);
  EXPECT_TRUE(oracle.gradient(x).has_value());
  EXPECT_TRUE(oracle.exhausted());
  EXPECT_FALSE(oracle.value(x).has_value());
  EXPECT_EQ(oracle.used(), 3u);
}

TEST(Oracle, NoGradientForNonDifferentiableType) {
  const auto g = testsupport::hand_built();
  Oracle oracle(g, FunctionType::ND, 10, 1e-4);
  const std::vector<double> x{0.3, -0.1};
  EXPECT_FALSE(oracle.gradient(x).has_value());
  EXPECT_EQ(oracle.used(), 0u);
}

TEST(Oracle, SuccessCriteria) {
  const auto g = testsupport::hand_built();
  Oracle oracle(g, FunctionType::D, 10, 1e-4);
  // rho* of the class is 1/3 regardless of the fixture's stored radius.
  const std::vector<double> inside{0.5 + 0.3, 0.5};
  const std::vector<double> outside{0.5 + 0.35, 0.5};
  EXPECT_TRUE(oracle.hits_global_ball(inside));
  EXPECT_FALSE(oracle.hits_global_ball(outside));
  EXPECT_TRUE(oracle.hits_value(-1.0 + 5e-5));
  EXPECT_FALSE(oracle.hits_value(-1.0 + 2e-4));
}

TEST(DefaultValueTol, ScalesWithDepth) {
  EXPECT_DOUBLE_EQ(default_value_tol(defaults()), 1e-4);
  ClassParams p = defaults();
  p.global_value = -3.0;
  EXPECT_DOUBLE_EQ(default_value_tol(p), 3e-4);
}

TEST(RunSolver, OracleReplaySucceedsEverywhereInOneEvaluation) {
  auto r = run_solver(defaults(), FunctionType::D, oracle_replay(), 1, 1e-4, "oracle");
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->success_count, 100);
  for (const auto& run : r->runs) {
    EXPECT_EQ(run.evaluations, 1u);
    EXPECT_TRUE(run.hit_ball);
    EXPECT_TRUE(run.hit_value);
    EXPECT_EQ(run.evals_to_success, 1u);
  }
  EXPECT_EQ(r->mean_evals_to_success, 1.0);
  EXPECT_EQ(r->median_evals_to_success, 1.0);
}

// With rho* = 1/3 the global ball covers about 8.7% of the default box, so
// 10 000 uniform draws land in it for every function; the partial regime
// shows up with a budget of 10.
TEST(RunSolver, RandomSearchIsReproducible) {
  const ClassParams p = defaults();
  auto a = run_solver(p, FunctionType::D, random_search(1), 10'000, default_value_tol(p), "random");
  auto b = run_solver(p, FunctionType::D, random_search(1), 10'000, default_value_tol(p), "random");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->success_count, 100);
  EXPECT_EQ(dump_json(report_to_json(*a)), dump_json(report_to_json(*b)));
  for (const auto& run : a->runs) EXPECT_EQ(run.evaluations, 10'000u);
}

TEST(RunSolver, RandomSearchWithSmallBudgetIsPartial) {
  const ClassParams p = defaults();
  auto a = run_solver(p, FunctionType::D, random_search(1), 10, default_value_tol(p), "random");
  auto b = run_solver(p, FunctionType::D, random_search(1), 10, default_value_tol(p), "random");
  ASSERT_TRUE(a && b);
  EXPECT_GT(a->success_count, 0);
  EXPECT_LT(a->success_count, 100);
  EXPECT_EQ(report_to_csv(*a), report_to_csv(*b));
}

TEST(RunSolver, RejectsZeroBudgetAndInvalidParams) {
  EXPECT_EQ(run_solver(defaults(), FunctionType::D, oracle_replay(), 0, 1e-4).code(),
            ErrorCode::InvalidArgument);
  ClassParams p = defaults();
  p.global_radius = 0.4;
  EXPECT_EQ(run_solver(p, FunctionType::D, oracle_replay(), 10, 1e-4).code(),
            ErrorCode::GlobalRadiusError);
}

TEST(RunSolver, BudgetIsEnforced) {
  const Solver greedy = [](Oracle& o) {
    const std::vector<double> x(o.dim(), 0.0);
    for (int i = 0; i < 1000; ++i) o.value(x);
  };
  auto r = run_solver(defaults(), FunctionType::D, greedy, 17, 1e-4);
  ASSERT_TRUE(r.has_value());
  for (const auto& run : r->runs) EXPECT_EQ(run.evaluations, 17u);
}

TEST(RunSolver, ThrowingSolverIsRecordedAndRunContinues) {
  const Solver flaky = [](Oracle& o) {
    o.value(o.ground_truth().global_minimizer());
    if (o.nf() % 2 == 0) throw std::runtime_error("boom");
  };
  auto r = run_solver(defaults(), FunctionType::D, flaky, 5, 1e-4);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->runs.size(), 100u);
  EXPECT_EQ(r->success_count, 50);
  EXPECT_EQ(r->runs[1].failure, "boom");
  EXPECT_FALSE(r->runs[1].success);
  EXPECT_TRUE(r->runs[0].success);
}

TEST(RunSolver, SuccessByRadiusImpliesFeasibleBestPoint) {
  auto r = run_solver(defaults(), FunctionType::D2, builtin_multistart(50, 20, 3), 2000, 1e-4);
  ASSERT_TRUE(r.has_value());
  for (const auto& run : r->runs) {
    if (!run.hit_ball) continue;
    for (double v : run.best_point) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(LocalDescent, ConvergesInsideGlobalBall) {
  for (FunctionType type : {FunctionType::D, FunctionType::D2}) {
    for (int nf : {1, 9, 50}) {
      const auto g = generate(defaults(), nf).value();
      Oracle oracle(g, type, 100'000, 1e-4);
      auto x0 = testsupport::on_sphere(g, kGlobalIndex, 0.5 * g.minima().rho[kGlobalIndex],
                                       std::vector<double>{0.6, 0.8});
      if (!testsupport::in_box(g, x0))
        x0 = testsupport::on_sphere(g, kGlobalIndex, 0.5 * g.minima().rho[kGlobalIndex],
                                    std::vector<double>{-0.6, -0.8});
      const auto x = local_descent(oracle, x0, 10'000);
      EXPECT_LE(testsupport::norm_between(x, g.global_minimizer()), 1e-6)
          << to_string(type) << " nf=" << nf;
    }
  }
}

TEST(LocalDescent, VertexIsStationary) {
  const auto g = generate(defaults(), 4).value();
  Oracle oracle(g, FunctionType::D, 100, 1e-4);
  const auto t = g.vertex();
  const auto x = local_descent(oracle, std::vector<double>(t.begin(), t.end()), 100);
  EXPECT_EQ(x, std::vector<double>(t.begin(), t.end()));
}

TEST(LocalDescent, NonDifferentiableTypeUsesCompassSearch) {
  const auto g = testsupport::hand_built();
  Oracle oracle(g, FunctionType::ND, 5000, 1e-4);
  const auto x = local_descent(oracle, {0.6, 0.45}, 2000);
  EXPECT_LE(testsupport::norm_between(x, g.global_minimizer()), 1e-6);
}

TEST(Multistart, DeterministicForFixedSeed) {
  const ClassParams p = defaults();
  auto a = run_solver(p, FunctionType::D, builtin_multistart(30, 10, 7), 500, 1e-4, "ms");
  auto b = run_solver(p, FunctionType::D, builtin_multistart(30, 10, 7), 500, 1e-4, "ms");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(dump_json(report_to_json(*a)), dump_json(report_to_json(*b)));
  EXPECT_EQ(report_to_csv(*a), report_to_csv(*b));
  EXPECT_GT(a->success_count, 0);
}

TEST(Report, CsvHasOneRowPerFunction) {
  auto r = run_solver(defaults(), FunctionType::D, oracle_replay(), 1, 1e-4, "oracle").value();
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  const Json j = report_to_json(r);
  EXPECT_EQ(j.at("success_count").get<int>(), 100);
  EXPECT_EQ(j.at("runs").size(), 100u);
}
