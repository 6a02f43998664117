#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "polybasin/classio.hpp"
#include "test_support.hpp"

using namespace polybasin;

namespace {

const Notebook& default_notebook() {
  static const Notebook nb = build_class(default_params(2).value(), FunctionType::D).value();
  return nb;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("polybasin_" + name)).string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(FormatReal, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(-1.0), "-1");
  const double v = 2.0 / 3.0;
  EXPECT_EQ(std::stod(format_real(v)), v);
}

TEST(Notebook, DefaultClassHasHundredEntriesWithGlobalValueMinusOne) {
  const Json j = notebook_to_json(default_notebook());
  ASSERT_EQ(j.at("functions").size(), 100u);
  int nf = 1;
  for (const auto& f : j.at("functions")) {
    EXPECT_EQ(f.at("nf").get<int>(), nf++);
    EXPECT_EQ(f.at("global").at("value").get<double>(), -1.0);
    EXPECT_EQ(f.at("minimizers").size(), 10u);
    EXPECT_EQ(f.at("minimizers")[1].at("index").get<int>(), 2);
    EXPECT_EQ(f.at("global").at("gm_index")[0].get<int>(), 2);
  }
  EXPECT_EQ(j.at("function_type").get<std::string>(), "D");
}

TEST(Notebook, TextIsStable) {
  EXPECT_EQ(notebook_text(default_notebook()), notebook_text(default_notebook()));
}

TEST(Notebook, RoundTripReproducesFunctionsAndEvaluations) {
  const Notebook& nb = default_notebook();
  auto loaded = parse_notebook(notebook_text(nb));
  ASSERT_TRUE(loaded.has_value()) << loaded.error().message();
  EXPECT_EQ(loaded->params, nb.params);
  EXPECT_EQ(loaded->type, nb.type);
  ASSERT_EQ(loaded->functions.size(), 100u);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < 100; ++k) {
    EXPECT_TRUE(loaded->functions[k] == nb.functions[k]) << k;
    for (int s = 0; s < 10; ++s) {
      const std::vector<double> x{u(rng), u(rng)};
      for (FunctionType type : {FunctionType::ND, FunctionType::D, FunctionType::D2})
        EXPECT_EQ(*eval(loaded->functions[k], type, x), *eval(nb.functions[k], type, x));
    }
  }
  EXPECT_EQ(notebook_text(*loaded), notebook_text(nb));
}

TEST(Notebook, NonDefaultTuningSurvivesRoundTrip) {
  ClassParams p = default_params(3).value();
  p.num_minima = 4;
  p.gap = 0.2;
  p.weights = {0.9, 1.0, 0.8, 0.7};
  auto nb = build_class(p, FunctionType::D2);
  ASSERT_TRUE(nb.has_value()) << nb.error().message();
  auto loaded = parse_notebook(notebook_text(*nb));
  ASSERT_TRUE(loaded.has_value()) << loaded.error().message();
  EXPECT_EQ(loaded->params, p);
  EXPECT_EQ(loaded->type, FunctionType::D2);
  for (const auto& g : loaded->functions) {
    EXPECT_GT(g.delta(), 0.0);
    EXPECT_LT(g.delta(), 10.0);
  }
}

TEST(Notebook, FileExportAndLoad) {
  const std::string path = temp_path("classio_roundtrip.json");
  auto written = export_class(default_params(2).value(), FunctionType::ND, path);
  ASSERT_TRUE(written.has_value());
  auto loaded = load_class(path);
  ASSERT_TRUE(loaded.has_value()) << loaded.error().message();
  EXPECT_EQ(loaded->type, FunctionType::ND);
  EXPECT_TRUE(loaded->functions[41] == written->functions[41]);
  std::filesystem::remove(path);
  EXPECT_EQ(load_class(path).code(), ErrorCode::IoError);
}

TEST(Notebook, TruncatedTextIsSchemaError) {
  const std::string text = notebook_text(default_notebook());
  EXPECT_EQ(parse_notebook(text.substr(0, text.size() / 2)).code(), ErrorCode::SchemaError);
}

TEST(Notebook, MissingFunctionsIsSchemaError) {
  Json j = notebook_to_json(default_notebook());
  j["functions"].erase(99);
  EXPECT_EQ(notebook_from_json(j).code(), ErrorCode::SchemaError);
}

TEST(Notebook, MissingFieldIsSchemaError) {
  Json j = notebook_to_json(default_notebook());
  j["functions"][3]["minimizers"][2].erase("rho");
  EXPECT_EQ(notebook_from_json(j).code(), ErrorCode::SchemaError);
}

TEST(Notebook, EditedGlobalValueIsInvariantError) {
  Json j = notebook_to_json(default_notebook());
  j["functions"][5]["minimizers"][1]["f"] = -0.5;
  auto nb = notebook_from_json(j);
  EXPECT_EQ(nb.code(), ErrorCode::InvariantError);
  EXPECT_NE(nb.error().detail.find("f_2"), std::string::npos);
}

TEST(Notebook, OverlappingBallsAreInvariantError) {
  Json j = notebook_to_json(default_notebook());
  j["functions"][0]["minimizers"][4]["rho"] = 5.0;
  EXPECT_EQ(notebook_from_json(j).code(), ErrorCode::InvariantError);
}

TEST(Notebook, InvalidClassParamsAreRejected) {
  Json j = notebook_to_json(default_notebook());
  j["class_params"]["global_radius"] = 0.4;
  EXPECT_EQ(notebook_from_json(j).code(), ErrorCode::InvariantError);
}

TEST(ValidateFunction, AcceptsGeneratedFunctions) {
  for (const auto& g : default_notebook().functions) EXPECT_FALSE(validate_function(g).has_value());
}

// The fixture places x* at distance sqrt(1/2) from T, not r* = 2/3.
TEST(ValidateFunction, RejectsGeometryOutsideTheClass) {
  auto err = validate_function(testsupport::hand_built());
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code, ErrorCode::InvariantError);
}

TEST(ExportGrid, DefaultResolutionRowCountAndHeader) {
  const auto& g = default_notebook().functions[0];
  auto csv = export_grid(g, FunctionType::D, 101);
  ASSERT_TRUE(csv.has_value());
  const auto lines = lines_of(*csv);
  ASSERT_EQ(lines.size(), 10'202u);
  EXPECT_EQ(lines[0], "x1,x2,f");
  EXPECT_EQ(lines[1].rfind("-1,-1,", 0), 0u);
  EXPECT_EQ(lines.back().rfind("1,1,", 0), 0u);
}

TEST(ExportGrid, ValuesAreBoundedBelowByGlobalMinimum) {
  const auto& g = default_notebook().functions[3];
  const auto lines = lines_of(export_grid(g, FunctionType::D2, 51).value());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double f = std::stod(lines[i].substr(lines[i].rfind(',') + 1));
    EXPECT_GE(f, -1.0 - 1e-12);
  }
}

TEST(ExportGrid, ResolutionTwoGivesTheCorners) {
  const auto g = testsupport::hand_built();
  const auto lines = lines_of(export_grid(g, FunctionType::D, 2).value());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1], "-1,-1,2");
  EXPECT_EQ(lines[2], "-1,1,2");
  EXPECT_EQ(lines[3], "1,-1,2");
  EXPECT_EQ(lines[4], "1,1,2");
}

TEST(ExportGrid, RejectsOtherDimensionsAndTinyResolution) {
  auto g3 = generate(default_params(3).value(), 1).value();
  EXPECT_EQ(export_grid(g3, FunctionType::D, 101).code(), ErrorCode::DimError);
  EXPECT_EQ(export_grid(testsupport::hand_built(), FunctionType::D, 1).code(),
            ErrorCode::DimError);
  EXPECT_EQ(export_grid(GeneratedFunction{}, FunctionType::D, 11).code(), ErrorCode::NoFunction);
}

TEST(ExportGrid, MinimumCellContainsTheGlobalMinimizer) {
  const auto& g = default_notebook().functions[8];
  const auto lines = lines_of(export_grid(g, FunctionType::D, 201).value());
  double best = INFINITY;
  double bx = 0.0, by = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    double x1 = 0.0, x2 = 0.0, f = 0.0;
    ASSERT_EQ(std::sscanf(lines[i].c_str(), "%lf,%lf,%lf", &x1, &x2, &f), 3);
    if (f < best) {
      best = f;
      bx = x1;
      by = x2;
    }
  }
  const auto xs = g.global_minimizer();
  EXPECT_LE(std::hypot(bx - xs[0], by - xs[1]), std::sqrt(2.0) * 0.01 + 1e-12);
}
