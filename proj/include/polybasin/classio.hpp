#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polybasin/error.hpp"
#include "polybasin/eval.hpp"
#include "polybasin/generator.hpp"
#include "polybasin/params.hpp"

namespace polybasin {

using Json = nlohmann::ordered_json;

/// A complete class: parameters, smoothness type and all 100 functions.
struct Notebook {
  ClassParams params;
  FunctionType type = FunctionType::D;
  std::vector<GeneratedFunction> functions;
};

/// Renders a double with 17 significant digits.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool is_scalar_array(const Json& j) {
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

inline void write_json(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        write_json(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (is_scalar_array(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_json(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Serializes with two-space indentation, fixed key order and every float
/// printed with 17 significant digits (exact round trip for doubles).
inline std::string dump_json(const Json& j) {
  std::string out;
  detail::write_json(out, j, 0);
  out += "\n";
  return out;
}

inline Json params_to_json(const ClassParams& p) {
  Json j;
  j["dim"] = p.dim;
  j["num_minima"] = p.num_minima;
  j["global_value"] = p.global_value;
  j["global_dist"] = p.global_dist;
  j["global_radius"] = p.global_radius;
  j["domain_left"] = p.domain_left;
  j["domain_right"] = p.domain_right;
  j["paraboloid_min"] = p.paraboloid_min;
  j["delta_max"] = p.delta_max;
  j["gap"] = p.effective_gap();
  j["weights"] = p.effective_weights();
  j["precision"] = p.precision;
  return j;
}

inline Expected<ClassParams> params_from_json(const Json& j) {
  try {
    ClassParams p;
    p.dim = j.at("dim").get<std::size_t>();
    p.num_minima = j.at("num_minima").get<std::size_t>();
    p.global_value = j.at("global_value").get<double>();
    p.global_dist = j.at("global_dist").get<double>();
    p.global_radius = j.at("global_radius").get<double>();
    p.domain_left = j.at("domain_left").get<std::vector<double>>();
    p.domain_right = j.at("domain_right").get<std::vector<double>>();
    p.paraboloid_min = j.at("paraboloid_min").get<double>();
    p.delta_max = j.at("delta_max").get<double>();
    p.gap = j.at("gap").get<double>();
    p.weights = j.at("weights").get<std::vector<double>>();
    p.precision = j.at("precision").get<double>();
    p.max_dim = std::max(kDefaultMaxDim, p.dim);
    // Values equal to the defaults are stored as "unset" again.
    if (p.gap == p.global_radius) p.gap.reset();
    ClassParams unweighted = p;
    unweighted.weights.clear();
    if (p.weights == unweighted.effective_weights()) p.weights.clear();
    return p;
  } catch (const Json::exception& e) {
    return Error{ErrorCode::SchemaError, std::string("class_params: ") + e.what()};
  }
}

inline Json function_to_json(const GeneratedFunction& g) {
  const MinimaTable& mt = g.minima();
  Json j;
  j["nf"] = g.nf();
  j["delta"] = g.delta();
  Json minimizers = Json::array();
  for (std::size_t i = 0; i < mt.size(); ++i) {
    Json m;
    m["index"] = i + 1;
    const auto pt = mt.point(i);
    m["coords"] = std::vector<double>(pt.begin(), pt.end());
    m["f"] = mt.f[i];
    m["rho"] = mt.rho[i];
    m["peak"] = mt.peak[i];
    m["w"] = mt.w_rho[i];
    minimizers.push_back(std::move(m));
  }
  j["minimizers"] = std::move(minimizers);
  Json glob;
  glob["value"] = g.params().global_value;
  glob["num_global_minima"] = g.glob().num_global_minima;
  std::vector<std::size_t> one_based;
  for (std::size_t idx : g.glob().gm_index) one_based.push_back(idx + 1);
  glob["gm_index"] = one_based;
  j["global"] = std::move(glob);
  return j;
}

inline Json notebook_to_json(const Notebook& nb) {
  Json j;
  j["class_params"] = params_to_json(nb.params);
  j["function_type"] = std::string(to_string(nb.type));
  Json fns = Json::array();
  for (const auto& g : nb.functions) fns.push_back(function_to_json(g));
  j["functions"] = std::move(fns);
  return j;
}

/// Checks every ground-truth invariant of a generated function.
inline std::optional<Error> validate_function(const GeneratedFunction& g) {
  auto bad = [&](const std::string& what) {
    return Error{ErrorCode::InvariantError, "function " + std::to_string(g.nf()) + ": " + what};
  };
  const ClassParams& p = g.params();
  const MinimaTable& mt = g.minima();
  const double eps = p.precision;
  const std::size_t m = mt.size();

  if (g.nf() < 1 || g.nf() > kFunctionsPerClass) return bad("function number out of range");
  if (m != p.num_minima || mt.dim != p.dim || mt.local_min.size() != m * p.dim ||
      mt.rho.size() != m || mt.peak.size() != m || mt.w_rho.size() != m) {
    return bad("minima table does not match the class shape");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto pt = mt.point(i);
    for (std::size_t k = 0; k < p.dim; ++k) {
      if (!(pt[k] > p.domain_left[k] && pt[k] < p.domain_right[k]))
        return bad("minimizer " + std::to_string(i + 1) + " is not interior");
    }
    if (!(mt.rho[i] > 0.0)) return bad("non-positive radius");
    if (mt.w_rho[i] != p.weight(i)) return bad("weight differs from class weight");
  }
  if (std::abs(mt.rho[kGlobalIndex] - p.weight(kGlobalIndex) * p.global_radius) > eps)
    return bad("global attraction radius differs from rho*");
  if (std::abs(detail::distance(g.vertex(), g.global_minimizer()) - p.global_dist) > 1e-9)
    return bad("||x* - T|| differs from r*");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = detail::distance(mt.point(i), mt.point(j));
      if (d <= eps) return bad("minimizers coincide");
      if (d < mt.rho[i] + mt.rho[j] - eps) return bad("attraction balls overlap");
    }
  }
  if (std::abs(mt.f[kVertexIndex] - p.paraboloid_min) > eps) return bad("f_1 differs from t");
  if (std::abs(mt.f[kGlobalIndex] - p.global_value) > eps) return bad("f_2 differs from f*");
  const double min_gap_dist = p.global_radius + p.effective_gap();
  for (std::size_t i = 2; i < m; ++i) {
    if (detail::distance(mt.point(i), g.global_minimizer()) < min_gap_dist - eps)
      return bad("minimizer " + std::to_string(i + 1) + " violates the gap condition");
    if (mt.f[i] < p.global_value - eps) return bad("local minimum below f*");
    const double z = paraboloid_min_on_sphere(g.vertex(), mt.point(i), mt.rho[i],
                                              p.paraboloid_min);
    if (!(mt.f[i] < z) || !(mt.peak[i] > 0.0)) return bad("local minimum not below Z_B");
  }
  if (!(g.delta() > 0.0 && g.delta() < p.delta_max)) return bad("delta outside (0, delta_max)");
  if (g.glob() != identify_globals(mt.f, p.global_value, eps))
    return bad("global index list inconsistent with minima values");
  return std::nullopt;
}

inline Expected<GeneratedFunction> function_from_json(const Json& j, const ClassParams& p) {
  try {
    const int nf = j.at("nf").get<int>();
    const double delta = j.at("delta").get<double>();
    const Json& mins = j.at("minimizers");
    MinimaTable mt;
    mt.dim = p.dim;
    for (std::size_t i = 0; i < mins.size(); ++i) {
      const Json& m = mins.at(i);
      if (m.at("index").get<std::size_t>() != i + 1)
        return Error{ErrorCode::SchemaError, "minimizer indices must be 1..m in order"};
      const auto coords = m.at("coords").get<std::vector<double>>();
      if (coords.size() != p.dim)
        return Error{ErrorCode::SchemaError, "minimizer coordinates must have length N"};
      mt.local_min.insert(mt.local_min.end(), coords.begin(), coords.end());
      mt.f.push_back(m.at("f").get<double>());
      mt.rho.push_back(m.at("rho").get<double>());
      mt.peak.push_back(m.at("peak").get<double>());
      mt.w_rho.push_back(m.at("w").get<double>());
    }
    const Json& gj = j.at("global");
    GlobalInfo glob;
    glob.num_global_minima = gj.at("num_global_minima").get<std::size_t>();
    for (std::size_t idx : gj.at("gm_index").get<std::vector<std::size_t>>()) {
      if (idx == 0) return Error{ErrorCode::SchemaError, "gm_index entries are 1-based"};
      glob.gm_index.push_back(idx - 1);
    }
    if (gj.at("value").get<double>() != p.global_value)
      return Error{ErrorCode::InvariantError, "global value differs from class f*"};
    auto g = GeneratedFunction::assemble(p, nf, std::move(mt), std::move(glob), delta);
    if (auto err = validate_function(g)) return *err;
    return g;
  } catch (const Json::exception& e) {
    return Error{ErrorCode::SchemaError, std::string("function entry: ") + e.what()};
  }
}

inline Expected<Notebook> notebook_from_json(const Json& j) {
  try {
    auto params = params_from_json(j.at("class_params"));
    if (!params) return params.error();
    if (auto errors = check(*params); !errors.empty())
      return Error{ErrorCode::InvariantError, "class_params: " + errors.front().message()};
    const auto type = parse_function_type(j.at("function_type").get<std::string>());
    if (!type) return Error{ErrorCode::SchemaError, "unknown function_type"};
    const Json& fns = j.at("functions");
    if (!fns.is_array() || fns.size() != static_cast<std::size_t>(kFunctionsPerClass))
      return Error{ErrorCode::SchemaError, "a class must contain exactly 100 functions"};
    Notebook nb{*params, *type, {}};
    nb.functions.reserve(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) {
      auto g = function_from_json(fns[i], nb.params);
      if (!g) return g.error();
      if (g->nf() != static_cast<int>(i) + 1)
        return Error{ErrorCode::SchemaError, "functions must be listed with nf = 1..100"};
      nb.functions.push_back(std::move(g).value());
    }
    return nb;
  } catch (const Json::exception& e) {
    return Error{ErrorCode::SchemaError, e.what()};
  }
}

/// Generates all 100 functions of the class.
inline Expected<Notebook> build_class(const ClassParams& params, FunctionType type) {
  if (auto errors = check(params); !errors.empty()) return errors.front();
  Notebook nb{params, type, {}};
  nb.functions.reserve(kFunctionsPerClass);
  for (int nf = 1; nf <= kFunctionsPerClass; ++nf) {
    auto g = generate(params, nf);
    if (!g) return g.error();
    nb.functions.push_back(std::move(g).value());
  }
  return nb;
}

inline std::string notebook_text(const Notebook& nb) { return dump_json(notebook_to_json(nb)); }

/// Human-readable digest: class parameters, then one line per function with
/// its global minimizer(s) and delta.
inline std::string summary_text(const Notebook& nb) {
  const ClassParams& p = nb.params;
  std::string out;
  out += "type " + std::string(to_string(nb.type)) + ", N = " + std::to_string(p.dim) +
         ", m = " + std::to_string(p.num_minima) + ", f* = " + format_real(p.global_value) +
         ", r* = " + format_real(p.global_dist) + ", rho* = " + format_real(p.global_radius) +
         ", t = " + format_real(p.paraboloid_min) + "\n";
  for (const auto& g : nb.functions) {
    out += "nf " + std::to_string(g.nf()) + ": delta = " + format_real(g.delta()) + ", x* =";
    for (std::size_t k = 0; k < g.glob().num_global_minima; ++k) {
      const auto x = g.minima().point(g.glob().gm_index[k]);
      out += " (";
      for (std::size_t j = 0; j < x.size(); ++j) out += (j ? ", " : "") + format_real(x[j]);
      out += ")";
    }
    out += "\n";
  }
  return out;
}

inline Expected<Notebook> parse_notebook(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return Error{ErrorCode::SchemaError, "notebook is not valid JSON"};
  return notebook_from_json(j);
}

inline std::optional<Error> write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Error{ErrorCode::IoError, "cannot open " + path + " for writing"};
  out << content;
  out.close();
  if (!out) return Error{ErrorCode::IoError, "failed writing " + path};
  return std::nullopt;
}

inline Expected<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{ErrorCode::IoError, "cannot open " + path};
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Generates the class and writes its notebook to `path`.
inline Expected<Notebook> export_class(const ClassParams& params, FunctionType type,
                                       const std::string& path) {
  auto nb = build_class(params, type);
  if (!nb) return nb;
  if (auto err = write_file(path, notebook_text(*nb))) return *err;
  return nb;
}

/// Reads a notebook without regenerating anything; all invariants are
/// re-validated.
inline Expected<Notebook> load_class(const std::string& path) {
  auto text = read_file(path);
  if (!text) return text.error();
  return parse_notebook(*text);
}

/// resolution x resolution lattice over a 2-D domain, endpoints included,
/// as CSV rows "x1,x2,f" under a one-line header.
inline Expected<std::string> export_grid(const GeneratedFunction& func, FunctionType type,
                                         std::size_t resolution) {
  if (func.empty()) return Error{ErrorCode::NoFunction, "no test function has been generated"};
  if (func.dim() != 2)
    return Error{ErrorCode::DimError, "surface grids need N = 2, got N = " +
                                          std::to_string(func.dim())};
  if (resolution < 2) return Error{ErrorCode::DimError, "grid resolution must be >= 2"};
  const ClassParams& p = func.params();
  auto axis = [&](std::size_t k) {
    std::vector<double> v(resolution);
    const double lo = p.domain_left[k];
    const double hi = p.domain_right[k];
    for (std::size_t i = 0; i < resolution; ++i)
      v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    v.back() = hi;
    return v;
  };
  const auto xs = axis(0);
  const auto ys = axis(1);
  std::string out = "x1,x2,f\n";
  out.reserve(resolution * resolution * 64);
  for (double x1 : xs) {
    for (double x2 : ys) {
      const double pt[2] = {x1, x2};
      auto v = eval(func, type, pt);
      if (!v) return v.error();
      out += format_real(x1) + "," + format_real(x2) + "," + format_real(*v) + "\n";
    }
  }
  return out;
}

}  // namespace polybasin
