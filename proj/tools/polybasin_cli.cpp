// polybasin: generate, validate, evaluate, export and benchmark test-function
// classes from the command line.
//
// Exit codes: 0 ok, 1 validation or domain failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polybasin/polybasin.hpp"

using namespace polybasin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr double kOutOfDomainValue = 1e100;

struct UsageError {
  std::string what;
};

struct ClassFlags {
  std::size_t dim = 2;
  std::size_t minima = kDefaultNumMinima;
  double global_value = kDefaultGlobalValue;
  std::optional<double> global_dist;
  std::optional<double> global_radius;
  std::vector<double> domain_left;
  std::vector<double> domain_right;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "problem dimension N")->capture_default_str();
    cmd->add_option("--minima", minima, "number of minima m (vertex and x* included)")
        ->capture_default_str();
    cmd->add_option("--global-value", global_value, "global minimum value f*")
        ->capture_default_str();
    cmd->add_option("--global-dist", global_dist, "distance r* from the vertex to x*");
    cmd->add_option("--global-radius", global_radius, "attraction radius rho* of x*");
    cmd->add_option("--domain-left", domain_left, "lower bounds a (comma list or one value)")
        ->delimiter(',');
    cmd->add_option("--domain-right", domain_right, "upper bounds b (comma list or one value)")
        ->delimiter(',');
  }

  ClassParams build() const {
    ClassParams p = ClassParams::with_defaults(dim);
    p.num_minima = minima;
    p.global_value = global_value;
    auto broadcast = [&](const std::vector<double>& v, std::vector<double>& out) {
      if (v.empty()) return;
      out = v.size() == 1 ? std::vector<double>(dim, v[0]) : v;
    };
    broadcast(domain_left, p.domain_left);
    broadcast(domain_right, p.domain_right);
    p.reset_distances();
    if (global_dist) p.global_dist = *global_dist;
    if (global_radius) p.global_radius = *global_radius;
    return p;
  }
};

FunctionType to_type(const std::string& name) {
  auto t = parse_function_type(name);
  if (!t) throw UsageError{"unknown function type '" + name + "' (expected nd, d or d2)"};
  return *t;
}

int report(const Error& e) {
  std::cerr << "error: " << e.message() << "\n";
  return kExitFailure;
}

int report_all(const std::vector<Error>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e.message() << "\n";
  return errors.empty() ? kExitOk : kExitFailure;
}

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_real(v[i]);
  }
  return out;
}

int run_check(const ClassFlags& flags) {
  const auto errors = check(flags.build());
  if (errors.empty()) std::cout << "ok\n";
  return report_all(errors);
}

int run_gen(const ClassFlags& flags, const std::string& type_name, const std::string& out) {
  const FunctionType type = to_type(type_name);
  const ClassParams p = flags.build();
  if (auto errors = check(p); !errors.empty()) return report_all(errors);
  auto nb = build_class(p, type);
  if (!nb) return report(nb.error());
  if (auto err = write_file(out, notebook_text(*nb))) return report(*err);
  const std::string summary = std::filesystem::path(out).replace_extension(".txt").string();
  if (auto err = write_file(summary, summary_text(*nb))) return report(*err);
  std::cout << "# nf, global minimizer\n";
  for (const auto& g : nb->functions) std::cout << g.nf() << "," << join(g.global_minimizer()) << "\n";
  return kExitOk;
}

Expected<const GeneratedFunction*> select(const Notebook& nb, int nf) {
  if (nf < 1 || nf > kFunctionsPerClass) {
    return Error{ErrorCode::FuncNumberError,
                 "function number " + std::to_string(nf) + " exceeds 100 or is less than 1"};
  }
  return &nb.functions[static_cast<std::size_t>(nf - 1)];
}

struct EvalFlags {
  std::string notebook;
  int nf = 1;
  std::string type;
  std::vector<double> point;
  bool grad = false;
  bool hess = false;
};

int run_eval(const EvalFlags& f) {
  auto nb = load_class(f.notebook);
  if (!nb) return report(nb.error());
  const FunctionType type = f.type.empty() ? nb->type : to_type(f.type);
  if (f.grad && type == FunctionType::ND)
    throw UsageError{"--grad needs a differentiable type (d or d2)"};
  if (f.hess && type != FunctionType::D2) throw UsageError{"--hess needs --type d2"};
  auto func = select(*nb, f.nf);
  if (!func) return report(func.error());
  const GeneratedFunction& g = **func;

  auto v = eval(g, type, f.point);
  if (!v) {
    std::cout << format_real(kOutOfDomainValue) << "\n";
    return report(v.error());
  }
  std::cout << format_real(*v) << "\n";
  if (f.grad) {
    auto grad = type == FunctionType::D ? d_gradient(g, f.point) : d2_gradient(g, f.point);
    if (!grad) return report(grad.error());
    std::cout << join(*grad) << "\n";
  }
  if (f.hess) {
    auto h = d2_hessian(g, f.point);
    if (!h) return report(h.error());
    for (std::size_t j = 0; j < h->n; ++j)
      std::cout << join(std::span<const double>(h->data).subspan(j * h->n, h->n)) << "\n";
  }
  return kExitOk;
}

int run_grid(const std::string& notebook, int nf, const std::string& type_name, std::size_t res,
             const std::string& out) {
  auto nb = load_class(notebook);
  if (!nb) return report(nb.error());
  const FunctionType type = type_name.empty() ? nb->type : to_type(type_name);
  auto func = select(*nb, nf);
  if (!func) return report(func.error());
  auto csv = export_grid(**func, type, res);
  if (!csv) return report(csv.error());
  if (auto err = write_file(out, *csv)) return report(*err);
  return kExitOk;
}

struct BenchFlags {
  std::string type = "d";
  std::string solver = "multistart";
  std::size_t budget = 10'000;
  std::uint32_t seed = 1;
  std::size_t local_steps = 100;
  std::optional<double> value_tol;
  std::string out;
};

int run_bench(const ClassFlags& flags, const BenchFlags& b) {
  const FunctionType type = to_type(b.type);
  const ClassParams p = flags.build();
  if (auto errors = check(p); !errors.empty()) return report_all(errors);
  Solver solver;
  if (b.solver == "multistart") solver = builtin_multistart(b.local_steps, b.budget, b.seed);
  else if (b.solver == "random") solver = random_search(b.seed);
  else solver = oracle_replay();
  auto r = run_solver(p, type, solver, b.budget, b.value_tol.value_or(default_value_tol(p)),
                      b.solver);
  if (!r) return report(r.error());
  if (auto err = write_file(b.out, dump_json(report_to_json(*r)))) return report(*err);
  const std::string csv_path = std::filesystem::path(b.out).replace_extension(".csv").string();
  if (auto err = write_file(csv_path, report_to_csv(*r))) return report(*err);
  std::cout << "solver " << r->solver << ": " << r->success_count << "/" << r->runs.size()
            << " successes\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generator and evaluator for classes of box-constrained test functions"};
  app.require_subcommand(1);

  ClassFlags check_flags;
  auto* check_cmd = app.add_subcommand("check", "validate class parameters");
  check_flags.attach(check_cmd);

  ClassFlags gen_flags;
  std::string gen_type = "d";
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "generate a class and write its notebook");
  gen_flags.attach(gen_cmd);
  gen_cmd->add_option("--type", gen_type, "nd, d or d2")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "notebook path (summary written alongside as .txt)")->required();

  EvalFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one function of a notebook");
  eval_cmd->add_option("--notebook", eval_flags.notebook)->required();
  eval_cmd->add_option("--nf", eval_flags.nf, "function number 1..100")->required();
  eval_cmd->add_option("--type", eval_flags.type, "nd, d or d2 (default: notebook type)");
  eval_cmd->add_option("--point", eval_flags.point, "x1,x2,...")->required()->delimiter(',');
  eval_cmd->add_flag("--grad", eval_flags.grad, "also print the gradient");
  eval_cmd->add_flag("--hess", eval_flags.hess, "also print the Hessian (d2 only)");

  std::string grid_notebook, grid_type, grid_out;
  int grid_nf = 1;
  std::size_t grid_res = 101;
  auto* grid_cmd = app.add_subcommand("grid", "export a 2-D surface grid as CSV");
  grid_cmd->add_option("--notebook", grid_notebook)->required();
  grid_cmd->add_option("--nf", grid_nf)->required();
  grid_cmd->add_option("--type", grid_type, "nd, d or d2 (default: notebook type)");
  grid_cmd->add_option("--res", grid_res, "points per axis")->capture_default_str();
  grid_cmd->add_option("--out", grid_out, "CSV path")->required();

  ClassFlags bench_flags;
  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "benchmark a solver on a whole class");
  bench_flags.attach(bench_cmd);
  bench_cmd->add_option("--type", bench.type, "nd, d or d2")->capture_default_str();
  bench_cmd->add_option("--solver", bench.solver)
      ->check(CLI::IsMember({"multistart", "random", "oracle"}))
      ->capture_default_str();
  bench_cmd->add_option("--budget", bench.budget, "evaluations per function")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--local-steps", bench.local_steps, "multistart descent steps")
      ->capture_default_str();
  bench_cmd->add_option("--value-tol", bench.value_tol, "value success tolerance");
  bench_cmd->add_option("--out", bench.out, "report JSON path (CSV written alongside)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check_cmd) return run_check(check_flags);
    if (*gen_cmd) return run_gen(gen_flags, gen_type, gen_out);
    if (*eval_cmd) return run_eval(eval_flags);
    if (*grid_cmd) return run_grid(grid_notebook, grid_nf, grid_type, grid_res, grid_out);
    if (*bench_cmd) return run_bench(bench_flags, bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
