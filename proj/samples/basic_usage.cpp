// Generate one function of the default 2-D class, evaluate it and its
// derivatives, and print where the global minimum sits.

#include <cstdio>

#include "polybasin/polybasin.hpp"

int main() {
  using namespace polybasin;

  auto params = default_params(2);
  if (!params) {
    std::fprintf(stderr, "%s\n", params.error().message().c_str());
    return 1;
  }
  auto func = generate(*params, 9);
  if (!func) {
    std::fprintf(stderr, "%s\n", func.error().message().c_str());
    return 1;
  }

  const auto t = func->vertex();
  const auto xs = func->global_minimizer();
  std::printf("vertex T      = (%.6f, %.6f)\n", t[0], t[1]);
  std::printf("global x*     = (%.6f, %.6f)\n", xs[0], xs[1]);
  std::printf("f(x*) D-type  = %.17g\n", *eval_d(*func, xs));

  const std::vector<double> x{0.1, -0.2};
  for (FunctionType type : {FunctionType::ND, FunctionType::D, FunctionType::D2})
    std::printf("f(0.1,-0.2) %-2s = %.17g\n", std::string(to_string(type)).c_str(),
                *eval(*func, type, x));

  const auto grad = d2_gradient(*func, x).value();
  const Matrix hess = d2_hessian(*func, x).value();
  std::printf("D2 gradient   = (%.6f, %.6f)\n", grad[0], grad[1]);
  std::printf("D2 Hessian    = [[%.6f, %.6f], [%.6f, %.6f]]\n", hess(0, 0), hess(0, 1), hess(1, 0),
              hess(1, 1));

  auto outside = eval_d(*func, std::vector<double>{2.0, 0.0});
  std::printf("outside box   -> %s\n", outside.error().message().c_str());
  return 0;
}
