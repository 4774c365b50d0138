#pragma once

#include <functional>

namespace cogphy {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Inverse of gamma_p in x: smallest x with P(a, x) = p.
double gamma_p_inv(double a, double p);

struct ScalarOptimum {
  double x = 0.0;
  double fx = 0.0;
  int evals = 0;
};

// Brent minimization of f on [lo, hi]. tol is the absolute x tolerance.
ScalarOptimum brent_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter = 200);

// Convenience wrapper: maximize f by minimizing -f.
ScalarOptimum brent_maximize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter = 200);

}  // namespace cogphy
