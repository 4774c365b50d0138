#include "cogphy/numerics.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cogphy {

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return Eigen::numext::igamma(a, x);
}

double gamma_p_inv(double a, double p) {
  if (a <= 0.0) throw std::domain_error("gamma_p_inv: shape must be positive");
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return std::numeric_limits<double>::infinity();

  // Bracket the quantile around the mean, then refine with Newton steps
  // safeguarded by bisection. The gamma pdf is the exact derivative of P.
  double lo = 0.0, hi = a;
  while (gamma_p(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e308) return hi;
  }
  const double log_gamma_a = std::lgamma(a);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double err = gamma_p(a, x) - p;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_pdf = (a - 1.0) * std::log(x) - x - log_gamma_a;
    const double pdf = std::exp(log_pdf);
    double next = x - err / pdf;
    if (!(pdf > 0.0) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 1e-14 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

ScalarOptimum brent_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter) {
  if (!(lo < hi)) throw std::invalid_argument("brent_minimize: empty interval");
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());

  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evals = 1;

  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool parabolic_ok = false;
    double u = 0.0;
    if (std::abs(e) > tol1) {
      // parabolic interpolation through (v, w, x)
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double pp = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) pp = -pp;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(pp) < std::abs(0.5 * q * e_old) && pp > q * (a - x) &&
          pp < q * (b - x)) {
        d = pp / q;
        u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        parabolic_ok = true;
      }
    }
    if (!parabolic_ok) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++evals;

    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx, evals};
}

ScalarOptimum brent_maximize(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter) {
  auto r = brent_minimize([&](double x) { return -f(x); }, lo, hi, tol, max_iter);
  r.fx = -r.fx;
  return r;
}

}  // namespace cogphy
