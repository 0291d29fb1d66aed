#ifndef SPHWHITTLE_MINIMIZE_HPP
#define SPHWHITTLE_MINIMIZE_HPP

#include <cmath>
#include <limits>

namespace sphwhittle {

struct MinimizeResult {
  double x;
  double fx;
  int evaluations;
  bool converged;
};

/// Bracketed one-dimensional minimization on [lo, hi]: golden-section steps
/// with parabolic interpolation when it behaves (Brent's fmin). Stops when the
/// bracket around the best point is within ~2*tol, or after max_evals calls.
template <class F>
MinimizeResult brent_minimize(F&& f, double lo, double hi, double tol, int max_evals = 200) {
  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());

  double a = lo, b = hi;
  double v = a + golden * (b - a);
  double w = v, x = v;
  double fx = f(x);
  int evals = 1;
  double fv = fx, fw = fx;
  double d = 0.0, e = 0.0;

  while (evals < max_evals) {
    const double xm = 0.5 * (a + b);
    const double tol1 = eps * std::fabs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) return {x, fx, evals, true};

    bool golden_step = true;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }

    const double u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++evals;

    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, evals, false};
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_MINIMIZE_HPP
