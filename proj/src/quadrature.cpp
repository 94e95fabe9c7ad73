#include "qmachine/quadrature.hpp"

#include <cmath>

namespace qmachine {

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  QuadratureResult result;

  double eval(double x) {
    ++result.evaluations;
    return f(x);
  }

  void refine(const Panel& p, double tol, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= max_depth || m <= p.a || m >= p.b) {
      if (std::abs(delta) > 15.0 * tol) result.converged = false;
      result.value += left + right + delta / 15.0;
      result.error_estimate += std::abs(delta) / 15.0;
      return;
    }
    refine({p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1);
    refine({m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a,
                                  double b, double tol, int max_depth) {
  Simpson s{f, max_depth, {}};
  if (b <= a) return s.result;
  // Start from four panels so that a symmetric integrand cannot fool the
  // first error estimate.
  constexpr int kInitialPanels = 4;
  const double h = (b - a) / kInitialPanels;
  double x0 = a;
  double f0 = s.eval(a);
  for (int i = 0; i < kInitialPanels; ++i) {
    const double x1 = (i + 1 == kInitialPanels) ? b : a + (i + 1) * h;
    const double xm = 0.5 * (x0 + x1);
    const double fm = s.eval(xm);
    const double f1 = s.eval(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    s.refine({x0, x1, f0, fm, f1, whole}, tol / kInitialPanels, 0);
    x0 = x1;
    f0 = f1;
  }
  return s.result;
}

}  // namespace qmachine
