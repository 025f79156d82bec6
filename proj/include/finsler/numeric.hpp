#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

namespace finsler {

// Compensated accumulator.  Perimeter and volume sums run over many
// facets of similar magnitude, where naive summation loses digits.
class KahanSum {
 public:
  void add(double v) {
    double y = v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Golden-section minimization on [a, b] for a unimodal f.
// Stops when the bracket is shorter than xtol.
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double xtol,
                                     int max_iter = 200) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (f1 < fm) { xm = x1; fm = f1; }
  if (f2 < fm) { xm = x2; fm = f2; }
  return {xm, fm};
}

// Grid scan followed by golden-section refinement around the best cell.
template <typename F>
std::pair<double, double> grid_golden_min(F&& f, double a, double b,
                                          int grid, double xtol) {
  double best_x = a, best_f = f(a);
  for (int i = 1; i <= grid; ++i) {
    double x = a + (b - a) * double(i) / double(grid);
    double fx = f(x);
    if (fx < best_f) { best_f = fx; best_x = x; }
  }
  double h = (b - a) / double(grid);
  double lo = std::max(a, best_x - h);
  double hi = std::min(b, best_x + h);
  auto [xm, fm] = golden_min(f, lo, hi, xtol);
  if (best_f < fm) return {best_x, best_f};
  return {xm, fm};
}

// One step of Richardson extrapolation for a quantity with a first
// order error term: q(eps) = L + c*eps + O(eps^2).
inline double richardson1(double q_eps, double q_half) {
  return 2.0 * q_half - q_eps;
}

// Composite midpoint rule
template <typename F>
double integrate_midpoint(F&& f, double a, double b, int n) {
  KahanSum s;
  double h = (b - a) / double(n);
  for (int i = 0; i < n; ++i) s.add(f(a + (i + 0.5) * h));
  return s.value() * h;
}

// Composite Simpson rule, n must be even
template <typename F>
double integrate_simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / double(n);
  KahanSum s;
  s.add(f(a));
  s.add(f(b));
  for (int i = 1; i < n; ++i) s.add((i % 2 ? 4.0 : 2.0) * f(a + i * h));
  return s.value() * h / 3.0;
}

inline double clamp01(double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }

}  // namespace finsler
