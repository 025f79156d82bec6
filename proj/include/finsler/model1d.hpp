#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/numeric.hpp"

namespace finsler::model1d {

// Model densities h_{N,D}(xi, .) on [0, D], normalized to unit mass:
//   h = (N/D^N) (x + xi D)^{N-1} / ((xi+1)^N - xi^N),   xi in [0, inf],
// with the uniform density 1/D as the xi -> inf limit.  The xi > 1
// branch is rewritten with log1p/expm1 to dodge cancellation.

inline double model_density(double N, double D, double xi, double x) {
  if (std::isinf(xi)) return 1.0 / D;
  if (xi < 0.0) throw InvalidDensityError("model_density needs xi >= 0");
  if (xi <= 1.0) {
    double z = std::pow(xi + 1.0, N) - std::pow(xi, N);
    return N / std::pow(D, N) * std::pow(x + xi * D, N - 1.0) / z;
  }
  double z = xi * std::expm1(N * std::log1p(1.0 / xi));
  return (N / D) * std::pow(1.0 + x / (xi * D), N - 1.0) / z;
}

inline double model_v(double N, double D, double xi, double r) {
  if (std::isinf(xi)) return r / D;
  if (xi < 0.0) throw InvalidDensityError("model_v needs xi >= 0");
  if (xi == 0.0) return std::pow(r / D, N);
  if (xi <= 1.0) {
    double num = std::pow(r + xi * D, N) - std::pow(xi * D, N);
    double den = std::pow(D, N) * (std::pow(1.0 + xi, N) - std::pow(xi, N));
    return num / den;
  }
  return std::expm1(N * std::log1p(r / (xi * D))) / std::expm1(N * std::log1p(1.0 / xi));
}

inline double model_r(double N, double D, double xi, double v) {
  if (std::isinf(xi)) return v * D;
  if (xi < 0.0) throw InvalidDensityError("model_r needs xi >= 0");
  if (xi <= 1.0) {
    double t = v * std::pow(1.0 + xi, N) + (1.0 - v) * std::pow(xi, N);
    return D * (std::pow(t, 1.0 / N) - xi);
  }
  double inner = std::log1p(v * std::expm1(N * std::log1p(1.0 / xi))) / N;
  return D * xi * std::expm1(inner);
}

// Isoperimetric profile of the model space at volume fraction v
inline double profile_xi(double N, double D, double xi, double v) {
  if (v < 0.0 || v > 1.0) throw InvalidDensityError("profile_xi needs v in [0,1]");
  if (std::isinf(xi)) return 1.0 / D;
  if (xi < 0.0) throw InvalidDensityError("profile_xi needs xi >= 0");
  double lo = std::min(v, 1.0 - v), hi = std::max(v, 1.0 - v);
  double e = (N - 1.0) / N;
  if (xi <= 1.0) {
    double A = std::pow(1.0 + xi, N), B = std::pow(xi, N);
    return (N / D) * std::pow(lo * A + hi * B, e) / (A - B);
  }
  double z = xi * std::expm1(N * std::log1p(1.0 / xi));
  return (N / D) * std::pow(lo * std::pow(1.0 + 1.0 / xi, N) + hi, e) / z;
}

struct ProfileResult {
  double value;
  double xi;  // infinity when the uniform density attains the infimum
};

// inf over xi in [0, inf] via the compactification s = xi/(1+xi);
// the s = 1 endpoint (uniform density) is compared explicitly since
// the infimum is attained there for central volumes.
inline ProfileResult profile(double N, double D, double v) {
  if (!(v > 0.0 && v < 1.0)) throw InvalidDensityError("profile needs v in (0,1)");
  const double smax = 1.0 - 1e-9;
  auto f = [&](double s) { return profile_xi(N, D, s / (1.0 - s), v); };
  constexpr int kGrid = 256;
  double best_s = 0.0, best_f = f(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    double s = smax * k / kGrid;
    double fs = f(s);
    if (fs < best_f) { best_f = fs; best_s = s; }
  }
  double h = smax / kGrid;
  auto [s, fs] = golden_min(f, std::max(0.0, best_s - h), std::min(smax, best_s + h), 1e-10);
  if (fs < best_f) { best_f = fs; best_s = s; }
  double uniform = 1.0 / D;
  if (uniform <= best_f) return {uniform, std::numeric_limits<double>::infinity()};
  return {best_f, best_s / (1.0 - best_s)};
}

// CD(0,N) density on [0, D'], held as uniform grid samples with linear
// interpolation.  Model-built instances additionally carry the closed
// forms for h, v and r, so pointwise values and masses are exact.
class Density1D {
 public:
  Density1D(double N, double Dprime, std::vector<double> samples)
      : N_(N), D_(Dprime), h_(std::move(samples)) {
    if (!(N_ > 1.0)) throw InvalidDensityError("need N > 1");
    if (!(D_ > 0.0)) throw InvalidDensityError("need Dprime > 0");
    if (h_.size() < 2) throw InvalidDensityError("need at least 2 samples");
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (!std::isfinite(h_[i]) || h_[i] < 0.0)
        throw InvalidDensityError("density samples must be finite and >= 0");
      if (i > 0 && i + 1 < h_.size() && h_[i] <= 0.0)
        throw InvalidDensityError("density must be positive in the interior");
    }
    cum_.resize(h_.size());
    cum_[0] = 0.0;
    double step = D_ / double(h_.size() - 1);
    for (std::size_t i = 1; i < h_.size(); ++i)
      cum_[i] = cum_[i - 1] + 0.5 * (h_[i - 1] + h_[i]) * step;
  }

  static Density1D model(double N, double D, double xi, int grid = 4096) {
    std::vector<double> s(grid + 1);
    for (int i = 0; i <= grid; ++i) s[i] = model_density(N, D, xi, D * i / grid);
    Density1D d(N, D, std::move(s));
    d.hx_ = [N, D, xi](double x) { return model_density(N, D, xi, x); };
    d.vx_ = [N, D, xi](double x) { return model_v(N, D, xi, x); };
    d.rx_ = [N, D, xi](double v) { return model_r(N, D, xi, v); };
    return d;
  }

  // density with exact closed forms for h, the cumulative mass v and
  // its inverse r; the grid samples are kept for inspection only
  static Density1D analytic(double N, double Dprime, std::function<double(double)> h,
                            std::function<double(double)> v,
                            std::function<double(double)> r, int grid = 4096) {
    std::vector<double> s(grid + 1);
    for (int i = 0; i <= grid; ++i) s[i] = h(Dprime * i / grid);
    Density1D d(N, Dprime, std::move(s));
    d.hx_ = std::move(h);
    d.vx_ = std::move(v);
    d.rx_ = std::move(r);
    return d;
  }

  double N() const { return N_; }
  double Dprime() const { return D_; }
  const std::vector<double>& samples() const { return h_; }
  bool analytic() const { return bool(hx_); }
  double total_mass() const { return vx_ ? vx_(D_) : cum_.back(); }

  double operator()(double x) const {
    x = std::clamp(x, 0.0, D_);
    if (hx_) return hx_(x);
    double step = D_ / double(h_.size() - 1);
    double t = x / step;
    std::size_t i = std::min(std::size_t(t), h_.size() - 2);
    double tau = t - double(i);
    return h_[i] + (h_[i + 1] - h_[i]) * tau;
  }

  double mass(double a, double b) const {
    a = std::clamp(a, 0.0, D_);
    b = std::clamp(b, 0.0, D_);
    if (b <= a) return 0.0;
    if (vx_) return vx_(b) - vx_(a);
    return cumulative(b) - cumulative(a);
  }

  double v(double x) const { return mass(0.0, x); }

  // inverse of v; input clamped to [0, total_mass]
  double r(double vol) const {
    if (rx_) return rx_(std::clamp(vol, 0.0, vx_ ? vx_(D_) : 1.0));
    vol = std::clamp(vol, 0.0, cum_.back());
    auto it = std::upper_bound(cum_.begin(), cum_.end(), vol);
    std::size_t i = std::min(std::size_t(std::max<long>(0, (it - cum_.begin()) - 1)),
                             h_.size() - 2);
    double step = D_ / double(h_.size() - 1);
    double q = (vol - cum_[i]) / step;
    double d = h_[i + 1] - h_[i];
    double disc = std::sqrt(std::max(0.0, h_[i] * h_[i] + 2.0 * d * q));
    double tau = (h_[i] + disc) > 0.0 ? 2.0 * q / (h_[i] + disc) : 0.0;
    return (double(i) + std::min(tau, 1.0)) * step;
  }

 private:
  double cumulative(double x) const {
    double step = D_ / double(h_.size() - 1);
    double t = x / step;
    std::size_t i = std::min(std::size_t(t), h_.size() - 2);
    double tau = t - double(i);
    double d = h_[i + 1] - h_[i];
    return cum_[i] + step * (h_[i] * tau + 0.5 * d * tau * tau);
  }

  double N_, D_;
  std::vector<double> h_;
  std::vector<double> cum_;
  std::function<double(double)> hx_, vx_, rx_;
};

class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    for (const auto& [a, b] : iv) {
      if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidDensityError("interval endpoints must be finite");
      if (b <= a) continue;
      if (!iv_.empty() && a <= iv_.back().second)
        iv_.back().second = std::max(iv_.back().second, b);
      else
        iv_.push_back({a, b});
    }
  }

  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }
  double a() const { return iv_.front().first; }
  double b() const { return iv_.back().second; }

 private:
  std::vector<std::pair<double, double>> iv_;
};

// 1D oriented Finsler structure over a density: normalized so that the
// forward direction has unit cost, F_left(x) is the cost of -dt.
struct OneDimFinsler {
  Density1D density;
  std::function<double(double)> F_left;

  explicit OneDimFinsler(Density1D d) : density(std::move(d)), F_left([](double) { return 1.0; }) {}
  OneDimFinsler(Density1D d, double lam)
      : density(std::move(d)), F_left([lam](double) { return lam; }) {
    if (!(lam > 0.0)) throw InvalidDensityError("F_left must be positive");
  }
  OneDimFinsler(Density1D d, std::function<double(double)> f)
      : density(std::move(d)), F_left(std::move(f)) {}

  double lambda() const {
    std::size_t n = density.samples().size();
    double lam = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = density.Dprime() * double(i) / double(n - 1);
      double f = F_left(x);
      if (!(f > 0.0)) throw InvalidDensityError("F_left must be positive");
      lam = std::max({lam, f, 1.0 / f});
    }
    return lam;
  }
};

// P_{F,h}(E): right endpoints cost h(b), left endpoints cost
// F_left(a) h(a); endpoints on the boundary of [0, D'] are free.
inline double perimeter1d(const OneDimFinsler& m, const IntervalSet& E) {
  double D = m.density.Dprime();
  double tol = 1e-12 * D;
  double P = 0.0;
  for (const auto& [a, b] : E.intervals()) {
    if (a > tol) P += m.F_left(a) * m.density(a);
    if (b < D - tol) P += m.density(b);
  }
  return P;
}

// D-residual: normalized excess over the sharp cone-model bound
inline double residual(const OneDimFinsler& m, double D, const IntervalSet& E) {
  double vol = 0.0;
  for (const auto& [a, b] : E.intervals()) vol += m.density.mass(a, b);
  if (!(vol > 0.0)) throw InvalidDensityError("residual needs a set of positive mass");
  double N = m.density.N();
  return D * perimeter1d(m, E) / (N * std::pow(vol, (N - 1.0) / N)) - 1.0;
}

struct CdReport {
  bool ok;
  double max_violation;
};

// concavity of h^{1/(N-1)} via grid second differences
inline CdReport cd_check(const Density1D& h) {
  const auto& s = h.samples();
  double e = 1.0 / (h.N() - 1.0);
  std::vector<double> u(s.size());
  double umax = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    u[i] = std::pow(s[i], e);
    umax = std::max(umax, std::abs(u[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    worst = std::max(worst, u[i - 1] - 2.0 * u[i] + u[i + 1]);
  return {worst <= 1e-8 * umax, worst};
}

struct RigidityRecord {
  double w = 0.0;        // mass of E
  double res = 0.0;      // D-residual
  double a = 0.0;        // left endpoint of the last component
  double b = 0.0;        // rightmost point of E
  double b_model = 0.0;  // D w^{1/N}, the rigid value of b
  double dprime_over_d = 0.0;
  double gap_b = 0.0;    // |b - b_model| / b_model
  double gap_a = 0.0;    // a / (D w^{1/N})
  double gap_diam = 0.0; // 1 - D'/D
  double lambda = 1.0;
  bool hypothesis_ok = false;  // D >= 4 L Lambda with L = b(E)
};

inline RigidityRecord rigidity_probe(const OneDimFinsler& m, double D, const IntervalSet& E) {
  if (E.empty()) throw InvalidDensityError("rigidity_probe needs a nonempty set");
  RigidityRecord r;
  for (const auto& [a, b] : E.intervals()) r.w += m.density.mass(a, b);
  r.res = residual(m, D, E);
  // a(E) is the left endpoint of the last component, the one the
  // almost-rigidity estimates pair with b(E)
  r.a = E.intervals().back().first;
  r.b = E.b();
  r.b_model = D * std::pow(r.w, 1.0 / m.density.N());
  r.dprime_over_d = m.density.Dprime() / D;
  r.gap_b = std::abs(r.b - r.b_model) / r.b_model;
  r.gap_a = r.a / r.b_model;
  r.gap_diam = 1.0 - r.dprime_over_d;
  r.lambda = m.lambda();
  r.hypothesis_ok = D >= 4.0 * r.b * r.lambda - 1e-12 * D;
  return r;
}

// g(eta) = max { t - s : f(t,0) <= f(s,eta) } on a grid of [0, 1-1/grid],
// where f(t,eta) = (1 + eta - t^N)/(1 - t).  f(., eta) is increasing, so
// for each s the largest feasible t comes from one binary search.
inline double monotonia_gap(double N, double eta, int grid) {
  if (eta < 0.0) throw InvalidDensityError("monotonia_gap needs eta >= 0");
  if (grid < 2) throw InvalidDensityError("monotonia_gap needs grid >= 2");
  std::vector<double> t(grid), f0(grid);
  for (int k = 0; k < grid; ++k) {
    t[k] = double(k) / grid;
    f0[k] = (1.0 - std::pow(t[k], N)) / (1.0 - t[k]);
  }
  double g = 0.0;
  for (int j = 0; j < grid; ++j) {
    double feta = f0[j] + eta / (1.0 - t[j]);
    auto it = std::upper_bound(f0.begin(), f0.end(), feta);
    if (it == f0.begin()) continue;
    int k = int(it - f0.begin()) - 1;
    g = std::max(g, t[k] - t[j]);
  }
  return g;
}

}  // namespace finsler::model1d
