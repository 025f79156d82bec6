#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "finsler/bminkowski.hpp"
#include "finsler/cone.hpp"
#include "finsler/model1d.hpp"
#include "finsler/rng.hpp"

// Seeded fixture generators shared by the verify suites and the tests.

namespace finsler::corpus {

using bminkowski::ConvexBody;

inline ConvexBody random_polygon(Rng& rng, int nmin = 5, int nmax = 14,
                                 double rmin = 0.45, double rmax = 1.0) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    int n = nmin + int(rng.below(std::uint64_t(nmax - nmin + 1)));
    std::vector<double> th(n);
    for (double& t : th) t = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(th.begin(), th.end());
    std::vector<Vec> pts;
    pts.reserve(n);
    for (double t : th) {
      double r = rng.uniform(rmin, rmax);
      pts.push_back({r * std::cos(t), r * std::sin(t)});
    }
    std::vector<Vec> h = hull2d(pts);
    if (h.size() >= 4 && polygon_area(h) > 0.05) return ConvexBody::polygon(std::move(h));
  }
  throw std::runtime_error("random_polygon: generator starved");
}

// convex polygon strictly inside the cone: hull of points sampled in
// directions of positive margin (convexity of the cone keeps the hull
// inside)
inline ConvexBody random_polygon_in_cone(Rng& rng, const cone::ConeSpec& cone,
                                         int nmin = 5, int nmax = 14) {
  if (cone.whole()) return random_polygon(rng, nmin, nmax);
  for (int attempt = 0; attempt < 64; ++attempt) {
    int n = nmin + int(rng.below(std::uint64_t(nmax - nmin + 1)));
    std::vector<Vec> pts;
    int guard = 0;
    while (int(pts.size()) < n && ++guard < 20000) {
      Vec u = gauge::detail::unit2(rng.uniform(0.0, 2.0 * M_PI));
      if (cone.margin(u) < 0.08) continue;
      pts.push_back(u * rng.uniform(0.45, 1.0));
    }
    if (int(pts.size()) < n) break;
    std::vector<Vec> h = hull2d(pts);
    if (h.size() >= 4 && polygon_area(h) > 0.01) return ConvexBody::polygon(std::move(h));
  }
  throw std::runtime_error("random_polygon_in_cone: generator starved");
}

// Least-squares fit of s*W (plus a translation when allowed) to E in
// support-function terms; the returned max residual over the sampled
// directions lower-bounds the Hausdorff distance to the fitted copy.
inline double wulff_misfit(const ConvexBody& E, const std::vector<Vec>& dirs,
                           const std::vector<double>& hW, bool allow_translation) {
  std::size_t m = dirs.size();
  std::vector<double> hE(m);
  for (std::size_t k = 0; k < m; ++k) hE[k] = E.support(dirs[k]);
  double s = 0.0, zx = 0.0, zy = 0.0;
  if (!allow_translation) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      num += hE[k] * hW[k];
      den += hW[k] * hW[k];
    }
    s = num / den;
  } else {
    double A[3][3] = {};
    double b[3] = {};
    for (std::size_t k = 0; k < m; ++k) {
      double row[3] = {hW[k], dirs[k].x, dirs[k].y};
      for (int i = 0; i < 3; ++i) {
        b[i] += row[i] * hE[k];
        for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
      }
    }
    auto det3 = [](double a00, double a01, double a02, double a10, double a11, double a12,
                   double a20, double a21, double a22) {
      return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
             a02 * (a10 * a21 - a11 * a20);
    };
    double d = det3(A[0][0], A[0][1], A[0][2], A[1][0], A[1][1], A[1][2], A[2][0], A[2][1],
                    A[2][2]);
    s = det3(b[0], A[0][1], A[0][2], b[1], A[1][1], A[1][2], b[2], A[2][1], A[2][2]) / d;
    zx = det3(A[0][0], b[0], A[0][2], A[1][0], b[1], A[1][2], A[2][0], b[2], A[2][2]) / d;
    zy = det3(A[0][0], A[0][1], b[0], A[1][0], A[1][1], b[1], A[2][0], A[2][1], b[2]) / d;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    worst = std::max(worst, std::abs(hE[k] - s * hW[k] - zx * dirs[k].x - zy * dirs[k].y));
  return worst;
}

// CD(0,N) density built from a random concave piecewise-linear root:
// phi has descending slopes, h = phi^{N-1}, mass normalized to 1, all
// closed forms exact per segment.
inline model1d::Density1D random_cd_density(Rng& rng, double N, int grid = 2048) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    double Dp = rng.uniform(0.6, 1.8);
    int k = 2 + int(rng.below(4));
    std::vector<double> x(k + 1);
    x[0] = 0.0;
    x[k] = Dp;
    for (int i = 1; i < k; ++i) x[i] = rng.uniform(0.05 * Dp, 0.95 * Dp);
    std::sort(x.begin(), x.end());
    bool spaced = true;
    for (int i = 0; i < k; ++i) spaced = spaced && (x[i + 1] - x[i] > 0.02 * Dp);
    if (!spaced) continue;
    std::vector<double> slope(k);
    for (double& s : slope) s = rng.uniform(-1.5, 1.5);
    std::sort(slope.rbegin(), slope.rend());
    std::vector<double> p(k + 1);
    p[0] = 0.0;
    for (int i = 0; i < k; ++i) p[i + 1] = p[i] + slope[i] * (x[i + 1] - x[i]);
    double lift = -std::min(p[0], p[k]);
    if (rng.uniform01() > 0.35) lift += rng.uniform(0.05, 0.8);
    for (double& v : p) v += lift;
    bool pos = true;
    for (int i = 1; i < k; ++i) pos = pos && p[i] > 1e-6;
    if (!pos || std::max(p[0], p[k]) <= 1e-6) continue;

    auto seg_mass = [N](double pa, double s, double len) {
      if (std::abs(s) < 1e-12) return std::pow(pa, N - 1.0) * len;
      return (std::pow(pa + s * len, N) - std::pow(pa, N)) / (s * N);
    };
    std::vector<double> Q(k + 1, 0.0);
    for (int i = 0; i < k; ++i) Q[i + 1] = Q[i] + seg_mass(p[i], slope[i], x[i + 1] - x[i]);
    double M = Q[k];
    if (!(M > 1e-8)) continue;
    double c = std::pow(M, -1.0 / (N - 1.0));  // phi scale giving unit mass
    for (double& v : p) v *= c;
    for (double& s : slope) s *= c;
    for (double& q : Q) q /= M;

    auto seg_of_x = [x](double t) {
      std::size_t i = std::size_t(std::upper_bound(x.begin(), x.end(), t) - x.begin());
      return std::min(std::max<std::size_t>(i, 1) - 1, x.size() - 2);
    };
    auto h = [=](double t) {
      std::size_t i = seg_of_x(t);
      return std::pow(std::max(0.0, p[i] + slope[i] * (t - x[i])), N - 1.0);
    };
    auto v = [=](double t) {
      std::size_t i = seg_of_x(t);
      double pa = p[i], s = slope[i], d = t - x[i];
      if (std::abs(s) < 1e-12) return Q[i] + std::pow(pa, N - 1.0) * d;
      return Q[i] + (std::pow(std::max(0.0, pa + s * d), N) - std::pow(pa, N)) / (s * N);
    };
    auto r = [=](double q) {
      q = std::clamp(q, 0.0, 1.0);
      std::size_t i = std::size_t(std::upper_bound(Q.begin(), Q.end(), q) - Q.begin());
      i = std::min(std::max<std::size_t>(i, 1) - 1, Q.size() - 2);
      double pa = p[i], s = slope[i];
      if (std::abs(s) < 1e-12) return x[i] + (q - Q[i]) / std::pow(pa, N - 1.0);
      double ph = std::pow(std::max(0.0, std::pow(pa, N) + s * N * (q - Q[i])), 1.0 / N);
      return std::min(x[i + 1], x[i] + (ph - pa) / s);
    };
    try {
      return model1d::Density1D::analytic(N, Dp, h, v, r, grid);
    } catch (const InvalidDensityError&) {
      continue;
    }
  }
  throw std::runtime_error("random_cd_density: generator starved");
}

// interval set with mass fraction away from 0 and 1; endpoints snap to
// the domain boundary now and then
inline model1d::IntervalSet random_intervals(Rng& rng, const model1d::Density1D& dens) {
  double Dp = dens.Dprime();
  for (int attempt = 0; attempt < 256; ++attempt) {
    int k = 1 + int(rng.below(3));
    std::vector<double> e(2 * k);
    for (double& t : e) t = rng.uniform(0.0, Dp);
    std::sort(e.begin(), e.end());
    std::vector<std::pair<double, double>> iv;
    for (int i = 0; i < k; ++i) iv.push_back({e[2 * i], e[2 * i + 1]});
    if (rng.uniform01() < 0.25) iv.front().first = 0.0;
    if (rng.uniform01() < 0.25) iv.back().second = Dp;
    model1d::IntervalSet E(std::move(iv));
    if (E.empty()) continue;
    double mass = 0.0;
    for (const auto& [a, b] : E.intervals()) mass += dens.mass(a, b);
    if (mass > 0.005 && mass < 0.995) return E;
  }
  throw std::runtime_error("random_intervals: generator starved");
}

struct BodyPair {
  ConvexBody A;
  ConvexBody B;
};

namespace detail {

inline ConvexBody shift_into_weight(ConvexBody body, const cone::WeightSpec& w, Rng& rng) {
  Vec t{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
  if (w.kind() == cone::WeightSpec::Kind::linear_power) {
    Vec ch = normalized(w.c());
    double lo = 1e300;
    for (const Vec& v : body.vertices()) lo = std::min(lo, dot(ch, v + t));
    if (lo < 0.05) t += ch * (0.05 - lo);
  }
  std::vector<Vec> verts = body.vertices();
  for (Vec& v : verts) v += t;
  return ConvexBody::polygon(std::move(verts));
}

}  // namespace detail

inline BodyPair random_pair(Rng& rng, const cone::WeightSpec& w) {
  return {detail::shift_into_weight(random_polygon(rng), w, rng),
          detail::shift_into_weight(random_polygon(rng), w, rng)};
}

// equality configuration of the weighted BM inequality: dilations about
// the origin (the weight's homogeneity center)
inline BodyPair homothetic_pair(Rng& rng, const cone::WeightSpec& w) {
  ConvexBody A = detail::shift_into_weight(random_polygon(rng), w, rng);
  double s = rng.uniform(0.4, 1.8);
  std::vector<Vec> verts = A.vertices();
  for (Vec& v : verts) v = v * s;
  ConvexBody B = ConvexBody::polygon(std::move(verts));
  if (w.kind() == cone::WeightSpec::Kind::one && rng.uniform01() < 0.5) {
    Vec t{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
    std::vector<Vec> bv = B.vertices();
    for (Vec& v : bv) v += t;
    B = ConvexBody::polygon(std::move(bv));
  }
  return {std::move(A), std::move(B)};
}

// a constant-cost leftward direction keeps the 1D reversibility sup
// exact: Lambda = max(lam, 1/lam)
inline model1d::OneDimFinsler random_finsler1d(Rng& rng, model1d::Density1D dens) {
  double lam = std::exp(rng.uniform(-0.9, 0.9));
  return model1d::OneDimFinsler(std::move(dens), lam);
}

}  // namespace finsler::corpus
