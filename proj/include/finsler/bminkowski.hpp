#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "finsler/cone.hpp"
#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/geometry.hpp"
#include "finsler/hull.hpp"
#include "finsler/mesh.hpp"
#include "finsler/numeric.hpp"

namespace finsler::bminkowski {

using cone::ConeSpec;
using cone::WeightSpec;
using gauge::Gauge;
using gauge::SurfaceMesh;

// Carrier for the convex sets of the Brunn-Minkowski checks.  The
// vertex list is always reduced to its hull, counterclockwise in 2D.
class ConvexBody {
 public:
  static ConvexBody polygon(std::vector<Vec> pts) {
    ConvexBody b;
    b.dim_ = 2;
    b.verts_ = hull2d(std::move(pts));
    if (b.verts_.size() < 3 || polygon_area(b.verts_) <= 0.0)
      throw std::domain_error("polygon: degenerate body");
    return b;
  }

  static ConvexBody points3(std::vector<Vec> pts) {
    ConvexBody b;
    b.dim_ = 3;
    b.tris_ = hull3d(pts);
    std::vector<int> remap(pts.size(), -1);
    for (Tri& t : b.tris_)
      for (int* idx : {&t.a, &t.b, &t.c}) {
        if (remap[*idx] < 0) {
          remap[*idx] = int(b.verts_.size());
          b.verts_.push_back(pts[*idx]);
        }
        *idx = remap[*idx];
      }
    return b;
  }

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return verts_; }

  double support(const Vec& u) const {
    double m = -1e300;
    for (const Vec& v : verts_) m = std::max(m, dot(v, u));
    return m;
  }

  Vec vertex_mean() const {
    Vec c;
    for (const Vec& v : verts_) c += v;
    return c / double(verts_.size());
  }

  SurfaceMesh mesh() const {
    if (dim_ == 2) return gauge::mesh_from_polygon(verts_);
    return gauge::mesh_from_triangles(verts_, tris_, vertex_mean());
  }

  double volume() const { return gauge::enclosed_volume(mesh()); }

  // largest inscribed Euclidean ball (2D): the optimum of the small LP
  // max r s.t. <n_e, x> + r <= h_e sits on three active edges
  double inradius() const {
    if (dim_ != 2) throw std::domain_error("inradius: 2D only");
    std::size_t m = verts_.size();
    std::vector<Vec> ns(m);
    std::vector<double> hs(m);
    for (std::size_t i = 0; i < m; ++i) {
      Vec d = verts_[(i + 1) % m] - verts_[i];
      ns[i] = normalized(Vec{d.y, -d.x});
      hs[i] = dot(ns[i], verts_[i]);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          double a[3][4] = {{ns[i].x, ns[i].y, 1.0, hs[i]},
                            {ns[j].x, ns[j].y, 1.0, hs[j]},
                            {ns[k].x, ns[k].y, 1.0, hs[k]}};
          double det = a[0][0] * (a[1][1] - a[2][1]) - a[0][1] * (a[1][0] - a[2][0]) +
                       (a[1][0] * a[2][1] - a[2][0] * a[1][1]);
          if (std::abs(det) < 1e-14) continue;
          auto det3 = [](double m00, double m01, double m02, double m10, double m11,
                         double m12, double m20, double m21, double m22) {
            return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
                   m02 * (m10 * m21 - m11 * m20);
          };
          double d0 = det3(a[0][3], a[0][1], a[0][2], a[1][3], a[1][1], a[1][2], a[2][3],
                           a[2][1], a[2][2]);
          double d1 = det3(a[0][0], a[0][3], a[0][2], a[1][0], a[1][3], a[1][2], a[2][0],
                           a[2][3], a[2][2]);
          double d2 = det3(a[0][0], a[0][1], a[0][3], a[1][0], a[1][1], a[1][3], a[2][0],
                           a[2][1], a[2][3]);
          double dd = det3(a[0][0], a[0][1], a[0][2], a[1][0], a[1][1], a[1][2], a[2][0],
                           a[2][1], a[2][2]);
          double x = d0 / dd, y = d1 / dd, r = d2 / dd;
          if (r <= best) continue;
          bool ok = true;
          for (std::size_t q = 0; q < m && ok; ++q)
            ok = ns[q].x * x + ns[q].y * y + r <= hs[q] + 1e-12 * (1.0 + std::abs(hs[q]));
          if (ok) best = r;
        }
    return best;
  }

  // forward gauge diameter sup F(y - x) over pairs
  double diameter(const Gauge& F) const {
    double d = 0.0;
    for (const Vec& x : verts_)
      for (const Vec& y : verts_)
        d = std::max(d, F(y - x));
    return d;
  }

 private:
  int dim_ = 2;
  std::vector<Vec> verts_;
  std::vector<Tri> tris_;
};

namespace detail {

// Minkowski sum sa*A + sb*B of convex ccw polygons by edge merging.
// Starting both chains at their lowest-leftmost vertex makes the edge
// angles ascend in [0, 2pi), so a single merge pass works.
inline std::vector<Vec> minkowski_sum2(const std::vector<Vec>& A, double sa,
                                       const std::vector<Vec>& B, double sb) {
  auto bottom = [](const std::vector<Vec>& P) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < P.size(); ++i)
      if (P[i].y < P[k].y || (P[i].y == P[k].y && P[i].x < P[k].x)) k = i;
    return k;
  };
  auto angles = [](const std::vector<Vec>& P, std::size_t start, double s,
                   std::vector<std::pair<double, Vec>>& out) {
    std::size_t n = P.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec e = (P[(start + i + 1) % n] - P[(start + i) % n]) * s;
      double a = std::atan2(e.y, e.x);
      if (a < 0.0) a += 2.0 * M_PI;
      out.push_back({a, e});
    }
  };
  std::size_t ia = bottom(A), ib = bottom(B);
  std::vector<std::pair<double, Vec>> ea, eb;
  angles(A, ia, sa, ea);
  angles(B, ib, sb, eb);
  std::vector<Vec> out;
  out.reserve(ea.size() + eb.size());
  Vec pos = A[ia] * sa + B[ib] * sb;
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    out.push_back(pos);
    if (j >= eb.size() || (i < ea.size() && ea[i].first <= eb[j].first))
      pos += ea[i++].second;
    else
      pos += eb[j++].second;
  }
  return out;
}

}  // namespace detail

// Z_t(A,B) = (1-t)A + tB.  Geodesics in a translation-invariant gauge
// space are segments, so for convex bodies the midpoint set is exactly
// this Minkowski combination.
inline ConvexBody midpoint_set(const ConvexBody& A, const ConvexBody& B, double t) {
  if (t < 0.0 || t > 1.0) throw std::domain_error("midpoint_set needs t in [0,1]");
  if (A.dim() != B.dim()) throw std::domain_error("midpoint_set: dimension mismatch");
  if (t == 0.0) return A;
  if (t == 1.0) return B;
  if (A.dim() == 2)
    return ConvexBody::polygon(
        detail::minkowski_sum2(A.vertices(), 1.0 - t, B.vertices(), t));
  std::vector<Vec> sums;
  sums.reserve(A.vertices().size() * B.vertices().size());
  for (const Vec& a : A.vertices())
    for (const Vec& b : B.vertices())
      sums.push_back(a * (1.0 - t) + b * t);
  return ConvexBody::points3(std::move(sums));
}

// m(Z_t)^{1/N} - (1-t) m(A)^{1/N} - t m(B)^{1/N}, nonnegative when the
// weighted space satisfies CD(0,N), i.e. N >= dim + alpha
inline double bm_slack(const ConvexBody& A, const ConvexBody& B, double t,
                       const WeightSpec& w, double N) {
  if (N + 1e-12 < w.N()) throw std::domain_error("bm_slack needs N >= dim + alpha");
  double mz = cone::weighted_volume(midpoint_set(A, B, t).mesh(), w);
  double ma = cone::weighted_volume(A.mesh(), w);
  double mb = cone::weighted_volume(B.mesh(), w);
  return std::pow(mz, 1.0 / N) - (1.0 - t) * std::pow(ma, 1.0 / N) -
         t * std::pow(mb, 1.0 / N);
}

struct ContentResult {
  std::vector<double> eps;
  std::vector<double> quotients;   // (m(E + eps W) - m(E)) / eps
  double extrapolated = 0.0;       // linear extrapolation to eps -> 0
  bool approximate = false;        // voxel fallback used
};

namespace detail {

inline double extrapolate_to_zero(const std::vector<double>& eps,
                                  const std::vector<double>& q) {
  std::size_t k = eps.size();
  if (k == 1) return q[0];
  double e0 = eps[k - 2], e1 = eps[k - 1];
  return (q[k - 1] * e0 - q[k - 2] * e1) / (e0 - e1);
}

}  // namespace detail

// Forward Minkowski content of a convex body: difference quotients of
// the enlargement E + eps W(F) on the ladder, extrapolated to zero.
inline ContentResult minkowski_content(const ConvexBody& E, const Gauge& F,
                                       const WeightSpec& w, std::vector<double> ladder,
                                       int ball_resolution = 2048) {
  if (ladder.empty()) throw std::domain_error("minkowski_content needs a ladder");
  std::sort(ladder.begin(), ladder.end(), std::greater<double>());
  ContentResult res;
  res.eps = ladder;
  double m0 = cone::weighted_volume(E.mesh(), w);
  if (E.dim() == 2) {
    SurfaceMesh W = gauge::forward_ball(F, {}, 1.0, ball_resolution);
    // hull the ball loop: flat gauge facets sample with collinear
    // jitter, which the angle-merge sum cannot tolerate
    std::vector<Vec> wl = hull2d(W.loop);
    for (double e : ladder) {
      auto sum = detail::minkowski_sum2(E.vertices(), 1.0, wl, e);
      double m = cone::weighted_volume(gauge::mesh_from_polygon(sum), w);
      res.quotients.push_back((m - m0) / e);
    }
  } else {
    SurfaceMesh W = gauge::forward_ball(F, {}, 1.0, std::min(ball_resolution, 200));
    std::vector<Vec> wv;
    for (const auto& f : W.facets)
      for (const Vec& v : f.verts) wv.push_back(v);
    ConvexBody Wb = ConvexBody::points3(wv);
    for (double e : ladder) {
      std::vector<Vec> sums;
      sums.reserve(E.vertices().size() * Wb.vertices().size());
      for (const Vec& a : E.vertices())
        for (const Vec& b : Wb.vertices()) sums.push_back(a + b * e);
      double m = cone::weighted_volume(ConvexBody::points3(std::move(sums)).mesh(), w);
      res.quotients.push_back((m - m0) / e);
    }
  }
  res.extrapolated = detail::extrapolate_to_zero(res.eps, res.quotients);
  return res;
}

// Nonconvex fallback: rasterize, then run a 16-neighbor Dijkstra
// forward-distance transform and read volumes off the sorted distance
// field.  Accuracy is limited by the chamfer stencil; results are
// flagged approximate.
inline ContentResult minkowski_content(const SurfaceMesh& E, const Gauge& F,
                                       const WeightSpec& w, std::vector<double> ladder,
                                       int grid = 1024) {
  if (E.dim != 2 || E.loop.empty())
    throw std::domain_error("voxel content needs a 2D polygon mesh");
  if (ladder.empty()) throw std::domain_error("minkowski_content needs a ladder");
  std::sort(ladder.begin(), ladder.end(), std::greater<double>());

  const auto& loop = E.loop;
  Vec lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const Vec& p : loop) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  double reach = 0.0;
  {
    SurfaceMesh W = gauge::forward_ball(F, {}, 1.0, 256);
    for (const Vec& v : W.loop) reach = std::max(reach, norm(v));
  }
  double pad = 1.25 * ladder.front() * reach;
  lo.x -= pad; lo.y -= pad; hi.x += pad; hi.y += pad;
  double ext = std::max(hi.x - lo.x, hi.y - lo.y);
  double cell = ext / grid;
  int nx = grid, ny = grid;

  auto world = [&](int ix, int iy) {
    return Vec{lo.x + (ix + 0.5) * cell, lo.y + (iy + 0.5) * cell};
  };
  auto inside = [&](const Vec& p) {
    bool in = false;
    std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      bool cr = (loop[i].y > p.y) != (loop[j].y > p.y);
      if (cr && p.x < loop[j].x + (loop[i].x - loop[j].x) * (p.y - loop[i].y) /
                                      (loop[i].y - loop[j].y))
        in = !in;
    }
    return in;
  };

  const double INF = 1e300;
  std::vector<double> dist(std::size_t(nx) * ny, INF);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (inside(world(ix, iy))) {
        dist[std::size_t(iy) * nx + ix] = 0.0;
        pq.push({0.0, iy * nx + ix});
      }
  const int moves[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                            {-1, 1}, {-1, -1}, {2, 1},  {2, -1}, {-2, 1}, {-2, -1},
                            {1, 2},  {1, -2},  {-1, 2}, {-1, -2}};
  double cost[16];
  for (int k = 0; k < 16; ++k) cost[k] = F(Vec{moves[k][0] * cell, moves[k][1] * cell});
  while (!pq.empty()) {
    auto [d, id] = pq.top();
    pq.pop();
    if (d > dist[id]) continue;
    int ix = id % nx, iy = id / nx;
    for (int k = 0; k < 16; ++k) {
      int jx = ix + moves[k][0], jy = iy + moves[k][1];
      if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
      std::size_t jd = std::size_t(jy) * nx + jx;
      double nd = d + cost[k];
      if (nd < dist[jd]) {
        dist[jd] = nd;
        pq.push({nd, int(jd)});
      }
    }
  }

  std::vector<std::pair<double, double>> dw;  // (distance, weighted cell mass)
  dw.reserve(dist.size());
  double area = cell * cell;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double d = dist[std::size_t(iy) * nx + ix];
      if (d < INF) dw.push_back({d, w(world(ix, iy)) * area});
    }
  std::sort(dw.begin(), dw.end());
  std::vector<double> cum(dw.size() + 1, 0.0);
  for (std::size_t i = 0; i < dw.size(); ++i) cum[i + 1] = cum[i] + dw[i].second;
  auto mass_below = [&](double e) {
    auto it = std::upper_bound(dw.begin(), dw.end(), std::make_pair(e, 1e300));
    return cum[std::size_t(it - dw.begin())];
  };

  ContentResult res;
  res.eps = ladder;
  res.approximate = true;
  double m0 = mass_below(0.0);
  for (double e : ladder) res.quotients.push_back((mass_below(e) - m0) / e);
  res.extrapolated = detail::extrapolate_to_zero(res.eps, res.quotients);
  return res;
}

// F-distance from the body to an outside point (0 inside)
inline double forward_dist(const ConvexBody& E, const Gauge& F, const Vec& z) {
  const auto& V = E.vertices();
  std::size_t n = V.size();
  bool in = true;
  for (std::size_t i = 0; i < n && in; ++i)
    in = cross2(V[(i + 1) % n] - V[i], z - V[i]) >= -1e-12;
  if (in) return 0.0;
  double best = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = V[i];
    Vec d = V[(i + 1) % n] - p;
    auto fe = [&](double tau) { return F(z - (p + d * tau)); };
    auto [tau, val] = golden_min(fe, 0.0, 1.0, 1e-10);
    (void)tau;
    best = std::min({best, val, fe(0.0), fe(1.0)});
  }
  return best;
}

struct TraceRow {
  double R = 0.0;
  double m_ball = 0.0;
  double m_mid = 0.0;       // m(Z_t(E, B_R))
  double bm_rhs = 0.0;      // ((1-t) m(E)^{1/N} + t m(B_R)^{1/N})^N
  double lower_bound = 0.0; // N m(E)^{1-1/N} (m(B_R)^{1/N} - m(E)^{1/N})/(d+R)
  bool bm_ok = false;
  bool containment_ok = false;
  double worst_excess = 0.0;
};

struct TraceResult {
  std::vector<TraceRow> rows;
  double m_E = 0.0;
  double d_forward = 0.0;
  double limit_candidate = 0.0;   // N (omega_N AVR)^{1/N} m(E)^{1-1/N}
  double content = 0.0;
};

// The proof-of-inequality harness: grow balls, form midpoint sets,
// check the Brunn-Minkowski step and the inclusion
// Z_t(E, B_R) subset B+(E, t(d+R)), and report the perimeter lower
// bound this chain yields for each R.
inline TraceResult main_inequality_trace(const ConvexBody& E, const Gauge& F,
                                         const WeightSpec& w, const ConeSpec& cone_spec,
                                         const Vec& x0, const std::vector<double>& R_ladder,
                                         double t, int ball_resolution = 1024) {
  if (E.dim() != 2) throw std::domain_error("trace harness is 2D");
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("trace needs t in [0,1)");
  double N = w.N();
  TraceResult out;
  out.m_E = cone::weighted_volume(E.mesh(), w);
  out.d_forward = E.diameter(F);

  for (double R : R_ladder) {
    for (const Vec& v : E.vertices())
      if (F(v - x0) > R * (1.0 + 1e-9))
        throw std::domain_error("trace: E is not contained in B+(x0,R)");
    SurfaceMesh Bm = gauge::forward_ball(F, x0, R, ball_resolution);
    if (!cone_spec.whole()) Bm = cone::clip(Bm, cone_spec);
    ConvexBody B = ConvexBody::polygon(Bm.loop);

    TraceRow row;
    row.R = R;
    row.m_ball = cone::weighted_volume(B.mesh(), w);
    if (t > 0.0) {
      ConvexBody Z = midpoint_set(E, B, t);
      row.m_mid = cone::weighted_volume(Z.mesh(), w);
      row.bm_rhs = std::pow((1.0 - t) * std::pow(out.m_E, 1.0 / N) +
                                t * std::pow(row.m_ball, 1.0 / N),
                            N);
      row.bm_ok = row.m_mid >= row.bm_rhs * (1.0 - 1e-9);
      double budget = t * (out.d_forward + R);
      double worst = -1e300;
      for (const Vec& z : Z.vertices())
        worst = std::max(worst, forward_dist(E, F, z) - budget);
      row.worst_excess = worst;
      row.containment_ok = worst <= 1e-9 * (out.d_forward + R);
      row.lower_bound = N * std::pow(out.m_E, (N - 1.0) / N) *
                        (std::pow(row.m_ball, 1.0 / N) - std::pow(out.m_E, 1.0 / N)) /
                        (out.d_forward + R);
    } else {
      row.m_mid = out.m_E;
      row.bm_rhs = out.m_E;
      row.bm_ok = row.containment_ok = true;
    }
    out.rows.push_back(row);
  }

  double A = cone::avr(gauge::dual_gauge(F), w, cone_spec, ball_resolution);
  out.limit_candidate =
      N * std::pow(cone::omega_N(N) * A, 1.0 / N) * std::pow(out.m_E, (N - 1.0) / N);
  double inr = E.inradius();
  out.content = minkowski_content(E, F, w, {0.1 * inr, 0.05 * inr, 0.025 * inr}).extrapolated;
  return out;
}

struct CoareaResult {
  double lhs = 0.0;        // integral of the contents of the superlevels
  double rhs = 0.0;        // integral of the slope, fine grid
  double rhs_coarse = 0.0; // same at half resolution, for an error band
};

// For radial f(x) = phi(F(x)) with phi nonincreasing, Lipschitz and
// supported in [0, r0]: the superlevels are forward balls, whose
// content is exact in the mesh, while the right side integrates the
// slope F*(-df) on a midpoint grid.
inline CoareaResult coarea_check(const std::function<double(double)>& phi, double r0,
                                 const Gauge& F, const WeightSpec& w, int resolution = 512) {
  if (F.dim() != 2) throw std::domain_error("coarea check is 2D");
  double top = phi(0.0);
  if (std::abs(phi(r0)) > 1e-9 * std::max(1.0, top))
    throw std::domain_error("coarea: phi must vanish at r0");
  double prev = top;
  for (int k = 1; k <= 512; ++k) {
    double val = phi(r0 * k / 512.0);
    if (val > prev + 1e-12 * std::max(1.0, top))
      throw std::domain_error("coarea: phi must be nonincreasing");
    prev = val;
  }
  CoareaResult out;
  if (top <= 0.0) return out;

  SurfaceMesh W = gauge::wulff(gauge::dual_gauge(F), 2048);
  double cP = cone::weighted_perimeter(W, gauge::dual_gauge(F), w,
                                       ConeSpec::whole_space(2));
  double N = w.N();
  auto r_of_t = [&](double tlev) {
    // largest r with phi(r) >= tlev
    double a = 0.0, b = r0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (a + b);
      (phi(mid) >= tlev ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  out.lhs = integrate_midpoint(
      [&](double tl) { return cP * std::pow(r_of_t(tl), N - 1.0); }, 0.0, top, 4096);

  double reach = 0.0;
  for (const Vec& v : W.loop) reach = std::max(reach, norm(v));
  double half = r0 * reach * 1.001;
  Gauge Fs = gauge::dual_gauge(F);  // F* for the slope
  auto rhs_at = [&](int res) {
    double cell = 2.0 * half / res;
    double hstep = 1e-6 * r0;
    KahanSum s;
    for (int iy = 0; iy < res; ++iy)
      for (int ix = 0; ix < res; ++ix) {
        Vec x{-half + (ix + 0.5) * cell, -half + (iy + 0.5) * cell};
        double rf = F(x);
        if (rf >= r0) continue;
        double dphi = (phi(std::min(r0, rf + hstep)) - phi(std::max(0.0, rf - hstep))) /
                      (std::min(r0, rf + hstep) - std::max(0.0, rf - hstep));
        double sl;
        if (rf < 1e-9 * r0) {
          sl = -dphi;  // F*(dF) = 1 and the gradient direction is immaterial at 0
        } else {
          double gh = 1e-6 * std::max(1.0, norm(x));
          Vec grad{(F(x + Vec{gh, 0.0}) - F(x - Vec{gh, 0.0})) / (2.0 * gh),
                   (F(x + Vec{0.0, gh}) - F(x - Vec{0.0, gh})) / (2.0 * gh)};
          sl = Fs(-(grad * dphi));
        }
        s.add(sl * w(x) * cell * cell);
      }
    return s.value();
  };
  out.rhs = rhs_at(resolution);
  out.rhs_coarse = rhs_at(resolution / 2);
  return out;
}

}  // namespace finsler::bminkowski
