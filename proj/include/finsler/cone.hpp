#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/geometry.hpp"
#include "finsler/mesh.hpp"
#include "finsler/numeric.hpp"

namespace finsler::cone {

using gauge::Facet;
using gauge::Gauge;
using gauge::SurfaceMesh;

// Convex cone with vertex at the origin, cut out by inward halfspace
// normals: cone = {x : <n_j, x> >= 0 for all j}.  Empty list = R^n.
struct ConeSpec {
  int dim = 2;
  std::vector<Vec> normals;

  static ConeSpec whole_space(int d) { return {d, {}}; }

  static ConeSpec halfspaces(int d, std::vector<Vec> ns) {
    ConeSpec c{d, std::move(ns)};
    for (Vec& n : c.normals) n = normalized(n);
    c.check_interior();
    return c;
  }

  static ConeSpec halfplane_upper() { return halfspaces(2, {{0.0, 1.0}}); }
  static ConeSpec quadrant() { return halfspaces(2, {{1.0, 0.0}, {0.0, 1.0}}); }

  bool whole() const { return normals.empty(); }

  // smallest inward margin; large when unconstrained
  double margin(const Vec& x) const {
    double m = 1e300;
    for (const Vec& n : normals) m = std::min(m, dot(n, x));
    return m;
  }

  void check_interior() const {
    if (normals.empty()) return;
    int samples = dim == 2 ? 720 : 4000;
    double best = -1e300;
    if (dim == 2) {
      for (int k = 0; k < samples; ++k)
        best = std::max(best, margin(gauge::detail::unit2(2.0 * M_PI * k / samples)));
    } else {
      for (const Vec& u : gauge::detail::fibonacci_sphere(samples))
        best = std::max(best, margin(u));
    }
    if (best < 0.05) throw InvalidConeError("cone has (numerically) empty interior");
  }
};

// alpha-homogeneous weight, with w^{1/alpha} concave.  The admissible
// family keeps validation structural: w = 1, or w(x) = <c,x>^alpha
// whose alpha-th root is linear, hence concave.
class WeightSpec {
 public:
  enum class Kind { one, linear_power };

  static WeightSpec one(int dim) { return WeightSpec(dim, Kind::one, {}, 0.0); }

  static WeightSpec linear_power(int dim, const Vec& c, double alpha) {
    if (alpha < 0.0) throw InvalidConeError("weight exponent must be >= 0");
    if (alpha == 0.0) return one(dim);
    if (norm(c) == 0.0) throw InvalidConeError("weight direction must be nonzero");
    return WeightSpec(dim, Kind::linear_power, c, alpha);
  }

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const Vec& c() const { return c_; }
  double N() const { return dim_ + alpha_; }

  double operator()(const Vec& x) const {
    if (kind_ == Kind::one) return 1.0;
    double s = dot(c_, x);
    if (s < 0.0) {
      // roundoff from clipping puts cap centroids a hair outside
      if (s > -1e-9 * norm(c_) * (1.0 + norm(x))) return 0.0;
      throw InvalidConeError("weight evaluated where <c,x> < 0");
    }
    return alpha_ == 1.0 ? s : std::pow(s, alpha_);
  }

 private:
  WeightSpec(int dim, Kind kind, const Vec& c, double alpha)
      : dim_(dim), kind_(kind), c_(c), alpha_(alpha) {}

  int dim_;
  Kind kind_;
  Vec c_;
  double alpha_;
};

inline double omega_N(double N) {
  if (!(N > 0.0)) throw InvalidConeError("omega_N needs N > 0");
  return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

namespace detail {

constexpr double kPlaneTol = 1e-12;

// keep {<n,x> >= c}; points within tol of the plane count as kept
inline SurfaceMesh clip_halfspace(const SurfaceMesh& m, const Vec& n, double c) {
  double scale = std::max(1.0, gauge::mesh_diameter(m));
  double tol = kPlaneTol * scale;
  auto side = [&](const Vec& p) { return dot(n, p) - c; };

  SurfaceMesh out;
  out.dim = m.dim;
  out.closed = m.closed;

  if (m.dim == 2) {
    if (m.loop.empty()) throw InvalidConeError("2d clipping needs a polygon loop");
    std::vector<Vec> loop;
    std::size_t nn = m.loop.size();
    for (std::size_t i = 0; i < nn; ++i) {
      const Vec& p = m.loop[i];
      const Vec& q = m.loop[(i + 1) % nn];
      double sp = side(p), sq = side(q);
      if (sp >= -tol) loop.push_back(p);
      if ((sp > tol && sq < -tol) || (sp < -tol && sq > tol))
        loop.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    // drop duplicate corners introduced by the cut
    std::vector<Vec> clean;
    for (const Vec& p : loop)
      if (clean.empty() || dist(clean.back(), p) > tol) clean.push_back(p);
    while (clean.size() > 1 && dist(clean.front(), clean.back()) <= tol) clean.pop_back();
    if (clean.size() < 3 || std::abs(polygon_area(clean)) <= tol * tol) return out;

    out = gauge::mesh_from_polygon(std::move(clean));
    for (Facet& f : out.facets) {
      bool on_plane = true;
      for (const Vec& v : f.verts) on_plane = on_plane && std::abs(side(v)) <= tol;
      if (on_plane) f.cap = true;
    }
    // preserve tags of surviving original cap facets
    for (Facet& f : out.facets) {
      if (f.cap) continue;
      for (const Facet& g : m.facets) {
        if (!g.cap) continue;
        Vec d = g.verts[1] - g.verts[0];
        double len = norm(d);
        if (len == 0.0) continue;
        Vec u = d / len;
        double off = cross2(u, g.verts[0]);
        if (std::abs(cross2(u, f.verts[0]) - off) <= tol &&
            std::abs(cross2(u, f.verts[1]) - off) <= tol) {
          f.cap = true;
          break;
        }
      }
    }
    return out;
  }

  std::vector<Vec> cap_pts;
  for (const Facet& f : m.facets) {
    std::vector<Vec> kept;
    std::size_t nn = f.verts.size();
    for (std::size_t i = 0; i < nn; ++i) {
      const Vec& p = f.verts[i];
      const Vec& q = f.verts[(i + 1) % nn];
      double sp = side(p), sq = side(q);
      if (std::abs(sp) <= tol) cap_pts.push_back(p);
      if (sp >= -tol) kept.push_back(p);
      if ((sp > tol && sq < -tol) || (sp < -tol && sq > tol)) {
        Vec x = p + (q - p) * (sp / (sp - sq));
        kept.push_back(x);
        cap_pts.push_back(x);
      }
    }
    if (kept.size() < 3) continue;
    Facet nf = gauge::detail::make_polygon3(std::move(kept), f.cap);
    if (nf.measure <= tol * tol) continue;
    if (dot(nf.normal, f.normal) < 0.0) {
      std::reverse(nf.verts.begin(), nf.verts.end());
      nf.normal = -nf.normal;
    }
    out.facets.push_back(std::move(nf));
  }
  if (out.facets.empty()) return SurfaceMesh{3, m.closed, {}, {}};

  // cap: convex section polygon, wound so the outward normal is -n
  std::vector<Vec> uniq;
  for (const Vec& p : cap_pts) {
    bool dup = false;
    for (const Vec& q : uniq) dup = dup || dist(p, q) <= 10.0 * tol;
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() >= 3) {
    Vec ctr;
    for (const Vec& p : uniq) ctr += p;
    ctr = ctr / double(uniq.size());
    Vec nout = -n;
    Vec e1 = std::abs(nout.z) < 0.9 ? normalized(cross(nout, Vec{0, 0, 1}))
                                    : normalized(cross(nout, Vec{0, 1, 0}));
    Vec e2 = cross(nout, e1);
    std::sort(uniq.begin(), uniq.end(), [&](const Vec& a, const Vec& b) {
      return std::atan2(dot(a - ctr, e2), dot(a - ctr, e1)) <
             std::atan2(dot(b - ctr, e2), dot(b - ctr, e1));
    });
    Facet cap = gauge::detail::make_polygon3(std::move(uniq), true);
    if (cap.measure > tol * tol) {
      if (dot(cap.normal, nout) < 0.0) {
        std::reverse(cap.verts.begin(), cap.verts.end());
        cap.normal = -cap.normal;
      }
      out.facets.push_back(std::move(cap));
    }
  }
  return out;
}

}  // namespace detail

inline SurfaceMesh clip(const SurfaceMesh& E, const ConeSpec& cone) {
  SurfaceMesh cur = E;
  for (const Vec& n : cone.normals) {
    if (cur.empty()) break;
    cur = detail::clip_halfspace(cur, n, 0.0);
  }
  return cur;
}

// split helper used by the additivity checks: parts of E on both sides
// of the plane {<n,x> = c}, interface facets tagged as caps
inline std::pair<SurfaceMesh, SurfaceMesh> split(const SurfaceMesh& E, const Vec& n, double c) {
  return {detail::clip_halfspace(E, n, c), detail::clip_halfspace(E, -n, -c)};
}

// Relative weighted anisotropic perimeter: integrates H(nu) w over the
// part of the boundary inside the open cone; facets lying in a cone
// wall do not count.
inline double weighted_perimeter(const SurfaceMesh& E, const Gauge& H, const WeightSpec& w,
                                 const ConeSpec& cone) {
  if (!E.closed) throw InvalidConeError("perimeter needs a closed mesh");
  double tol = 1e-9 * std::max(1.0, gauge::mesh_diameter(E));
  KahanSum s;
  for (const Facet& f : E.facets) {
    if (f.measure == 0.0) continue;
    if (!cone.whole()) {
      bool in_wall = false;
      for (const Vec& n : cone.normals) {
        bool all = true;
        for (const Vec& v : f.verts) all = all && std::abs(dot(n, v)) <= tol;
        if (all) { in_wall = true; break; }
      }
      if (in_wall || cone.margin(f.centroid) <= tol) continue;
    }
    s.add(H(f.normal) * w(f.centroid) * f.measure);
  }
  return s.value();
}

// Mean of the weight over a facet.  For segment facets <c,x> is linear
// along the edge, so the linear_power mean has the closed form
// (b^{a+1} - a^{a+1}) / ((b - a)(a+1)); 3D facets use the centroid.
inline double mean_weight(const WeightSpec& w, const Facet& f) {
  if (w.kind() == WeightSpec::Kind::one || f.verts.size() != 2) return w(f.centroid);
  double a = dot(w.c(), f.verts[0]);
  double b = dot(w.c(), f.verts[1]);
  double tiny = 1e-9 * norm(w.c()) *
                (1.0 + std::max(norm(f.verts[0]), norm(f.verts[1])));
  if (a < 0.0 || b < 0.0) {
    if (a < -tiny || b < -tiny) throw InvalidConeError("weight evaluated where <c,x> < 0");
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
  }
  double p = w.alpha() + 1.0;
  if (std::abs(b - a) <= 1e-12 * std::max({std::abs(a), std::abs(b), tiny}))
    return std::pow(0.5 * (a + b), w.alpha());
  return (std::pow(b, p) - std::pow(a, p)) / ((b - a) * p);
}

// Weighted volume by boundary reduction: div(w x) = N w for an
// alpha-homogeneous weight, so m_w(E) = (1/N) sum I_w(f) <c_f, nu_f> A_f
// with I_w the facet mean of w.  <x, nu> is constant on straight
// facets, so the 2D value is exact for polygons over the whole weight
// family; facets in cone walls vanish automatically since <x, nu> = 0.
inline double weighted_volume(const SurfaceMesh& E, const WeightSpec& w) {
  KahanSum s;
  for (const Facet& f : E.facets)
    if (f.measure > 0.0) s.add(mean_weight(w, f) * dot(f.centroid, f.normal) * f.measure);
  return s.value() / w.N();
}

inline double weighted_volume(const SurfaceMesh& E, const WeightSpec& w, const ConeSpec&) {
  return weighted_volume(E, w);
}

inline double avr(const Gauge& H, const WeightSpec& w, const ConeSpec& cone, int resolution) {
  SurfaceMesh W = gauge::wulff(H, resolution);
  SurfaceMesh C = cone.whole() ? W : clip(W, cone);
  double m = weighted_volume(C, w);
  if (!(m > 0.0)) throw InvalidConeError("AVR is not positive (degenerate cone or weight)");
  return m / omega_N(w.N());
}

inline double iso_quotient_from(double P, double m, double avr_value, double N) {
  if (!(m > 0.0)) throw InvalidConeError("iso_quotient needs positive volume");
  return P / (N * std::pow(omega_N(N), 1.0 / N) * std::pow(avr_value, 1.0 / N) *
              std::pow(m, (N - 1.0) / N));
}

// Q(E) = P(E) / (N omega_N^{1/N} AVR^{1/N} m(E)^{(N-1)/N}); equals 1
// exactly when E is the (clipped, centered) Wulff shape.
inline double iso_quotient(const SurfaceMesh& E, const Gauge& H, const WeightSpec& w,
                           const ConeSpec& cone, int resolution) {
  double P = weighted_perimeter(E, H, w, cone);
  double m = weighted_volume(E, w);
  return iso_quotient_from(P, m, avr(H, w, cone, resolution), w.N());
}

}  // namespace finsler::cone
