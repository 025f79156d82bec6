#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/geometry.hpp"
#include "finsler/numeric.hpp"

namespace finsler::gauge {

// One boundary element: a segment (2D) or a planar polygon (3D).
struct Facet {
  std::vector<Vec> verts;
  Vec normal;       // outward, Euclidean unit length
  double measure;   // length in 2D, area in 3D
  Vec centroid;
  bool cap = false;  // created by clipping, lies in the cutting plane
};

struct SurfaceMesh {
  int dim = 2;
  bool closed = true;
  std::vector<Facet> facets;
  std::vector<Vec> loop;  // 2D only: boundary vertices in ccw order

  bool empty() const { return facets.empty(); }
};

namespace detail {

inline Facet make_segment(const Vec& p, const Vec& q, bool cap = false) {
  Facet f;
  f.verts = {p, q};
  Vec d = q - p;
  f.measure = norm(d);
  f.normal = f.measure > 0.0 ? Vec{d.y, -d.x} / f.measure : Vec{};
  f.centroid = (p + q) * 0.5;
  f.cap = cap;
  return f;
}

// area, centroid and Newell normal of a planar polygon in 3-space
inline Facet make_polygon3(std::vector<Vec> verts, bool cap = false) {
  Facet f;
  Vec nrm;
  std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) nrm += cross(verts[i], verts[(i + 1) % n]);
  double len = norm(nrm);
  f.verts = std::move(verts);
  f.cap = cap;
  if (len == 0.0) {
    f.measure = 0.0;
    return f;
  }
  f.normal = nrm / len;
  f.measure = 0.5 * len;
  // area-weighted fan centroid
  const Vec& o = f.verts[0];
  double total = 0.0;
  Vec c;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    Vec a = f.verts[i] - o, b = f.verts[i + 1] - o;
    double w = 0.5 * dot(cross(a, b), f.normal);
    total += w;
    c += (o + f.verts[i] + f.verts[i + 1]) * (w / 3.0);
  }
  f.centroid = std::abs(total) > 0.0 ? c / total : f.verts[0];
  return f;
}

}  // namespace detail

// loop given counterclockwise; reversed automatically if not
inline SurfaceMesh mesh_from_polygon(std::vector<Vec> loop) {
  if (loop.size() < 3) throw InvalidGaugeError("polygon needs at least 3 vertices");
  if (polygon_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());
  SurfaceMesh m;
  m.dim = 2;
  for (std::size_t i = 0; i < loop.size(); ++i)
    m.facets.push_back(detail::make_segment(loop[i], loop[(i + 1) % loop.size()]));
  m.loop = std::move(loop);
  return m;
}

inline SurfaceMesh mesh_from_triangles(const std::vector<Vec>& verts,
                                       const std::vector<Tri>& tris,
                                       const Vec& interior_hint) {
  SurfaceMesh m;
  m.dim = 3;
  for (const Tri& t : tris) {
    Facet f = detail::make_polygon3({verts[t.a], verts[t.b], verts[t.c]});
    if (f.measure == 0.0) continue;
    if (dot(f.normal, f.centroid - interior_hint) < 0.0) {
      std::reverse(f.verts.begin(), f.verts.end());
      f.normal = -f.normal;
    }
    m.facets.push_back(std::move(f));
  }
  return m;
}

inline double mesh_area(const SurfaceMesh& m) {
  KahanSum s;
  for (const Facet& f : m.facets) s.add(f.measure);
  return s.value();
}

// unweighted enclosed volume by the divergence theorem
inline double enclosed_volume(const SurfaceMesh& m) {
  KahanSum s;
  for (const Facet& f : m.facets) s.add(dot(f.centroid, f.normal) * f.measure);
  return s.value() / double(m.dim);
}

inline double mesh_diameter(const SurfaceMesh& m) {
  // bounding-box proxy; only used to scale tolerances
  Vec lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const Facet& f : m.facets)
    for (const Vec& v : f.verts)
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
  if (m.facets.empty()) return 0.0;
  return norm(hi - lo);
}

namespace detail {

struct IcoSphere {
  std::vector<Vec> verts;
  std::vector<Tri> tris;
};

inline IcoSphere icosphere(int min_verts) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec> v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                        {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                        {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec& p : v) p = normalized(p);
  std::vector<Tri> t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  while (int(v.size()) < min_verts) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back(normalized((v[a] + v[b]) * 0.5));
      mid[key] = int(v.size()) - 1;
      return int(v.size()) - 1;
    };
    std::vector<Tri> next;
    next.reserve(4 * t.size());
    for (const Tri& tr : t) {
      int ab = midpoint(tr.a, tr.b), bc = midpoint(tr.b, tr.c), ca = midpoint(tr.c, tr.a);
      next.push_back({tr.a, ab, ca});
      next.push_back({tr.b, bc, ab});
      next.push_back({tr.c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    t.swap(next);
  }
  return {std::move(v), std::move(t)};
}

}  // namespace detail

// B+(center, r) = {y : F(y - center) <= r}.  In a translation-invariant
// gauge space distances are d(x,y) = F(y-x), so the ball is center + r*W
// with W the unit ball of F; vertices are center + r*u/F(u) over a
// quasi-uniform direction sample.
inline SurfaceMesh forward_ball(const Gauge& g, const Vec& center, double r, int resolution) {
  if (!(r > 0.0)) throw InvalidGaugeError("forward_ball needs r > 0");
  if (resolution < 8) throw InvalidGaugeError("forward_ball needs resolution >= 8");
  if (g.dim() == 2) {
    std::vector<Vec> loop;
    loop.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      Vec u = detail::unit2(2.0 * M_PI * k / resolution);
      double f = g(u);
      if (!(f > 0.0) || !std::isfinite(f)) throw InvalidGaugeError("degenerate gauge");
      loop.push_back(center + u * (r / f));
    }
    return mesh_from_polygon(std::move(loop));
  }
  auto ico = detail::icosphere(resolution);
  std::vector<Vec> verts;
  verts.reserve(ico.verts.size());
  for (const Vec& u : ico.verts) {
    double f = g(u);
    if (!(f > 0.0) || !std::isfinite(f)) throw InvalidGaugeError("degenerate gauge");
    verts.push_back(center + u * (r / f));
  }
  return mesh_from_triangles(verts, ico.tris, center);
}

// Wulff shape of H: the unit ball of the dual gauge, i.e.
// W = {v : <v,w> <= H(w) for all w}
inline SurfaceMesh wulff(const Gauge& H, int resolution) {
  return forward_ball(dual_gauge(H), Vec{}, 1.0, resolution);
}

}  // namespace finsler::gauge
