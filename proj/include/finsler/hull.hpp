#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finsler/geometry.hpp"

namespace finsler {

// Monotone chain.  Returns the hull in counterclockwise order without
// collinear points.
inline std::vector<Vec> hull2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

struct Tri {
  int a, b, c;
};

namespace detail {

inline double orient3(const Vec& p, const Vec& q, const Vec& r, const Vec& s) {
  return dot(cross(q - p, r - p), s - p);
}

}  // namespace detail

// Incremental 3d convex hull.  Quadratic in the worst case, which is
// fine for the polytope sizes handled here (a few thousand points).
// Returns triangles with outward orientation.
inline std::vector<Tri> hull3d(const std::vector<Vec>& pts) {
  std::size_t n = pts.size();
  if (n < 4) throw std::domain_error("hull3d: need at least 4 points");

  double scale = 0.0;
  for (const Vec& p : pts)
    scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  if (scale == 0.0) scale = 1.0;
  const double eps = 1e-10 * scale * scale * scale;

  // initial non-degenerate tetrahedron
  std::size_t i0 = 0, i1 = 1;
  while (i1 < n && dist(pts[i0], pts[i1]) < 1e-12 * scale) ++i1;
  if (i1 >= n) throw std::domain_error("hull3d: all points coincide");
  std::size_t i2 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    if (norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0])) > 1e-10 * scale * scale) {
      i2 = i;
      break;
    }
  }
  if (i2 == n) throw std::domain_error("hull3d: collinear input");
  std::size_t i3 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    if (std::abs(detail::orient3(pts[i0], pts[i1], pts[i2], pts[i])) > eps) {
      i3 = i;
      break;
    }
  }
  if (i3 == n) throw std::domain_error("hull3d: coplanar input");

  std::vector<Tri> faces;
  auto add_face = [&](int a, int b, int c, const Vec& inside) {
    if (detail::orient3(pts[a], pts[b], pts[c], inside) > 0.0)
      faces.push_back({a, c, b});
    else
      faces.push_back({a, b, c});
  };
  Vec inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  add_face(int(i0), int(i1), int(i2), inner);
  add_face(int(i0), int(i1), int(i3), inner);
  add_face(int(i0), int(i2), int(i3), inner);
  add_face(int(i1), int(i2), int(i3), inner);

  for (std::size_t ip = 0; ip < n; ++ip) {
    if (ip == i0 || ip == i1 || ip == i2 || ip == i3) continue;
    const Vec& p = pts[ip];
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (detail::orient3(pts[faces[f].a], pts[faces[f].b], pts[faces[f].c], p) > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    // horizon: directed edges of visible faces whose reverse is not visible
    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const Tri& t = faces[f];
      int e[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
      for (auto& ed : e) {
        auto rev = std::make_pair(ed[1], ed[0]);
        auto it = edge_count.find(rev);
        if (it != edge_count.end())
          edge_count.erase(it);
        else
          edge_count[{ed[0], ed[1]}] = 1;
      }
    }
    std::vector<Tri> next;
    next.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [edge, cnt] : edge_count) {
      (void)cnt;
      next.push_back({edge.first, edge.second, int(ip)});
    }
    faces.swap(next);
  }
  return faces;
}

}  // namespace finsler
