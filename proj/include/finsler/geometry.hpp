#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace finsler {

// Point/vector in R^2 or R^3.  Planar data keeps z == 0; the ambient
// dimension travels with the containers, not with the vector itself.
struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec() = default;
  Vec(double x_, double y_) : x(x_), y(y_) {}
  Vec(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec operator-() const { return {-x, -y, -z}; }
  Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec& operator+=(const Vec& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  Vec& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dot(const Vec& a, const Vec& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// z-component of the planar cross product
inline double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }

inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }

inline Vec normalized(const Vec& v) {
  double n = norm(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return v / n;
}

// counterclockwise rotation by pi/2 in the plane
inline Vec perp(const Vec& v) { return {-v.y, v.x, 0.0}; }

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline bool lex_less(const Vec& a, const Vec& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

// signed area of a polygon given by vertices in order
inline double polygon_area(const std::vector<Vec>& pts) {
  double a = 0.0;
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = pts[i];
    const Vec& q = pts[(i + 1) % n];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

inline Vec polygon_centroid(const std::vector<Vec>& pts) {
  double a = 0.0;
  Vec c;
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = pts[i];
    const Vec& q = pts[(i + 1) % n];
    double w = cross2(p, q);
    a += w;
    c += (p + q) * w;
  }
  if (a == 0.0) {
    // degenerate: fall back to the vertex mean
    Vec m;
    for (const Vec& p : pts) m += p;
    return m / double(n);
  }
  return c / (3.0 * a);
}

}  // namespace finsler
