#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/geometry.hpp"
#include "finsler/hull.hpp"
#include "finsler/numeric.hpp"

namespace finsler::gauge {

// A gauge is a nonnegative, convex, positively 1-homogeneous function
// vanishing only at the origin.  It need not be symmetric: F(-v) may
// differ from F(v).
enum class Kind { euclidean, polytopal, support, randers, randers_dual, custom };

namespace detail {

struct Halfspace {
  Vec n;     // outward unit normal of a unit-ball facet
  double h;  // offset, positive since 0 is interior
};

inline std::vector<Halfspace> body_facets(int dim, const std::vector<Vec>& hull_verts,
                                          const std::vector<Tri>& tris) {
  std::vector<Halfspace> out;
  double scale = 0.0;
  for (const Vec& v : hull_verts) scale = std::max(scale, norm(v));
  if (dim == 2) {
    std::size_t n = hull_verts.size();
    if (n < 3) throw InvalidGaugeError("unit ball needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& p = hull_verts[i];
      const Vec& q = hull_verts[(i + 1) % n];
      Vec d = q - p;
      Vec nrm = normalized(Vec{d.y, -d.x});
      double h = dot(nrm, p);
      if (h <= 1e-12 * scale)
        throw InvalidGaugeError("unit ball must contain the origin strictly");
      out.push_back({nrm, h});
    }
  } else {
    for (const Tri& t : tris) {
      const Vec& a = hull_verts[t.a];
      Vec nrm = cross(hull_verts[t.b] - a, hull_verts[t.c] - a);
      double len = norm(nrm);
      if (len < 1e-14 * scale * scale) continue;
      nrm = nrm / len;
      double h = dot(nrm, a);
      if (h <= 1e-12 * scale)
        throw InvalidGaugeError("unit ball must contain the origin strictly");
      out.push_back({nrm, h});
    }
    if (out.empty()) throw InvalidGaugeError("degenerate polytope");
  }
  return out;
}

}  // namespace detail

class Gauge {
 public:
  using Fn = std::function<double(const Vec&)>;

  static Gauge euclidean(int dim) { return Gauge(dim, Kind::euclidean); }

  // gauge whose unit ball is the convex hull of `verts`
  static Gauge polytopal(int dim, std::vector<Vec> verts) {
    Gauge g(dim, Kind::polytopal);
    g.init_polytope(std::move(verts));
    return g;
  }

  // support function of the convex hull of `verts`, used as a gauge
  static Gauge support(int dim, std::vector<Vec> verts) {
    Gauge g(dim, Kind::support);
    g.init_polytope(std::move(verts));
    return g;
  }

  // F(v) = |v| + <b, v>, irreversible for b != 0
  static Gauge randers(int dim, const Vec& drift) {
    Gauge g(dim, Kind::randers);
    g.set_drift(drift);
    return g;
  }

  // the dual of the Randers gauge with the same drift, in closed form
  static Gauge randers_dual(int dim, const Vec& drift) {
    Gauge g(dim, Kind::randers_dual);
    g.set_drift(drift);
    return g;
  }

  static Gauge custom(int dim, Fn fn, std::string name = "custom") {
    Gauge g(dim, Kind::custom);
    g.fn_ = std::move(fn);
    g.name_ = std::move(name);
    if (!g.fn_) throw InvalidGaugeError("custom gauge needs an evaluator");
    return g;
  }

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Vec& drift() const { return b_; }
  const std::vector<Vec>& vertices() const { return verts_; }
  const std::vector<detail::Halfspace>& facets() const { return facets_; }

  double operator()(const Vec& v) const {
    switch (kind_) {
      case Kind::euclidean:
        return norm(v);
      case Kind::randers:
        return norm(v) + dot(b_, v);
      case Kind::randers_dual: {
        double bb = dot(b_, b_);
        double bw = dot(b_, v);
        double q = (1.0 - bb) * norm2(v) + bw * bw;
        return (std::sqrt(q) - bw) / (1.0 - bb);
      }
      case Kind::polytopal: {
        double m = 0.0;
        for (const auto& f : facets_) m = std::max(m, dot(v, f.n) / f.h);
        return m;
      }
      case Kind::support: {
        double m = 0.0;
        for (const Vec& p : verts_) m = std::max(m, dot(p, v));
        return m;
      }
      case Kind::custom:
        return fn_(v);
    }
    return 0.0;
  }

 private:
  Gauge(int dim, Kind kind) : dim_(dim), kind_(kind) {
    if (dim != 2 && dim != 3) throw InvalidGaugeError("dim must be 2 or 3");
    switch (kind) {
      case Kind::euclidean: name_ = "euclidean"; break;
      case Kind::polytopal: name_ = "polytopal"; break;
      case Kind::support: name_ = "support"; break;
      case Kind::randers: name_ = "randers"; break;
      case Kind::randers_dual: name_ = "randers_dual"; break;
      case Kind::custom: name_ = "custom"; break;
    }
  }

  void set_drift(const Vec& b) {
    if (dim_ == 2 && b.z != 0.0) throw InvalidGaugeError("planar drift must have z = 0");
    if (norm(b) >= 1.0) throw InvalidGaugeError("randers drift needs |b| < 1");
    b_ = b;
  }

  void init_polytope(std::vector<Vec> verts) {
    if (dim_ == 2) {
      verts_ = hull2d(std::move(verts));
      facets_ = detail::body_facets(2, verts_, {});
    } else {
      tris_ = hull3d(verts);
      // keep only vertices on the hull, reindexed
      std::vector<int> remap(verts.size(), -1);
      std::vector<Vec> hv;
      for (Tri& t : tris_) {
        for (int* idx : {&t.a, &t.b, &t.c}) {
          if (remap[*idx] < 0) {
            remap[*idx] = int(hv.size());
            hv.push_back(verts[*idx]);
          }
          *idx = remap[*idx];
        }
      }
      verts_ = std::move(hv);
      facets_ = detail::body_facets(3, verts_, tris_);
    }
  }

  int dim_;
  Kind kind_;
  std::string name_;
  std::vector<Vec> verts_;
  std::vector<Tri> tris_;
  std::vector<detail::Halfspace> facets_;
  Vec b_;
  Fn fn_;
};

inline double gauge_eval(const Gauge& g, const Vec& v) {
  if (g.dim() == 2 && v.z != 0.0)
    throw InvalidGaugeError("planar gauge evaluated at a vector with z != 0");
  return g(v);
}

namespace detail {

inline Vec unit2(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

inline std::vector<Vec> fibonacci_sphere(int n) {
  std::vector<Vec> out;
  out.reserve(n);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / n;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({rho * std::cos(ga * k), rho * std::sin(ga * k), z});
  }
  return out;
}

struct DirOpt {
  double value;
  Vec dir;
};

// Maximize a continuous score over unit directions: dense sample, then
// local golden-section refinement.
template <typename S>
DirOpt maximize_over_directions(const S& score, int dim, int samples) {
  if (dim == 2) {
    double best = -1e300, best_th = 0.0;
    for (int k = 0; k < samples; ++k) {
      double th = 2.0 * M_PI * k / samples;
      double s = score(unit2(th));
      if (s > best) { best = s; best_th = th; }
    }
    double h = 2.0 * M_PI / samples;
    auto neg = [&](double th) { return -score(unit2(th)); };
    auto [th, nv] = golden_min(neg, best_th - h, best_th + h, 1e-13);
    if (-nv > best) return {-nv, unit2(th)};
    return {best, unit2(best_th)};
  }
  auto dirs = fibonacci_sphere(samples);
  double best = -1e300;
  Vec bu;
  for (const Vec& u : dirs) {
    double s = score(u);
    if (s > best) { best = s; bu = u; }
  }
  // alternate golden sweeps in two tangent planes
  double w = 2.5 * std::sqrt(4.0 * M_PI / samples);
  for (int round = 0; round < 4; ++round) {
    Vec t1 = std::abs(bu.z) < 0.9 ? normalized(cross(bu, Vec{0, 0, 1}))
                                  : normalized(cross(bu, Vec{0, 1, 0}));
    Vec t2 = cross(bu, t1);
    for (const Vec& t : {t1, t2}) {
      auto neg = [&](double a) { return -score(normalized(bu * std::cos(a) + t * std::sin(a))); };
      auto [a, nv] = golden_min(neg, -w, w, 1e-12);
      if (-nv >= best) {
        best = -nv;
        bu = normalized(bu * std::cos(a) + t * std::sin(a));
      }
    }
    w *= 0.25;
  }
  return {best, bu};
}

inline int default_samples(int dim) { return dim == 2 ? 4096 : 8192; }

// sup over directions of <omega, u>/F(u); also returns the maximizer
template <typename G>
DirOpt dual_opt(const G& F, const Vec& omega, int dim, int samples) {
  auto score = [&](const Vec& u) {
    double f = F(u);
    if (!(f > 0.0)) throw InvalidGaugeError("gauge vanishes on a sampled direction");
    return dot(omega, u) / f;
  };
  return maximize_over_directions(score, dim, samples);
}

}  // namespace detail

// F*(w) = sup { <w,v> : F(v) <= 1 }.  Exact for the closed-form kinds:
// euclidean is self-dual, polytopal and support are polar to each
// other, and the Randers pair dualizes in closed form.  Custom gauges
// fall back to sampled maximization with golden-section refinement.
inline Gauge dual_gauge(const Gauge& g, int samples = 0) {
  switch (g.kind()) {
    case Kind::euclidean:
      return Gauge::euclidean(g.dim());
    case Kind::polytopal:
      return Gauge::support(g.dim(), g.vertices());
    case Kind::support:
      return Gauge::polytopal(g.dim(), g.vertices());
    case Kind::randers:
      return Gauge::randers_dual(g.dim(), g.drift());
    case Kind::randers_dual:
      return Gauge::randers(g.dim(), g.drift());
    case Kind::custom: {
      int dim = g.dim();
      int ns = samples > 0 ? samples : detail::default_samples(dim);
      Gauge primal = g;  // value copy keeps the evaluator alive
      auto fn = [primal, dim, ns](const Vec& w) -> double {
        if (norm2(w) == 0.0) return 0.0;
        return detail::dual_opt(primal, w, dim, ns).value;
      };
      return Gauge::custom(dim, fn, g.name() + "_dual");
    }
  }
  throw InvalidGaugeError("unknown gauge kind");
}

// Legendre transform: the unique v with F(v) = F*(w) and <w,v> = F*(w)^2.
// Defined only where the dual is differentiable, so polytopal kinds are
// rejected.
inline Vec legendre(const Gauge& g, const Vec& omega, int samples = 0) {
  if (norm2(omega) == 0.0) return {};
  switch (g.kind()) {
    case Kind::euclidean:
      return omega;
    case Kind::polytopal:
    case Kind::support:
      throw NotStrictlyConvexError("legendre undefined for polytopal gauges");
    case Kind::randers: {
      // F* is the randers_dual closed form; v = F*(w) grad F*(w)
      const Vec& b = g.drift();
      double bb = dot(b, b);
      double bw = dot(b, omega);
      double q = (1.0 - bb) * norm2(omega) + bw * bw;
      double sq = std::sqrt(q);
      double fstar = (sq - bw) / (1.0 - bb);
      Vec grad = ((omega * (1.0 - bb) + b * bw) / sq - b) / (1.0 - bb);
      return grad * fstar;
    }
    case Kind::randers_dual: {
      // the dual of this gauge is randers: grad F*(w) = w/|w| + b
      const Vec& b = g.drift();
      double fstar = norm(omega) + dot(b, omega);
      return (omega / norm(omega) + b) * fstar;
    }
    case Kind::custom: {
      int ns = samples > 0 ? samples : detail::default_samples(g.dim());
      auto opt = detail::dual_opt(g, omega, g.dim(), ns);
      if (!(opt.value > 0.0)) throw NonConvergenceError("legendre: dual value not positive");
      // first-order optimality probe; a beatable maximizer means the
      // refinement failed (or the gauge is not strictly convex)
      double step = 1e-5;
      Vec t = g.dim() == 2 ? perp(opt.dir)
                           : normalized(cross(opt.dir, std::abs(opt.dir.z) < 0.9
                                                           ? Vec{0, 0, 1}
                                                           : Vec{0, 1, 0}));
      for (double s : {step, -step}) {
        Vec u = normalized(opt.dir + t * s);
        double v = dot(omega, u) / g(u);
        if (v > opt.value * (1.0 + 1e-10))
          throw NonConvergenceError("legendre: inner maximization failed tolerance");
      }
      return opt.dir * (opt.value / g(opt.dir));
    }
  }
  throw InvalidGaugeError("unknown gauge kind");
}

// Least Lambda with F(v) <= Lambda F(-v).  Since sup F(-v) over
// {F(v) <= 1} is a convex maximum, for polytopes it is attained at a
// vertex of the unit ball, which makes the polytopal cases exact.
inline double reversibility(const Gauge& g, int samples = 0) {
  switch (g.kind()) {
    case Kind::euclidean:
      return 1.0;
    case Kind::randers:
    case Kind::randers_dual: {
      double beta = norm(g.drift());
      return (1.0 + beta) / (1.0 - beta);
    }
    case Kind::polytopal: {
      double lam = 1.0;
      for (const Vec& v : g.vertices()) lam = std::max(lam, g(-v));
      return lam;
    }
    case Kind::support: {
      // unit ball is the polar polytope; its vertices are n/h over
      // facets of the hull of the support points
      double lam = 1.0;
      for (const auto& f : g.facets()) lam = std::max(lam, g(-(f.n / f.h)));
      return lam;
    }
    case Kind::custom: {
      int ns = samples > 0 ? samples : detail::default_samples(g.dim());
      auto score = [&](const Vec& u) { return g(u) / g(-u); };
      return std::max(1.0, detail::maximize_over_directions(score, g.dim(), ns).value);
    }
  }
  throw InvalidGaugeError("unknown gauge kind");
}

// descending slope of f at x given df(x): |∂f|(x) = F*(-df)
inline double slope(const Gauge& g, const Vec& df) { return dual_gauge(g)(-df); }

}  // namespace finsler::gauge
