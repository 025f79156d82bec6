#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "finsler/cone.hpp"
#include "finsler/mesh.hpp"
#include "finsler/numeric.hpp"

using namespace finsler;
using cone::ConeSpec;
using cone::WeightSpec;
using gauge::Gauge;
using gauge::SurfaceMesh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const WeightSpec w1 = WeightSpec::one(2);
const ConeSpec whole = ConeSpec::whole_space(2);

WeightSpec wy() { return WeightSpec::linear_power(2, Vec{0.0, 1.0}, 1.0); }

double cap_perimeter(const SurfaceMesh& m, const Gauge& H, const WeightSpec& w) {
  double s = 0.0;
  for (const auto& f : m.facets)
    if (f.cap) s += H(f.normal) * w(f.centroid) * f.measure;
  return s;
}

}  // namespace

TEST_CASE("omega_N") {
  REQUIRE_THAT(cone::omega_N(2.0), WithinAbs(M_PI, 1e-14));
  REQUIRE_THAT(cone::omega_N(3.0), WithinAbs(4.0 * M_PI / 3.0, 1e-14));

  // Gamma(2.25) against its integral representation
  double g = integrate_simpson(
      [](double t) { return t > 0.0 ? std::pow(t, 1.25) * std::exp(-t) : 0.0; }, 0.0, 60.0,
      400000);
  REQUIRE_THAT(g, WithinAbs(std::tgamma(2.25), 1e-9));
  REQUIRE_THAT(cone::omega_N(2.5), WithinAbs(std::pow(M_PI, 1.25) / g, 1e-8));
  REQUIRE_THAT(cone::omega_N(2.5), WithinAbs(3.6915286568649615, 1e-12));
  REQUIRE_THROWS_AS(cone::omega_N(0.0), InvalidConeError);
}

TEST_CASE("cone construction") {
  REQUIRE(whole.whole());
  auto q = ConeSpec::quadrant();
  REQUIRE(q.normals.size() == 2);
  REQUIRE(q.margin(Vec{1, 2}) == 1.0);
  REQUIRE(q.margin(Vec{-0.5, 2}) == -0.5);
  REQUIRE_THROWS_AS(ConeSpec::halfspaces(2, {{0, 1}, {0, -1}}), InvalidConeError);
}

TEST_CASE("weight admissibility") {
  REQUIRE_THROWS_AS(WeightSpec::linear_power(2, Vec{0, 1}, -0.5), InvalidConeError);
  REQUIRE_THROWS_AS(WeightSpec::linear_power(2, Vec{}, 1.0), InvalidConeError);
  REQUIRE(WeightSpec::linear_power(2, Vec{0, 1}, 0.0).kind() == WeightSpec::Kind::one);

  auto w = wy();
  REQUIRE(w.N() == 3.0);
  REQUIRE(w(Vec{4.0, 2.5}) == 2.5);
  REQUIRE_THROWS_AS(w(Vec{0.0, -1.0}), InvalidConeError);
  auto w2 = WeightSpec::linear_power(2, Vec{0, 2}, 2.0);
  REQUIRE_THAT(w2(Vec{1.0, 3.0}), WithinAbs(36.0, 1e-12));
}

TEST_CASE("weighted perimeter of disks") {
  auto disk = gauge::forward_ball(Gauge::euclidean(2), Vec{}, 1.0, 2048);
  REQUIRE_THAT(cone::weighted_perimeter(disk, Gauge::euclidean(2), w1, whole),
               WithinAbs(2.0 * M_PI, 2.0 * M_PI / 2048.0));

  double r = 1.5;
  auto half = cone::clip(gauge::forward_ball(Gauge::euclidean(2), Vec{}, r, 2048),
                         ConeSpec::halfplane_upper());
  // the diameter lies on the cone wall and is excluded
  REQUIRE_THAT(cone::weighted_perimeter(half, Gauge::euclidean(2), w1,
                                        ConeSpec::halfplane_upper()),
               WithinAbs(M_PI * r, 1e-3));
  REQUIRE_THAT(cone::weighted_perimeter(half, Gauge::euclidean(2), wy(),
                                        ConeSpec::halfplane_upper()),
               WithinAbs(2.0 * r * r, 1e-3));
}

TEST_CASE("weighted volume") {
  auto disk = gauge::forward_ball(Gauge::euclidean(2), Vec{}, 1.0, 2048);
  REQUIRE_THAT(cone::weighted_volume(disk, w1), WithinAbs(M_PI, 2e-5));

  auto half = cone::clip(disk, ConeSpec::halfplane_upper());
  REQUIRE_THAT(cone::weighted_volume(half, wy()), WithinAbs(2.0 / 3.0, 1e-5));

  // exact N-homogeneous scaling
  auto tri = gauge::mesh_from_polygon({{0.1, 0.05}, {1.2, 0.3}, {0.4, 1.1}});
  auto tri3 = gauge::mesh_from_polygon(
      {{0.3, 0.15}, {3.6, 0.9}, {1.2, 3.3}});
  REQUIRE_THAT(cone::weighted_volume(tri3, wy()),
               WithinRel(27.0 * cone::weighted_volume(tri, wy()), 1e-12));
}

TEST_CASE("hand cell: euclidean gauge, w=y, upper half-plane") {
  // P = 2 r^2 and m = (2/3) r^3 at r=1, N = 3, AVR = 1/(2 pi)
  int res = 2048;
  auto W = cone::clip(gauge::wulff(Gauge::euclidean(2), res), ConeSpec::halfplane_upper());
  double P = cone::weighted_perimeter(W, Gauge::euclidean(2), wy(), ConeSpec::halfplane_upper());
  double m = cone::weighted_volume(W, wy());
  REQUIRE_THAT(P, WithinAbs(2.0, 1e-4));
  REQUIRE_THAT(m, WithinAbs(2.0 / 3.0, 1e-4));
  double avr = cone::avr(Gauge::euclidean(2), wy(), ConeSpec::halfplane_upper(), res);
  REQUIRE_THAT(avr, WithinAbs(1.0 / (2.0 * M_PI), 1e-4));
  REQUIRE_THAT(cone::iso_quotient_from(2.0, 2.0 / 3.0, 1.0 / (2.0 * M_PI), 3.0),
               WithinAbs(1.0, 1e-14));
}

TEST_CASE("avr of reference configurations") {
  REQUIRE_THAT(cone::avr(Gauge::euclidean(2), w1, whole, 2048), WithinAbs(1.0, 1e-4));
  REQUIRE_THAT(cone::avr(Gauge::euclidean(2), w1, ConeSpec::halfplane_upper(), 2048),
               WithinAbs(0.5, 1e-4));
  REQUIRE_THAT(cone::avr(Gauge::euclidean(2), w1, ConeSpec::quadrant(), 2048),
               WithinAbs(0.25, 1e-4));
}

TEST_CASE("wulff shapes have quotient one") {
  struct Row {
    Gauge H;
    WeightSpec w;
    ConeSpec cone;
  };
  std::vector<Row> rows;
  rows.push_back({Gauge::euclidean(2), w1, whole});
  rows.push_back({Gauge::randers_dual(2, Vec{0.5, 0.0}), w1, ConeSpec::halfplane_upper()});
  rows.push_back({Gauge::support(2, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}), wy(),
                  ConeSpec::halfplane_upper()});
  int res = 512;
  for (const auto& row : rows) {
    auto W = cone::clip(gauge::wulff(row.H, res), row.cone);
    double Q = cone::iso_quotient(W, row.H, row.w, row.cone, res);
    REQUIRE_THAT(Q, WithinAbs(1.0, 3.0 / res));
  }
}

TEST_CASE("quotient is scale invariant") {
  std::vector<Vec> base = {{0.2, 0.1}, {1.5, 0.4}, {1.1, 1.3}, {0.3, 0.9}};
  auto H = Gauge::randers_dual(2, Vec{0.3, 0.1});
  auto w = wy();
  auto cs = ConeSpec::halfplane_upper();
  double avr = cone::avr(H, w, cs, 1024);
  auto quotient = [&](double c) {
    std::vector<Vec> v = base;
    for (Vec& p : v) p *= c;
    auto m = gauge::mesh_from_polygon(v);
    double P = cone::weighted_perimeter(m, H, w, cs);
    double vol = cone::weighted_volume(m, w);
    return cone::iso_quotient_from(P, vol, avr, w.N());
  };
  double q1 = quotient(1.0);
  REQUIRE(std::abs(quotient(0.5) - q1) <= 1e-10);
  REQUIRE(std::abs(quotient(3.0) - q1) <= 1e-10);
  REQUIRE(q1 >= 1.0);
}

TEST_CASE("ellipse quotient") {
  int res = 4096;
  std::vector<Vec> loop(res);
  for (int k = 0; k < res; ++k) {
    double th = 2.0 * M_PI * k / res;
    loop[k] = {2.0 * std::cos(th), std::sin(th)};
  }
  auto m = gauge::mesh_from_polygon(std::move(loop));
  double Q = cone::iso_quotient(m, Gauge::euclidean(2), w1, whole, res);
  REQUIRE_THAT(Q, WithinAbs(1.0903335014002944, 2e-5));
  REQUIRE_THAT(Q, WithinAbs(1.0903, 1e-3));
}

TEST_CASE("clipping") {
  auto sq = gauge::mesh_from_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});

  SECTION("interior sets pass through") {
    auto shifted = gauge::mesh_from_polygon({{1, 1}, {2, 1}, {2, 2}, {1, 2}});
    auto c = cone::clip(shifted, ConeSpec::quadrant());
    REQUIRE(c.facets.size() == shifted.facets.size());
    REQUIRE_THAT(gauge::enclosed_volume(c), WithinAbs(1.0, 1e-12));
    for (const auto& f : c.facets) REQUIRE_FALSE(f.cap);
  }

  SECTION("disk to half-disk") {
    auto disk = gauge::forward_ball(Gauge::euclidean(2), Vec{}, 1.0, 4096);
    auto half = cone::clip(disk, ConeSpec::halfplane_upper());
    REQUIRE_THAT(gauge::enclosed_volume(half), WithinAbs(M_PI / 2.0, 1e-4));
  }

  SECTION("square to quadrant, caps tagged") {
    auto c = cone::clip(sq, ConeSpec::quadrant());
    REQUIRE_THAT(gauge::enclosed_volume(c), WithinAbs(1.0, 1e-12));
    double cap_len = 0.0;
    for (const auto& f : c.facets)
      if (f.cap) cap_len += f.measure;
    REQUIRE_THAT(cap_len, WithinAbs(2.0, 1e-12));
    // the caps carry no relative perimeter
    REQUIRE_THAT(cone::weighted_perimeter(c, Gauge::euclidean(2), w1, ConeSpec::quadrant()),
                 WithinAbs(2.0, 1e-12));
  }

  SECTION("empty intersection") {
    auto shifted = gauge::mesh_from_polygon({{-3, -3}, {-2, -3}, {-2, -2}, {-3, -2}});
    auto c = cone::clip(shifted, ConeSpec::quadrant());
    REQUIRE(c.empty());
  }
}

TEST_CASE("split additivity of the perimeter") {
  auto E = gauge::mesh_from_polygon({{0.0, 0.2}, {1.7, 0.0}, {2.1, 1.0}, {0.9, 1.6}, {0.1, 1.2}});
  std::vector<Gauge> Hs;
  Hs.push_back(Gauge::euclidean(2));
  Hs.push_back(Gauge::randers_dual(2, Vec{0.4, -0.2}));
  for (const auto& H : Hs) {
    auto [lo, hi] = cone::split(E, Vec{1.0, 0.0}, 0.8);
    double P = cone::weighted_perimeter(E, H, w1, whole);
    double P1 = cone::weighted_perimeter(lo, H, w1, whole);
    double P2 = cone::weighted_perimeter(hi, H, w1, whole);
    double caps = cap_perimeter(lo, H, w1) + cap_perimeter(hi, H, w1);
    REQUIRE(caps > 0.0);
    REQUIRE_THAT(P1 + P2 - caps, WithinAbs(P, 1e-9));
    REQUIRE_THAT(gauge::enclosed_volume(lo) + gauge::enclosed_volume(hi),
                 WithinAbs(gauge::enclosed_volume(E), 1e-12));
  }
}

TEST_CASE("bishop-gromov along ball radii") {
  struct Env {
    Gauge F;
    WeightSpec w;
    ConeSpec cone;
  };
  std::vector<Env> envs;
  envs.push_back({Gauge::euclidean(2), w1, ConeSpec::quadrant()});
  envs.push_back({Gauge::euclidean(2), wy(), ConeSpec::halfplane_upper()});
  envs.push_back({Gauge::randers(2, Vec{0.3, 0.2}), w1, whole});
  for (const auto& env : envs) {
    double prev = 1e300;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
      auto B = cone::clip(gauge::forward_ball(env.F, Vec{}, r, 1024), env.cone);
      double ratio = cone::weighted_volume(B, env.w) / std::pow(r, env.w.N());
      REQUIRE(ratio <= prev * (1.0 + 1e-12));
      prev = ratio;
    }
  }
}

TEST_CASE("iso quotient rejects empty sets") {
  auto tiny = gauge::mesh_from_polygon({{-3, -3}, {-2, -3}, {-2, -2}});
  auto clipped = cone::clip(tiny, ConeSpec::quadrant());
  REQUIRE(clipped.empty());
  REQUIRE_THROWS_AS(cone::iso_quotient(clipped, Gauge::euclidean(2), w1, ConeSpec::quadrant(), 256),
                    InvalidConeError);
}
