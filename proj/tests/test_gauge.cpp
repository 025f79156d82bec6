#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "finsler/gauge.hpp"
#include "finsler/mesh.hpp"
#include "finsler/rng.hpp"

using namespace finsler;
using gauge::Gauge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Gauge square_poly() {
  return Gauge::polytopal(2, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
}

Gauge square_support() {
  return Gauge::support(2, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
}

Gauge lp3() {
  return Gauge::custom(
      2, [](const Vec& v) { return std::pow(std::pow(std::abs(v.x), 3.0) + std::pow(std::abs(v.y), 3.0), 1.0 / 3.0); },
      "lp3");
}

}  // namespace

TEST_CASE("gauge evaluation") {
  REQUIRE_THAT(Gauge::euclidean(2)(Vec{3, 4}), WithinAbs(5.0, 1e-14));

  auto rd = Gauge::randers(2, Vec{0.5, 0.0});
  REQUIRE_THAT(rd(Vec{1, 0}), WithinAbs(1.5, 1e-14));
  REQUIRE_THAT(rd(Vec{-1, 0}), WithinAbs(0.5, 1e-14));

  // gauge of the square is the max norm
  REQUIRE_THAT(square_poly()(Vec{2, 1}), WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(square_poly()(Vec{-0.3, 0.7}), WithinAbs(0.7, 1e-12));

  REQUIRE(Gauge::euclidean(2)(Vec{}) == 0.0);
}

TEST_CASE("gauge validation") {
  REQUIRE_THROWS_AS(Gauge::randers(2, Vec{1.0, 0.0}), InvalidGaugeError);
  REQUIRE_THROWS_AS(Gauge::randers(2, Vec{0.8, 0.6}), InvalidGaugeError);
  REQUIRE_THROWS_AS(Gauge::polytopal(2, {{1, 0}, {2, 0}, {3, 0}}), InvalidGaugeError);
  REQUIRE_THROWS_AS(gauge_eval(Gauge::euclidean(2), Vec{1, 2, 3}), InvalidGaugeError);
}

TEST_CASE("dual gauge closed forms") {
  auto de = gauge::dual_gauge(Gauge::euclidean(2));
  REQUIRE_THAT(de(Vec{3, 4}), WithinAbs(5.0, 1e-14));

  auto dr = gauge::dual_gauge(Gauge::randers(2, Vec{0.5, 0.0}));
  REQUIRE_THAT(dr(Vec{1, 0}), WithinAbs(2.0 / 3.0, 1e-14));
  REQUIRE_THAT(dr(Vec{-1, 0}), WithinAbs(2.0, 1e-14));

  // support function of the square is the l1 norm
  auto dp = gauge::dual_gauge(square_poly());
  REQUIRE_THAT(dp(Vec{2, 1}), WithinAbs(3.0, 1e-12));
  REQUIRE_THAT(dp(Vec{-1, -1}), WithinAbs(2.0, 1e-12));
}

TEST_CASE("dual gauge by sampling agrees with lq") {
  // dual exponent of p=3 is q=3/2
  auto d = gauge::dual_gauge(lp3());
  for (double th : {0.0, 0.3, 1.1, 2.0, 4.4}) {
    Vec w{std::cos(th), std::sin(th)};
    double lq = std::pow(std::pow(std::abs(w.x), 1.5) + std::pow(std::abs(w.y), 1.5), 1.0 / 1.5);
    REQUIRE_THAT(d(w), WithinRel(lq, 1e-5));
  }
}

TEST_CASE("weak duality holds pointwise") {
  Rng rng(derive_seed(11, "weak-duality"));
  std::vector<Gauge> gs;
  gs.push_back(Gauge::euclidean(2));
  gs.push_back(Gauge::randers(2, Vec{0.5, 0.0}));
  gs.push_back(square_poly());
  for (const auto& g : gs) {
    auto d = gauge::dual_gauge(g);
    for (int k = 0; k < 10000; ++k) {
      Vec v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      Vec w{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      REQUIRE(dot(w, v) <= d(w) * g(v) + 1e-12);
    }
  }
}

TEST_CASE("double dual returns the gauge") {
  std::vector<Gauge> gs;
  gs.push_back(Gauge::euclidean(2));
  gs.push_back(Gauge::randers(2, Vec{0.5, 0.0}));
  gs.push_back(square_poly());
  for (const auto& g : gs) {
    auto dd = gauge::dual_gauge(gauge::dual_gauge(g));
    for (int k = 0; k < 64; ++k) {
      Vec u = gauge::detail::unit2(2.0 * M_PI * k / 64);
      REQUIRE_THAT(dd(u), WithinRel(g(u), 1e-6));
    }
  }
}

TEST_CASE("legendre transform") {
  auto e = Gauge::euclidean(2);
  Vec v = gauge::legendre(e, Vec{0, 2});
  REQUIRE_THAT(v.x, WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(v.y, WithinAbs(2.0, 1e-12));

  Vec z = gauge::legendre(e, Vec{});
  REQUIRE(z.x == 0.0);
  REQUIRE(z.y == 0.0);

  auto rd = Gauge::randers(2, Vec{0.5, 0.0});
  Vec m = gauge::legendre(rd, Vec{1, 0});
  double fs = 2.0 / 3.0;
  REQUIRE_THAT(rd(m), WithinRel(fs, 1e-8));
  REQUIRE_THAT(dot(Vec{1, 0}, m), WithinRel(fs * fs, 1e-8));

  REQUIRE_THROWS_AS(gauge::legendre(square_poly(), Vec{1, 0}), NotStrictlyConvexError);
  REQUIRE_THROWS_AS(gauge::legendre(square_support(), Vec{1, 0}), NotStrictlyConvexError);
}

TEST_CASE("legendre consistency on smooth gauges") {
  Rng rng(derive_seed(11, "legendre"));
  std::vector<Gauge> gs;
  gs.push_back(Gauge::euclidean(2));
  gs.push_back(Gauge::randers(2, Vec{0.3, -0.2}));
  for (const auto& g : gs) {
    auto d = gauge::dual_gauge(g);
    for (int k = 0; k < 50; ++k) {
      Vec w{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (norm(w) < 0.1) continue;
      Vec v = gauge::legendre(g, w);
      double fs = d(w);
      REQUIRE_THAT(g(v), WithinRel(fs, 1e-8));
      REQUIRE_THAT(dot(w, v), WithinRel(fs * fs, 1e-8));
    }
  }
}

TEST_CASE("reversibility") {
  REQUIRE(gauge::reversibility(Gauge::euclidean(2)) == 1.0);
  REQUIRE(gauge::reversibility(square_poly()) == 1.0);
  REQUIRE(gauge::reversibility(Gauge::randers(2, Vec{0.5, 0.0})) == 3.0);
  REQUIRE_THAT(gauge::reversibility(Gauge::randers(2, Vec{0.0, 0.25})),
               WithinAbs(5.0 / 3.0, 1e-14));

  // asymmetric triangle: Lambda from the vertex ratio
  auto tri = Gauge::polytopal(2, {{2, 0}, {-1, 1}, {-1, -1}});
  double lam = gauge::reversibility(tri);
  REQUIRE(lam > 1.0);
  Rng rng(derive_seed(11, "rev"));
  for (int k = 0; k < 2000; ++k) {
    Vec v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm(v) < 1e-6) continue;
    REQUIRE(tri(v) <= lam * tri(-v) * (1.0 + 1e-12));
  }
}

TEST_CASE("reversibility bounds the dual asymmetry") {
  auto g = Gauge::randers(2, Vec{0.5, 0.0});
  double lam = gauge::reversibility(g);
  auto d = gauge::dual_gauge(g);
  for (int k = 0; k < 256; ++k) {
    Vec w = gauge::detail::unit2(2.0 * M_PI * k / 256);
    REQUIRE(d(-w) <= lam * d(w) * (1.0 + 1e-12));
  }
}

TEST_CASE("slope is the dual at minus the differential") {
  REQUIRE_THAT(gauge::slope(Gauge::euclidean(2), Vec{3, 4}), WithinAbs(5.0, 1e-14));
  REQUIRE_THAT(gauge::slope(Gauge::randers(2, Vec{0.5, 0.0}), Vec{1, 0}), WithinAbs(2.0, 1e-14));
  REQUIRE(gauge::slope(Gauge::randers(2, Vec{0.5, 0.0}), Vec{}) == 0.0);
}

TEST_CASE("forward ball of the randers gauge") {
  auto g = Gauge::randers(2, Vec{0.5, 0.0});
  auto B = gauge::forward_ball(g, Vec{}, 1.0, 512);
  REQUIRE(B.closed);
  REQUIRE(B.loop.size() == 512);

  // boundary hits (2/3, 0) forward and (-2, 0) backward
  double best_fwd = 1e300, best_bwd = 1e300;
  for (const Vec& v : B.loop) {
    best_fwd = std::min(best_fwd, norm(v - Vec{2.0 / 3.0, 0.0}));
    best_bwd = std::min(best_bwd, norm(v - Vec{-2.0, 0.0}));
  }
  REQUIRE(best_fwd < 1e-9);
  REQUIRE(best_bwd < 1e-9);
  for (const Vec& v : B.loop) REQUIRE_THAT(g(v), WithinAbs(1.0, 1e-12));
}

TEST_CASE("forward ball scales linearly in r") {
  auto g = Gauge::randers(2, Vec{0.3, 0.1});
  auto B1 = gauge::forward_ball(g, Vec{}, 1.0, 64);
  auto B2 = gauge::forward_ball(g, Vec{}, 2.0, 64);
  for (std::size_t i = 0; i < B1.loop.size(); ++i) {
    REQUIRE_THAT(B2.loop[i].x, WithinAbs(2.0 * B1.loop[i].x, 1e-12));
    REQUIRE_THAT(B2.loop[i].y, WithinAbs(2.0 * B1.loop[i].y, 1e-12));
  }
}

TEST_CASE("wulff shapes") {
  // euclidean: the disk
  auto W = gauge::wulff(Gauge::euclidean(2), 1024);
  REQUIRE_THAT(gauge::enclosed_volume(W), WithinRel(M_PI, 1e-4));

  // support function of the square: the square itself, met exactly
  // once the direction grid contains the diagonals
  auto Ws = gauge::wulff(square_support(), 64);
  REQUIRE_THAT(gauge::enclosed_volume(Ws), WithinAbs(4.0, 1e-12));
  for (const Vec& v : Ws.loop) {
    REQUIRE(std::max(std::abs(v.x), std::abs(v.y)) <= 1.0 + 1e-12);
  }

  // dual of randers: back to the conic |v| + 0.5 v1 <= 1
  auto rd = Gauge::randers(2, Vec{0.5, 0.0});
  auto Wr = gauge::wulff(gauge::dual_gauge(rd), 256);
  for (const Vec& v : Wr.loop) REQUIRE_THAT(rd(v), WithinAbs(1.0, 1e-8));
}

TEST_CASE("wulff vertices sit on the dual unit sphere") {
  std::vector<Gauge> Hs;
  Hs.push_back(Gauge::euclidean(2));
  Hs.push_back(Gauge::randers_dual(2, Vec{0.5, 0.0}));
  Hs.push_back(square_support());
  for (const auto& H : Hs) {
    auto dH = gauge::dual_gauge(H);
    auto W = gauge::wulff(H, 512);
    for (const Vec& v : W.loop) REQUIRE_THAT(dH(v), WithinAbs(1.0, 1e-8));
  }
}

TEST_CASE("randers dual pair is an exact involution") {
  auto g = Gauge::randers(2, Vec{0.5, 0.0});
  auto d = gauge::dual_gauge(g);
  REQUIRE(d.kind() == gauge::Kind::randers_dual);
  auto dd = gauge::dual_gauge(d);
  REQUIRE(dd.kind() == gauge::Kind::randers);
  Rng rng(derive_seed(11, "randers-inv"));
  for (int k = 0; k < 300; ++k) {
    Vec v{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    REQUIRE_THAT(dd(v), WithinAbs(g(v), 1e-12));
  }
}

TEST_CASE("3d gauges") {
  REQUIRE_THAT(Gauge::euclidean(3)(Vec{1, 2, 2}), WithinAbs(3.0, 1e-14));
  auto cube = Gauge::polytopal(3, {{1, 1, 1},
                                   {-1, 1, 1},
                                   {1, -1, 1},
                                   {1, 1, -1},
                                   {-1, -1, 1},
                                   {-1, 1, -1},
                                   {1, -1, -1},
                                   {-1, -1, -1}});
  REQUIRE_THAT(cube(Vec{0.2, -0.9, 0.4}), WithinAbs(0.9, 1e-12));
  auto d = gauge::dual_gauge(cube);
  REQUIRE_THAT(d(Vec{1, 2, 3}), WithinAbs(6.0, 1e-12));
}
