#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "finsler/model1d.hpp"
#include "finsler/numeric.hpp"
#include "finsler/rng.hpp"

using namespace finsler;
using namespace finsler::model1d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("model density closed forms") {
  REQUIRE_THAT(model_density(2, 1, 0, 0.5), WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(model_density(3, 2, kInf, 0.123), WithinAbs(0.5, 1e-14));
  REQUIRE_THAT(model_density(3, 2, 1e6, 0.123), WithinAbs(0.5, 1e-5));

  struct Case {
    double N, D, xi;
  };
  for (const auto& c : {Case{2, 1, 0}, Case{3, 2, 0.7}, Case{2.5, 1.3, 2.0}, Case{2, 1, kInf},
                        Case{3.5, 0.8, 40.0}}) {
    double mass = integrate_midpoint([&](double x) { return model_density(c.N, c.D, c.xi, x); },
                                     0.0, c.D, 1 << 17);
    REQUIRE_THAT(mass, WithinAbs(1.0, 1e-10));
  }
  REQUIRE_THROWS_AS(model_density(2, 1, -0.1, 0.5), InvalidDensityError);
}

TEST_CASE("model volume and ray functions invert each other") {
  REQUIRE_THAT(model_r(2, 1, 0, 0.25), WithinAbs(0.5, 1e-14));

  Rng rng(derive_seed(5, "model-roundtrip"));
  for (double xi : {0.0, 0.3, 2.0, 17.0, kInf}) {
    for (int k = 0; k < 100; ++k) {
      double v = rng.uniform01();
      double r = model_r(2.5, 1.4, xi, v);
      REQUIRE_THAT(model_v(2.5, 1.4, xi, r), WithinAbs(v, 1e-12));
    }
    REQUIRE_THAT(model_r(2.5, 1.4, xi, 1.0), WithinAbs(1.4, 1e-12));
    REQUIRE_THAT(model_v(2.5, 1.4, xi, 1.4), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("profile over the model family") {
  REQUIRE_THAT(profile_xi(2, 1, 0, 0.25), WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(profile_xi(2, 1, kInf, 0.5), WithinAbs(1.0, 1e-14));
  for (double xi : {0.0, 0.4, 3.0, kInf})
    REQUIRE_THAT(profile_xi(2.5, 1.2, xi, 0.3),
                 WithinAbs(profile_xi(2.5, 1.2, xi, 0.7), 1e-14));

  auto p = profile(2, 1, 0.5);
  REQUIRE_THAT(p.value, WithinAbs(1.0, 1e-9));
  REQUIRE(std::isinf(p.xi));

  // infimum sits below the xi = 0 member and matches a brute grid
  for (double v : {0.07, 0.3, 0.45}) {
    auto q = profile(2.5, 1.7, v);
    REQUIRE(q.value <= profile_xi(2.5, 1.7, 0.0, v) + 1e-12);
    double grid_min = profile_xi(2.5, 1.7, kInf, v);
    for (int k = 0; k <= 4000; ++k) grid_min = std::min(grid_min, profile_xi(2.5, 1.7, 0.005 * k, v));
    REQUIRE(q.value <= grid_min + 1e-9);
    REQUIRE_THAT(q.value, WithinRel(grid_min, 1e-6));
  }
}

TEST_CASE("profile scaling in D") {
  for (double c : {0.5, 3.7}) {
    auto a = profile(2.5, 1.0, 0.22);
    auto b = profile(2.5, c, 0.22);
    REQUIRE_THAT(b.value, WithinRel(a.value / c, 1e-10));
  }
}

TEST_CASE("profile small volume expansion") {
  for (double N : {2.0, 3.0}) {
    double prev = -1e300;
    for (double v : {1e-1, 1e-2, 1e-3, 1e-4}) {
      double ratio = profile(N, 1, v).value / (N * std::pow(v, (N - 1.0) / N));
      REQUIRE(ratio <= 1.0 + 1e-12);
      REQUIRE(ratio >= 1.0 - 5.0 * std::pow(v, 1.0 / N));
      REQUIRE(ratio >= prev);
      prev = ratio;
    }
  }
}

TEST_CASE("density grid construction") {
  auto d = Density1D::model(2, 1, 0.5, 512);
  REQUIRE(d.N() == 2.0);
  REQUIRE(d.Dprime() == 1.0);
  REQUIRE(d.analytic());
  REQUIRE_THAT(d.total_mass(), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(d(0.37), WithinAbs(model_density(2, 1, 0.5, 0.37), 1e-15));
  REQUIRE_THAT(d.mass(0.1, 0.6) + d.mass(0.6, 0.9), WithinAbs(d.mass(0.1, 0.9), 1e-14));
  REQUIRE_THAT(d.r(d.v(0.42)), WithinAbs(0.42, 1e-12));

  REQUIRE_THROWS_AS(Density1D(1.0, 1.0, {1.0, 1.0}), InvalidDensityError);
  REQUIRE_THROWS_AS(Density1D(2.0, 0.0, {1.0, 1.0}), InvalidDensityError);
  REQUIRE_THROWS_AS(Density1D(2.0, 1.0, {1.0}), InvalidDensityError);
  REQUIRE_THROWS_AS(Density1D(2.0, 1.0, {1.0, -0.5, 1.0}), InvalidDensityError);
  REQUIRE_THROWS_AS(Density1D(2.0, 1.0, {1.0, 0.0, 1.0}), InvalidDensityError);
}

TEST_CASE("sampled densities integrate and invert consistently") {
  // triangular bump held on the grid only
  int n = 4096;
  std::vector<double> s(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = double(i) / n;
    s[i] = std::min(x, 1.0 - x) + 0.05;
  }
  Density1D d(2.0, 1.0, std::move(s));
  REQUIRE_FALSE(d.analytic());
  REQUIRE_THAT(d.total_mass(), WithinAbs(0.3, 1e-9));
  for (double v : {0.01, 0.11, 0.25}) REQUIRE_THAT(d.v(d.r(v)), WithinAbs(v, 1e-12));
}

TEST_CASE("interval sets normalize their input") {
  IntervalSet E({{0.6, 0.9}, {0.1, 0.3}, {0.25, 0.4}, {0.5, 0.5}});
  REQUIRE(E.intervals().size() == 2);
  REQUIRE(E.intervals()[0].first == 0.1);
  REQUIRE(E.intervals()[0].second == 0.4);
  REQUIRE(E.a() == 0.1);
  REQUIRE(E.b() == 0.9);
  REQUIRE(IntervalSet{}.empty());
}

TEST_CASE("one dimensional perimeter") {
  auto d = Density1D::model(2, 1, 0, 4096);
  OneDimFinsler plain(d);

  REQUIRE_THAT(perimeter1d(plain, IntervalSet({{0.0, 0.37}})), WithinAbs(d(0.37), 1e-14));
  REQUIRE(perimeter1d(plain, IntervalSet({{0.0, 1.0}})) == 0.0);

  OneDimFinsler lam(d, 2.5);
  REQUIRE_THAT(perimeter1d(lam, IntervalSet({{0.2, 0.8}})),
               WithinAbs(2.5 * d(0.2) + d(0.8), 1e-14));
  REQUIRE_THAT(lam.lambda(), WithinAbs(2.5, 1e-14));

  OneDimFinsler small(d, 0.4);
  REQUIRE_THAT(small.lambda(), WithinAbs(2.5, 1e-14));

  // multiple components add up
  REQUIRE_THAT(perimeter1d(plain, IntervalSet({{0.0, 0.2}, {0.5, 0.7}})),
               WithinAbs(d(0.2) + d(0.5) + d(0.7), 1e-14));
}

TEST_CASE("perimeter respects the reversibility bound") {
  auto d = Density1D::model(2.5, 1, 0.6, 4096);
  OneDimFinsler m(d, [](double x) { return std::exp(0.4 * std::sin(3.0 * x)); });
  OneDimFinsler rev(d);
  double lam = m.lambda();
  REQUIRE(lam > 1.0);
  Rng rng(derive_seed(5, "rev-1d"));
  for (int k = 0; k < 200; ++k) {
    double a = rng.uniform(0.0, 0.9), b = rng.uniform(a + 0.01, 1.0);
    IntervalSet E({{a, b}});
    REQUIRE(perimeter1d(m, E) >= perimeter1d(rev, E) / lam - 1e-12);
  }
}

TEST_CASE("residuals") {
  for (double N : {2.0, 2.5, 3.0}) {
    auto d = Density1D::model(N, 1, 0);
    OneDimFinsler m(d);
    for (double w : {0.1, 0.01})
      REQUIRE_THAT(residual(m, 1.0, IntervalSet({{0.0, d.r(w)}})), WithinAbs(0.0, 1e-8));
  }

  auto uni = Density1D::model(2, 1, kInf);
  REQUIRE_THAT(residual(OneDimFinsler(uni), 1.0, IntervalSet({{0.0, uni.r(1.0 / 9.0)}})),
               WithinAbs(0.5, 1e-12));

  REQUIRE_THROWS_AS(residual(OneDimFinsler(uni), 1.0, IntervalSet({{0.3, 0.3}})),
                    InvalidDensityError);
}

TEST_CASE("residual is invariant under joint rescaling") {
  int n = 2048;
  double c = 2.3;
  std::vector<double> s(n + 1), sc(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = double(i) / n;
    s[i] = std::min(x, 1.0 - x) + 0.1;
    sc[i] = s[i] / c;
  }
  Density1D d(2.0, 1.0, s);
  Density1D dc(2.0, c, sc);
  IntervalSet E({{0.15, 0.55}});
  IntervalSet Ec({{0.15 * c, 0.55 * c}});
  REQUIRE_THAT(residual(OneDimFinsler(dc), 1.4 * c, Ec),
               WithinRel(residual(OneDimFinsler(d), 1.4, E), 1e-12));
}

TEST_CASE("cd check") {
  for (double xi : {0.0, 1.0, 5.0, kInf}) {
    auto rep = cd_check(Density1D::model(2.5, 1.3, xi, 1024));
    REQUIRE(rep.ok);
  }

  int n = 512;
  std::vector<double> sq(n + 1), tent(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = double(i) / n;
    sq[i] = x * x + 1e-9;
    tent[i] = std::min(x, 1.0 - x) + 0.05;
  }
  REQUIRE_FALSE(cd_check(Density1D(2.0, 1.0, sq)).ok);
  REQUIRE(cd_check(Density1D(2.0, 1.0, tent)).ok);
}

TEST_CASE("rigidity probe") {
  auto d = Density1D::model(2, 4, 0);
  OneDimFinsler m(d);

  SECTION("equality configuration has vanishing gaps") {
    double w = 0.02;
    auto rec = rigidity_probe(m, 4.0, IntervalSet({{0.0, d.r(w)}}));
    REQUIRE_THAT(rec.w, WithinAbs(w, 1e-12));
    REQUIRE(rec.gap_b <= 1e-8);
    REQUIRE(rec.gap_a <= 1e-8);
    REQUIRE(std::abs(rec.gap_diam) <= 1e-8);
    REQUIRE(std::abs(rec.res) <= 1e-8);
    REQUIRE(rec.hypothesis_ok);
  }

  SECTION("endpoint bookkeeping") {
    auto rec = rigidity_probe(m, 4.0, IntervalSet({{0.0, 0.2}, {0.5, 0.51}}));
    REQUIRE(rec.a == 0.5);
    REQUIRE(rec.b == 0.51);
  }

  SECTION("perturbed model trends to rigidity") {
    double w = 0.02;
    auto gaps = [&](double eps) {
      int n = 4096;
      std::vector<double> s(n + 1);
      for (int i = 0; i <= n; ++i) {
        double x = 4.0 * i / n;
        s[i] = model_density(2, 4, 0, x) * (1.0 + eps * std::sin(x));
      }
      Density1D pd(2, 4, std::move(s));
      double scale = pd.total_mass();
      OneDimFinsler pm(pd);
      auto rec = rigidity_probe(pm, 4.0, IntervalSet({{0.0, pd.r(w * scale)}}));
      return std::abs(rec.res) + rec.gap_b;
    };
    double g1 = gaps(0.01), g2 = gaps(0.001);
    REQUIRE(g1 < 0.05);
    REQUIRE(g2 < g1);
  }
}

TEST_CASE("bishop-gromov for model densities") {
  for (double xi : {0.0, 0.8, 5.0}) {
    auto d = Density1D::model(2.5, 1.5, xi, 512);
    double prev = 1e300;
    for (int i = 1; i <= 512; ++i) {
      double x = 1.5 * i / 512;
      double ratio = d(x) / std::pow(x, 1.5);
      REQUIRE(ratio <= prev * (1.0 + 1e-12));
      prev = ratio;
    }
  }
}

TEST_CASE("monotonia gap") {
  int grid = 2048;
  REQUIRE(monotonia_gap(2.0, 0.0, grid) <= 1.0 / grid);
  double g1 = monotonia_gap(2.0, 0.1, grid);
  double g2 = monotonia_gap(2.0, 0.01, grid);
  double g3 = monotonia_gap(2.0, 0.001, grid);
  REQUIRE(g1 > g2);
  REQUIRE(g2 > g3);
  REQUIRE(g3 <= 0.05);
  // feasible set grows with eta
  REQUIRE(monotonia_gap(2.0, 0.05, grid) <= g1 + 1.0 / grid);
  REQUIRE_THROWS_AS(monotonia_gap(2.0, -1.0, grid), InvalidDensityError);
}
