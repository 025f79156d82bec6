#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "finsler/bminkowski.hpp"
#include "finsler/cone.hpp"
#include "finsler/corpus.hpp"
#include "finsler/gauge.hpp"
#include "finsler/io.hpp"
#include "finsler/model1d.hpp"
#include "finsler/rng.hpp"
#include "finsler/threads.hpp"

// The acceptance battery.  Every numbered criterion is a pure function
// of the seed; timing facts are reported but kept out of the JSON
// summary so that fixed seeds give byte-identical summaries.

namespace finsler::verify {

using bminkowski::ConvexBody;
using gauge::SurfaceMesh;

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation = "<=";
  bool timing = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline Check le(std::string name, double measured, double bound) {
  return {std::move(name), measured <= bound, measured, bound, "<=", false};
}

inline Check ge(std::string name, double measured, double bound) {
  return {std::move(name), measured >= bound, measured, bound, ">=", false};
}

inline Check time_check(std::string name, double seconds, double budget) {
  return {std::move(name), seconds <= budget, seconds, budget, "<=", true};
}

inline std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------- matrix

struct Cell {
  std::string name;
  gauge::Gauge H;
  cone::WeightSpec w;
  cone::ConeSpec cone;
};

inline std::vector<Cell> wulff_cells() {
  std::vector<std::pair<std::string, gauge::Gauge>> Hs;
  Hs.emplace_back("euclidean", gauge::Gauge::euclidean(2));
  Hs.emplace_back("randers_dual", gauge::Gauge::randers_dual(2, Vec{0.5, 0.0}));
  Hs.emplace_back("support_square",
                  gauge::Gauge::support(2, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}));
  struct Env {
    std::string name;
    cone::WeightSpec w;
    cone::ConeSpec cone;
  };
  std::vector<Env> envs = {
      {"w1_plane", cone::WeightSpec::one(2), cone::ConeSpec::whole_space(2)},
      {"w1_halfplane", cone::WeightSpec::one(2), cone::ConeSpec::halfplane_upper()},
      {"wy_halfplane", cone::WeightSpec::linear_power(2, Vec{0.0, 1.0}, 1.0),
       cone::ConeSpec::halfplane_upper()},
      {"w1_quadrant", cone::WeightSpec::one(2), cone::ConeSpec::quadrant()},
  };
  std::vector<Cell> out;
  for (auto& [hn, H] : Hs)
    for (auto& e : envs) out.push_back({hn + "/" + e.name, H, e.w, e.cone});
  return out;
}

struct CellQuotient {
  double Q = 0.0;
  double P = 0.0;
  double m = 0.0;
  double seconds = 0.0;
};

// AVR from the same clipped mesh, so the Wulff equality is exercised
// without an independent discretization of the normalizing constant
inline CellQuotient wulff_cell_quotient(const Cell& cell, int res) {
  detail::Timer t;
  SurfaceMesh Wc = cone::clip(gauge::wulff(cell.H, res), cell.cone);
  double P = cone::weighted_perimeter(Wc, cell.H, cell.w, cell.cone);
  double m = cone::weighted_volume(Wc, cell.w);
  double N = cell.w.N();
  double Q = cone::iso_quotient_from(P, m, m / cone::omega_N(N), N);
  return {Q, P, m, t.seconds()};
}

// -------------------------------------------------------------- criteria

inline CriterionResult c1_wulff_equality(int res = 4096) {
  detail::Timer t;
  CriterionResult r{1, "Wulff equality on the gauge/weight/cone matrix"};
  auto cells = wulff_cells();
  std::vector<CellQuotient> qs(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { qs[i] = wulff_cell_quotient(cells[i], res); });
  double worst = 0.0, slowest = 0.0;
  for (const auto& q : qs) {
    worst = std::max(worst, std::abs(q.Q - 1.0));
    slowest = std::max(slowest, q.seconds);
  }
  r.checks.push_back(detail::le("max |Q-1| over 12 cells", worst, 3.0 / res));

  double Qh = cone::iso_quotient_from(2.0, 2.0 / 3.0, 1.0 / (2.0 * M_PI), 3.0);
  r.checks.push_back(detail::le("hand cell |Q-1| from P=2, m=2/3, AVR=1/2pi", std::abs(Qh - 1.0), 1e-12));
  r.checks.push_back(detail::time_check("slowest cell", slowest, 2.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c2_sharpness(std::uint64_t seed, int res = 4096) {
  detail::Timer t;
  CriterionResult r{2, "sharpness margin for non-Wulff polygons"};
  auto cells = wulff_cells();
  std::vector<Vec> dirs(256);
  for (int k = 0; k < 256; ++k) dirs[k] = gauge::detail::unit2(2.0 * M_PI * k / 256);

  std::vector<double> min_q(cells.size(), 1e300);
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    SurfaceMesh Wc = cone::clip(gauge::wulff(cell.H, res), cell.cone);
    double N = cell.w.N();
    double avr_cell = cone::weighted_volume(Wc, cell.w) / cone::omega_N(N);
    std::vector<double> hW(dirs.size(), -1e300);
    for (std::size_t k = 0; k < dirs.size(); ++k)
      for (const Vec& v : Wc.loop) hW[k] = std::max(hW[k], dot(v, dirs[k]));
    bool allow_translation =
        cell.cone.whole() && cell.w.kind() == cone::WeightSpec::Kind::one;
    Rng rng(derive_seed(seed, "c2/" + cell.name));
    int accepted = 0;
    for (int guard = 0; accepted < 100 && guard < 20000; ++guard) {
      ConvexBody E = corpus::random_polygon_in_cone(rng, cell.cone);
      if (corpus::wulff_misfit(E, dirs, hW, allow_translation) < 0.05 * E.inradius())
        continue;
      ++accepted;
      double P = cone::weighted_perimeter(E.mesh(), cell.H, cell.w, cell.cone);
      double m = cone::weighted_volume(E.mesh(), cell.w);
      min_q[i] = std::min(min_q[i], cone::iso_quotient_from(P, m, avr_cell, N));
    }
    if (accepted < 100) min_q[i] = -1.0;
  });
  double overall = 1e300;
  for (double q : min_q) overall = std::min(overall, q);
  r.checks.push_back(detail::ge("min Q over 100 polygons x 12 cells", overall, 1.0 + 1e-3));

  std::vector<Vec> loop(res);
  for (int k = 0; k < res; ++k) {
    double th = 2.0 * M_PI * k / res;
    loop[k] = {2.0 * std::cos(th), std::sin(th)};
  }
  SurfaceMesh em = gauge::mesh_from_polygon(std::move(loop));
  double Pe = cone::weighted_perimeter(em, gauge::Gauge::euclidean(2), cone::WeightSpec::one(2),
                                       cone::ConeSpec::whole_space(2));
  double me = cone::weighted_volume(em, cone::WeightSpec::one(2));
  double Qe = cone::iso_quotient_from(Pe, me, 1.0, 2.0);
  r.checks.push_back(detail::le("ellipse (2,1) |Q-1.0903|", std::abs(Qe - 1.0903), 1e-3));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 60.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c3_profile_bound(std::uint64_t seed) {
  detail::Timer t;
  CriterionResult r{3, "Milman profile lower-bounds 1D perimeter"};
  const int n = 200;
  const double Ns[3] = {2.0, 2.5, 3.5};
  std::vector<double> margin(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "c3/" + std::to_string(i)));
    auto dens = corpus::random_cd_density(rng, Ns[i % 3]);
    auto E = corpus::random_intervals(rng, dens);
    double v = 0.0;
    for (const auto& [a, b] : E.intervals()) v += dens.mass(a, b);
    double P = model1d::perimeter1d(model1d::OneDimFinsler(dens), E);
    double I = model1d::profile(dens.N(), dens.Dprime(), v).value;
    margin[i] = P - I;
  });
  double worst = 1e300;
  for (double m : margin) worst = std::min(worst, m);
  r.checks.push_back(detail::ge("min (perimeter - profile) over 200 densities", worst, -1e-6));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 10.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c4_small_volume() {
  detail::Timer t;
  CriterionResult r{4, "small-volume expansion of the profile"};
  double worst_high = -1e300, worst_low = 1e300, worst_step = 1e300, last_gap = 0.0;
  for (double N : {2.0, 3.0}) {
    double prev = -1e300;
    for (double v : {1e-1, 1e-2, 1e-3, 1e-4}) {
      double ratio =
          model1d::profile(N, 1.0, v).value / (N * std::pow(v, (N - 1.0) / N));
      worst_high = std::max(worst_high, ratio - 1.0);
      worst_low = std::min(worst_low, ratio - (1.0 - 5.0 * std::pow(v, 1.0 / N)));
      worst_step = std::min(worst_step, ratio - prev);
      prev = ratio;
    }
    last_gap = std::max(last_gap, 1.0 - prev);
  }
  r.checks.push_back(detail::le("max (ratio - 1)", worst_high, 1e-12));
  r.checks.push_back(detail::ge("min margin over 1 - 5 v^{1/N}", worst_low, 0.0));
  r.checks.push_back(detail::ge("min increase of ratio as v decreases", worst_step, 0.0));
  r.checks.push_back(detail::le("final gap 1 - ratio(1e-4)", last_gap, 5.0 * std::pow(1e-4, 1.0 / 3.0)));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 1.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c5_zero_residual() {
  detail::Timer t;
  CriterionResult r{5, "zero residual on the xi=0 model"};
  double worst = 0.0;
  for (double N : {2.0, 2.5, 3.0}) {
    auto dens = model1d::Density1D::model(N, 1.0, 0.0);
    model1d::OneDimFinsler fins(dens);
    for (double w : {1e-1, 1e-2, 1e-3}) {
      model1d::IntervalSet E({{0.0, dens.r(w)}});
      worst = std::max(worst, std::abs(model1d::residual(fins, 1.0, E)));
    }
  }
  r.checks.push_back(detail::le("max |residual| at w in {1e-1,1e-2,1e-3}", worst, 1e-8));

  auto uni = model1d::Density1D::model(2.0, 1.0, std::numeric_limits<double>::infinity());
  model1d::IntervalSet E9({{0.0, uni.r(1.0 / 9.0)}});
  double res9 = model1d::residual(model1d::OneDimFinsler(uni), 1.0, E9);
  r.checks.push_back(detail::le("uniform |residual - 0.5| at w=1/9", std::abs(res9 - 0.5), 1e-12));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 1.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c6_bm(std::uint64_t seed) {
  detail::Timer t;
  CriterionResult r{6, "Brunn-Minkowski slack"};
  std::vector<cone::WeightSpec> ws = {
      cone::WeightSpec::one(2),
      cone::WeightSpec::linear_power(2, Vec{0.0, 1.0}, 0.5),
      cone::WeightSpec::linear_power(2, Vec{0.0, 1.0}, 1.0),
      cone::WeightSpec::linear_power(2, Vec{0.6, 0.8}, 2.0),
  };
  const int n = 500;
  std::vector<double> slack(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "c6/" + std::to_string(i)));
    const auto& w = ws[i % ws.size()];
    auto pair = corpus::random_pair(rng, w);
    double tt = rng.uniform(0.05, 0.95);
    slack[i] = bminkowski::bm_slack(pair.A, pair.B, tt, w, w.N());
  });
  double worst = 1e300;
  for (double s : slack) worst = std::min(worst, s);
  r.checks.push_back(detail::ge("min slack over 500 weighted pairs", worst, -1e-9));

  const int nh = 100;
  std::vector<double> hslack(nh);
  parallel_for(nh, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "c6h/" + std::to_string(i)));
    const auto& w = ws[i % ws.size()];
    auto pair = corpus::homothetic_pair(rng, w);
    double tt = rng.uniform(0.05, 0.95);
    hslack[i] = std::abs(bminkowski::bm_slack(pair.A, pair.B, tt, w, w.N()));
  });
  double hworst = 0.0;
  for (double s : hslack) hworst = std::max(hworst, s);
  r.checks.push_back(detail::le("max |slack| over 100 homothetic pairs", hworst, 1e-9));

  ConvexBody sq = ConvexBody::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  ConvexBody disk =
      ConvexBody::polygon(gauge::forward_ball(gauge::Gauge::euclidean(2), {}, 1.0, 2048).loop);
  double sd = bminkowski::bm_slack(sq, disk, 0.5, cone::WeightSpec::one(2), 2.0);
  r.checks.push_back(detail::le("square+disk |slack - 0.0405|", std::abs(sd - 0.0405), 1e-4));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 20.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c7_content(std::uint64_t seed) {
  detail::Timer t;
  CriterionResult r{7, "Minkowski content matches perimeter"};
  std::vector<gauge::Gauge> Fs = {
      gauge::Gauge::euclidean(2),
      gauge::Gauge::randers(2, Vec{0.5, 0.0}),
      gauge::Gauge::polytopal(2, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}),
  };
  std::vector<gauge::Gauge> Hs;
  for (const auto& F : Fs) Hs.push_back(gauge::dual_gauge(F));
  auto w1 = cone::WeightSpec::one(2);
  auto whole = cone::ConeSpec::whole_space(2);
  const int nb = 50;
  std::vector<double> rel(nb), quot_margin(nb);
  parallel_for(nb, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "c7/" + std::to_string(i)));
    ConvexBody E = corpus::random_polygon(rng);
    double inr = E.inradius();
    double wr = 0.0, wm = 1e300;
    for (std::size_t g = 0; g < Fs.size(); ++g) {
      double P = cone::weighted_perimeter(E.mesh(), Hs[g], w1, whole);
      auto res = bminkowski::minkowski_content(E, Fs[g], w1,
                                               {0.1 * inr, 0.05 * inr, 0.025 * inr}, 2048);
      wr = std::max(wr, std::abs(res.extrapolated - P) / P);
      for (double q : res.quotients) wm = std::min(wm, q - P);
    }
    rel[i] = wr;
    quot_margin[i] = wm;
  });
  double worst_rel = 0.0, worst_margin = 1e300;
  for (int i = 0; i < nb; ++i) {
    worst_rel = std::max(worst_rel, rel[i]);
    worst_margin = std::min(worst_margin, quot_margin[i]);
  }
  r.checks.push_back(detail::le("max rel gap, 50 bodies x 3 gauges", worst_rel, 1e-3));
  r.checks.push_back(detail::ge("min (quotient - perimeter)", worst_margin, -1e-9));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 30.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c8_trace() {
  detail::Timer t;
  CriterionResult r{8, "proof-trace lower bound on the unit disk"};
  auto F = gauge::Gauge::euclidean(2);
  ConvexBody E = ConvexBody::polygon(gauge::forward_ball(F, {}, 1.0, 256).loop);
  auto trace = bminkowski::main_inequality_trace(E, F, cone::WeightSpec::one(2),
                                                 cone::ConeSpec::whole_space(2), Vec{},
                                                 {10.0, 40.0, 160.0}, 0.1, 512);
  double min_step = 1e300;
  bool ok = true;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    ok = ok && trace.rows[i].bm_ok && trace.rows[i].containment_ok;
    if (i) min_step = std::min(min_step, trace.rows[i].lower_bound - trace.rows[i - 1].lower_bound);
  }
  double gap = (2.0 * M_PI - trace.rows.back().lower_bound) / (2.0 * M_PI);
  r.checks.push_back(detail::ge("lower bound monotone in R", min_step, 0.0));
  r.checks.push_back(detail::le("final gap to 2pi", gap, 0.02));
  r.checks.push_back(detail::ge("gap nonnegative", gap, 0.0));
  r.checks.push_back(detail::ge("BM and containment hold at every R", ok ? 1.0 : 0.0, 1.0));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 10.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c9_irreversibility(std::uint64_t seed) {
  detail::Timer t;
  CriterionResult r{9, "irreversibility bookkeeping"};
  double rev = gauge::reversibility(gauge::Gauge::randers(2, Vec{0.5, 0.0}));
  r.checks.push_back(detail::le("|reversibility(randers 0.5) - 3|", std::abs(rev - 3.0), 0.0));

  const int n = 200;
  const double Ns[3] = {2.0, 2.5, 3.5};
  std::vector<double> margin(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "c9/" + std::to_string(i)));
    auto dens = corpus::random_cd_density(rng, Ns[i % 3]);
    auto E = corpus::random_intervals(rng, dens);
    double v = 0.0;
    for (const auto& [a, b] : E.intervals()) v += dens.mass(a, b);
    double Dp = dens.Dprime(), N = dens.N();
    auto fins = corpus::random_finsler1d(rng, dens);
    double P = model1d::perimeter1d(fins, E);
    double lam = fins.lambda();
    double I = model1d::profile(N, Dp, v).value;
    margin[i] = P * lam / I - 1.0;
  });
  double worst = 1e300;
  for (double m : margin) worst = std::min(worst, m);
  r.checks.push_back(detail::ge("min (P Lambda / profile - 1) over 200", worst, -1e-9));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 5.0));
  r.seconds = t.seconds();
  return r;
}

inline CriterionResult c10_monotonia() {
  detail::Timer t;
  CriterionResult r{10, "monotonia gap trend"};
  const int grid = 2048;
  double g0 = model1d::monotonia_gap(2.0, 0.0, grid);
  double g1 = model1d::monotonia_gap(2.0, 0.1, grid);
  double g2 = model1d::monotonia_gap(2.0, 0.01, grid);
  double g3 = model1d::monotonia_gap(2.0, 0.001, grid);
  r.checks.push_back(detail::le("g(0)", g0, 1.0 / grid));
  r.checks.push_back(detail::ge("g(0.1) - g(0.01)", g1 - g2, 1e-12));
  r.checks.push_back(detail::ge("g(0.01) - g(0.001)", g2 - g3, 1e-12));
  r.checks.push_back(detail::le("g(0.001)", g3, 0.05));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 1.0));
  r.seconds = t.seconds();
  return r;
}

// bonus battery for the coarea comparison (not a numbered criterion)
inline CriterionResult coarea_battery() {
  detail::Timer t;
  CriterionResult r{11, "coarea comparison on radial profiles"};
  auto w1 = cone::WeightSpec::one(2);
  auto phi = [](double s) { return std::max(0.0, 1.0 - s); };
  struct GC {
    std::string name;
    gauge::Gauge F;
  };
  std::vector<GC> gs;
  gs.push_back({"euclidean", gauge::Gauge::euclidean(2)});
  gs.push_back({"randers", gauge::Gauge::randers(2, Vec{0.5, 0.0})});
  for (const auto& gc : gs) {
    auto res = bminkowski::coarea_check(phi, 1.0, gc.F, w1, 512);
    double band = std::abs(res.rhs - res.rhs_coarse);
    double cellsz = res.lhs > 0 ? 8.0 * res.lhs / 512.0 : 1e-6;
    double tol = std::max(3.0 * band, cellsz);
    r.checks.push_back(
        detail::ge("lhs <= rhs (" + gc.name + ")", res.rhs - res.lhs, -tol));
    r.checks.push_back(detail::le("|lhs - rhs| (" + gc.name + ")", std::abs(res.lhs - res.rhs), tol));
    if (gc.name == "euclidean")
      r.checks.push_back(detail::le("|lhs - pi|", std::abs(res.lhs - M_PI), 1e-3));
  }
  auto zero = bminkowski::coarea_check([](double) { return 0.0; }, 1.0,
                                       gauge::Gauge::euclidean(2), w1, 64);
  r.checks.push_back(detail::le("zero profile", std::abs(zero.lhs) + std::abs(zero.rhs), 0.0));
  r.checks.push_back(detail::time_check("runtime", t.seconds(), 30.0));
  r.seconds = t.seconds();
  return r;
}

// ---------------------------------------------------------------- suites

struct SuiteResult {
  std::string name;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : criteria)
      if (!c.pass()) return false;
    return true;
  }
};

inline std::vector<std::string> suite_names() {
  return {"wulff", "profiles", "residuals", "bm", "content", "coarea"};
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  detail::Timer t;
  SuiteResult s;
  s.name = name;
  if (name == "wulff") {
    s.criteria.push_back(c1_wulff_equality());
    s.criteria.push_back(c2_sharpness(seed));
  } else if (name == "profiles") {
    s.criteria.push_back(c3_profile_bound(seed));
    s.criteria.push_back(c4_small_volume());
  } else if (name == "residuals") {
    s.criteria.push_back(c5_zero_residual());
    s.criteria.push_back(c9_irreversibility(seed));
    s.criteria.push_back(c10_monotonia());
  } else if (name == "bm") {
    s.criteria.push_back(c6_bm(seed));
    s.criteria.push_back(c8_trace());
  } else if (name == "content") {
    s.criteria.push_back(c7_content(seed));
  } else if (name == "coarea") {
    s.criteria.push_back(coarea_battery());
  } else {
    throw IoError("unknown suite '" + name + "'");
  }
  s.seconds = t.seconds();
  return s;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& n : suite_names()) out.push_back(run_suite(n, seed));
  return out;
}

// deterministic JSON summary: timings are omitted on purpose
inline io::json summary_json(const std::vector<SuiteResult>& suites, std::uint64_t seed) {
  io::json j;
  j["command"] = "verify";
  j["seed"] = seed;
  j["params"] = io::json::object();
  bool all = true;
  io::json arr = io::json::array();
  for (const auto& s : suites) {
    io::json js;
    js["suite"] = s.name;
    js["pass"] = s.pass();
    all = all && s.pass();
    io::json jcrits = io::json::array();
    for (const auto& c : s.criteria) {
      io::json jc;
      jc["criterion"] = c.id;
      jc["name"] = c.name;
      jc["pass"] = c.pass();
      io::json jchecks = io::json::array();
      for (const auto& k : c.checks) {
        io::json e;
        e["name"] = k.name;
        e["pass"] = k.pass;
        if (!k.timing) {
          e["measured"] = io::number_or_string(k.measured);
          e["relation"] = k.relation;
          e["bound"] = io::number_or_string(k.bound);
        }
        jchecks.push_back(e);
      }
      jc["checks"] = jchecks;
      jcrits.push_back(jc);
    }
    js["criteria"] = jcrits;
    arr.push_back(js);
  }
  j["suites"] = arr;
  j["pass"] = all;
  return j;
}

// one console line per criterion: id, verdict, headline check, time
inline std::string one_line(const CriterionResult& c) {
  const Check* head = nullptr;
  for (const auto& k : c.checks)
    if (!k.pass) {
      head = &k;
      break;
    }
  if (!head && !c.checks.empty()) head = &c.checks.front();
  std::string line = "C" + std::to_string(c.id) + (c.pass() ? " PASS " : " FAIL ") + c.name;
  if (head) {
    line += " | " + head->name + " " + detail::fmtg(head->measured) + " " + head->relation +
            " " + detail::fmtg(head->bound);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, " | %.2f s", c.seconds);
  line += buf;
  return line;
}

}  // namespace finsler::verify
