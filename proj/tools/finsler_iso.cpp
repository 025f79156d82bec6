// finsler_iso: command line driver for the isoperimetry library.
//
// Subcommands: profile, residual, gauge-info, wulff, cone-report,
// bm-check, mink-content, coarea, verify.  Global flags: --config,
// --out, --format json|csv, --seed, --resolution.  Explicit flags beat
// config file values, which beat built-in defaults.  With a fixed seed
// the emitted reports are byte identical across runs.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "finsler/io.hpp"
#include "finsler/verify.hpp"

using namespace finsler;
using io::json;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 7;
  int resolution = 0;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* res_opt = nullptr;
};

// flag > config > default
io::RunConfig resolve(const Globals& g) {
  io::RunConfig cfg;
  if (!g.config.empty()) cfg = io::load_config(g.config);
  if (g.out_opt->count()) cfg.out = g.out;
  if (g.format_opt->count()) cfg.format = g.format;
  if (g.seed_opt->count()) cfg.seed = g.seed;
  if (g.res_opt->count()) cfg.resolution = g.resolution;
  return cfg;
}

json pick_json(const std::string& flag, const io::RunConfig& cfg, const char* key) {
  if (!flag.empty()) return io::parse_json(flag);
  if (cfg.params.contains(key)) return cfg.params.at(key);
  return json();
}

template <typename T>
void fill(const CLI::Option* opt, const io::RunConfig& cfg, const char* key, T& val) {
  if (opt->count() == 0 && cfg.params.contains(key)) val = cfg.params.at(key).get<T>();
}

void emit(const io::Report& r, const io::RunConfig& cfg) {
  std::string text = io::render_report(r, cfg.format);
  if (cfg.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    io::write_file(cfg.out, text);
}

double parse_xi(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end) throw IoError("xi must be a number or \"inf\"");
  return v;
}

gauge::Gauge gauge_arg(const std::string& flag, const io::RunConfig& cfg,
                       const char* key = "gauge") {
  json j = pick_json(flag, cfg, key);
  if (j.is_null()) return gauge::Gauge::euclidean(2);
  return io::parse_gauge(j);
}

int run_verify(const io::RunConfig& cfg, const std::string& suite) {
  std::vector<verify::SuiteResult> suites;
  if (suite == "all")
    suites = verify::run_all(cfg.seed);
  else
    suites.push_back(verify::run_suite(suite, cfg.seed));

  int total = 0, failed = 0;
  for (const auto& s : suites)
    for (const auto& c : s.criteria) {
      std::printf("%s\n", verify::one_line(c).c_str());
      for (const auto& chk : c.checks) {
        ++total;
        if (!chk.pass) ++failed;
      }
    }
  if (failed)
    std::printf("%d of %d criteria failed\n", failed, total);
  else
    std::printf("%d criteria passed\n", total);

  json summary = verify::summary_json(suites, cfg.seed);
  if (!cfg.out.empty())
    io::write_file(cfg.out, summary.dump(2) + "\n");
  else
    std::printf("%s\n", summary.dump(2).c_str());
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isoperimetric inequalities for irreversible Finsler gauges"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "JSON config file");
  g.out_opt = app.add_option("--out", g.out, "output path (default stdout)");
  g.format_opt = app.add_option("--format", g.format, "json or csv")
                     ->check(CLI::IsMember({"json", "csv"}));
  g.seed_opt = app.add_option("--seed", g.seed, "random seed");
  g.res_opt = app.add_option("--resolution", g.resolution, "mesh/grid resolution");

  std::function<int()> action;

  // ---- profile ------------------------------------------------------
  auto* cmd_profile = app.add_subcommand("profile", "1D model isoperimetric profile");
  cmd_profile->fallthrough();
  {
    auto N = std::make_shared<double>(2.0);
    auto D = std::make_shared<double>(1.0);
    auto vlist = std::make_shared<std::vector<double>>();
    auto from = std::make_shared<double>(0.05);
    auto to = std::make_shared<double>(0.95);
    auto count = std::make_shared<int>(19);
    auto oN = cmd_profile->add_option("--N", *N, "dimension bound");
    auto oD = cmd_profile->add_option("--D", *D, "diameter bound");
    cmd_profile->add_option("--v", *vlist, "volume fractions in (0,1)");
    auto ofrom = cmd_profile->add_option("--v-from", *from, "range start");
    auto oto = cmd_profile->add_option("--v-to", *to, "range end");
    auto ocount = cmd_profile->add_option("--v-count", *count, "range points");
    cmd_profile->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        fill(oN, cfg, "N", *N);
        fill(oD, cfg, "D", *D);
        std::vector<double> vs = *vlist;
        if (vs.empty() && cfg.params.contains("v"))
          vs = cfg.params["v"].get<std::vector<double>>();
        if (vs.empty()) {
          fill(ofrom, cfg, "v_from", *from);
          fill(oto, cfg, "v_to", *to);
          fill(ocount, cfg, "v_count", *count);
          if (!(*from > 0.0 && *to < 1.0 && *from < *to && *count >= 2))
            throw IoError("profile range needs 0 < from < to < 1 and count >= 2");
          for (int k = 0; k < *count; ++k)
            vs.push_back(*from + (*to - *from) * k / (*count - 1));
        }
        io::Report r;
        r.command = "profile";
        r.seed = cfg.seed;
        r.params = {{"N", *N}, {"D", *D}};
        r.columns = {"v", "value", "xi"};
        bool monotone = true;
        double prev = 0.0;
        for (double v : vs) {
          auto p = model1d::profile(*N, *D, v);
          r.rows.push_back({v, p.value, p.xi});
          if (v <= 0.5 && p.value < prev - 1e-12) monotone = false;
          if (v <= 0.5) prev = p.value;
        }
        r.params["monotone_to_half"] = monotone;
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- residual -----------------------------------------------------
  auto* cmd_residual = app.add_subcommand("residual", "deficit of a set against the model");
  cmd_residual->fallthrough();
  {
    auto N = std::make_shared<double>(2.0);
    auto D = std::make_shared<double>(1.0);
    auto xi = std::make_shared<std::string>("0");
    auto E = std::make_shared<std::string>();
    auto oN = cmd_residual->add_option("--N", *N, "dimension bound");
    auto oD = cmd_residual->add_option("--D", *D, "diameter bound");
    auto oxi = cmd_residual->add_option("--xi", *xi, "model parameter, number or inf");
    cmd_residual->add_option("--E", *E, "interval set [[a,b],...] as JSON");
    cmd_residual->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        fill(oN, cfg, "N", *N);
        fill(oD, cfg, "D", *D);
        fill(oxi, cfg, "xi", *xi);
        model1d::Density1D dens =
            cfg.params.contains("density") && oN->count() == 0 && oxi->count() == 0
                ? io::parse_density(cfg.params["density"])
                : model1d::Density1D::model(*N, *D, parse_xi(*xi));
        json jE = pick_json(*E, cfg, "E");
        if (jE.is_null()) throw IoError("residual needs --E or a config entry \"E\"");
        auto set = io::parse_intervals(jE);
        model1d::OneDimFinsler fins(dens);
        double vol = 0.0;
        for (const auto& [a, b] : set.intervals()) vol += fins.density.mass(a, b);
        io::Report r;
        r.command = "residual";
        r.seed = cfg.seed;
        r.params = {{"N", fins.density.N()}, {"D", *D}};
        r.columns = {"volume", "perimeter", "profile", "residual"};
        r.rows.push_back({vol, model1d::perimeter1d(fins, set),
                          model1d::profile(fins.density.N(), *D, vol).value,
                          model1d::residual(fins, *D, set)});
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- gauge-info ---------------------------------------------------
  auto* cmd_ginfo = app.add_subcommand("gauge-info", "evaluate a gauge and its dual");
  cmd_ginfo->fallthrough();
  {
    auto gj = std::make_shared<std::string>();
    cmd_ginfo->add_option("--gauge", *gj, "gauge JSON");
    cmd_ginfo->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        auto gg = gauge_arg(*gj, cfg);
        auto dual = gauge::dual_gauge(gg);
        int res = cfg.resolution > 0 ? cfg.resolution : 64;
        io::Report r;
        r.command = "gauge-info";
        r.seed = cfg.seed;
        r.resolution = res;
        r.params["gauge"] = io::gauge_json(gg);
        r.params["reversibility"] = gauge::reversibility(gg);
        r.columns = {"theta", "F", "F_dual"};
        for (int k = 0; k < res; ++k) {
          double th = 2.0 * M_PI * k / res;
          Vec u{std::cos(th), std::sin(th)};
          r.rows.push_back({th, gauge::gauge_eval(gg, u), dual(u)});
        }
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- wulff --------------------------------------------------------
  auto* cmd_wulff = app.add_subcommand("wulff", "Wulff shape of a gauge");
  cmd_wulff->fallthrough();
  {
    auto gj = std::make_shared<std::string>();
    auto scale = std::make_shared<double>(1.0);
    cmd_wulff->add_option("--gauge", *gj, "gauge JSON for H");
    auto oscale = cmd_wulff->add_option("--scale", *scale, "homothety factor");
    cmd_wulff->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        auto H = gauge_arg(*gj, cfg);
        fill(oscale, cfg, "scale", *scale);
        int res = cfg.resolution > 0 ? cfg.resolution : 256;
        json shape = {{"kind", "wulff"}, {"scale", *scale}};
        auto W = io::parse_shape(shape, H, res);
        auto w1 = cone::WeightSpec::one(H.dim());
        auto whole = cone::ConeSpec::whole_space(H.dim());
        io::Report r;
        r.command = "wulff";
        r.seed = cfg.seed;
        r.resolution = res;
        r.params["gauge"] = io::gauge_json(H);
        r.params["volume"] = gauge::enclosed_volume(W);
        r.params["perimeter"] = cone::weighted_perimeter(W, H, w1, whole);
        r.params["quotient"] = cone::iso_quotient(W, H, w1, whole, res);
        r.columns = H.dim() == 2 ? std::vector<std::string>{"x", "y"}
                                 : std::vector<std::string>{"x", "y", "z"};
        if (H.dim() == 2)
          for (const Vec& v : W.loop) r.rows.push_back({v.x, v.y});
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- cone-report --------------------------------------------------
  auto* cmd_cone = app.add_subcommand("cone-report", "isoperimetric data of a set in a cone");
  cmd_cone->fallthrough();
  {
    auto sj = std::make_shared<std::string>();
    auto gj = std::make_shared<std::string>();
    auto wj = std::make_shared<std::string>();
    auto cj = std::make_shared<std::string>();
    cmd_cone->add_option("--shape", *sj, "shape JSON (default wulff)");
    cmd_cone->add_option("--gauge", *gj, "gauge JSON for H");
    cmd_cone->add_option("--weight", *wj, "weight JSON");
    cmd_cone->add_option("--cone", *cj, "cone JSON");
    cmd_cone->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        auto H = gauge_arg(*gj, cfg);
        auto w = io::parse_weight(pick_json(*wj, cfg, "weight"), H.dim());
        auto cone_spec = io::parse_cone(pick_json(*cj, cfg, "cone"), H.dim());
        json shape = pick_json(*sj, cfg, "shape");
        if (shape.is_null()) shape = json{{"kind", "wulff"}};
        int res = cfg.resolution > 0 ? cfg.resolution : 1024;

        io::Report r;
        r.command = "cone-report";
        r.seed = cfg.seed;
        r.resolution = res;
        r.params["gauge"] = io::gauge_json(H);
        r.params["weight"] = io::weight_json(w);
        r.params["N"] = w.N();
        r.params["omega_N"] = cone::omega_N(w.N());
        r.params["lambda_F"] = gauge::reversibility(gauge::dual_gauge(H));
        r.columns = {"resolution", "P", "m", "AVR", "Q"};
        double Qf = 0.0, Qc = 0.0;
        for (int rr : {res, res / 2}) {
          auto E = io::parse_shape(shape, H, rr);
          if (!cone_spec.whole()) E = cone::clip(E, cone_spec);
          double P = cone::weighted_perimeter(E, H, w, cone_spec);
          double m = cone::weighted_volume(E, w);
          double A = cone::avr(H, w, cone_spec, rr);
          double Q = cone::iso_quotient_from(P, m, A, w.N());
          (rr == res ? Qf : Qc) = Q;
          r.rows.push_back({double(rr), P, m, A, Q});
        }
        r.params["Q_extrapolated"] = (4.0 * Qf - Qc) / 3.0;
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- bm-check -----------------------------------------------------
  auto* cmd_bm = app.add_subcommand("bm-check", "Brunn-Minkowski slack of a pair");
  cmd_bm->fallthrough();
  {
    auto aj = std::make_shared<std::string>();
    auto bj = std::make_shared<std::string>();
    auto wj = std::make_shared<std::string>();
    auto t = std::make_shared<double>(0.5);
    auto N = std::make_shared<double>(0.0);
    cmd_bm->add_option("--A", *aj, "first shape JSON");
    cmd_bm->add_option("--B", *bj, "second shape JSON");
    cmd_bm->add_option("--weight", *wj, "weight JSON");
    auto ot = cmd_bm->add_option("--t", *t, "interpolation parameter in [0,1]");
    auto oN = cmd_bm->add_option("--N", *N, "homogeneity (default dim + alpha)");
    cmd_bm->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        fill(ot, cfg, "t", *t);
        fill(oN, cfg, "N", *N);
        int res = cfg.resolution > 0 ? cfg.resolution : 2048;
        auto eu = gauge::Gauge::euclidean(2);
        json ja = pick_json(*aj, cfg, "A");
        json jb = pick_json(*bj, cfg, "B");
        if (ja.is_null())
          ja = json{{"kind", "polygon"},
                    {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}}};
        if (jb.is_null()) jb = json{{"kind", "ball"}};
        auto mesh_a = io::parse_shape(ja, eu, res);
        auto mesh_b = io::parse_shape(jb, eu, res);
        if (mesh_a.dim != 2 || mesh_b.dim != 2) throw IoError("bm-check handles planar shapes");
        auto A = bminkowski::ConvexBody::polygon(mesh_a.loop);
        auto B = bminkowski::ConvexBody::polygon(mesh_b.loop);
        auto w = io::parse_weight(pick_json(*wj, cfg, "weight"), 2);
        double Neff = *N > 0.0 ? *N : w.N();
        auto Z = bminkowski::midpoint_set(A, B, *t);
        io::Report r;
        r.command = "bm-check";
        r.seed = cfg.seed;
        r.resolution = res;
        r.params["weight"] = io::weight_json(w);
        r.params["N"] = Neff;
        r.columns = {"t", "m_A", "m_B", "m_mid", "slack"};
        r.rows.push_back({*t, cone::weighted_volume(A.mesh(), w),
                          cone::weighted_volume(B.mesh(), w),
                          cone::weighted_volume(Z.mesh(), w),
                          bminkowski::bm_slack(A, B, *t, w, Neff)});
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- mink-content -------------------------------------------------
  auto* cmd_content = app.add_subcommand("mink-content", "forward Minkowski content");
  cmd_content->fallthrough();
  {
    auto sj = std::make_shared<std::string>();
    auto gj = std::make_shared<std::string>();
    auto wj = std::make_shared<std::string>();
    auto ladder = std::make_shared<std::vector<double>>();
    cmd_content->add_option("--shape", *sj, "shape JSON for E");
    cmd_content->add_option("--gauge", *gj, "gauge JSON for F");
    cmd_content->add_option("--weight", *wj, "weight JSON");
    cmd_content->add_option("--eps", *ladder, "enlargement ladder");
    cmd_content->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        auto F = gauge_arg(*gj, cfg);
        auto w = io::parse_weight(pick_json(*wj, cfg, "weight"), F.dim());
        json shape = pick_json(*sj, cfg, "shape");
        if (shape.is_null())
          shape = json{{"kind", "polygon"},
                       {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}}};
        std::vector<double> eps = *ladder;
        if (eps.empty() && cfg.params.contains("eps"))
          eps = cfg.params["eps"].get<std::vector<double>>();
        if (eps.empty()) eps = {0.1, 0.05, 0.025};
        auto mesh = io::parse_shape(shape, F, 2048);

        bminkowski::ContentResult res;
        if (mesh.dim == 2) {
          double area = gauge::enclosed_volume(mesh);
          auto hull = bminkowski::ConvexBody::polygon(mesh.loop);
          if (hull.volume() <= area * (1.0 + 1e-9)) {
            int br = cfg.resolution > 0 ? cfg.resolution : 2048;
            res = bminkowski::minkowski_content(hull, F, w, eps, br);
          } else {
            int grid = cfg.resolution > 0 ? cfg.resolution : 1024;
            res = bminkowski::minkowski_content(mesh, F, w, eps, grid);
          }
        } else {
          std::vector<Vec> vs;
          for (const auto& f : mesh.facets)
            for (const Vec& v : f.verts) vs.push_back(v);
          res = bminkowski::minkowski_content(bminkowski::ConvexBody::points3(vs), F, w, eps);
        }
        io::Report r;
        r.command = "mink-content";
        r.seed = cfg.seed;
        r.resolution = cfg.resolution;
        r.params["extrapolated"] = res.extrapolated;
        r.params["approximate"] = res.approximate;
        r.columns = {"eps", "quotient"};
        for (std::size_t i = 0; i < res.eps.size(); ++i)
          r.rows.push_back({res.eps[i], res.quotients[i]});
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- coarea -------------------------------------------------------
  auto* cmd_coarea = app.add_subcommand("coarea", "radial coarea comparison");
  cmd_coarea->fallthrough();
  {
    auto gj = std::make_shared<std::string>();
    auto wj = std::make_shared<std::string>();
    auto phi = std::make_shared<std::string>("cone");
    auto r0 = std::make_shared<double>(1.0);
    cmd_coarea->add_option("--gauge", *gj, "gauge JSON for F");
    cmd_coarea->add_option("--weight", *wj, "weight JSON");
    auto ophi = cmd_coarea->add_option("--phi", *phi, "profile: cone or quadratic")
                    ->check(CLI::IsMember({"cone", "quadratic"}));
    auto or0 = cmd_coarea->add_option("--r0", *r0, "support radius");
    cmd_coarea->callback([=, &g, &action] {
      action = [=, &g] {
        io::RunConfig cfg = resolve(g);
        auto F = gauge_arg(*gj, cfg);
        auto w = io::parse_weight(pick_json(*wj, cfg, "weight"), F.dim());
        fill(ophi, cfg, "phi", *phi);
        fill(or0, cfg, "r0", *r0);
        double R = *r0;
        std::function<double(double)> fn;
        if (*phi == "cone")
          fn = [R](double s) { return std::max(0.0, 1.0 - s / R); };
        else
          fn = [R](double s) { double u = std::max(0.0, 1.0 - s / R); return u * u; };
        int res = cfg.resolution > 0 ? cfg.resolution : 512;
        auto out = bminkowski::coarea_check(fn, R, F, w, res);
        io::Report r;
        r.command = "coarea";
        r.seed = cfg.seed;
        r.resolution = res;
        r.params["phi"] = *phi;
        r.params["r0"] = R;
        r.columns = {"lhs", "rhs", "rhs_coarse", "band"};
        r.rows.push_back({out.lhs, out.rhs, out.rhs_coarse, std::abs(out.rhs - out.rhs_coarse)});
        emit(r, cfg);
        return 0;
      };
    });
  }

  // ---- verify -------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suites");
  cmd_verify->fallthrough();
  {
    auto suite = std::make_shared<std::string>("all");
    cmd_verify->add_option("--suite", *suite,
                           "all, wulff, profiles, residuals, bm, content, coarea");
    cmd_verify->callback([=, &g, &action] {
      action = [=, &g] { return run_verify(resolve(g), *suite); };
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return action();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
