#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler/bminkowski.hpp"
#include "finsler/cone.hpp"
#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/mesh.hpp"
#include "finsler/model1d.hpp"

namespace finsler::io {

using json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal, no locale involvement
inline std::string fmt17(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, p);
}

inline json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << data;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad JSON: ") + e.what());
  }
}

inline Vec parse_vec(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw IoError("vector needs 2 or 3 coords");
  Vec v{j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
  return v;
}

inline std::vector<Vec> parse_vecs(const json& j) {
  if (!j.is_array()) throw IoError("expected an array of vectors");
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(parse_vec(e));
  return out;
}

// named analytic families admitted as custom gauges
inline gauge::Gauge custom_gauge_from_registry(int dim, const std::string& name,
                                               const json& j) {
  if (name == "lp") {
    double p = j.value("p", 3.0);
    if (!(p > 1.0)) throw IoError("lp gauge needs p > 1");
    auto fn = [p](const Vec& v) {
      return std::pow(std::pow(std::abs(v.x), p) + std::pow(std::abs(v.y), p) +
                          std::pow(std::abs(v.z), p),
                      1.0 / p);
    };
    return gauge::Gauge::custom(dim, fn, "lp");
  }
  throw IoError("unknown custom gauge '" + name + "'");
}

inline gauge::Gauge parse_gauge(const json& j) {
  if (!j.is_object()) throw IoError("gauge must be an object");
  std::string kind = j.value("kind", "euclidean");
  int dim = j.value("dim", 2);
  if (kind == "euclidean") return gauge::Gauge::euclidean(dim);
  if (kind == "polytopal") return gauge::Gauge::polytopal(dim, parse_vecs(j.at("vertices")));
  if (kind == "support") return gauge::Gauge::support(dim, parse_vecs(j.at("vertices")));
  if (kind == "randers") return gauge::Gauge::randers(dim, parse_vec(j.at("drift")));
  if (kind == "randers_dual")
    return gauge::Gauge::randers_dual(dim, parse_vec(j.at("drift")));
  if (kind == "custom")
    return custom_gauge_from_registry(dim, j.value("name", ""), j);
  throw IoError("unknown gauge kind '" + kind + "'");
}

inline json gauge_json(const gauge::Gauge& g) {
  json j;
  j["kind"] = g.name();
  j["dim"] = g.dim();
  if (g.kind() == gauge::Kind::randers || g.kind() == gauge::Kind::randers_dual)
    j["drift"] = {g.drift().x, g.drift().y, g.drift().z};
  if (g.kind() == gauge::Kind::polytopal || g.kind() == gauge::Kind::support) {
    json vs = json::array();
    for (const Vec& v : g.vertices())
      vs.push_back(g.dim() == 2 ? json{v.x, v.y} : json{v.x, v.y, v.z});
    j["vertices"] = vs;
  }
  return j;
}

inline cone::WeightSpec parse_weight(const json& j, int dim) {
  if (j.is_null()) return cone::WeightSpec::one(dim);
  if (!j.is_object()) throw IoError("weight must be an object");
  std::string kind = j.value("kind", "one");
  if (kind == "one") return cone::WeightSpec::one(dim);
  if (kind == "linear_power")
    return cone::WeightSpec::linear_power(dim, parse_vec(j.at("c")), j.value("alpha", 1.0));
  throw IoError("unknown weight kind '" + kind + "'");
}

inline json weight_json(const cone::WeightSpec& w) {
  json j;
  j["kind"] = w.kind() == cone::WeightSpec::Kind::one ? "one" : "linear_power";
  j["alpha"] = w.alpha();
  if (w.kind() == cone::WeightSpec::Kind::linear_power)
    j["c"] = {w.c().x, w.c().y, w.c().z};
  return j;
}

inline cone::ConeSpec parse_cone(const json& j, int dim) {
  if (j.is_null()) return cone::ConeSpec::whole_space(dim);
  if (j.is_object() && j.contains("normals"))
    return cone::ConeSpec::halfspaces(dim, parse_vecs(j["normals"]));
  if (j.is_array()) return cone::ConeSpec::halfspaces(dim, parse_vecs(j));
  throw IoError("cone must be {\"normals\": [[..],..]}");
}

inline json cone_json(const cone::ConeSpec& c) {
  json ns = json::array();
  for (const Vec& n : c.normals)
    ns.push_back(c.dim == 2 ? json{n.x, n.y} : json{n.x, n.y, n.z});
  return json{{"normals", ns}};
}

inline model1d::IntervalSet parse_intervals(const json& j) {
  if (!j.is_array()) throw IoError("interval set must be [[a,b],...]");
  std::vector<std::pair<double, double>> iv;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw IoError("interval must be [a,b]");
    iv.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return model1d::IntervalSet(std::move(iv));
}

inline model1d::Density1D parse_density(const json& j) {
  if (!j.is_object()) throw IoError("density must be an object");
  double N = j.value("N", 2.0);
  if (j.contains("model")) {
    const json& m = j["model"];
    double D = m.value("D", 1.0);
    double xi;
    if (m.contains("xi") && m["xi"].is_string()) {
      if (m["xi"].get<std::string>() != "inf") throw IoError("xi must be a number or \"inf\"");
      xi = std::numeric_limits<double>::infinity();
    } else {
      xi = m.value("xi", 0.0);
    }
    return model1d::Density1D::model(N, D, xi, j.value("grid", 4096));
  }
  double Dp = j.value("Dprime", 1.0);
  const json& s = j.at("samples");
  std::vector<double> h;
  h.reserve(s.size());
  for (const auto& e : s) {
    if (e.is_array()) {
      if (e.size() != 2) throw IoError("density sample must be [x,h] or h");
      h.push_back(e[1].get<double>());
    } else {
      h.push_back(e.get<double>());
    }
  }
  return model1d::Density1D(N, Dp, std::move(h));
}

// Shape kinds: polygon, mesh (3D triangles), ball (Euclidean), ellipse,
// wulff (of the gauge H passed alongside).
inline gauge::SurfaceMesh parse_shape(const json& j, const gauge::Gauge& H, int resolution) {
  if (!j.is_object()) throw IoError("shape must be an object");
  std::string kind = j.value("kind", "wulff");
  if (kind == "polygon") return gauge::mesh_from_polygon(parse_vecs(j.at("vertices")));
  if (kind == "mesh") {
    std::vector<Vec> vs = parse_vecs(j.at("vertices"));
    std::vector<Tri> tris;
    for (const auto& t : j.at("triangles")) {
      if (!t.is_array() || t.size() != 3) throw IoError("triangle must be [i,j,k]");
      tris.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    Vec hint;
    for (const Vec& v : vs) hint += v;
    hint = hint / double(vs.size());
    return gauge::mesh_from_triangles(vs, tris, hint);
  }
  if (kind == "ball") {
    Vec c = j.contains("center") ? parse_vec(j["center"]) : Vec{};
    double r = j.value("radius", 1.0);
    return gauge::forward_ball(gauge::Gauge::euclidean(H.dim()), c, r, resolution);
  }
  if (kind == "ellipse") {
    if (H.dim() != 2) throw IoError("ellipse shapes are planar");
    Vec ax = j.contains("semi_axes") ? parse_vec(j["semi_axes"]) : Vec{2.0, 1.0};
    Vec c = j.contains("center") ? parse_vec(j["center"]) : Vec{};
    std::vector<Vec> loop(resolution);
    for (int k = 0; k < resolution; ++k) {
      double th = 2.0 * M_PI * k / resolution;
      loop[k] = {c.x + ax.x * std::cos(th), c.y + ax.y * std::sin(th)};
    }
    return gauge::mesh_from_polygon(std::move(loop));
  }
  if (kind == "wulff") {
    gauge::SurfaceMesh W = gauge::wulff(H, resolution);
    double s = j.value("scale", 1.0);
    if (s != 1.0) {
      for (auto& f : W.facets) {
        for (Vec& v : f.verts) v = v * s;
        f.centroid = f.centroid * s;
        f.measure *= (H.dim() == 2 ? s : s * s);
      }
      for (Vec& v : W.loop) v = v * s;
    }
    return W;
  }
  throw IoError("unknown shape kind '" + kind + "'");
}

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  int resolution = 0;
  json params = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline json report_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["resolution"] = r.resolution;
  j["params"] = r.params;
  json cols = json::array();
  for (const auto& c : r.columns) cols.push_back(c);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = json::array();
    for (double v : row) jr.push_back(number_or_string(v));
    rows.push_back(jr);
  }
  j["table"] = {{"columns", cols}, {"rows", rows}};
  return j;
}

inline std::string report_csv(const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += r.columns[i];
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt17(row[i]);
    }
    out += '\n';
  }
  return out;
}

// structural check mirroring docs/report.schema.json
inline bool validate_report(const json& j, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!j.is_object()) return fail("report is not an object");
  if (!j.contains("command") || !j["command"].is_string()) return fail("missing command");
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) return fail("missing seed");
  if (j.contains("params") && !j["params"].is_object()) return fail("params is not an object");
  if (j.contains("table")) {
    const json& t = j["table"];
    if (!t.is_object() || !t.contains("columns") || !t.contains("rows"))
      return fail("table needs columns and rows");
    if (!t["columns"].is_array()) return fail("columns is not an array");
    for (const auto& c : t["columns"])
      if (!c.is_string()) return fail("column names must be strings");
    if (!t["rows"].is_array()) return fail("rows is not an array");
    for (const auto& row : t["rows"]) {
      if (!row.is_array() || row.size() != t["columns"].size())
        return fail("row width does not match columns");
      for (const auto& cell : row)
        if (!cell.is_number() && !cell.is_string()) return fail("cells must be numbers");
    }
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) return fail("checks is not an array");
    for (const auto& c : j["checks"]) {
      if (!c.is_object()) return fail("check is not an object");
      if (!c.contains("name") || !c["name"].is_string()) return fail("check needs a name");
      if (!c.contains("pass") || !c["pass"].is_boolean()) return fail("check needs pass");
    }
  }
  if (why) why->clear();
  return true;
}

struct RunConfig {
  std::uint64_t seed = 7;
  int resolution = 0;  // 0 lets each command pick its default
  std::string format = "json";
  std::string out;     // empty writes to stdout
  json params = json::object();
};

inline RunConfig load_config(const std::string& path) {
  json j = parse_json(read_file(path));
  if (!j.is_object()) throw IoError("config must be a JSON object");
  RunConfig c;
  c.seed = j.value("seed", std::uint64_t(7));
  c.resolution = j.value("resolution", 0);
  c.format = j.value("format", "json");
  c.out = j.value("out", "");
  if (c.format != "json" && c.format != "csv") throw IoError("format must be json or csv");
  c.params = j;
  return c;
}

inline std::string render_report(const Report& r, const std::string& format) {
  if (format == "csv") return report_csv(r);
  return report_json(r).dump(2) + "\n";
}

}  // namespace finsler::io
