#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvc/cage_mesh.hpp"
#include "mvc/deformation.hpp"
#include "mvc/derivatives.hpp"
#include "mvc/solver.hpp"
#include "mvc/weights.hpp"

namespace mvc::io {

using json = nlohmann::ordered_json;

namespace detail {

inline Error parse_error(const std::string& source, std::size_t line, const std::string& what) {
  return Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what, line);
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

inline bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

inline double parse_double(const std::string& tok, const std::string& source, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw parse_error(source, line, "not a number: '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) throw parse_error(source, line, "not a finite number: '" + tok + "'");
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Wavefront OBJ subset: `v x y z` and triangular `f i j k` (1-based, plain
/// indices). Blank lines and `#` comments are skipped; anything else is a
/// ParseError carrying the line number.
inline TriangleSoup parse_obj(std::istream& in, const std::string& source = "<obj>") {
  TriangleSoup soup;
  std::string raw;
  std::size_t line = 0;
  std::vector<std::pair<std::array<long long, 3>, std::size_t>> faces;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = detail::strip_comment(raw);
    if (detail::blank(text)) continue;
    std::istringstream ls(text);
    std::string tag;
    ls >> tag;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tag == "v") {
      if (tok.size() != 3) throw detail::parse_error(source, line, "vertex needs exactly 3 coordinates");
      soup.vertices.emplace_back(detail::parse_double(tok[0], source, line),
                                 detail::parse_double(tok[1], source, line),
                                 detail::parse_double(tok[2], source, line));
    } else if (tag == "f") {
      if (tok.size() != 3) throw detail::parse_error(source, line, "face must be a triangle");
      std::array<long long, 3> idx{};
      for (int k = 0; k < 3; ++k) {
        std::size_t used = 0;
        try {
          idx[k] = std::stoll(tok[k], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok[k].size()) throw detail::parse_error(source, line, "bad face index '" + tok[k] + "'");
      }
      faces.push_back({idx, line});
    } else {
      throw detail::parse_error(source, line, "unsupported statement '" + tag + "'");
    }
  }
  for (const auto& [idx, fl] : faces) {
    Triangle t;
    for (int k = 0; k < 3; ++k) {
      if (idx[k] < 1 || static_cast<std::size_t>(idx[k]) > soup.vertices.size()) {
        throw detail::parse_error(source, fl, "face index out of range");
      }
      t[k] = static_cast<std::size_t>(idx[k] - 1);
    }
    soup.triangles.push_back(t);
  }
  return soup;
}

inline TriangleSoup read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return parse_obj(in, path);
}

inline void write_obj(std::ostream& out, const TriangleSoup& soup) {
  for (const Vec3& v : soup.vertices) {
    out << "v " << detail::format_double(v.x()) << ' ' << detail::format_double(v.y()) << ' '
        << detail::format_double(v.z()) << '\n';
  }
  for (const Triangle& t : soup.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

inline void write_obj(const std::string& path, const TriangleSoup& soup) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  write_obj(out, soup);
}

/// One `x y z` per line; `#` comments and blank lines allowed.
inline std::vector<Vec3> parse_points(std::istream& in, const std::string& source = "<points>") {
  std::vector<Vec3> pts;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = detail::strip_comment(raw);
    if (detail::blank(text)) continue;
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() != 3) throw detail::parse_error(source, line, "expected 'x y z'");
    pts.emplace_back(detail::parse_double(tok[0], source, line), detail::parse_double(tok[1], source, line),
                     detail::parse_double(tok[2], source, line));
  }
  return pts;
}

inline std::vector<Vec3> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return parse_points(in, path);
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline json to_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

inline Vec3 vec3_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::ParseError, what + ": expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw Error(ErrorCode::ParseError, what + ": expected numbers");
    v[k] = j[k].get<double>();
  }
  return v;
}

inline Mat3 mat3_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 9) throw Error(ErrorCode::ParseError, what + ": expected 9 row-major numbers");
  Mat3 m;
  for (int k = 0; k < 9; ++k) {
    if (!j[k].is_number()) throw Error(ErrorCode::ParseError, what + ": expected numbers");
    m(k / 3, k % 3) = j[k].get<double>();
  }
  return m;
}

/// Status string for a point whose evaluation threw.
inline const char* status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::OnSurface: return "on_surface";
    case ErrorCode::NormalizationSingular: return "singular";
    default: return "error";
  }
}

inline json weights_entry(const Vec3& p, const WeightVector& wv) {
  json e;
  e["position"] = to_json(p);
  e["status"] = wv.on_surface ? "on_surface" : "ok";
  e["lambda"] = wv.lambda;
  e["w"] = wv.w;
  return e;
}

inline json derivatives_entry(const Vec3& p, const DerivativeSet& ds) {
  json e;
  e["position"] = to_json(p);
  e["status"] = "ok";
  e["lambda"] = ds.lambda;
  e["w"] = ds.w;
  json g = json::array(), h = json::array();
  for (const auto& v : ds.grad_lambda) g.push_back(to_json(v));
  for (const auto& m : ds.hess_lambda) h.push_back(to_json(m));
  e["grad_lambda"] = std::move(g);
  if (!ds.hess_lambda.empty()) e["hess_lambda"] = std::move(h);
  return e;
}

inline json failed_entry(const Vec3& p, const char* status, const std::string& message) {
  json e;
  e["position"] = to_json(p);
  e["status"] = status;
  e["message"] = message;
  return e;
}

/// Constraints document:
///   { "constraints": [ { "point": [..], "value": [..]?, "jacobian": [9]?, "weight": w } ],
///     "rigidity": { "points": [[..], ..] | { "grid": n }, "weight": w } }
struct ConstraintsDocument {
  std::vector<Constraint> constraints;
  RigidityTerm rigidity;
};

inline ConstraintsDocument parse_constraints(const json& doc, const CageMesh& cage) {
  ConstraintsDocument out;
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "constraints document must be an object");
  if (doc.contains("constraints")) {
    const json& arr = doc["constraints"];
    if (!arr.is_array()) throw Error(ErrorCode::ParseError, "'constraints' must be an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const json& c = arr[k];
      const std::string tag = "constraints[" + std::to_string(k) + "]";
      if (!c.is_object() || !c.contains("point")) throw Error(ErrorCode::ParseError, tag + ": missing 'point'");
      Constraint con;
      con.point = vec3_from_json(c["point"], tag + ".point");
      if (c.contains("value")) con.target_value = vec3_from_json(c["value"], tag + ".value");
      if (c.contains("jacobian")) con.target_jacobian = mat3_from_json(c["jacobian"], tag + ".jacobian");
      if (c.contains("weight")) {
        if (!c["weight"].is_number()) throw Error(ErrorCode::ParseError, tag + ".weight must be a number");
        con.weight = c["weight"].get<double>();
      }
      out.constraints.push_back(con);
    }
  }
  if (doc.contains("rigidity")) {
    const json& r = doc["rigidity"];
    if (!r.is_object()) throw Error(ErrorCode::ParseError, "'rigidity' must be an object");
    if (r.contains("weight")) {
      if (!r["weight"].is_number()) throw Error(ErrorCode::ParseError, "rigidity.weight must be a number");
      out.rigidity.weight = r["weight"].get<double>();
    }
    if (r.contains("points")) {
      const json& p = r["points"];
      if (p.is_array()) {
        for (std::size_t k = 0; k < p.size(); ++k) {
          out.rigidity.sample_points.push_back(vec3_from_json(p[k], "rigidity.points[" + std::to_string(k) + "]"));
        }
      } else if (p.is_object() && p.contains("grid") && p["grid"].is_number_integer()) {
        out.rigidity.sample_points = rigidity_grid(cage, p["grid"].get<int>());
      } else {
        throw Error(ErrorCode::ParseError, "rigidity.points must be an array or {\"grid\": n}");
      }
    }
  }
  return out;
}

inline ConstraintsDocument read_constraints(const std::string& path, const CageMesh& cage) {
  json doc;
  try {
    doc = json::parse(detail::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return parse_constraints(doc, cage);
}

}  // namespace mvc::io
