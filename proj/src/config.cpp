#include "ifs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ifs {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key + "' in " + where);
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError("expected a number for " + where);
  return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError("expected an array for " + where);
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e, where));
  return out;
}

Point point_from_json(const json& v, int dim, const std::string& where) {
  const auto coords = number_list(v, where);
  if (static_cast<int>(coords.size()) != dim) {
    throw ConfigError(where + " must have " + std::to_string(dim) +
                      " coordinates");
  }
  return make_point(coords);
}

Similarity map_from_json(const json& m, int dim, size_t index) {
  const std::string where = "maps[" + std::to_string(index) + "]";
  if (!m.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(
      m, {"ratio", "sign", "angle", "reflect", "ortho", "linear", "translate"},
      where);
  const Point t = point_from_json(require(m, "translate", where),
                                  dim, where + ".translate");
  try {
    if (m.contains("linear")) {
      if (m.contains("ratio") || m.contains("sign") || m.contains("angle") ||
          m.contains("reflect") || m.contains("ortho")) {
        throw ConfigError(where + ": 'linear' excludes the similarity keys");
      }
      const json& lin = m.at("linear");
      if (!lin.is_array()) throw ConfigError(where + ".linear must be a matrix");
      std::vector<double> flat;
      for (const auto& row : lin) {
        const auto r = number_list(row, where + ".linear");
        if (static_cast<int>(r.size()) != dim) {
          throw ConfigError(where + ".linear must be " + std::to_string(dim) +
                            "x" + std::to_string(dim));
        }
        flat.insert(flat.end(), r.begin(), r.end());
      }
      if (static_cast<int>(flat.size()) != dim * dim) {
        throw ConfigError(where + ".linear must be " + std::to_string(dim) +
                          "x" + std::to_string(dim));
      }
      return Similarity::from_linear(dim, flat, t);
    }
    const double ratio = number(require(m, "ratio", where), where + ".ratio");
    if (!(ratio > 0.0) || !(ratio < 1.0)) {
      throw ConfigError(where + ".ratio must lie in (0,1)");
    }
    if (dim == 1) {
      if (m.contains("angle") || m.contains("reflect") || m.contains("ortho")) {
        throw ConfigError(where + ": angle/reflect/ortho invalid for d=1");
      }
      int sign = 1;
      if (m.contains("sign")) {
        sign = static_cast<int>(number(m.at("sign"), where + ".sign"));
      }
      return Similarity::line(ratio, sign, t[0]);
    }
    if (m.contains("sign")) {
      throw ConfigError(where + ": 'sign' is only valid for d=1");
    }
    if (m.contains("ortho")) {
      if (m.contains("angle") || m.contains("reflect")) {
        throw ConfigError(where + ": 'ortho' excludes angle/reflect");
      }
      const json& o = m.at("ortho");
      std::vector<double> flat;
      for (const auto& row : o) {
        const auto r = number_list(row, where + ".ortho");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return Similarity::from_orthogonal(dim, ratio, flat, t);
    }
    if (dim == 2) {
      double angle = 0.0;
      bool reflect = false;
      if (m.contains("angle")) angle = number(m.at("angle"), where + ".angle");
      if (m.contains("reflect")) {
        if (!m.at("reflect").is_boolean()) {
          throw ConfigError(where + ".reflect must be a boolean");
        }
        reflect = m.at("reflect").get<bool>();
      }
      return Similarity::planar(ratio, angle, reflect, t[0], t[1]);
    }
    if (m.contains("angle") || m.contains("reflect")) {
      throw ConfigError(where + ": angle/reflect only valid for d=2");
    }
    std::vector<double> id(static_cast<size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) id[static_cast<size_t>(i * dim + i)] = 1.0;
    return Similarity::from_orthogonal(dim, ratio, id, t);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

CondensationSet condensation_from_json(const json& c, int dim) {
  const std::string where = "condensation";
  if (!c.is_object()) throw ConfigError(where + " must be an object");
  const std::string type =
      require(c, "type", where).is_string()
          ? c.at("type").get<std::string>()
          : throw ConfigError(where + ".type must be a string");
  try {
    if (type == "none") {
      reject_unknown_keys(c, {"type"}, where);
      return CondensationSet::empty(dim);
    }
    if (type == "points") {
      reject_unknown_keys(c, {"type", "points"}, where);
      const json& pts = require(c, "points", where);
      if (!pts.is_array() || pts.empty()) {
        throw ConfigError(where + ".points must be a nonempty array");
      }
      std::vector<Point> points;
      for (const auto& p : pts) {
        points.push_back(point_from_json(p, dim, where + ".points"));
      }
      return CondensationSet::point_list(std::move(points));
    }
    if (type == "segment") {
      reject_unknown_keys(c, {"type", "a", "b"}, where);
      return CondensationSet::segment(
          point_from_json(require(c, "a", where), dim, where + ".a"),
          point_from_json(require(c, "b", where), dim, where + ".b"));
    }
    if (type == "circle" || type == "disk") {
      reject_unknown_keys(c, {"type", "center", "radius"}, where);
      const Point center =
          point_from_json(require(c, "center", where), dim, where + ".center");
      const double radius =
          number(require(c, "radius", where), where + ".radius");
      return type == "circle" ? CondensationSet::circle(center, radius)
                              : CondensationSet::disk(center, radius);
    }
    if (type == "box") {
      reject_unknown_keys(c, {"type", "lo", "hi"}, where);
      return CondensationSet::box(
          point_from_json(require(c, "lo", where), dim, where + ".lo"),
          point_from_json(require(c, "hi", where), dim, where + ".hi"));
    }
    if (type == "union") {
      reject_unknown_keys(c, {"type", "parts"}, where);
      const json& parts = require(c, "parts", where);
      if (!parts.is_array()) {
        throw ConfigError(where + ".parts must be an array");
      }
      std::vector<CondensationSet> sub;
      for (const auto& p : parts) sub.push_back(condensation_from_json(p, dim));
      return CondensationSet::union_of(std::move(sub));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".type '" + type + "' is not recognized");
}

Sft codespace_from_json(const json& c, int n) {
  const std::string where = "codespace";
  if (!c.is_object()) throw ConfigError(where + " must be an object");
  const std::string type =
      require(c, "type", where).is_string()
          ? c.at("type").get<std::string>()
          : throw ConfigError(where + ".type must be a string");
  if (type == "full") {
    reject_unknown_keys(c, {"type"}, where);
    return Sft::full_shift(n);
  }
  if (type != "sft") {
    throw ConfigError(where + ".type must be 'full' or 'sft'");
  }
  reject_unknown_keys(c, {"type", "transitions", "initial"}, where);
  const json& tj = require(c, "transitions", where);
  if (!tj.is_array() || static_cast<int>(tj.size()) != n) {
    throw ConfigError(where + ".transitions must be an NxN 0/1 matrix");
  }
  std::vector<std::vector<int>> transitions;
  for (const auto& row : tj) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ConfigError(where + ".transitions must be an NxN 0/1 matrix");
    }
    std::vector<int> r;
    for (const auto& e : row) {
      const double v = number(e, where + ".transitions");
      if (v != 0.0 && v != 1.0) {
        throw ConfigError(where + ".transitions entries must be 0 or 1");
      }
      r.push_back(static_cast<int>(v));
    }
    transitions.push_back(std::move(r));
  }
  const json& ij = require(c, "initial", where);
  if (!ij.is_array() || ij.empty()) {
    throw ConfigError(where + ".initial must be a nonempty symbol list");
  }
  std::vector<int> initial;
  for (const auto& e : ij) {
    const double v = number(e, where + ".initial");
    if (v < 1 || v > n || v != std::floor(v)) {
      throw ConfigError(where + ".initial symbols must lie in 1..N");
    }
    initial.push_back(static_cast<int>(v));
  }
  try {
    return Sft(n, transitions, initial);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

SystemSpec parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc,
                      {"dimension", "maps", "codespace", "condensation",
                       "probabilities", "ambient", "osc_asserted"},
                      "config root");
  const double dv = number(require(doc, "dimension", "config root"), "dimension");
  if (dv < 1 || dv > kMaxDim || dv != std::floor(dv)) {
    throw ConfigError("dimension must be an integer in 1..4");
  }
  const int dim = static_cast<int>(dv);

  const json& ambient = require(doc, "ambient", "config root");
  reject_unknown_keys(ambient, {"lo", "hi"}, "ambient");
  SystemSpec spec;
  try {
    spec.ambient = make_box(
        point_from_json(require(ambient, "lo", "ambient"), dim, "ambient.lo"),
        point_from_json(require(ambient, "hi", "ambient"), dim, "ambient.hi"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ambient: ") + e.what());
  }

  const json& maps = require(doc, "maps", "config root");
  if (!maps.is_array() || maps.empty()) {
    throw ConfigError("maps must be a nonempty array");
  }
  for (size_t i = 0; i < maps.size(); ++i) {
    spec.maps.push_back(map_from_json(maps[i], dim, i));
  }

  spec.codespace = codespace_from_json(require(doc, "codespace", "config root"),
                                       static_cast<int>(maps.size()));
  const auto closure = validate_shift_closed(spec.codespace);
  if (!closure.ok) {
    std::ostringstream os;
    os << "codespace is not closed under the shift; violations:";
    for (const auto& [i, j] : closure.violations) {
      os << " (" << i << "," << j << ")";
    }
    throw ConfigError(os.str());
  }

  spec.condensation =
      condensation_from_json(require(doc, "condensation", "config root"), dim);

  if (doc.contains("probabilities")) {
    spec.probabilities = number_list(doc.at("probabilities"), "probabilities");
  }
  if (doc.contains("osc_asserted")) {
    if (!doc.at("osc_asserted").is_boolean()) {
      throw ConfigError("osc_asserted must be a boolean");
    }
    spec.osc_asserted = doc.at("osc_asserted").get<bool>();
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

SystemSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

json point_to_json(const Point& p) {
  json arr = json::array();
  for (int i = 0; i < p.dim; ++i) arr.push_back(p[i]);
  return arr;
}

json condensation_to_json(const CondensationSet& c) {
  json out;
  switch (c.kind) {
    case ShapeKind::Empty:
      out["type"] = "none";
      return out;
    case ShapeKind::PointList: {
      out["type"] = "points";
      json pts = json::array();
      for (const auto& p : c.points) pts.push_back(point_to_json(p));
      out["points"] = pts;
      return out;
    }
    case ShapeKind::Segment:
      out["type"] = "segment";
      out["a"] = point_to_json(c.a);
      out["b"] = point_to_json(c.b);
      return out;
    case ShapeKind::Circle:
    case ShapeKind::Disk:
      out["type"] = c.kind == ShapeKind::Circle ? "circle" : "disk";
      out["center"] = point_to_json(c.center);
      out["radius"] = c.radius;
      return out;
    case ShapeKind::Box:
      out["type"] = "box";
      out["lo"] = point_to_json(c.a);
      out["hi"] = point_to_json(c.b);
      return out;
    case ShapeKind::Union: {
      out["type"] = "union";
      json parts = json::array();
      for (const auto& p : c.parts) parts.push_back(condensation_to_json(p));
      out["parts"] = parts;
      return out;
    }
  }
  return out;
}

}  // namespace

std::string emit_config_text(const SystemSpec& spec) {
  json doc;
  doc["dimension"] = spec.dim();
  json maps = json::array();
  for (const auto& f : spec.maps) {
    json m;
    // exact round trip: always emit the full linear part unless the map is a
    // d=1 similarity, whose sign form is exact too
    if (spec.dim() == 1 && f.exact_similarity) {
      m["ratio"] = f.ratio;
      m["sign"] = f.linear_at(0, 0) >= 0.0 ? 1 : -1;
    } else {
      json lin = json::array();
      for (int r = 0; r < spec.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < spec.dim(); ++c) row.push_back(f.linear_at(r, c));
        lin.push_back(row);
      }
      m["linear"] = lin;
    }
    m["translate"] = point_to_json(f.translation);
    maps.push_back(m);
  }
  doc["maps"] = maps;

  json cs;
  if (spec.codespace.is_full_shift()) {
    cs["type"] = "full";
  } else {
    cs["type"] = "sft";
    const int n = spec.codespace.alphabet_size();
    json t = json::array();
    for (int i = 1; i <= n; ++i) {
      json row = json::array();
      for (int j = 1; j <= n; ++j) {
        row.push_back(spec.codespace.raw_transition(i, j) ? 1 : 0);
      }
      t.push_back(row);
    }
    cs["transitions"] = t;
    cs["initial"] = spec.codespace.raw_initial();
  }
  doc["codespace"] = cs;
  doc["condensation"] = condensation_to_json(spec.condensation);
  if (spec.probabilities) doc["probabilities"] = *spec.probabilities;
  json ambient;
  ambient["lo"] = point_to_json(spec.ambient.lo);
  ambient["hi"] = point_to_json(spec.ambient.hi);
  doc["ambient"] = ambient;
  doc["osc_asserted"] = spec.osc_asserted;
  return doc.dump(2) + "\n";
}

void emit_config(const SystemSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << emit_config_text(spec);
}

}  // namespace ifs
