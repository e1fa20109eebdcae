#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "steklov/cli.hpp"

namespace steklov::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Entry {
  std::string value;
  std::size_t line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"name"}},
      {"geometry", {"type", "curvature", "dim", "radius", "curve"}},
      {"method", {"type", "refinement", "mass"}},
      {"spectrum", {"count"}},
      {"checks", {"list"}},
      {"case", {"id", "a", "kappa_minus", "kappa_plus"}},
      {"output", {"dir"}},
  };
  return keys;
}

double parse_double(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v))
    throw ConfigError(e.line, key + ": expected a number, got '" + e.value + "'");
  return v;
}

long parse_int(const Entry& e, const std::string& key) {
  long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) throw ConfigError(e.line, key + ": expected an integer, got '" + e.value + "'");
  return v;
}

std::optional<double> parse_auto_double(const Entry& e, const std::string& key) {
  if (lower(e.value) == "auto") return std::nullopt;
  return parse_double(e, key);
}

CurveSpec parse_curve(const Entry& e) {
  std::istringstream in(e.value);
  std::string kind;
  in >> kind;
  kind = lower(kind);
  CurveSpec spec;
  std::string token;
  while (in >> token) {
    Entry t{token, e.line};
    spec.params.push_back(parse_double(t, "curve"));
  }
  auto need = [&](std::size_t n) {
    if (spec.params.size() != n)
      throw ConfigError(e.line, "curve " + kind + " takes " + std::to_string(n) + " number(s)");
  };
  if (kind == "circle") {
    spec.kind = CurveKind::Circle;
    need(1);
  } else if (kind == "geodesic_circle") {
    spec.kind = CurveKind::GeodesicCircle;
    need(1);
  } else if (kind == "ellipse") {
    spec.kind = CurveKind::Ellipse;
    need(2);
  } else if (kind == "polygon") {
    spec.kind = CurveKind::Polygon;
    if (spec.params.size() < 6 || spec.params.size() % 2 != 0)
      throw ConfigError(e.line, "curve polygon takes at least three x y pairs");
  } else if (kind == "star") {
    spec.kind = CurveKind::Star;
    if (spec.params.size() < 3) throw ConfigError(e.line, "curve star takes at least three radii");
  } else {
    throw ConfigError(e.line, "unknown curve '" + kind + "' (circle, geodesic_circle, ellipse, polygon, star)");
  }
  for (std::size_t i = 0; i < spec.params.size(); ++i)
    if (spec.kind != CurveKind::Polygon && !(spec.params[i] > 0.0))
      throw ConfigError(e.line, "curve " + kind + " parameters must be positive");
  return spec;
}

Check parse_check(const std::string& name, std::size_t line) {
  static const std::map<std::string, Check> names{
      {"theorem1", Check::Theorem1},         {"corollary1", Check::Corollary1}, {"weyl", Check::Weyl},
      {"buser", Check::Buser},               {"pohozaev", Check::Pohozaev},
      {"proposition1", Check::Proposition1}, {"q_bounds", Check::QBounds},
  };
  const auto it = names.find(lower(name));
  if (it == names.end()) throw ConfigError(line, "unknown check '" + name + "'");
  return it->second;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string to_string(Check c) {
  switch (c) {
    case Check::Theorem1: return "theorem1";
    case Check::Corollary1: return "corollary1";
    case Check::Weyl: return "weyl";
    case Check::Buser: return "buser";
    case Check::Pohozaev: return "pohozaev";
    case Check::Proposition1: return "proposition1";
    case Check::QBounds: return "q_bounds";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::map<std::string, std::size_t> section_line;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "malformed section header");
      current = lower(trim(s.substr(1, s.size() - 2)));
      if (!known_keys().contains(current)) throw ConfigError(line, "unknown section [" + current + "]");
      if (section_line.contains(current)) throw ConfigError(line, "duplicate section [" + current + "]");
      section_line[current] = line;
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    if (current.empty()) throw ConfigError(line, "key outside of any section");
    const std::string key = lower(trim(s.substr(0, eq)));
    const std::string value = trim(s.substr(eq + 1));
    if (!known_keys().at(current).contains(key))
      throw ConfigError(line, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty() && key != "list") throw ConfigError(line, "empty value for '" + key + "'");
    if (!sections[current].emplace(key, Entry{value, line}).second)
      throw ConfigError(line, "duplicate key '" + key + "'");
  }

  auto find = [&](const std::string& sec, const std::string& key) -> const Entry* {
    const auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const Entry& {
    const Entry* e = find(sec, key);
    if (!e) throw ConfigError(section_line.contains(sec) ? section_line[sec] : 0, "missing [" + sec + "] " + key);
    return *e;
  };

  RunConfig cfg;
  if (const Entry* e = find("domain", "name")) {
    if (e->value.find_first_of("/\\, \t") != std::string::npos)
      throw ConfigError(e->line, "name must not contain separators or spaces");
    cfg.name = e->value;
  }

  const Entry& gtype = require("geometry", "type");
  const std::string gt = lower(gtype.value);
  if (gt == "ball") cfg.geometry = GeometryKind::Ball;
  else if (gt == "planar") cfg.geometry = GeometryKind::Planar;
  else throw ConfigError(gtype.line, "geometry type must be ball or planar");
  if (const Entry* e = find("geometry", "curvature")) cfg.curvature = parse_double(*e, "curvature");

  const Entry* dim = find("geometry", "dim");
  if (cfg.geometry == GeometryKind::Ball) {
    const Entry& d = require("geometry", "dim");
    const long v = parse_int(d, "dim");
    if (v < 2 || v > 16) throw ConfigError(d.line, "dim must be between 2 and 16");
    cfg.dim = static_cast<int>(v);
    const Entry& r = require("geometry", "radius");
    cfg.radius = parse_double(r, "radius");
    if (!(cfg.radius > 0.0)) throw ConfigError(r.line, "radius must be positive");
    if (const Entry* c = find("geometry", "curve")) throw ConfigError(c->line, "curve is for planar geometry");
  } else {
    if (dim && parse_int(*dim, "dim") != 2) throw ConfigError(dim->line, "planar geometry has dim 2");
    cfg.dim = 2;
    if (const Entry* r = find("geometry", "radius")) throw ConfigError(r->line, "radius is for ball geometry");
    cfg.curve = parse_curve(require("geometry", "curve"));
  }

  const Entry& mtype = require("method", "type");
  const std::string mt = lower(mtype.value);
  if (mt == "exact") cfg.method = Method::Exact;
  else if (mt == "fem") cfg.method = Method::Fem;
  else throw ConfigError(mtype.line, "method type must be exact or fem");
  if (cfg.method == Method::Exact && cfg.geometry != GeometryKind::Ball)
    throw ConfigError(mtype.line, "exact method requires ball geometry");
  if (cfg.method == Method::Fem && cfg.geometry != GeometryKind::Planar)
    throw ConfigError(mtype.line, "fem requires planar geometry");
  if (const Entry* e = find("method", "refinement")) {
    if (cfg.method != Method::Fem) throw ConfigError(e->line, "refinement is for the fem method");
    const long v = parse_int(*e, "refinement");
    if (v < 0 || v > 10) throw ConfigError(e->line, "refinement must be between 0 and 10");
    cfg.refinement = static_cast<int>(v);
  }
  if (const Entry* e = find("method", "mass")) {
    if (cfg.method != Method::Fem) throw ConfigError(e->line, "mass is for the fem method");
    const std::string m = lower(e->value);
    if (m == "consistent") cfg.mass = fem::MassMode::Consistent;
    else if (m == "lumped") cfg.mass = fem::MassMode::Lumped;
    else throw ConfigError(e->line, "mass must be consistent or lumped");
  }

  const Entry& count = require("spectrum", "count");
  const long j = parse_int(count, "count");
  if (j < 2 || j > 100000) throw ConfigError(count.line, "count must be between 2 and 100000");
  cfg.count = static_cast<std::size_t>(j);

  if (const Entry* e = find("checks", "list")) {
    std::string item;
    std::istringstream list(e->value);
    while (std::getline(list, item, ',')) {
      item = trim(item);
      if (item.empty() || lower(item) == "none") continue;
      const Check c = parse_check(item, e->line);
      if (std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end())
        throw ConfigError(e->line, "check '" + item + "' listed twice");
      if (cfg.method == Method::Exact &&
          (c == Check::Pohozaev || c == Check::Proposition1 || c == Check::QBounds))
        throw ConfigError(e->line, "check '" + item + "' requires the fem method");
      cfg.checks.push_back(c);
    }
  }

  if (const Entry* e = find("case", "id")) {
    const std::string v = lower(e->value);
    if (v == "case1") cfg.case_params.id = spaceform::CaseId::Case1;
    else if (v == "case2") cfg.case_params.id = spaceform::CaseId::Case2;
    else if (v != "auto") throw ConfigError(e->line, "case id must be auto, case1 or case2");
  }
  if (const Entry* e = find("case", "a")) {
    cfg.case_params.a = parse_auto_double(*e, "a");
    if (cfg.case_params.a && !(*cfg.case_params.a > 0.0)) throw ConfigError(e->line, "a must be positive");
  }
  if (const Entry* e = find("case", "kappa_minus")) cfg.case_params.kappa_minus = parse_auto_double(*e, "kappa_minus");
  if (const Entry* e = find("case", "kappa_plus")) cfg.case_params.kappa_plus = parse_auto_double(*e, "kappa_plus");
  if (cfg.geometry == GeometryKind::Planar && cfg.curve.kind == CurveKind::Polygon) {
    const CaseOverrides& o = cfg.case_params;
    if (!(o.id && o.a && o.kappa_minus && o.kappa_plus))
      throw ConfigError(section_line.contains("case") ? section_line["case"] : 0,
                        "polygon boundaries need explicit case parameters (id, a, kappa_minus, kappa_plus)");
  }

  if (const Entry* e = find("output", "dir")) cfg.output_dir = e->value;
  return cfg;
}

}  // namespace steklov::cli
