#pragma once

// JSON container for curves, caps, generator configs and reports, plus CSV and
// text exports of reports. The schema is documented in docs/file-format.md.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "curvebound/cap.hpp"
#include "curvebound/charts.hpp"
#include "curvebound/error.hpp"
#include "curvebound/generator.hpp"
#include "curvebound/poly_curve.hpp"
#include "curvebound/support_curve.hpp"

namespace curvebound::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view format_tag = "curvebound/1";

// Decimal input may be a few ulps off the quadric; such points are projected.
inline constexpr double read_quadric_tol = 1e-9;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest(std::string_view bytes) { return fmt::format("fnv1a64:{:016x}", fnv1a64(bytes)); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::invalid_input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::invalid_input, "cannot write " + path);
  out << text;
  if (!out) throw error(errc::invalid_input, "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Schema helpers. Every failure names the offending field path.

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
  throw error(errc::schema, path + ": " + what);
}

inline json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw error(errc::schema, fmt::format("line {} column {}: malformed JSON", line, col));
  }
}

inline const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing field");
  return *it;
}

inline const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_fail(path, "number must be finite");
  return x;
}

inline std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) schema_fail(path, "expected a string");
  return v.get<std::string>();
}

inline std::uint64_t unsigned_int(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    schema_fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_fail(path, "expected an array");
  return v;
}

inline std::vector<double> tuple(const json& v, const std::string& path, std::size_t lo, std::size_t hi) {
  array(v, path);
  if (v.size() < lo || v.size() > hi)
    schema_fail(path, lo == hi ? fmt::format("expected {} numbers", lo) : fmt::format("expected {} to {} numbers", lo, hi));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], fmt::format("{}[{}]", path, i)));
  return out;
}

inline void check_header(const json& doc, const std::string& type) {
  if (!doc.is_object()) schema_fail("$", "top level must be an object");
  const std::string fmt_tag = string(field(doc, "$", "format"), "$.format");
  if (fmt_tag != format_tag) schema_fail("$.format", "unsupported format '" + fmt_tag + "'");
  const std::string t = string(field(doc, "$", "type"), "$.type");
  if (t != type) schema_fail("$.type", "expected '" + type + "', found '" + t + "'");
}

inline json header(const char* type) {
  json doc;
  doc["format"] = format_tag;
  doc["type"] = type;
  return doc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generator config.

inline json to_json(const GenConfig& cfg) {
  json j;
  j["kind"] = to_string(cfg.kind);
  j["seed"] = cfg.seed;
  j["c"] = cfg.c;
  j["lambda"] = cfg.lambda;
  j["size"] = cfg.size;
  j["amplitude"] = cfg.amplitude;
  return j;
}

/// Missing fields keep the defaults of `base`.
inline GenConfig gen_config_from_json(const json& j, const std::string& path, GenConfig base = {}) {
  if (!j.is_object()) detail::schema_fail(path, "expected an object");
  GenConfig cfg = base;
  if (const json* v = detail::optional_field(j, "kind")) {
    try {
      cfg.kind = gen_kind_from_string(detail::string(*v, path + ".kind"));
    } catch (const error& e) {
      if (e.code() == errc::schema) throw;
      detail::schema_fail(path + ".kind", "expected support, polyline or cap");
    }
  }
  if (const json* v = detail::optional_field(j, "seed")) cfg.seed = detail::unsigned_int(*v, path + ".seed");
  if (const json* v = detail::optional_field(j, "c")) cfg.c = detail::number(*v, path + ".c");
  if (const json* v = detail::optional_field(j, "lambda")) cfg.lambda = detail::number(*v, path + ".lambda");
  if (const json* v = detail::optional_field(j, "size")) cfg.size = detail::unsigned_int(*v, path + ".size");
  if (const json* v = detail::optional_field(j, "amplitude"))
    cfg.amplitude = detail::number(*v, path + ".amplitude");
  return cfg;
}

/// Config document: {"format", "type": "config", "generator": {...}}.
inline GenConfig read_gen_config(std::string_view text, GenConfig base = {}) {
  const json doc = detail::parse(text);
  detail::check_header(doc, "config");
  return gen_config_from_json(detail::field(doc, "$", "generator"), "$.generator", base);
}

inline std::string write_gen_config(const GenConfig& cfg) {
  json doc = detail::header("config");
  doc["generator"] = to_json(cfg);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Curve files.

struct CurveMeta {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::vector<std::string> chain;    ///< maps applied, oldest first
  std::optional<GenConfig> generator;

  bool operator==(const CurveMeta&) const = default;
};

struct CurveFile {
  double c = 0.0;
  std::variant<PolyCurve, SupportCurve> curve;
  CurveMeta meta;

  bool is_polyline() const { return std::holds_alternative<PolyCurve>(curve); }
  const PolyCurve& polyline() const { return std::get<PolyCurve>(curve); }
  const SupportCurve& support() const { return std::get<SupportCurve>(curve); }
};

namespace detail {

inline CurveMeta read_meta(const json& doc) {
  CurveMeta meta;
  const json* m = optional_field(doc, "meta");
  if (!m) return meta;
  if (!m->is_object()) schema_fail("$.meta", "expected an object");
  if (const json* v = optional_field(*m, "name")) meta.name = string(*v, "$.meta.name");
  if (const json* v = optional_field(*m, "seed")) meta.seed = unsigned_int(*v, "$.meta.seed");
  if (const json* v = optional_field(*m, "lambda")) meta.lambda = number(*v, "$.meta.lambda");
  if (const json* v = optional_field(*m, "chain")) {
    array(*v, "$.meta.chain");
    for (std::size_t i = 0; i < v->size(); ++i)
      meta.chain.push_back(string((*v)[i], fmt::format("$.meta.chain[{}]", i)));
  }
  if (const json* v = optional_field(*m, "generator")) meta.generator = gen_config_from_json(*v, "$.meta.generator");
  return meta;
}

inline json write_meta(const CurveMeta& meta) {
  json m = json::object();
  m["name"] = meta.name;
  m["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
  m["lambda"] = meta.lambda ? json(*meta.lambda) : json(nullptr);
  m["chain"] = meta.chain;
  if (meta.generator) m["generator"] = to_json(*meta.generator);
  return m;
}

/// A vertex is [x, y] in the projective chart about the origin (identity,
/// gnomonic, or Klein scaled by 1 / sqrt|c|), or [x, y, w] ambient.
inline PlanePoint read_vertex(const ModelPlane& plane, const json& v, const std::string& path) {
  const auto t = tuple(v, path, 2, 3);
  if (plane.euclidean()) {
    if (t.size() == 3 && t[2] != 0.0) schema_fail(path, "Euclidean vertices have w = 0");
    return PlanePoint(t[0], t[1]);
  }
  if (t.size() == 2) {
    const Vec2 g(t[0], t[1]);
    try {
      if (plane.sign() > 0) return plane.project(gnomonic_inverse(plane, g, plane.origin()).coords);
      return plane.project(klein_inverse(plane, g / plane.scale()).coords);
    } catch (const error&) {
      schema_fail(path, "chart coordinates outside the chart domain");
    }
  }
  const Vec3 a(t[0], t[1], t[2]);
  if (plane.sign() < 0 && !(a.z() > 0.0)) schema_fail(path, "hyperboloid vertex needs w > 0");
  if (!(plane.quadric_residual(a) <= read_quadric_tol)) schema_fail(path, "vertex is off the model quadric");
  const PlanePoint p(a);
  return plane.contains(p) ? p : plane.project(a);
}

inline json write_vertex(const ModelPlane& plane, const PlanePoint& p) {
  if (plane.euclidean()) return json::array({p.x(), p.y()});
  return json::array({p.coords.x(), p.coords.y(), p.coords.z()});
}

template <class F>
auto wrap_domain(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const error& e) {
    if (e.code() == errc::schema) throw;
    schema_fail(path, e.what());
  }
}

}  // namespace detail

inline CurveFile read_curve_json(const json& doc) {
  using namespace detail;
  check_header(doc, "curve");
  const json& space = field(doc, "$", "space");
  const double c = number(field(space, "$.space", "c"), "$.space.c");
  const std::string kind = string(field(doc, "$", "kind"), "$.kind");
  const json& data = array(field(doc, "$", "data"), "$.data");
  CurveMeta meta = read_meta(doc);
  const ModelPlane plane(c);
  if (kind == "polyline") {
    if (data.size() < 3) schema_fail("$.data", "a polyline needs at least 3 vertices");
    std::vector<PlanePoint> verts;
    for (std::size_t i = 0; i < data.size(); ++i)
      verts.push_back(read_vertex(plane, data[i], fmt::format("$.data[{}]", i)));
    return {c, wrap_domain("$.data", [&] { return PolyCurve(plane, std::move(verts)); }), std::move(meta)};
  }
  if (kind == "support") {
    if (c != 0.0) schema_fail("$.space.c", "support curves are Euclidean (c = 0)");
    const std::size_t n = data.size();
    if (n < 64 || (n & (n - 1)) != 0) schema_fail("$.data", "support samples need a power-of-two count >= 64");
    std::vector<double> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back(number(data[i], fmt::format("$.data[{}]", i)));
    return {c, wrap_domain("$.data", [&] { return SupportCurve(std::move(r)); }), std::move(meta)};
  }
  schema_fail("$.kind", "expected 'polyline' or 'support'");
}

inline CurveFile read_curve(std::string_view text) { return read_curve_json(detail::parse(text)); }

inline json curve_to_json(const CurveFile& file) {
  json doc = detail::header("curve");
  doc["space"] = {{"c", file.c}};
  json data = json::array();
  if (file.is_polyline()) {
    doc["kind"] = "polyline";
    const auto& curve = file.polyline();
    for (const auto& v : curve.vertices()) data.push_back(detail::write_vertex(curve.plane(), v));
  } else {
    doc["kind"] = "support";
    for (double r : file.support().radius()) data.push_back(r);
  }
  doc["data"] = std::move(data);
  doc["meta"] = detail::write_meta(file.meta);
  return doc;
}

/// One vertex or sample per line keeps fixtures diffable.
inline std::string write_curve(const CurveFile& file) {
  const json doc = curve_to_json(file);
  std::string out = "{\n";
  out += fmt::format("  \"format\": {},\n  \"type\": {},\n", doc["format"].dump(), doc["type"].dump());
  out += fmt::format("  \"space\": {},\n  \"kind\": {},\n", doc["space"].dump(), doc["kind"].dump());
  out += "  \"data\": [\n";
  const auto& data = doc["data"];
  for (std::size_t i = 0; i < data.size(); ++i)
    out += "    " + data[i].dump() + (i + 1 < data.size() ? ",\n" : "\n");
  out += "  ],\n  \"meta\": " + doc["meta"].dump() + "\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Cap files: {"format", "type": "cap", "base": [[x, y], ...], "interior": [[x, y, z], ...], "meta"}.

struct CapFile {
  std::vector<Vec2> base;
  std::vector<Vec3> interior;
  CurveMeta meta;
};

inline CapFile read_cap(std::string_view text) {
  using namespace detail;
  const json doc = parse(text);
  check_header(doc, "cap");
  CapFile out;
  const json& base = array(field(doc, "$", "base"), "$.base");
  if (base.size() < 3) schema_fail("$.base", "base polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto t = tuple(base[i], fmt::format("$.base[{}]", i), 2, 2);
    out.base.emplace_back(t[0], t[1]);
  }
  if (const json* interior = optional_field(doc, "interior")) {
    array(*interior, "$.interior");
    for (std::size_t i = 0; i < interior->size(); ++i) {
      const auto t = tuple((*interior)[i], fmt::format("$.interior[{}]", i), 3, 3);
      out.interior.emplace_back(t[0], t[1], t[2]);
    }
  }
  out.meta = read_meta(doc);
  return out;
}

inline std::string write_cap(const CapFile& cap) {
  std::string out = fmt::format("{{\n  \"format\": \"{}\",\n  \"type\": \"cap\",\n  \"base\": [\n", format_tag);
  for (std::size_t i = 0; i < cap.base.size(); ++i)
    out += "    " + json::array({cap.base[i].x(), cap.base[i].y()}).dump() + (i + 1 < cap.base.size() ? ",\n" : "\n");
  out += "  ],\n  \"interior\": [\n";
  for (std::size_t i = 0; i < cap.interior.size(); ++i) {
    const Vec3& p = cap.interior[i];
    out += "    " + json::array({p.x(), p.y(), p.z()}).dump() + (i + 1 < cap.interior.size() ? ",\n" : "\n");
  }
  out += "  ],\n  \"meta\": " + detail::write_meta(cap.meta).dump() + "\n}\n";
  return out;
}

/// Cap file of a generated cap: base vertices and the raised hull vertices.
inline CapFile cap_file(const ConvexCap& cap, CurveMeta meta = {}) {
  CapFile out;
  out.base.assign(cap.base().begin(), cap.base().end());
  const auto verts = cap.vertices();
  for (std::size_t i = cap.base_size(); i < verts.size(); ++i) out.interior.push_back(verts[i]);
  out.meta = std::move(meta);
  return out;
}

/// Sniffs the "type" field without validating the rest.
inline std::string document_type(std::string_view text) {
  const json doc = detail::parse(text);
  if (!doc.is_object()) detail::schema_fail("$", "top level must be an object");
  return detail::string(detail::field(doc, "$", "type"), "$.type");
}

// ---------------------------------------------------------------------------
// Report records.

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

enum class Status { pass, fail, invalid };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::invalid: return "invalid";
  }
  return "invalid";
}

inline int exit_code(Status s) { return s == Status::pass ? 0 : s == Status::fail ? 1 : 2; }

struct ReportRecord {
  std::string command;
  std::string input;
  std::string digest;
  Status status = Status::invalid;
  std::string message;
  std::vector<std::pair<std::string, Value>> fields;
  std::vector<std::pair<std::string, double>> tolerances;
  double wall_time = 0.0;

  void set(std::string key, Value v) { fields.emplace_back(std::move(key), std::move(v)); }
  void tol(std::string key, double v) { tolerances.emplace_back(std::move(key), v); }

  const Value* get(std::string_view key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }

  bool operator==(const ReportRecord&) const = default;
};

/// Rejects non-finite numbers; reports must be strictly valid JSON.
inline void validate(const ReportRecord& rec) {
  auto finite = [&](const std::string& key, double x) {
    if (!std::isfinite(x)) throw error(errc::invalid_input, "report field " + key + " is not finite");
  };
  for (const auto& [k, v] : rec.fields) {
    if (const double* d = std::get_if<double>(&v)) finite(k, *d);
    if (const auto* a = std::get_if<std::vector<double>>(&v))
      for (double x : *a) finite(k, x);
  }
  for (const auto& [k, v] : rec.tolerances) finite(k, v);
  finite("wall_time", rec.wall_time);
}

inline json to_json(const ReportRecord& rec) {
  validate(rec);
  json j;
  j["command"] = rec.command;
  j["input"] = rec.input;
  j["digest"] = rec.digest;
  j["status"] = to_string(rec.status);
  j["message"] = rec.message;
  json f = json::object();
  for (const auto& [k, v] : rec.fields) std::visit([&](const auto& x) { f[k] = x; }, v);
  j["fields"] = std::move(f);
  json t = json::object();
  for (const auto& [k, v] : rec.tolerances) t[k] = v;
  j["tolerances"] = std::move(t);
  j["wall_time"] = rec.wall_time;
  return j;
}

inline ReportRecord record_from_json(const json& j, const std::string& path) {
  using namespace detail;
  ReportRecord rec;
  rec.command = string(field(j, path, "command"), path + ".command");
  rec.input = string(field(j, path, "input"), path + ".input");
  rec.digest = string(field(j, path, "digest"), path + ".digest");
  const std::string st = string(field(j, path, "status"), path + ".status");
  if (st == "pass") rec.status = Status::pass;
  else if (st == "fail") rec.status = Status::fail;
  else if (st == "invalid") rec.status = Status::invalid;
  else schema_fail(path + ".status", "expected pass, fail or invalid");
  rec.message = string(field(j, path, "message"), path + ".message");
  const json& f = field(j, path, "fields");
  if (!f.is_object()) schema_fail(path + ".fields", "expected an object");
  for (auto it = f.begin(); it != f.end(); ++it) {
    const std::string p = path + ".fields." + it.key();
    const json& v = it.value();
    if (v.is_boolean()) rec.set(it.key(), v.get<bool>());
    else if (v.is_number_integer()) rec.set(it.key(), v.get<std::int64_t>());
    else if (v.is_number_float()) rec.set(it.key(), number(v, p));
    else if (v.is_string()) rec.set(it.key(), v.get<std::string>());
    else if (v.is_array()) {
      std::vector<double> a;
      for (std::size_t i = 0; i < v.size(); ++i) a.push_back(number(v[i], fmt::format("{}[{}]", p, i)));
      rec.set(it.key(), std::move(a));
    } else {
      schema_fail(p, "unsupported value type");
    }
  }
  const json& t = field(j, path, "tolerances");
  if (!t.is_object()) schema_fail(path + ".tolerances", "expected an object");
  for (auto it = t.begin(); it != t.end(); ++it) rec.tol(it.key(), number(it.value(), path + ".tolerances." + it.key()));
  rec.wall_time = number(field(j, path, "wall_time"), path + ".wall_time");
  return rec;
}

inline std::string write_records(const std::vector<ReportRecord>& recs) {
  json doc = detail::header("report");
  json arr = json::array();
  for (const auto& r : recs) arr.push_back(to_json(r));
  doc["records"] = std::move(arr);
  return doc.dump(2) + "\n";
}

inline std::vector<ReportRecord> read_records(std::string_view text) {
  const json doc = detail::parse(text);
  detail::check_header(doc, "report");
  const json& arr = detail::array(detail::field(doc, "$", "records"), "$.records");
  std::vector<ReportRecord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(record_from_json(arr[i], fmt::format("$.records[{}]", i)));
  return out;
}

namespace detail {

inline std::string format_value(const Value& v, std::string_view sep) {
  struct V {
    std::string_view sep;
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return fmt::format("{}", i); }
    std::string operator()(double d) const { return fmt::format("{}", d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<double>& a) const { return fmt::format("{}", fmt::join(a, sep)); }
  };
  return std::visit(V{sep}, v);
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// One row per record over the union of field names, first appearance order.
/// Arrays are joined with ';'. Absent fields are empty cells.
inline std::string write_csv(const std::vector<ReportRecord>& recs) {
  std::vector<std::string> keys, tols;
  auto add = [](std::vector<std::string>& list, const std::string& k) {
    if (std::find(list.begin(), list.end(), k) == list.end()) list.push_back(k);
  };
  for (const auto& r : recs) {
    validate(r);
    for (const auto& [k, v] : r.fields) add(keys, k);
    for (const auto& [k, v] : r.tolerances) add(tols, k);
  }
  std::string out = "command,input,digest,status,message";
  for (const auto& k : keys) out += "," + detail::csv_cell(k);
  for (const auto& k : tols) out += "," + detail::csv_cell("tol_" + k);
  out += ",wall_time\n";
  for (const auto& r : recs) {
    out += fmt::format("{},{},{},{},{}", detail::csv_cell(r.command), detail::csv_cell(r.input), r.digest,
                       to_string(r.status), detail::csv_cell(r.message));
    for (const auto& k : keys) {
      const Value* v = r.get(k);
      out += "," + (v ? detail::csv_cell(detail::format_value(*v, ";")) : std::string());
    }
    for (const auto& k : tols) {
      out += ",";
      for (const auto& [tk, tv] : r.tolerances)
        if (tk == k) out += fmt::format("{}", tv);
    }
    out += fmt::format(",{}\n", r.wall_time);
  }
  return out;
}

inline std::string write_text(const std::vector<ReportRecord>& recs) {
  std::string out;
  for (const auto& r : recs) {
    std::string status = to_string(r.status);
    for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out += fmt::format("{} {}: {}\n", r.command, r.input, status);
    if (!r.message.empty()) out += fmt::format("  note: {}\n", r.message);
    for (const auto& [k, v] : r.fields) {
      if (const auto* a = std::get_if<std::vector<double>>(&v); a && a->size() > 8) {
        out += fmt::format("  {:<22} [{} values]\n", k, a->size());
        continue;
      }
      out += fmt::format("  {:<22} {}\n", k, detail::format_value(v, ", "));
    }
    for (const auto& [k, v] : r.tolerances) out += fmt::format("  tol.{:<18} {}\n", k, v);
    out += fmt::format("  {:<22} {}\n  {:<22} {:.3f} s\n", "digest", r.digest, "wall_time", r.wall_time);
  }
  return out;
}

}  // namespace curvebound::io
