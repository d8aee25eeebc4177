// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/scheme_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcps {

namespace {

using Json = nlohmann::ordered_json;

QuadNum number_at(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ParseError("field '" + field + "' must be a number string");
  try {
    return QuadNum::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError("field '" + field + "': " + e.what(), e.offset());
  }
}

Vec2 vec_at(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError("field '" + field + "' must be a pair");
  return {number_at(j[0], field + "[0]"), number_at(j[1], field + "[1]")};
}

Json vec_json(const Vec2& v) { return Json::array({v.x.str(), v.y.str()}); }

const Json& require(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

void check_field(long long d, const QuadNum& v, const std::string& what) {
  if (!v.is_rational() && v.d() != d) {
    throw FieldMismatch(what + " lies in Q(sqrt " + std::to_string(v.d()) + "), not Q(sqrt " +
                        std::to_string(d) + ")");
  }
}

}  // namespace

std::string scheme_to_json(const Scheme& s) {
  Json j;
  j["d"] = s.d;
  j["basis"] = Json::array({vec_json(s.basis.col(0)), vec_json(s.basis.col(1))});
  j["translate"] = vec_json(s.translate);
  j["slope"] = s.slope.str();
  j["window"] = Json::array({s.window.lo.str(), s.window.hi.str()});
  j["convention"] = to_string(s.window.convention);
  j["axes"] = to_string(s.axes);
  if (s.axes == Axes::explicit_dir) j["internal_dir"] = vec_json(s.internal_dir);
  return j.dump(2) + "\n";
}

Scheme scheme_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw ParseError("scheme description must be a JSON object");
  if (const auto p = j.find("preset"); p != j.end()) {
    const std::string name = p->is_string() ? p->get<std::string>() : "";
    if (name == "fibonacci" || name == "fibonacci_full") return fibonacci_preset(FibonacciKind::full);
    if (name == "fibonacci_half") return fibonacci_preset(FibonacciKind::half);
    throw ParseError("unknown preset '" + name + "'");
  }
  const Json& jd = require(j, "d");
  if (!jd.is_number_integer()) throw ParseError("field 'd' must be an integer");
  const long long d = jd.get<long long>();
  const Json& jb = require(j, "basis");
  if (!jb.is_array() || jb.size() != 2) throw ParseError("field 'basis' must hold two columns");
  const Vec2 c0 = vec_at(jb[0], "basis[0]");
  const Vec2 c1 = vec_at(jb[1], "basis[1]");
  const Vec2 z = vec_at(require(j, "translate"), "translate");
  const QuadNum slope = number_at(require(j, "slope"), "slope");
  const Json& jw = require(j, "window");
  if (!jw.is_array() || jw.size() != 2) throw ParseError("field 'window' must be a pair");
  Interval w{number_at(jw[0], "window[0]"), number_at(jw[1], "window[1]"),
             Convention::half_open_right};
  if (const auto c = j.find("convention"); c != j.end()) {
    if (!c->is_string()) throw ParseError("field 'convention' must be a string");
    w.convention = parse_convention(c->get<std::string>());
  }
  Axes axes = Axes::coordinate;
  if (const auto a = j.find("axes"); a != j.end()) {
    if (!a->is_string()) throw ParseError("field 'axes' must be a string");
    axes = parse_axes(a->get<std::string>());
  }
  std::optional<Vec2> h;
  if (const auto hd = j.find("internal_dir"); hd != j.end()) h = vec_at(*hd, "internal_dir");
  for (const auto& [v, name] : {std::pair{c0.x, "basis"}, {c0.y, "basis"}, {c1.x, "basis"},
                                {c1.y, "basis"}, {z.x, "translate"}, {z.y, "translate"},
                                {slope, "slope"}, {w.lo, "window"}, {w.hi, "window"}}) {
    check_field(d, v, name);
  }
  Scheme s = build_scheme(Mat2::from_columns(c0, c1), z, slope, w, axes, h);
  if (s.d != 0 && s.d != d) {
    throw FieldMismatch("declared d = " + std::to_string(d) + " but the data lie in Q(sqrt " +
                        std::to_string(s.d) + ")");
  }
  s.d = d;
  return s;
}

Scheme load_scheme(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scheme file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scheme_from_json(buf.str());
}

void save_scheme(const Scheme& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << scheme_to_json(s);
}

WeightFn parse_weight(std::string_view spec, const Interval& window) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto k = s.find(sep, start);
      out.push_back(s.substr(start, k - start));
      if (k == std::string_view::npos) break;
      start = k + 1;
    }
    return out;
  };
  if (head == "indicator") {
    if (!rest.empty()) throw ParseError("indicator takes no parameters");
    return WeightFn::indicator(window);
  }
  if (head == "hat") {
    if (rest.empty()) {
      return make_hat(window, (window.lo + window.hi) / QuadNum(2), QuadNum(1));
    }
    const auto parts = split(rest, ':');
    if (parts.size() != 2) throw ParseError("hat expects hat:PEAK:VALUE");
    return make_hat(window, QuadNum::parse(parts[0]), QuadNum::parse(parts[1]));
  }
  if (head == "dome") {
    const QuadNum amp = rest.empty() ? QuadNum(1) : QuadNum::parse(rest);
    return make_c2_dome(window, amp);
  }
  if (head == "pl") {
    std::vector<Breakpoint> pts;
    for (const auto item : split(rest, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("pl breakpoints are X=V pairs");
      pts.push_back({QuadNum::parse(item.substr(0, eq)), QuadNum::parse(item.substr(eq + 1))});
    }
    return WeightFn::piecewise_linear(std::move(pts));
  }
  throw ParseError("unknown weight '" + std::string(head) + "'");
}

}  // namespace qcps
