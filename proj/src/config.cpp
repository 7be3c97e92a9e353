#include "induced/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace induced {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

// A complex entry is a number or a [re, im] pair.
Complex complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(where, "expected a number or a [re, im] pair");
}

CVector complex_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
  CVector out(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) out[static_cast<Index>(i)] = complex_value(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

RVector real_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
  RVector out(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) out[static_cast<Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

Normalization normalization_from(const std::string& s, const std::string& where) {
  if (s == "auto") return Normalization::Auto;
  if (s == "quarter") return Normalization::Quarter;
  if (s == "plain") return Normalization::Plain;
  fail(where, "unknown normalization '" + s + "' (auto, quarter, plain)");
}

std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::Auto: return "auto";
    case Normalization::Quarter: return "quarter";
    case Normalization::Plain: return "plain";
  }
  return "auto";
}

template <class T>
void optional_int(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (j.contains(key)) out = integer(j.at(key), where + "." + key);
}

Expectations parse_expect(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  static const std::vector<std::string> known = {
      "lines",     "spanning_lines", "creations", "annihilations", "min_events", "crossings", "min_crossings",
      "factors_with_roots", "max_roots", "min_roots", "regime", "pattern", "periodic_separation"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(where, "unknown field '" + key + "'");
  }
  Expectations e;
  optional_int(j, "lines", e.lines, where);
  optional_int(j, "spanning_lines", e.spanning_lines, where);
  optional_int(j, "creations", e.creations, where);
  optional_int(j, "annihilations", e.annihilations, where);
  optional_int(j, "min_events", e.min_events, where);
  optional_int(j, "crossings", e.crossings, where);
  optional_int(j, "min_crossings", e.min_crossings, where);
  optional_int(j, "factors_with_roots", e.factors_with_roots, where);
  optional_int(j, "max_roots", e.max_roots, where);
  optional_int(j, "min_roots", e.min_roots, where);
  if (j.contains("regime")) e.regime = text(j.at("regime"), where + ".regime");
  if (j.contains("pattern")) e.pattern = text(j.at("pattern"), where + ".pattern");
  if (j.contains("periodic_separation")) {
    if (!j.at("periodic_separation").is_boolean()) fail(where + ".periodic_separation", "expected true or false");
    e.periodic_separation = j.at("periodic_separation").get<bool>();
  }
  return e;
}

}  // namespace

ModelSpec model_from_json(const json& j, const std::string& where) {
  const std::string name = text(field(j, "name", where), where + ".name");
  const double C = number_or(j, "C", 0.0, where);
  const double gamma = number_or(j, "gamma", 1.0, where);
  if (name == "polynomial") {
    const auto norm = j.contains("normalization")
                          ? normalization_from(text(j.at("normalization"), where + ".normalization"), where + ".normalization")
                          : Normalization::Auto;
    return PolynomialProduct{C, norm};
  }
  if (name == "sinh_pair") return SinhPair{C};
  if (name == "kdv") return KdVDeterminant{};
  if (name == "sinh_gordon") return SinhGordonDeterminant{};
  if (name == "cm") return CharacteristicCM{gamma};
  if (name == "rs") return CharacteristicRS{gamma};
  if (name == "relativistic_pair") return RelativisticPair{C};
  fail(where + ".name", "unknown model '" + name + "' (polynomial, sinh_pair, kdv, sinh_gordon, cm, rs, relativistic_pair)");
}

json model_to_json(const ModelSpec& model) {
  json j;
  j["name"] = std::string(model_name(model));
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, PolynomialProduct>) {
          j["C"] = m.C;
          j["normalization"] = std::string(normalization_name(m.normalization));
        } else if constexpr (std::is_same_v<M, SinhPair> || std::is_same_v<M, RelativisticPair>) {
          j["C"] = m.C;
        } else if constexpr (std::is_same_v<M, CharacteristicCM> || std::is_same_v<M, CharacteristicRS>) {
          j["gamma"] = m.gamma;
        }
      },
      model);
  return j;
}

RunConfig parse_config(const json& doc, const std::string& source) {
  if (!doc.is_object()) fail(source, "top level must be an object");
  RunConfig c;
  c.name = doc.contains("name") ? text(doc.at("name"), source + ".name") : source;
  c.model = model_from_json(field(doc, "model", source), source + ".model");
  c.dispersion = doc.contains("dispersion") ? dispersion_from_string(text(doc.at("dispersion"), source + ".dispersion"))
                                            : default_dispersion(c.model);

  if (doc.contains("epsilon")) {
    const auto& e = doc.at("epsilon");
    if (!e.is_array()) fail(source + ".epsilon", "expected an array of +1/-1");
    for (size_t i = 0; i < e.size(); ++i) {
      const int s = integer(e[i], source + ".epsilon[" + std::to_string(i) + "]");
      if (s != 1 && s != -1) fail(source + ".epsilon[" + std::to_string(i) + "]", "expected +1 or -1");
      c.epsilon.push_back(s);
    }
  }
  if (doc.contains("pairing")) {
    const auto& p = doc.at("pairing");
    if (!p.is_array()) fail(source + ".pairing", "expected an array of indices");
    std::vector<Index> pairing;
    for (size_t i = 0; i < p.size(); ++i) pairing.push_back(integer(p[i], source + ".pairing[" + std::to_string(i) + "]"));
    c.pairing = pairing;
  }

  const std::string iw = source + ".initial";
  const auto& init = field(doc, "initial", source);
  const bool has_phase = init.contains("p");
  const bool has_cauchy = init.contains("x") || init.contains("v");
  if (has_phase == has_cauchy) fail(iw, "give either phase variables {q (or a), p} or Cauchy data {x, v}");
  if (has_phase) {
    const char* qkey = init.contains("q") ? "q" : "a";
    const CVector q = complex_vector(field(init, qkey, iw), iw + "." + qkey);
    const CVector p = complex_vector(init.at("p"), iw + ".p");
    if (q.size() != p.size()) fail(iw, "q and p differ in length");
    c.phase = PhasePoint::make(q, p, c.pairing.value_or(std::vector<Index>{}), c.epsilon);
    validate(*c.phase, c.model);
  } else {
    CauchyData data;
    data.x = real_vector(field(init, "x", iw), iw + ".x");
    data.v = real_vector(field(init, "v", iw), iw + ".v");
    data.t_ref = number_or(init, "t_ref", 0.0, iw);
    if (data.x.size() != data.v.size()) fail(iw, "x and v differ in length");
    c.cauchy = data;
  }

  if (doc.contains("time")) {
    const auto& t = doc.at("time");
    const std::string tw = source + ".time";
    c.time.t0 = number(field(t, "t0", tw), tw + ".t0");
    c.time.t1 = number(field(t, "t1", tw), tw + ".t1");
    c.time.dt = number(field(t, "dt", tw), tw + ".dt");
  }
  if (!(c.time.t0 < c.time.t1)) fail(source + ".time", "t0 must be below t1");
  if (!(c.time.dt > 0.0)) fail(source + ".time.dt", "dt must be positive");

  if (doc.contains("window")) {
    const auto& w = doc.at("window");
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") fail(source + ".window", "expected \"auto\" or [lo, hi]");
    } else {
      const RVector lohi = real_vector(w, source + ".window");
      if (lohi.size() != 2 || !(lohi[0] < lohi[1])) fail(source + ".window", "expected [lo, hi] with lo < hi");
      c.window = Window{lohi[0], lohi[1]};
    }
  }
  if (doc.contains("n_scan")) {
    c.n_scan = integer(doc.at("n_scan"), source + ".n_scan");
    if (c.n_scan < 16) fail(source + ".n_scan", "n_scan must be at least 16");
  }
  if (doc.contains("frame")) {
    const std::string f = text(doc.at("frame"), source + ".frame");
    if (f == "lab") {
      c.frame = Frame::Lab;
    } else if (f != "native") {
      fail(source + ".frame", "expected \"native\" or \"lab\"");
    }
    if (c.frame == Frame::Lab && !is_relativistic(c.model)) fail(source + ".frame", "the lab frame needs a relativistic model");
  }
  if (doc.contains("expect")) c.expect = parse_expect(doc.at("expect"), source + ".expect");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  RunConfig c = parse_config(doc, path.filename().string());
  if (!doc.contains("name")) c.name = path.stem().string();
  return c;
}

std::vector<RunConfig> load_config_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::ConfigError, dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunConfig> out;
  for (const auto& f : files) out.push_back(load_config(f));
  return out;
}

PhasePoint initial_point(const RunConfig& c) {
  if (c.phase) return *c.phase;
  const CauchyData& data = *c.cauchy;
  PhasePoint point;
  if (const auto* m = std::get_if<PolynomialProduct>(&c.model);
      m && data.x.size() == 2 && polynomial_constant(*m, 2) == 0.25 * m->C && c.dispersion == Dispersion::Quadratic) {
    point = cauchy_poly2(m->C, data);
  } else if (const auto* s = std::get_if<SinhPair>(&c.model); s && c.dispersion == Dispersion::Quadratic) {
    point = cauchy_sinh2(s->C, data);
  } else {
    CauchyOptions opts;
    opts.epsilon = c.epsilon;
    opts.pairing = c.pairing;
    point = solve_cauchy(c.model, c.dispersion, data, opts);
  }
  // The closed forms return the point at t_ref.
  return data.t_ref == 0.0 ? point : evolve(point, c.dispersion, -data.t_ref);
}

TrackerOptions tracker_options(const RunConfig& c) {
  TrackerOptions o;
  o.roots.n_scan = c.n_scan;
  o.frame = c.frame;
  if (c.window) {
    o.auto_window = false;
    o.roots.window = *c.window;
  }
  return o;
}

std::optional<Window> parse_window(const std::string& s) {
  if (s == "auto") return std::nullopt;
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::ConfigError, "--window: expected lo,hi or auto");
  try {
    size_t used = 0;
    const double lo = std::stod(s.substr(0, comma), &used);
    const std::string rest = s.substr(comma + 1);
    size_t used2 = 0;
    const double hi = std::stod(rest, &used2);
    if (used2 != rest.size() || !(lo < hi)) throw std::invalid_argument("bad window");
    return Window{lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ConfigError, "--window: expected lo,hi with lo < hi, got '" + s + "'");
  }
}

}  // namespace induced
