#include "induced/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace induced {

using nlohmann::json;

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string worldlines_csv(const Tracks& tracks) {
  std::string out = "t,line_id,factor_id,x\n";
  for (const auto& line : tracks.lines) {
    const std::string fid = line.factor ? std::to_string(*line.factor) : "";
    for (const auto& s : line.samples) {
      out += format_real(s.t) + ',' + std::to_string(line.id) + ',' + fid + ',' + format_real(s.x) + '\n';
    }
  }
  return out;
}

namespace {

[[noreturn]] void bad_csv(size_t line, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "worldlines.csv line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, size_t line, const char* what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    bad_csv(line, std::string("bad ") + what + " '" + s + "'");
  }
}

int parse_int(const std::string& s, size_t line, const char* what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    bad_csv(line, std::string("bad ") + what + " '" + s + "'");
  }
}

}  // namespace

std::vector<CsvRow> parse_worldlines_csv(const std::string& text) {
  std::istringstream in(text);
  std::string row;
  size_t n = 0;
  std::vector<CsvRow> out;
  while (std::getline(in, row)) {
    ++n;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (n == 1) {
      if (row != "t,line_id,factor_id,x") bad_csv(n, "expected header t,line_id,factor_id,x");
      continue;
    }
    if (row.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!row.empty() && row.back() == ',') cells.emplace_back();
    if (cells.size() != 4) bad_csv(n, "expected 4 fields, got " + std::to_string(cells.size()));
    CsvRow r;
    r.t = parse_double(cells[0], n, "t");
    r.line_id = parse_int(cells[1], n, "line_id");
    if (!cells[2].empty()) r.factor = parse_int(cells[2], n, "factor_id");
    r.x = parse_double(cells[3], n, "x");
    out.push_back(r);
  }
  if (n == 0) bad_csv(1, "empty file");
  return out;
}

std::string events_json(const std::vector<Event>& events) {
  // Written by hand so that numbers keep 17 digits.
  std::string out = "[";
  for (size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    out += i ? ",\n  " : "\n  ";
    out += "{\"kind\": \"" + std::string(to_string(e.kind)) + "\", \"t\": " + format_real(e.t) +
           ", \"x\": " + format_real(e.x) + ", \"line_ids\": [";
    for (size_t k = 0; k < e.line_ids.size(); ++k) out += (k ? ", " : "") + std::to_string(e.line_ids[k]);
    out += "]}";
  }
  out += events.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<Event> parse_events_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("events.json: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ConfigError, "events.json: expected an array");
  std::vector<Event> out;
  for (size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    const std::string where = "events.json[" + std::to_string(i) + "]";
    try {
      Event e;
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "creation") {
        e.kind = EventKind::Creation;
      } else if (kind == "annihilation") {
        e.kind = EventKind::Annihilation;
      } else if (kind == "crossing") {
        e.kind = EventKind::Crossing;
      } else {
        throw Error(ErrorCode::ConfigError, where + ": unknown kind '" + kind + "'");
      }
      e.t = j.at("t").get<double>();
      e.x = j.at("x").get<double>();
      e.line_ids = j.at("line_ids").get<std::vector<int>>();
      out.push_back(e);
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::ConfigError, where + ": " + ex.what());
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* colour(std::optional<int> factor) {
  if (!factor) return "#1f4e79";
  return *factor == 0 ? "#1f4e79" : "#b03a2e";
}

}  // namespace

std::string render_svg(const std::vector<CsvRow>& rows, const std::vector<Event>& events, const std::string& title) {
  constexpr double W = 480, H = 480, M = 40;
  double xlo = 0, xhi = 1, tlo = 0, thi = 1;
  if (!rows.empty()) {
    xlo = xhi = rows.front().x;
    tlo = thi = rows.front().t;
    for (const auto& r : rows) {
      xlo = std::min(xlo, r.x);
      xhi = std::max(xhi, r.x);
      tlo = std::min(tlo, r.t);
      thi = std::max(thi, r.t);
    }
  }
  if (xhi - xlo < 1e-12) {
    xlo -= 1;
    xhi += 1;
  }
  if (thi - tlo < 1e-12) {
    tlo -= 1;
    thi += 1;
  }
  const auto px = [&](double x) { return M + (x - xlo) / (xhi - xlo) * (W - 2 * M); };
  const auto py = [&](double t) { return H - M - (t - tlo) / (thi - tlo) * (H - 2 * M); };

  std::map<int, std::vector<const CsvRow*>> lines;
  for (const auto& r : rows) lines[r.line_id].push_back(&r);

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  out += "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  out += "<rect x=\"" + fmt(M) + "\" y=\"" + fmt(M) + "\" width=\"" + fmt(W - 2 * M) + "\" height=\"" + fmt(H - 2 * M) +
         "\" fill=\"none\" stroke=\"#888\"/>\n";
  if (!title.empty()) out += "<text x=\"240\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
  out += "<text x=\"240\" y=\"472\" text-anchor=\"middle\" font-size=\"12\">x</text>\n";
  out += "<text x=\"12\" y=\"240\" font-size=\"12\">t</text>\n";
  out += "<text x=\"" + fmt(M) + "\" y=\"" + fmt(H - M + 14) + "\" font-size=\"10\">" + fmt(xlo) + "</text>\n";
  out += "<text x=\"" + fmt(W - M) + "\" y=\"" + fmt(H - M + 14) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(xhi) +
         "</text>\n";
  out += "<text x=\"" + fmt(M - 4) + "\" y=\"" + fmt(H - M) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(tlo) +
         "</text>\n";
  out += "<text x=\"" + fmt(M - 4) + "\" y=\"" + fmt(M + 10) + "\" font-size=\"10\" text-anchor=\"end\">" + fmt(thi) +
         "</text>\n";

  for (auto& [id, pts] : lines) {
    std::stable_sort(pts.begin(), pts.end(), [](const CsvRow* a, const CsvRow* b) { return a->t < b->t; });
    out += "<polyline id=\"line" + std::to_string(id) + "\" fill=\"none\" stroke=\"" + colour(pts.front()->factor) +
           "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < pts.size(); ++k) out += (k ? " " : "") + fmt(px(pts[k]->x)) + "," + fmt(py(pts[k]->t));
    out += "\"/>\n";
  }
  for (const auto& e : events) {
    const char* fill = e.kind == EventKind::Creation ? "#2e8b57" : e.kind == EventKind::Annihilation ? "#c0392b" : "#777";
    const double r = e.kind == EventKind::Crossing ? 2.5 : 4.0;
    out += "<circle class=\"" + std::string(to_string(e.kind)) + "\" cx=\"" + fmt(px(e.x)) + "\" cy=\"" + fmt(py(e.t)) +
           "\" r=\"" + fmt(r) + "\" fill=\"" + fill + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace induced
