#include "nlpl/report.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nlpl {

const Value* Record::find(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

std::string to_text(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) return num(x);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else return x;
      },
      v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::vector<std::string> columns_of(const ReportSet& set) {
  if (!set.columns.empty()) return set.columns;
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (const auto& r : set.records)
    for (const auto& [k, v] : r.fields)
      if (seen.insert(k).second) cols.push_back(k);
  return cols;
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return num(x);
          return x;
        } else {
          return x;
        }
      },
      v);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed-precision coordinates keep the SVG text short and stable.
std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// About five round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

}  // namespace

std::string render_csv(const ReportSet& set) {
  const auto cols = columns_of(set);
  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + csv_field(cols[c]);
  out += '\n';
  for (const auto& r : set.records) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ',';
      if (const Value* v = r.find(cols[c])) out += csv_field(to_text(*v));
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const ReportSet& set) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : set.records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) obj[k] = to_json(v);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string render_svg(const Plot& plot) {
  const double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 55;
  auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(tx(x)) && std::isfinite(ty(y));
  };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : plot.series)
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!usable(s.x[k], s.y[k])) continue;
      x0 = std::min(x0, tx(s.x[k])), x1 = std::max(x1, tx(s.x[k]));
      y0 = std::min(y0, ty(s.y[k])), y1 = std::max(y1, ty(s.y[k]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double v) { return H - bottom - (v - y0) / (y1 - y0) * (H - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << coord(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\"" << coord(W - left - right)
    << "\" height=\"" << coord(H - top - bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(x0, x1)) {
    const double v = plot.log_x ? std::pow(10.0, t) : t;
    o << "<line x1=\"" << coord(px(t)) << "\" y1=\"" << coord(H - bottom) << "\" x2=\"" << coord(px(t)) << "\" y2=\""
      << coord(H - bottom + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << coord(px(t)) << "\" y=\"" << coord(H - bottom + 18) << "\" text-anchor=\"middle\">"
      << tick_label(v) << "</text>\n";
  }
  for (double t : nice_ticks(y0, y1)) {
    const double v = plot.log_y ? std::pow(10.0, t) : t;
    o << "<line x1=\"" << coord(left - 5) << "\" y1=\"" << coord(py(t)) << "\" x2=\"" << coord(left) << "\" y2=\""
      << coord(py(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(py(t) + 4) << "\" text-anchor=\"end\">" << tick_label(v)
      << "</text>\n";
  }
  o << "<text x=\"" << coord(left + (W - left - right) / 2) << "\" y=\"" << coord(H - 12)
    << "\" text-anchor=\"middle\">" << xml_escape(plot.xlabel) << (plot.log_x ? " (log)" : "") << "</text>\n";
  o << "<text transform=\"translate(16," << coord(top + (H - top - bottom) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(plot.ylabel) << (plot.log_y ? " (log)" : "")
    << "</text>\n";

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const char* color = colors[si % std::size(colors)];
    std::string pts;
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!usable(s.x[k], s.y[k])) continue;
      const std::string X = coord(px(tx(s.x[k]))), Y = coord(py(ty(s.y[k])));
      if (s.line) pts += (pts.empty() ? "" : " ") + X + "," + Y;
      else o << "<circle cx=\"" << X << "\" cy=\"" << Y << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
    if (s.line && !pts.empty())
      o << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 16 + 16 * static_cast<double>(si);
    o << "<text x=\"" << coord(W - right - 8) << "\" y=\"" << coord(ly) << "\" text-anchor=\"end\" fill=\"" << color
      << "\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Emitter::Emitter(std::filesystem::path dir, Formats formats) : dir_(std::move(dir)), formats_(formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw IoError("cannot create output directory " + dir_.string() + (ec ? ": " + ec.message() : ""));
}

std::string Emitter::claim(const std::string& stem) {
  int& count = used_[stem];
  ++count;
  if (count == 1) return stem;
  // The suffixed name may itself be a stem used earlier.
  for (int k = count;; ++k) {
    const std::string name = stem + "_" + std::to_string(k);
    if (used_.find(name) == used_.end()) {
      used_[name] = 1;
      count = k;
      return name;
    }
  }
}

std::filesystem::path Emitter::write_text(const std::string& name, const std::string& text) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
  return path;
}

std::vector<std::filesystem::path> Emitter::emit(const ReportSet& set) {
  const std::string stem = claim(set.stem);
  std::vector<std::filesystem::path> written;
  if (formats_.csv) written.push_back(write_text(stem + ".csv", render_csv(set)));
  if (formats_.json) written.push_back(write_text(stem + ".json", render_json(set)));
  if (formats_.svg) {
    for (std::size_t k = 0; k < set.plots.size(); ++k) {
      const std::string name = k == 0 ? stem + ".svg" : stem + "_plot" + std::to_string(k + 1) + ".svg";
      written.push_back(write_text(name, render_svg(set.plots[k])));
    }
  }
  return written;
}

}  // namespace nlpl
