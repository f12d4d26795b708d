#include "ansep/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ansep {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const std::vector<double>& normalized_mse) {
  std::string out = "iteration,normalized_mse\n";
  for (std::size_t i = 0; i < normalized_mse.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(normalized_mse[i]);
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  if (columns.empty()) throw std::invalid_argument("table_csv: no columns");
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("table_csv: row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// largest "nice" step (1, 2 or 5 times a power of ten) not above `raw`
double nice_step(double raw) {
  if (!(raw > 0.0)) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  if (frac >= 5.0) return 5.0 * mag;
  if (frac >= 2.0) return 2.0 * mag;
  return mag;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void feed(double v) {
    if (!std::isfinite(v)) return;
    if (empty) {
      lo = hi = v;
      empty = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish() {
    if (empty) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      // degenerate span: open a unit window around the value
      lo -= 0.5;
      hi += 0.5;
    }
  }
  bool empty = true;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

void fmt_coord(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  out += buf;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  constexpr double kW = 720, kH = 480;
  constexpr double kLeft = 64, kRight = 16, kTop = 30, kBottom = 46;
  const double pw = kW - kLeft - kRight;   // plot width
  const double ph = kH - kTop - kBottom;   // plot height

  Range rx, ry;
  for (const auto& c : spec.curves) {
    if (c.x.size() != c.y.size())
      throw std::invalid_argument("render_svg: curve length mismatch");
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (std::isfinite(c.x[i]) && std::isfinite(c.y[i])) {
        rx.feed(c.x[i]);
        ry.feed(c.y[i]);
      }
    }
  }
  rx.finish();
  ry.finish();
  // headroom so curves do not sit on the frame
  {
    double pad = 0.04 * (ry.hi - ry.lo);
    ry.lo -= pad;
    ry.hi += pad;
  }

  auto px = [&](double v) { return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return kTop + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    s += "<text x=\"360\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + xml_escape(spec.title) + "</text>\n";

  // frame
  {
    std::string d;
    fmt_coord(d, kLeft);
    s += "<rect x=\"" + d + "\" y=\"";
    d.clear();
    fmt_coord(d, kTop);
    s += d + "\" width=\"";
    d.clear();
    fmt_coord(d, pw);
    s += d + "\" height=\"";
    d.clear();
    fmt_coord(d, ph);
    s += d + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }

  auto tick_text = [&](double x, double y, const char* anchor, double v) {
    s += "<text x=\"";
    fmt_coord(s, x);
    s += "\" y=\"";
    fmt_coord(s, y);
    s += "\" text-anchor=\"";
    s += anchor;
    s += "\" font-family=\"sans-serif\" font-size=\"11\">";
    // snap values like 0.30000000000000004 from repeated step addition
    s += xml_escape(format_double(std::abs(v) < 1e-12 ? 0.0 : v));
    s += "</text>\n";
  };

  // x ticks
  {
    double step = nice_step((rx.hi - rx.lo) / 5.0);
    double t0 = std::ceil(rx.lo / step) * step;
    for (double t = t0; t <= rx.hi + 1e-9 * step; t += step) {
      double x = px(t);
      s += "<line x1=\"";
      fmt_coord(s, x);
      s += "\" y1=\"";
      fmt_coord(s, kTop + ph);
      s += "\" x2=\"";
      fmt_coord(s, x);
      s += "\" y2=\"";
      fmt_coord(s, kTop + ph + 5);
      s += "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      double snapped = std::round(t / step) * step;
      tick_text(x, kTop + ph + 18, "middle", snapped);
    }
  }
  // y ticks
  {
    double step = nice_step((ry.hi - ry.lo) / 5.0);
    double t0 = std::ceil(ry.lo / step) * step;
    for (double t = t0; t <= ry.hi + 1e-9 * step; t += step) {
      double y = py(t);
      s += "<line x1=\"";
      fmt_coord(s, kLeft - 5);
      s += "\" y1=\"";
      fmt_coord(s, y);
      s += "\" x2=\"";
      fmt_coord(s, kLeft);
      s += "\" y2=\"";
      fmt_coord(s, y);
      s += "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      double snapped = std::round(t / step) * step;
      tick_text(kLeft - 8, y + 4, "end", snapped);
    }
  }

  if (!spec.x_label.empty())
    s += "<text x=\"360\" y=\"472\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + xml_escape(spec.x_label) + "</text>\n";
  if (!spec.y_label.empty())
    s += "<text x=\"14\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 14 240)\">" +
         xml_escape(spec.y_label) + "</text>\n";

  for (std::size_t ci = 0; ci < spec.curves.size(); ++ci) {
    const auto& c = spec.curves[ci];
    const char* color = kPalette[ci % kPaletteSize];
    std::string pts;
    std::size_t kept = 0;
    double lastx = 0, lasty = 0;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      if (kept) pts += ' ';
      lastx = px(c.x[i]);
      lasty = py(c.y[i]);
      fmt_coord(pts, lastx);
      pts += ',';
      fmt_coord(pts, lasty);
      ++kept;
    }
    if (kept >= 2) {
      s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"";
      s += color;
      s += "\" stroke-width=\"1.5\"/>\n";
    } else if (kept == 1) {
      s += "<circle cx=\"";
      fmt_coord(s, lastx);
      s += "\" cy=\"";
      fmt_coord(s, lasty);
      s += "\" r=\"2.5\" fill=\"";
      s += color;
      s += "\"/>\n";
    }
  }

  if (spec.curves.size() > 1) {
    double lx = kLeft + pw - 150, ly = kTop + 10;
    for (std::size_t ci = 0; ci < spec.curves.size(); ++ci) {
      const char* color = kPalette[ci % kPaletteSize];
      s += "<line x1=\"";
      fmt_coord(s, lx);
      s += "\" y1=\"";
      fmt_coord(s, ly + 14 * double(ci));
      s += "\" x2=\"";
      fmt_coord(s, lx + 22);
      s += "\" y2=\"";
      fmt_coord(s, ly + 14 * double(ci));
      s += "\" stroke=\"";
      s += color;
      s += "\" stroke-width=\"1.5\"/>\n";
      s += "<text x=\"";
      fmt_coord(s, lx + 28);
      s += "\" y=\"";
      fmt_coord(s, ly + 14 * double(ci) + 4);
      s += "\" font-family=\"sans-serif\" font-size=\"11\">";
      s += xml_escape(spec.curves[ci].name);
      s += "</text>\n";
    }
  }

  s += "</svg>\n";
  return s;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("report: cannot open for write: " + path);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  if (!f) throw std::runtime_error("report: short write: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("report: cannot open for read: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace ansep
