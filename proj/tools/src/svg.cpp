#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gsearch::cli {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double decade = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0}) {
    if (f * decade >= raw) return f * decade;
  }
  return 10.0 * decade;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series,
                             const std::vector<Marker>& markers) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  for (const auto& m : markers) {
    xr.add(m.x);
    yr.add(m.y);
  }
  xr.finalize();
  yr.finalize();
  const double pad = 0.04 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  const double pw = spec.width - kLeft - kRight;
  const double ph = spec.height - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";

  // Axes and ticks.
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = nice_step(xr.hi - xr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    const double x = sx(t);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           num(std::abs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    const double y = sy(t);
    svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           num(std::abs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(spec.height - 12.0) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  svg += "<g fill=\"none\" stroke-linejoin=\"round\">\n";
  for (const auto& s : series) {
    svg += "<polyline stroke=\"" + s.color + "\" stroke-width=\"" + num(s.stroke_width) + "\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) svg += ' ';
      svg += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
    }
    svg += "\"/>\n";
  }
  svg += "</g>\n";
  for (const auto& m : markers) {
    svg += "<circle cx=\"" + num(sx(m.x)) + "\" cy=\"" + num(sy(m.y)) + "\" r=\"4\" fill=\"" + m.color + "\"/>\n";
  }

  double ly = kTop + 10.0;
  const double lx = kLeft + pw + 12.0;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    ly += 18.0;
  }
  for (const auto& m : markers) {
    if (m.label.empty()) continue;
    svg += "<circle cx=\"" + num(lx + 10) + "\" cy=\"" + num(ly) + "\" r=\"4\" fill=\"" + m.color + "\"/>\n";
    svg += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly + 4) + "\">" + escape(m.label) + "</text>\n";
    ly += 18.0;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace gsearch::cli
