#include "lrdmd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lrdmd {

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

bool usable(double y) { return std::isfinite(y) && y > 0.0; }

}  // namespace

std::string render_log_chart(const std::vector<Series>& series, const ChartOptions& opts) {
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      if (usable(s.y[i])) {
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  int dlo = std::isfinite(ymin) ? static_cast<int>(std::floor(std::log10(ymin))) : -1;
  int dhi = std::isfinite(ymax) ? static_cast<int>(std::ceil(std::log10(ymax))) : 0;
  if (dhi <= dlo) dhi = dlo + 1;

  auto px = [&](double x) { return left + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return top + ph * (dhi - std::log10(y)) / (dhi - dlo); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
     << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(opts.title) << "</text>\n";

  // decade grid
  const int step = std::max(1, (dhi - dlo + 9) / 10);
  for (int d = dlo; d <= dhi; d += step) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw)
       << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e"
       << d << "</text>\n";
  }
  // x ticks at the data abscissae of the first series, thinned to about ten
  if (!series.empty() && !series.front().x.empty()) {
    const auto& xs = series.front().x;
    const std::size_t every = std::max<std::size_t>(1, (xs.size() + 9) / 10);
    for (std::size_t i = 0; i < xs.size(); i += every) {
      const double x = px(xs[i]);
      os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x)
         << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", xs[i]);
      os << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
         << buf << "</text>\n";
    }
  }
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opts.height - 12.0)
     << "\" text-anchor=\"middle\">" << escape(opts.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(opts.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    const char* color = palette[s % std::size(palette)];
    // split into runs of usable points
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts
           << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
      if (!usable(sr.y[i])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += num(px(sr.x[i])) + "," + num(py(sr.y[i]));
    }
    flush();
    const double ly = top + 16.0 * static_cast<double>(s) + 8;
    os << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 32)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly + 4) << "\">" << escape(sr.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lrdmd
