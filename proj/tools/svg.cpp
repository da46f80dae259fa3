#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace flexagg::cli {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 32.0;
constexpr double kBottom = 40.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

}  // namespace

std::string line_plot(std::span<const Series> series, const std::string& title) {
  std::size_t n = 1;
  double lo = 0.0, hi = 0.0;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) {
    return kLeft + (n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1)) * plot_w;
  };
  auto py = [&](double v) { return kTop + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title) << "</text>\n";

  // Axes: y at the left edge, x along zero.
  const double x0 = kLeft, x1 = kLeft + plot_w;
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(x0)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(x1)
      << "\" y2=\"" << fixed(py(0.0)) << "\"/>\n"
      << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<text x=\"4\" y=\"" << fixed(py(hi) + 4) << "\">" << fixed(hi) << "</text>\n"
      << "<text x=\"4\" y=\"" << fixed(py(lo) + 4) << "\">" << fixed(lo) << "</text>\n"
      << "<text x=\"" << fixed(x0) << "\" y=\"" << fixed(kHeight - 12) << "\">1</text>\n"
      << "<text x=\"" << fixed(x1 - 16) << "\" y=\"" << fixed(kHeight - 12) << "\">" << n
      << "</text>\n"
      << "</g>\n";

  double legend_x = kLeft + 160.0;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << escape(s.color)
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << fixed(px(i)) << ',' << fixed(py(s.values[i]));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << fixed(legend_x) << "\" y=\"20\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << escape(s.color) << "\">" << escape(s.label)
        << "</text>\n";
    legend_x += 120.0;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace flexagg::cli
