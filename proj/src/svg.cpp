#include "radapt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radapt {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series, int width,
                             int height) {
  const double ml = 64, mr = 140, mt = 40, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
  if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  // Ticks.
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double tx = xmin + (xmax - xmin) * i / ticks;
    const double ty = ymin + (ymax - ymin) * i / ticks;
    out << "<line x1=\"" << px(tx) << "\" y1=\"" << mt + ph << "\" x2=\""
        << px(tx) << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(tx) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">" << fmt(tx) << "</text>\n";
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(ty) << "\" x2=\"" << ml
        << "\" y2=\"" << py(ty) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 7 << "\" y=\"" << py(ty) + 3
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\">" << fmt(ty) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << y_label
      << "</text>\n";
  // Series.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(*kPalette))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) out << " ";
      out << fmt(px(series[s].x[i])) << "," << fmt(py(series[s].y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << "<circle cx=\"" << fmt(px(series[s].x[i])) << "\" cy=\""
          << fmt(py(series[s].y[i])) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    const double ly = mt + 14 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << ml + pw + 34 << "\" y=\"" << ly + 3
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace radapt
