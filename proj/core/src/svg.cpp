#include "orbbuf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "orbbuf/errors.hpp"

namespace orbbuf {
namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 770.0, kTop = 50.0, kBottom = 450.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axes {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

  double px(double x) const { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); }
  double py(double y) const { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); }
};

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Axes& axes, const std::string& x_label,
               const std::string& y_label) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = axes.xmin + (axes.xmax - axes.xmin) * i / 5.0;
    const double fy = axes.ymin + (axes.ymax - axes.ymin) * i / 5.0;
    out << "<text x=\"" << num(axes.px(fx)) << "\" y=\"" << kBottom + 20.0
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(fx)
        << "</text>\n"
        << "<text x=\"" << kLeft - 8.0 << "\" y=\"" << num(axes.py(fy) + 4.0)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(fy)
        << "</text>\n";
  }
  out << "<text x=\"420\" y=\"" << kBottom + 42.0
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"250\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 18 250)\">"
      << y_label << "</text>\n";
}

bool empty_series(const std::vector<SvgSeries>& series) {
  return std::all_of(series.begin(), series.end(),
                     [](const SvgSeries& s) { return s.x.empty(); });
}

std::string no_data_svg(const std::string& title) {
  std::ostringstream out;
  open_svg(out, title);
  out << "<text x=\"400\" y=\"250\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\" fill=\"gray\">no data</text>\n</svg>\n";
  return out.str();
}

}  // namespace

std::string render_chart(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<SvgSeries>& series) {
  if (series.empty() || empty_series(series)) return no_data_svg(title);

  Axes axes;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        axes.xmin = axes.xmax = s.x[i];
        axes.ymin = axes.ymax = s.y[i];
        first = false;
      }
      axes.xmin = std::min(axes.xmin, s.x[i]);
      axes.xmax = std::max(axes.xmax, s.x[i]);
      axes.ymin = std::min(axes.ymin, s.y[i]);
      axes.ymax = std::max(axes.ymax, s.y[i]);
    }
  if (axes.xmax == axes.xmin) axes.xmax = axes.xmin + 1.0;
  if (axes.ymax == axes.ymin) axes.ymax = axes.ymin + 1.0;

  std::ostringstream out;
  open_svg(out, title);
  draw_axes(out, axes, x_label, y_label);

  double legend_y = kTop + 10.0;
  for (const auto& s : series) {
    if (s.scatter) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << "<circle cx=\"" << num(axes.px(s.x[i])) << "\" cy=\"" << num(axes.py(s.y[i]))
            << "\" r=\"2.5\" fill=\"" << s.color << "\" fill-opacity=\"0.6\"/>\n";
    } else if (!s.x.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) out << ' ';
        out << num(axes.px(s.x[i])) << ',' << num(axes.py(s.y[i]));
      }
      out << "\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<rect x=\"" << kRight - 150.0 << "\" y=\"" << num(legend_y - 9.0)
          << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n"
          << "<text x=\"" << kRight - 133.0 << "\" y=\"" << num(legend_y + 1.0)
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
      legend_y += 18.0;
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_histogram(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<double>& x,
                             const std::vector<double>& height) {
  if (x.empty()) return no_data_svg(title);

  Axes axes;
  axes.xmin = *std::min_element(x.begin(), x.end()) - 0.5;
  axes.xmax = *std::max_element(x.begin(), x.end()) + 0.5;
  axes.ymin = 0.0;
  axes.ymax = *std::max_element(height.begin(), height.end());
  if (axes.ymax <= 0.0) axes.ymax = 1.0;

  std::ostringstream out;
  open_svg(out, title);
  draw_axes(out, axes, x_label, y_label);
  const double bar_w = std::max(1.0, (kRight - kLeft) / (axes.xmax - axes.xmin) * 0.8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cx = axes.px(x[i]);
    const double top = axes.py(height[i]);
    out << "<rect x=\"" << num(cx - bar_w / 2.0) << "\" y=\"" << num(top) << "\" width=\""
        << num(bar_w) << "\" height=\"" << num(kBottom - top) << "\" fill=\"steelblue\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << content;
  if (!out) throw DataError(path + ": write failed");
}

}  // namespace orbbuf
