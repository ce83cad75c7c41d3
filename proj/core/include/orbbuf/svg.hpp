#pragma once

#include <string>
#include <vector>

namespace orbbuf {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool scatter = false;  // points instead of a polyline
};

// Minimal standalone SVG chart writer. Output is byte-deterministic: fixed
// canvas, fixed decimal formatting, no timestamps. Empty data renders a
// "no data" annotation instead of axes.
std::string render_chart(const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<SvgSeries>& series);

// Vertical bars at integer x positions, same determinism guarantees.
std::string render_histogram(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<double>& x,
                             const std::vector<double>& height);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace orbbuf
