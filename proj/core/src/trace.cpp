#include "orbbuf/trace.hpp"

#include <cstdlib>
#include <fstream>

#include "orbbuf/errors.hpp"

namespace orbbuf {

LinkTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError(path + ": cannot open");
  LinkTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const char* s = line.c_str() + start;
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (end == s) throw TraceError(path + ":" + std::to_string(lineno) + ": expected t_ms");
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != ',') throw TraceError(path + ":" + std::to_string(lineno) + ": expected comma");
    s = end + 1;
    const double bw = std::strtod(s, &end);
    if (end == s)
      throw TraceError(path + ":" + std::to_string(lineno) + ": expected bytes_per_second");
    if (bw < 0.0)
      throw TraceError(path + ":" + std::to_string(lineno) + ": negative bandwidth");
    if (!trace.points.empty() && t <= trace.points.back().t_ms)
      throw TraceError(path + ":" + std::to_string(lineno) + ": timestamps must increase");
    trace.points.push_back({t, bw});
  }
  if (trace.points.empty()) throw TraceError(path + ": empty trace");
  return trace;
}

double bandwidth_at(const LinkTrace& trace, double t_ms) {
  if (trace.points.empty()) throw TraceError("bandwidth_at: empty trace");
  double value = trace.points.front().bytes_per_second;
  for (const auto& p : trace.points) {
    if (p.t_ms > t_ms) break;
    value = p.bytes_per_second;
  }
  return value;
}

LinkTrace apply_interruption(const LinkTrace& trace, const InterruptionSpec& spec, double fps) {
  if (fps <= 0.0) throw DataError("fps must be positive");
  const double frame_ms = 1000.0 / fps;
  const double start = static_cast<double>(spec.at_frame) * frame_ms;
  const double end = start + spec.latency_ms + static_cast<double>(spec.duration_frames) * frame_ms;
  if (end <= start) return trace;  // empty window

  LinkTrace out;
  for (const auto& p : trace.points)
    if (p.t_ms < start) out.points.push_back(p);
  out.points.push_back({start, 0.0});
  bool resume_present = false;
  for (const auto& p : trace.points) {
    if (p.t_ms < end) continue;
    if (!resume_present && p.t_ms > end) out.points.push_back({end, bandwidth_at(trace, end)});
    resume_present = true;
    out.points.push_back(p);
  }
  if (!resume_present) out.points.push_back({end, bandwidth_at(trace, end)});
  return out;
}

}  // namespace orbbuf
