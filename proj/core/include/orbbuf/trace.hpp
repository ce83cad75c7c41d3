#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbbuf {

struct TracePoint {
  double t_ms = 0.0;
  double bytes_per_second = 0.0;

  bool operator==(const TracePoint&) const = default;
};

// Piecewise-constant bandwidth over time. Each point's value holds from its
// timestamp until the next point; the last value holds forever; before the
// first point the first value applies.
struct LinkTrace {
  std::vector<TracePoint> points;

  bool operator==(const LinkTrace&) const = default;
};

// CSV "t_ms,bytes_per_second" per line. Blank lines and '#' comments are
// skipped. Timestamps must be strictly increasing and bandwidth
// non-negative; an empty trace is an error.
LinkTrace load_trace(const std::string& path);

double bandwidth_at(const LinkTrace& trace, double t_ms);

struct InterruptionSpec {
  std::uint64_t at_frame = 0;      // outage starts at this frame's t_gen
  double latency_ms = 0.0;         // T in the outage model
  std::uint64_t duration_frames = 0;  // L in the outage model
};

// Forces bandwidth to zero over [at_frame * 1000 / fps, start + latency_ms
// + duration_frames * 1000 / fps). An empty window returns the trace
// unchanged; disjoint windows compose in either order.
LinkTrace apply_interruption(const LinkTrace& trace, const InterruptionSpec& spec, double fps);

}  // namespace orbbuf
