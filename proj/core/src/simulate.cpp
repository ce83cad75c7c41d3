#include "orbbuf/simulate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "orbbuf/errors.hpp"

namespace orbbuf {

std::optional<double> transmission_finish_time(const LinkTrace& trace, double start_ms,
                                               std::uint64_t bytes) {
  if (trace.points.empty()) throw TraceError("transmission_finish_time: empty trace");
  double remaining = static_cast<double>(bytes);
  double t = start_ms;

  // Walk the piecewise-constant segments; within each one the transferred
  // volume is linear in time, so the finish instant has a closed form.
  std::size_t i = 0;
  while (i < trace.points.size() && trace.points[i].t_ms <= t) ++i;
  // Segment [t, next boundary) has the value of the last point at or before
  // t (or the first point's value when t precedes the whole trace).
  for (;;) {
    const double rate = i == 0 ? trace.points.front().bytes_per_second
                               : trace.points[i - 1].bytes_per_second;
    const double boundary =
        i < trace.points.size() ? trace.points[i].t_ms : std::numeric_limits<double>::infinity();
    if (rate > 0.0) {
      const double finish = t + remaining / rate * 1000.0;
      if (finish <= boundary) return finish;
      remaining -= rate * (boundary - t) / 1000.0;
    } else if (boundary == std::numeric_limits<double>::infinity()) {
      return std::nullopt;  // stalled forever
    }
    t = boundary;
    ++i;
  }
}

double message_loss_probability(double p, int n) {
  if (p < 0.0 || p > 1.0) throw UsageError("loss probability must be in [0, 1]");
  if (n < 0) throw UsageError("message count must be non-negative");
  return 1.0 - std::pow(1.0 - p, n);
}

SimResult simulate(const FrameSequence& sequence, const LinkTrace& trace,
                   const SimOptions& options) {
  if (sequence.frames.empty()) throw SimError("simulate: empty sequence");

  SendBuffer buffer(options.capacity_frames, options.policy,
                    [cfg = options.feature_config](const Frame& f) { return extract(f, cfg); },
                    options.feature_config.match_max_hamming, options.seed);

  SimResult result;
  result.enqueue_times_ms.reserve(sequence.frames.size());
  result.updates_per_arrival.reserve(sequence.frames.size());

  struct InFlight {
    std::uint64_t id;
    std::optional<double> finish_ms;  // nullopt: stalled on a dead link forever
  };
  std::optional<InFlight> in_flight;

  auto start_next_transmission = [&](double now) {
    if (in_flight) return;
    auto frame = buffer.dequeue_for_send();
    if (!frame) return;
    in_flight = InFlight{frame->id, transmission_finish_time(trace, now, frame->encoded_size)};
  };

  std::size_t next_gen = 0;
  const auto n = sequence.frames.size();
  for (;;) {
    const double gen_t = next_gen < n ? sequence.frames[next_gen].t_gen_ms
                                      : std::numeric_limits<double>::infinity();
    const double done_t = in_flight && in_flight->finish_ms ? *in_flight->finish_ms
                                                            : std::numeric_limits<double>::infinity();
    if (gen_t == std::numeric_limits<double>::infinity() &&
        done_t == std::numeric_limits<double>::infinity())
      break;

    // Ties resolve in favour of frame generation.
    if (gen_t <= done_t) {
      Frame frame = sequence.frames[next_gen++];
      frame.encoded_size = model_encoded_size(frame.width, frame.height, options.compression_ratio);
      const auto wall_start = std::chrono::steady_clock::now();
      const EnqueueOutcome outcome = buffer.enqueue(frame);
      const auto wall_end = std::chrono::steady_clock::now();
      result.enqueue_times_ms.push_back(
          std::chrono::duration<double, std::milli>(wall_end - wall_start).count());
      result.updates_per_arrival.push_back(outcome.updates_performed);
      if (outcome.dropped) result.dropped.push_back({*outcome.dropped, gen_t});
      start_next_transmission(gen_t);
    } else {
      result.received.push_back({in_flight->id, done_t});
      in_flight.reset();
      start_next_transmission(done_t);
    }
  }

  if (in_flight) result.in_flight_at_end.push_back(in_flight->id);
  result.buffered_at_end = buffer.ids();
  result.extraction_count = buffer.extraction_count();
  return result;
}

}  // namespace orbbuf
