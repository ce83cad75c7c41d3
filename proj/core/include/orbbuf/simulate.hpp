#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orbbuf/buffer.hpp"
#include "orbbuf/frame.hpp"
#include "orbbuf/trace.hpp"

namespace orbbuf {

struct ReceivedFrame {
  std::uint64_t id = 0;
  double t_ms = 0.0;  // transmission completion time
};

struct DroppedFrame {
  std::uint64_t id = 0;
  double t_ms = 0.0;  // arrival time of the frame that displaced it
};

// Every generated id lands in exactly one of received / dropped /
// buffered_at_end / in_flight_at_end. All fields except enqueue_times_ms
// are bit-identical across runs with the same inputs and seed;
// enqueue_times_ms is wall-clock telemetry.
struct SimResult {
  std::vector<ReceivedFrame> received;
  std::vector<DroppedFrame> dropped;
  std::vector<std::uint64_t> buffered_at_end;
  std::vector<std::uint64_t> in_flight_at_end;
  std::vector<double> enqueue_times_ms;   // per-arrival enqueue wall time
  std::vector<int> updates_per_arrival;   // score recomputations per arrival
  std::uint64_t extraction_count = 0;
};

struct SimOptions {
  Policy policy = Policy::drop_oldest;
  std::size_t capacity_frames = 25;
  double compression_ratio = 1.0;
  FeatureConfig feature_config{};
  std::uint64_t seed = 1;
};

// Time at which a transfer of `bytes` starting at `start_ms` completes
// under the trace, solved in closed form segment by segment. nullopt when
// bandwidth stays zero forever before the transfer finishes.
std::optional<double> transmission_finish_time(const LinkTrace& trace, double start_ms,
                                               std::uint64_t bytes);

// Discrete-event simulation of sender, bounded buffer and link. One message
// is in flight at a time; frames dequeue oldest-first; an in-flight message
// stalls through zero-bandwidth spans but is never aborted. At equal
// timestamps frame generation processes before transmission completion.
SimResult simulate(const FrameSequence& sequence, const LinkTrace& trace,
                   const SimOptions& options);

// Probability that a message split into n packets is incomplete when each
// packet drops independently with probability p.
double message_loss_probability(double p, int n);

}  // namespace orbbuf
