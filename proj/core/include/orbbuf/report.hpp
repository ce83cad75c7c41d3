#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbbuf/features.hpp"
#include "orbbuf/simulate.hpp"

namespace orbbuf {

// Quality summary of one simulated run, computed on the receiver side from
// the frames that actually arrived.
struct ExperimentReport {
  std::string policy;
  std::vector<int> adjacent_similarities;    // between consecutive received frames
  std::optional<int> min_similarity;         // unset when fewer than 2 frames arrived
  double log_product_similarity = 0.0;       // sum of log(max(sim, 1))
  int zero_similarity_count = 0;
  std::uint64_t max_loss_run = 0;            // longest run of consecutive missing ids
  std::map<std::uint64_t, std::uint64_t> distance_histogram;  // id gap -> count
  std::uint64_t received_count = 0;
  std::uint64_t dropped_count = 0;
  std::uint64_t extraction_count = 0;
  double mean_enqueue_ms = 0.0;
  double max_enqueue_ms = 0.0;
};

ExperimentReport build_report(const SimResult& result, const FrameSequence& sequence,
                              const FeatureConfig& config, const std::string& policy);

struct DistanceStudyRow {
  std::uint64_t frame_a = 0;
  std::uint64_t frame_b = 0;
  std::uint64_t distance = 0;
  int similarity = 0;
  double product = 0.0;  // distance * similarity
};

// Similarity of every frame pair with both ends in [lo, hi] (inclusive),
// sorted by distance then by the first frame id. Requires hi - lo >= 2.
std::vector<DistanceStudyRow> distance_similarity_study(const FrameSequence& sequence,
                                                        std::uint64_t lo, std::uint64_t hi,
                                                        const FeatureConfig& config);

struct LossToleranceRow {
  std::uint64_t start = 0;        // first lost frame
  std::optional<int> min_k;       // smallest burst length that breaches the threshold
};

// For each start position, the smallest k <= max_k such that dropping
// frames start..start+k-1 leaves adjacent similarity below the threshold.
// Threshold < 0 selects the default: 25% of the median self-similarity.
std::vector<LossToleranceRow> loss_tolerance_study(const FrameSequence& sequence, int max_k,
                                                   const FeatureConfig& config,
                                                   double threshold = -1.0);

struct SweepCell {
  std::string policy;
  std::size_t capacity = 0;
  std::uint64_t seed = 0;
  std::optional<int> min_similarity;
  double log_product_similarity = 0.0;
  int zero_similarity_count = 0;
  std::uint64_t max_loss_run = 0;
  std::uint64_t dropped_count = 0;
  std::uint64_t received_count = 0;
  std::uint64_t extraction_count = 0;
};

// Cross product of policies, capacities and seeds; the seed drives both the
// synthetic sequence and the policy randomness. Cells run independently (in
// parallel when jobs > 1) and come back sorted by policy, capacity, seed.
std::vector<SweepCell> buffer_size_sweep(const SyntheticParams& base_params, double fps,
                                         const LinkTrace& trace,
                                         const std::vector<Policy>& policies,
                                         const std::vector<std::size_t>& capacities,
                                         const std::vector<std::uint64_t>& seeds,
                                         double compression_ratio, const FeatureConfig& config,
                                         int jobs = 1);

std::string sweep_to_csv(const std::vector<SweepCell>& cells);
std::string report_to_csv(const ExperimentReport& report);
std::string distance_study_to_csv(const std::vector<DistanceStudyRow>& rows);
std::string loss_tolerance_to_csv(const std::vector<LossToleranceRow>& rows);

}  // namespace orbbuf
