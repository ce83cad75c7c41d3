#include "orbbuf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <unordered_map>

#include "orbbuf/errors.hpp"
#include "orbbuf/stats.hpp"
#include "orbbuf/synthetic.hpp"

namespace orbbuf {
namespace {

// Feature sets are reused heavily when scoring a whole received stream.
class FeatureCache {
 public:
  explicit FeatureCache(const FeatureConfig& config) : extractor_(config) {}

  const FeatureSet& get(const Frame& frame) {
    auto it = cache_.find(frame.id);
    if (it == cache_.end()) it = cache_.emplace(frame.id, extractor_.extract(frame)).first;
    return it->second;
  }
  const FeatureExtractor& extractor() const { return extractor_; }

 private:
  FeatureExtractor extractor_;
  std::unordered_map<std::uint64_t, FeatureSet> cache_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ExperimentReport build_report(const SimResult& result, const FrameSequence& sequence,
                              const FeatureConfig& config, const std::string& policy) {
  ExperimentReport report;
  report.policy = policy;
  report.received_count = result.received.size();
  report.dropped_count = result.dropped.size();
  report.extraction_count = result.extraction_count;

  if (!result.enqueue_times_ms.empty()) {
    double sum = 0.0, mx = 0.0;
    for (const double t : result.enqueue_times_ms) {
      sum += t;
      mx = std::max(mx, t);
    }
    report.mean_enqueue_ms = sum / static_cast<double>(result.enqueue_times_ms.size());
    report.max_enqueue_ms = mx;
  }

  // Loss runs cover the whole generated range: ids missing before the first
  // arrival and after the last one count the same as interior gaps.
  const std::uint64_t generated = sequence.frames.size();
  std::uint64_t prev_present = 0;
  bool have_prev = false;
  FeatureCache cache(config);
  for (const auto& rcv : result.received) {
    if (have_prev) {
      const std::uint64_t gap = rcv.id - prev_present;
      report.distance_histogram[gap] += 1;
      report.max_loss_run = std::max(report.max_loss_run, gap - 1);
      const int sim = similarity(cache.get(sequence.frames[prev_present]),
                                 cache.get(sequence.frames[rcv.id]), config.match_max_hamming);
      report.adjacent_similarities.push_back(sim);
      report.log_product_similarity += std::log(static_cast<double>(std::max(sim, 1)));
      if (sim == 0) ++report.zero_similarity_count;
    } else {
      report.max_loss_run = std::max(report.max_loss_run, rcv.id);
    }
    prev_present = rcv.id;
    have_prev = true;
  }
  if (have_prev)
    report.max_loss_run = std::max(report.max_loss_run, generated - 1 - prev_present);
  else if (generated > 0)
    report.max_loss_run = generated;

  if (!report.adjacent_similarities.empty())
    report.min_similarity =
        *std::min_element(report.adjacent_similarities.begin(), report.adjacent_similarities.end());
  return report;
}

std::vector<DistanceStudyRow> distance_similarity_study(const FrameSequence& sequence,
                                                        std::uint64_t lo, std::uint64_t hi,
                                                        const FeatureConfig& config) {
  if (hi < lo + 2) throw UsageError("distance study needs hi - lo >= 2");
  if (hi >= sequence.frames.size()) throw UsageError("distance study range exceeds sequence");

  FeatureCache cache(config);
  std::vector<DistanceStudyRow> rows;
  for (std::uint64_t d = 1; d <= hi - lo; ++d)
    for (std::uint64_t a = lo; a + d <= hi; ++a) {
      const int sim = similarity(cache.get(sequence.frames[a]), cache.get(sequence.frames[a + d]),
                                 config.match_max_hamming);
      rows.push_back({a, a + d, d, sim, static_cast<double>(d) * sim});
    }
  return rows;
}

std::vector<LossToleranceRow> loss_tolerance_study(const FrameSequence& sequence, int max_k,
                                                   const FeatureConfig& config, double threshold) {
  if (max_k < 1) throw UsageError("loss tolerance study needs max_k >= 1");
  const std::uint64_t n = sequence.frames.size();
  if (n < static_cast<std::uint64_t>(max_k) + 2)
    throw UsageError("loss tolerance study needs at least max_k + 2 frames");

  FeatureCache cache(config);
  if (threshold < 0.0) {
    // Default: a quarter of the median self-similarity, i.e. of the typical
    // number of distinct descriptors per frame.
    std::vector<double> self;
    for (std::uint64_t i = 0; i < n; i += std::max<std::uint64_t>(1, n / 16)) {
      const auto& fs = cache.get(sequence.frames[i]);
      self.push_back(static_cast<double>(similarity(fs, fs, config.match_max_hamming)));
    }
    threshold = 0.25 * median(std::move(self));
  }

  std::vector<LossToleranceRow> rows;
  for (std::uint64_t start = 1; start + static_cast<std::uint64_t>(max_k) <= n - 1; ++start) {
    LossToleranceRow row;
    row.start = start;
    for (int k = 1; k <= max_k; ++k) {
      const int sim = similarity(cache.get(sequence.frames[start - 1]),
                                 cache.get(sequence.frames[start + static_cast<std::uint64_t>(k)]),
                                 config.match_max_hamming);
      if (sim < threshold) {
        row.min_k = k;
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepCell> buffer_size_sweep(const SyntheticParams& base_params, double fps,
                                         const LinkTrace& trace,
                                         const std::vector<Policy>& policies,
                                         const std::vector<std::size_t>& capacities,
                                         const std::vector<std::uint64_t>& seeds,
                                         double compression_ratio, const FeatureConfig& config,
                                         int jobs) {
  struct Job {
    Policy policy;
    std::size_t capacity;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  for (const auto policy : policies)
    for (const auto capacity : capacities)
      for (const auto seed : seeds) todo.push_back({policy, capacity, seed});

  std::vector<SweepCell> cells(todo.size());
  auto run_one = [&](std::size_t idx) {
    const Job& job = todo[idx];
    SyntheticParams params = base_params;
    params.seed = job.seed;
    const FrameSequence sequence = gen_synthetic(params, fps);
    SimOptions options;
    options.policy = job.policy;
    options.capacity_frames = job.capacity;
    options.compression_ratio = compression_ratio;
    options.feature_config = config;
    options.seed = job.seed;
    const SimResult result = simulate(sequence, trace, options);
    const ExperimentReport report = build_report(result, sequence, config, policy_name(job.policy));
    cells[idx] = {policy_name(job.policy), job.capacity,        job.seed,
                  report.min_similarity,   report.log_product_similarity,
                  report.zero_similarity_count,                 report.max_loss_run,
                  report.dropped_count,    report.received_count,
                  report.extraction_count};
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) run_one(i);
  } else {
    std::vector<std::future<void>> running;
    std::size_t next = 0;
    while (next < todo.size() || !running.empty()) {
      while (next < todo.size() && running.size() < static_cast<std::size_t>(jobs))
        running.push_back(std::async(std::launch::async, run_one, next++));
      running.front().get();
      running.erase(running.begin());
    }
  }
  return cells;
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "policy,capacity,seed,min_similarity,log_product_similarity,zero_similarity_count,"
         "max_loss_run,dropped,received,extractions\n";
  for (const auto& c : cells) {
    out << c.policy << ',' << c.capacity << ',' << c.seed << ','
        << (c.min_similarity ? std::to_string(*c.min_similarity) : "na") << ','
        << format_double(c.log_product_similarity) << ',' << c.zero_similarity_count << ','
        << c.max_loss_run << ',' << c.dropped_count << ',' << c.received_count << ','
        << c.extraction_count << '\n';
  }
  return out.str();
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "policy," << report.policy << '\n';
  out << "received," << report.received_count << '\n';
  out << "dropped," << report.dropped_count << '\n';
  out << "min_similarity,"
      << (report.min_similarity ? std::to_string(*report.min_similarity) : "na") << '\n';
  out << "log_product_similarity," << format_double(report.log_product_similarity) << '\n';
  out << "zero_similarity_count," << report.zero_similarity_count << '\n';
  out << "max_loss_run," << report.max_loss_run << '\n';
  out << "extraction_count," << report.extraction_count << '\n';
  return out.str();
}

std::string distance_study_to_csv(const std::vector<DistanceStudyRow>& rows) {
  std::ostringstream out;
  out << "frame_a,frame_b,distance,similarity,product\n";
  for (const auto& r : rows)
    out << r.frame_a << ',' << r.frame_b << ',' << r.distance << ',' << r.similarity << ','
        << format_double(r.product) << '\n';
  return out.str();
}

std::string loss_tolerance_to_csv(const std::vector<LossToleranceRow>& rows) {
  std::ostringstream out;
  out << "start,min_k\n";
  for (const auto& r : rows)
    out << r.start << ',' << (r.min_k ? std::to_string(*r.min_k) : "tolerant") << '\n';
  return out.str();
}

}  // namespace orbbuf
