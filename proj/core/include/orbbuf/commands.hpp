#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbbuf/buffer.hpp"
#include "orbbuf/frame.hpp"
#include "orbbuf/trace.hpp"

namespace orbbuf {

// Effective settings of one invocation. Every field mirrors a CLI flag of
// the same name (and a key in the optional key = value config file); flags
// win over the file, the file wins over these defaults.
struct RunConfig {
  // Input: either a directory of PGM frames or a synthetic sequence.
  std::string seq_dir;
  int synth_width = 128;
  int synth_height = 96;
  int synth_frames = 200;
  double synth_density = 0.12;
  double synth_shift = 1.0;
  double synth_noise = 0.0;

  double fps = 25.0;
  std::string policy = "orbbuf";
  std::string capacity = "25";  // frame count, or seconds with an "s" suffix
  std::string trace_path;
  double const_bw = 0.0;        // constant-bandwidth link when no trace file

  // Optional forced outage.
  std::int64_t intr_frame = -1;
  double intr_latency_ms = 0.0;
  std::uint64_t intr_duration_frames = 0;

  double ratio = 1.0;           // encoder size model
  std::uint64_t seed = 1;
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";  // for sweeps

  int fast_threshold = 20;
  int max_keypoints = 500;
  int patch_radius = 18;
  int match_max_hamming = 64;
  std::uint64_t pattern_seed = 42;

  // Study settings.
  std::string study_kind = "distance";  // distance | loss | buffer-size
  std::uint64_t study_lo = 0;
  std::uint64_t study_hi = 60;
  int study_max_k = 30;
  double study_threshold = -1.0;
  std::string capacities = "5,10,15,20,25,30,35";
  std::string policies = "drop-oldest,drop-youngest,random,orbbuf";
  int jobs = 1;

  std::string out_dir = "out";

  FeatureConfig feature_config() const;
  std::size_t capacity_frames() const;
  std::vector<std::uint64_t> seed_list() const;
  std::vector<std::size_t> capacity_list() const;
  std::vector<Policy> policy_list() const;

  // Canonical key = value text of the effective config; its hash namespaces
  // all outputs of the invocation.
  std::string canonical_text(const std::string& command) const;
  std::string run_id(const std::string& command) const;
};

FrameSequence load_input_sequence(const RunConfig& config);
LinkTrace build_trace(const RunConfig& config);

int cmd_gen(const RunConfig& config);
int cmd_run(const RunConfig& config);
int cmd_compare(const RunConfig& config);
int cmd_study(const RunConfig& config);

}  // namespace orbbuf
