#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "orbbuf/frame.hpp"

namespace orbbuf {

struct Keypoint {
  int x = 0;
  int y = 0;
  int response = 0;    // SAD of the qualifying FAST arc against the center
  double angle = 0.0;  // intensity-centroid orientation, in (-pi, pi]
};

// 256-bit binary descriptor.
struct Descriptor {
  std::array<std::uint64_t, 4> words{};
};

inline int hamming(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int i = 0; i < 4; ++i) d += std::popcount(a.words[i] ^ b.words[i]);
  return d;
}

struct FeatureSet {
  std::uint64_t frame_id = 0;
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;  // parallel to keypoints
};

struct FeatureConfig {
  int fast_threshold = 20;
  int max_keypoints = 500;
  // Border margin for keypoints. The orientation patch uses radius
  // patch_radius - 3 and the sampling pattern stays within radius 12, so 14
  // is the smallest usable value; the default leaves rotation slack.
  int patch_radius = 18;
  int match_max_hamming = 64;
  std::uint64_t pattern_seed = 42;
};

// 256 point pairs for the descriptor tests, drawn from a seeded Gaussian and
// rejected to norm <= 12 so rotated samples stay inside the patch margin.
struct BriefPattern {
  std::array<std::array<int, 4>, 256> pairs{};  // px, py, qx, qy

  static BriefPattern from_seed(std::uint64_t seed);
};

// FAST-9/16 segment test with SAD response and 3x3 non-maximum suppression.
// Keypoints lie at least patch_radius pixels from every border and are
// sorted by response desc, then y asc, then x asc, capped at max_keypoints.
std::vector<Keypoint> detect_fast(const Frame& frame, const FeatureConfig& config);

// Orientation of the intensity centroid over a circular patch. Zero moments
// map to angle 0.
double compute_orientation(const Frame& frame, int x, int y, int radius);

// Steered BRIEF: pattern points rotated by the keypoint angle and rounded to
// the nearest pixel; bit k is set iff I(p_k) < I(q_k).
Descriptor compute_descriptor(const Frame& frame, const Keypoint& kp, const BriefPattern& pattern);

FeatureSet extract(const Frame& frame, const FeatureConfig& config);

// Count of mutual-nearest-neighbour matches with Hamming distance at most
// max_hamming. Nearest-neighbour ties break toward the lower keypoint index
// on each side, which makes the count exactly symmetric.
int similarity(const FeatureSet& a, const FeatureSet& b, int max_hamming);

inline int similarity(const FeatureSet& a, const FeatureSet& b, const FeatureConfig& config) {
  return similarity(a, b, config.match_max_hamming);
}

// Bundles a validated config with its pattern so repeated extraction does
// not rebuild the pattern. Stateless after construction; safe to share
// across threads.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureConfig& config);

  FeatureSet extract(const Frame& frame) const;
  int similarity(const FeatureSet& a, const FeatureSet& b) const {
    return orbbuf::similarity(a, b, config_.match_max_hamming);
  }
  const FeatureConfig& config() const { return config_; }
  const BriefPattern& pattern() const { return pattern_; }

 private:
  FeatureConfig config_;
  BriefPattern pattern_;
};

}  // namespace orbbuf
