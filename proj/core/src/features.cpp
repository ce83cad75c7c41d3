#include "orbbuf/features.hpp"

#include <algorithm>
#include <cmath>

#include "orbbuf/errors.hpp"
#include "orbbuf/rng.hpp"

namespace orbbuf {
namespace {

// Bresenham circle of radius 3, clockwise from twelve o'clock.
constexpr int kCircle[16][2] = {
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
    {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};

constexpr int kMinArc = 9;

// Response of the segment test at one pixel: the largest SAD over any
// maximal contiguous arc of at least kMinArc circle pixels that are all
// brighter than center + t or all darker than center - t. Zero means no
// corner.
int segment_response(const Frame& frame, int x, int y, int threshold) {
  const int c = frame.at(x, y);
  int diff[16];
  bool bright[16], dark[16];
  bool all_bright = true, all_dark = true;
  for (int i = 0; i < 16; ++i) {
    const int v = frame.at(x + kCircle[i][0], y + kCircle[i][1]);
    diff[i] = v - c;
    bright[i] = diff[i] > threshold;
    dark[i] = -diff[i] > threshold;
    all_bright &= bright[i];
    all_dark &= dark[i];
  }

  int best = 0;
  auto scan = [&](const bool* flag) {
    if (flag == bright ? all_bright : all_dark) {
      int sum = 0;
      for (int i = 0; i < 16; ++i) sum += std::abs(diff[i]);
      best = std::max(best, sum);
      return;
    }
    for (int i = 0; i < 16; ++i) {
      if (!flag[i] || flag[(i + 15) & 15]) continue;  // run starts here
      int len = 0, sum = 0;
      for (int j = i; flag[j & 15] && len < 16; ++j, ++len) sum += std::abs(diff[j & 15]);
      if (len >= kMinArc) best = std::max(best, sum);
    }
  };
  scan(bright);
  scan(dark);
  return best;
}

void validate(const FeatureConfig& config) {
  if (config.fast_threshold < 1) throw UsageError("fast_threshold must be at least 1");
  if (config.max_keypoints < 1) throw UsageError("max_keypoints must be at least 1");
  if (config.patch_radius < 14)
    throw UsageError("patch_radius must be at least 14 to contain rotated descriptor samples");
  if (config.match_max_hamming < 0 || config.match_max_hamming > 256)
    throw UsageError("match_max_hamming must be in 0..256");
}

}  // namespace

BriefPattern BriefPattern::from_seed(std::uint64_t seed) {
  BriefPattern pattern;
  SplitMix64 rng(derive_seed(seed, 0xB21EF));
  auto sample = [&](int& px, int& py) {
    // Gaussian spread over the patch, rejected to norm <= 12 so that any
    // rotation keeps the rounded sample within 13 pixels of the keypoint.
    for (;;) {
      const double sx = rng.next_gaussian() * 6.0;
      const double sy = rng.next_gaussian() * 6.0;
      if (sx * sx + sy * sy <= 144.0) {
        px = static_cast<int>(std::lround(sx));
        py = static_cast<int>(std::lround(sy));
        return;
      }
    }
  };
  for (auto& pair : pattern.pairs) {
    sample(pair[0], pair[1]);
    sample(pair[2], pair[3]);
  }
  return pattern;
}

std::vector<Keypoint> detect_fast(const Frame& frame, const FeatureConfig& config) {
  validate(config);
  const int margin = config.patch_radius;
  const int w = frame.width, h = frame.height;
  std::vector<Keypoint> keypoints;
  if (w < 2 * margin + 1 || h < 2 * margin + 1) return keypoints;

  std::vector<int> response(static_cast<std::size_t>(w) * h, 0);
  for (int y = margin; y <= h - 1 - margin; ++y)
    for (int x = margin; x <= w - 1 - margin; ++x)
      response[static_cast<std::size_t>(y) * w + x] =
          segment_response(frame, x, y, config.fast_threshold);

  // 3x3 non-maximum suppression; equal-response neighbours both survive.
  auto r = [&](int x, int y) { return response[static_cast<std::size_t>(y) * w + x]; };
  for (int y = margin; y <= h - 1 - margin; ++y) {
    for (int x = margin; x <= w - 1 - margin; ++x) {
      const int v = r(x, y);
      if (v <= 0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (r(x + dx, y + dy) > v) {
            is_max = false;
            break;
          }
        }
      if (is_max) keypoints.push_back({x, y, v, 0.0});
    }
  }

  std::sort(keypoints.begin(), keypoints.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  if (keypoints.size() > static_cast<std::size_t>(config.max_keypoints))
    keypoints.resize(static_cast<std::size_t>(config.max_keypoints));
  return keypoints;
}

double compute_orientation(const Frame& frame, int x, int y, int radius) {
  long long m10 = 0, m01 = 0;
  const long long r2 = static_cast<long long>(radius) * radius;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      if (static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy > r2) continue;
      const int v = frame.at(x + dx, y + dy);
      m10 += static_cast<long long>(dx) * v;
      m01 += static_cast<long long>(dy) * v;
    }
  if (m10 == 0 && m01 == 0) return 0.0;
  return std::atan2(static_cast<double>(m01), static_cast<double>(m10));
}

Descriptor compute_descriptor(const Frame& frame, const Keypoint& kp, const BriefPattern& pattern) {
  Descriptor desc;
  const double c = std::cos(kp.angle), s = std::sin(kp.angle);
  auto sample = [&](int px, int py) {
    const int rx = static_cast<int>(std::lround(px * c - py * s));
    const int ry = static_cast<int>(std::lround(px * s + py * c));
    return frame.at(kp.x + rx, kp.y + ry);
  };
  for (int k = 0; k < 256; ++k) {
    const auto& p = pattern.pairs[static_cast<std::size_t>(k)];
    if (sample(p[0], p[1]) < sample(p[2], p[3]))
      desc.words[static_cast<std::size_t>(k >> 6)] |= std::uint64_t{1} << (k & 63);
  }
  return desc;
}

FeatureSet extract(const Frame& frame, const FeatureConfig& config) {
  return FeatureExtractor(config).extract(frame);
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& config)
    : config_(config), pattern_(BriefPattern::from_seed(config.pattern_seed)) {
  validate(config_);
}

FeatureSet FeatureExtractor::extract(const Frame& frame) const {
  FeatureSet set;
  set.frame_id = frame.id;
  set.keypoints = detect_fast(frame, config_);
  set.descriptors.reserve(set.keypoints.size());
  const int moment_radius = config_.patch_radius - 3;
  for (auto& kp : set.keypoints) {
    kp.angle = compute_orientation(frame, kp.x, kp.y, moment_radius);
    set.descriptors.push_back(compute_descriptor(frame, kp, pattern_));
  }
  return set;
}

int similarity(const FeatureSet& a, const FeatureSet& b, int max_hamming) {
  const std::size_t na = a.descriptors.size(), nb = b.descriptors.size();
  if (na == 0 || nb == 0) return 0;

  // Nearest neighbour of every descriptor in the other set; ties keep the
  // lower index, so the mutual pairs are identical in both directions.
  std::vector<std::size_t> nn_ab(na), nn_ba(nb);
  std::vector<int> dist_ab(na, 257), dist_ba(nb, 257);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const int d = hamming(a.descriptors[i], b.descriptors[j]);
      if (d < dist_ab[i]) {
        dist_ab[i] = d;
        nn_ab[i] = j;
      }
      if (d < dist_ba[j]) {
        dist_ba[j] = d;
        nn_ba[j] = i;
      }
    }

  int matches = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const std::size_t j = nn_ab[i];
    if (nn_ba[j] == i && dist_ab[i] <= max_hamming) ++matches;
  }
  return matches;
}

}  // namespace orbbuf
