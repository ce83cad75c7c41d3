#pragma once

// Shared helpers for the test binaries: throwaway directories, synthetic
// descriptor streams with a known similarity structure, and brute-force
// oracles the fast implementations are checked against.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orbbuf/features.hpp"
#include "orbbuf/frame.hpp"
#include "orbbuf/rng.hpp"

namespace testutil {

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto n = counter.fetch_add(1);
    path = std::filesystem::temp_directory_path() /
           ("orbbuf_test_" + std::to_string(::getpid()) + "_" + std::to_string(n));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path.string(); }
};

// Feature stream with a transparent similarity structure. Frame i sits at a
// non-decreasing pool position p_i and carries the k pool descriptors
// starting there, so frames share exactly max(0, k - |p_i - p_j|)
// descriptors. Pool descriptors are random 256-bit strings: distinct ones
// sit ~128 bits apart, so under a strict match cutoff the mutual-match
// count equals the overlap. Positions never move backward, mirroring
// forward camera motion where similarity lost to distance never returns.
struct DriftStream {
  std::vector<orbbuf::Frame> frames;  // 1x1 placeholder frames, ids 0..n-1
  std::vector<orbbuf::FeatureSet> features;
  std::vector<int> positions;
  int k = 0;

  int expected_similarity(std::size_t i, std::size_t j) const {
    const int gap = positions[i] > positions[j] ? positions[i] - positions[j]
                                                : positions[j] - positions[i];
    return gap >= k ? 0 : k - gap;
  }
};

// Strict cutoff for DriftStream matching: identical descriptors match at
// distance 0, while two distinct random descriptors pass a 40-bit cutoff
// with probability ~1e-27.
inline constexpr int kDriftMaxHamming = 40;

inline DriftStream make_stream_at_positions(std::uint64_t seed, std::vector<int> positions,
                                            int k) {
  orbbuf::SplitMix64 rng(orbbuf::derive_seed(seed, 0xD21F7));
  DriftStream s;
  s.k = k;
  s.positions = std::move(positions);
  const int n_frames = static_cast<int>(s.positions.size());
  int max_pos = 0;
  for (const int p : s.positions) max_pos = p > max_pos ? p : max_pos;

  std::vector<orbbuf::Descriptor> pool(static_cast<std::size_t>(max_pos + k));
  for (auto& d : pool)
    for (auto& w : d.words) w = rng.next();

  for (int i = 0; i < n_frames; ++i) {
    orbbuf::Frame f;
    f.id = static_cast<std::uint64_t>(i);
    f.t_gen_ms = 40.0 * i;
    f.width = 1;
    f.height = 1;
    f.pixels = {0};
    f.encoded_size = 1;
    s.frames.push_back(f);

    orbbuf::FeatureSet fs;
    fs.frame_id = f.id;
    for (int d = 0; d < k; ++d) {
      fs.keypoints.push_back({0, 0, 1, 0.0});
      fs.descriptors.push_back(pool[static_cast<std::size_t>(s.positions[i] + d)]);
    }
    s.features.push_back(std::move(fs));
  }
  return s;
}

inline DriftStream make_drift_stream(std::uint64_t seed, int n_frames, int k, int max_step) {
  orbbuf::SplitMix64 rng(orbbuf::derive_seed(seed, 0x57E9));
  std::vector<int> positions(static_cast<std::size_t>(n_frames));
  int pos = 0;
  for (int i = 0; i < n_frames; ++i) {
    if (i > 0) pos += static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_step) + 1));
    positions[static_cast<std::size_t>(i)] = pos;
  }
  return make_stream_at_positions(seed, std::move(positions), k);
}

// Tries every allowed eviction (the newest entry is off limits) and keeps
// the choices whose surviving chain, read as
//   [last_sent?] entries-without-victim incoming,
// has the largest minimal adjacent similarity. Returns candidate indices
// into `entries`; empty when there is no allowed choice.
inline std::vector<std::size_t> oracle_victims(const std::vector<const orbbuf::FeatureSet*>& entries,
                                               const orbbuf::FeatureSet* last_sent,
                                               const orbbuf::FeatureSet& incoming,
                                               int max_hamming) {
  std::vector<std::size_t> best;
  if (entries.size() < 2) return best;
  long best_min = -1;
  for (std::size_t victim = 0; victim + 1 < entries.size(); ++victim) {
    std::vector<const orbbuf::FeatureSet*> chain;
    if (last_sent) chain.push_back(last_sent);
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (i != victim) chain.push_back(entries[i]);
    chain.push_back(&incoming);

    long chain_min = -1;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const long sim = orbbuf::similarity(*chain[i], *chain[i + 1], max_hamming);
      if (chain_min < 0 || sim < chain_min) chain_min = sim;
    }
    if (chain_min > best_min) {
      best_min = chain_min;
      best.clear();
    }
    if (chain_min == best_min) best.push_back(victim);
  }
  return best;
}

// All-pairs mutual-nearest-neighbour matcher, quadratic and index-based,
// used to cross-check the production similarity count.
inline int brute_force_similarity(const orbbuf::FeatureSet& a, const orbbuf::FeatureSet& b,
                                  int max_hamming) {
  const auto nn = [&](const std::vector<orbbuf::Descriptor>& from,
                      const std::vector<orbbuf::Descriptor>& to, std::size_t i) {
    std::optional<std::size_t> best;
    int best_d = 257;
    for (std::size_t j = 0; j < to.size(); ++j) {
      const int d = orbbuf::hamming(from[i], to[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return std::pair(best, best_d);
  };
  int count = 0;
  for (std::size_t i = 0; i < a.descriptors.size(); ++i) {
    const auto [j, d] = nn(a.descriptors, b.descriptors, i);
    if (!j || d > max_hamming) continue;
    const auto [back, d2] = nn(b.descriptors, a.descriptors, *j);
    (void)d2;
    if (back && *back == i) ++count;
  }
  return count;
}

}  // namespace testutil
