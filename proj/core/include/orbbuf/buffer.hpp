#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbbuf/features.hpp"
#include "orbbuf/frame.hpp"
#include "orbbuf/rng.hpp"

namespace orbbuf {

enum class Policy { drop_oldest, drop_youngest, random, orbbuf };

Policy parse_policy(const std::string& name);
std::string policy_name(Policy policy);

// Eviction score of a buffered frame. A plain count is the similarity
// between the frame's previous and next neighbours; FREE marks a head with
// no predecessor context (always the best victim); TAIL marks the newest
// entry (never evicted while anything else is present).
struct EvictionScore {
  enum class Kind { count, free, tail };
  Kind kind = Kind::count;
  int value = 0;

  static EvictionScore count_of(int v) { return {Kind::count, v}; }
  static EvictionScore free_head() { return {Kind::free, 0}; }
  static EvictionScore tail() { return {Kind::tail, 0}; }

  bool operator==(const EvictionScore&) const = default;
};

struct BufferEntry {
  Frame frame;
  std::optional<FeatureSet> features;  // extracted on first use
  std::optional<EvictionScore> score;  // engaged only under the orbbuf policy
};

struct EnqueueOutcome {
  std::uint64_t inserted = 0;
  std::optional<std::uint64_t> dropped;
  int updates_performed = 0;  // score recomputations this arrival, at most 3
};

// Bounded FIFO of frames awaiting transmission. Under the orbbuf policy the
// buffer maintains per-entry eviction scores incrementally: each arrival
// touches at most three existing scores (the evicted entry's two neighbours
// plus the former tail) and victim lookup goes through an ordered score
// index, so eviction does O(log L) work on top of feature extraction.
// The baseline policies never compute features or scores.
//
// Not internally synchronized: a producer and a sender on different threads
// must serialize access externally.
class SendBuffer {
 public:
  using FeatureProvider = std::function<FeatureSet(const Frame&)>;

  SendBuffer(std::size_t capacity, Policy policy, FeatureProvider provider,
             int match_max_hamming = 64, std::uint64_t seed = 0);

  // Appends the frame, evicting one entry first when full. Frame ids must
  // be strictly increasing; violations throw OrderingError.
  EnqueueOutcome enqueue(const Frame& frame);

  // Removes and returns the oldest entry. Under orbbuf its features become
  // last_sent_features, the predecessor context for future head scores.
  std::optional<Frame> dequeue_for_send();

  // True iff every stored score equals a fresh recomputation from the
  // current neighbour features (sentinels included) and the score index is
  // consistent. Baseline-policy buffers must hold no scores at all.
  bool verify_scores() const;

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return entries_.size() == capacity_; }
  Policy policy() const { return policy_; }
  std::uint64_t extraction_count() const { return extraction_count_; }

  std::vector<std::uint64_t> ids() const;
  std::vector<std::optional<EvictionScore>> scores() const;
  const std::optional<FeatureSet>& last_sent_features() const { return last_sent_features_; }

  // Position of the entry the current policy would evict. Pure for every
  // policy except random, which this function must not be used with (the
  // draw would have to consume generator state).
  std::size_t victim_preview() const;

  // Victim lookup by linear scan over stored scores, bypassing the ordered
  // index. Kept as a cross-check for tests.
  std::size_t victim_by_linear_scan() const;

  // Deliberately corrupts a stored score so tests can prove verify_scores
  // detects drift.
  void corrupt_score_for_test(std::size_t pos, int value);

 private:
  using EntryList = std::list<BufferEntry>;
  using EntryIt = EntryList::iterator;

  // Ordering of the victim index: FREE first, then higher counts, then the
  // older frame.
  struct ScoreKey {
    bool is_free = false;
    int value = 0;
    std::uint64_t id = 0;
    bool operator<(const ScoreKey& o) const {
      if (is_free != o.is_free) return is_free;
      if (value != o.value) return value > o.value;
      return id < o.id;
    }
  };

  const FeatureSet& features_of(BufferEntry& entry);
  EvictionScore score_from_context(EntryIt it);
  void assign_score(EntryIt it, const EvictionScore& s);
  void drop_index_key(EntryIt it);
  EntryIt locate(std::uint64_t id);
  EntryIt select_victim();

  std::size_t capacity_;
  Policy policy_;
  FeatureProvider provider_;
  int match_max_hamming_;
  bool maintain_scores_;
  EntryList entries_;
  std::map<std::uint64_t, EntryIt> by_id_;
  std::set<ScoreKey> score_index_;
  std::optional<FeatureSet> last_sent_features_;
  std::optional<std::uint64_t> highest_id_seen_;
  std::uint64_t extraction_count_ = 0;
  SplitMix64 rng_;
};

}  // namespace orbbuf
