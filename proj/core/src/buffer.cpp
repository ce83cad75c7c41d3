#include "orbbuf/buffer.hpp"

#include <algorithm>

#include "orbbuf/errors.hpp"

namespace orbbuf {

Policy parse_policy(const std::string& name) {
  if (name == "drop-oldest") return Policy::drop_oldest;
  if (name == "drop-youngest") return Policy::drop_youngest;
  if (name == "random") return Policy::random;
  if (name == "orbbuf") return Policy::orbbuf;
  throw UsageError("unknown policy '" + name +
                   "', expected drop-oldest | drop-youngest | random | orbbuf");
}

std::string policy_name(Policy policy) {
  switch (policy) {
    case Policy::drop_oldest: return "drop-oldest";
    case Policy::drop_youngest: return "drop-youngest";
    case Policy::random: return "random";
    case Policy::orbbuf: return "orbbuf";
  }
  return "?";
}

SendBuffer::SendBuffer(std::size_t capacity, Policy policy, FeatureProvider provider,
                       int match_max_hamming, std::uint64_t seed)
    : capacity_(capacity),
      policy_(policy),
      provider_(std::move(provider)),
      match_max_hamming_(match_max_hamming),
      maintain_scores_(policy == Policy::orbbuf),
      rng_(derive_seed(seed, 0xEB1C7)) {
  if (capacity_ < 1) throw DataError("buffer capacity must be at least 1");
}

const FeatureSet& SendBuffer::features_of(BufferEntry& entry) {
  if (!entry.features) {
    entry.features = provider_(entry.frame);
    ++extraction_count_;
  }
  return *entry.features;
}

// Score a given entry deserves under the current chain: TAIL for the newest
// entry, FREE for a head with no predecessor context, otherwise the
// similarity between its previous and next neighbours (last_sent_features
// standing in as the head's predecessor).
EvictionScore SendBuffer::score_from_context(EntryIt it) {
  if (std::next(it) == entries_.end()) return EvictionScore::tail();
  if (it == entries_.begin()) {
    if (!last_sent_features_) return EvictionScore::free_head();
    return EvictionScore::count_of(orbbuf::similarity(
        *last_sent_features_, features_of(*std::next(it)), match_max_hamming_));
  }
  return EvictionScore::count_of(orbbuf::similarity(
      features_of(*std::prev(it)), features_of(*std::next(it)), match_max_hamming_));
}

void SendBuffer::drop_index_key(EntryIt it) {
  if (it->score && it->score->kind != EvictionScore::Kind::tail)
    score_index_.erase(ScoreKey{it->score->kind == EvictionScore::Kind::free,
                                it->score->value, it->frame.id});
}

void SendBuffer::assign_score(EntryIt it, const EvictionScore& s) {
  drop_index_key(it);
  it->score = s;
  if (s.kind != EvictionScore::Kind::tail)
    score_index_.insert(ScoreKey{s.kind == EvictionScore::Kind::free, s.value, it->frame.id});
}

SendBuffer::EntryIt SendBuffer::locate(std::uint64_t id) {
  const auto found = by_id_.find(id);
  return found == by_id_.end() ? entries_.end() : found->second;
}

SendBuffer::EntryIt SendBuffer::select_victim() {
  switch (policy_) {
    case Policy::drop_oldest:
      return entries_.begin();
    case Policy::drop_youngest:
      return std::prev(entries_.end());
    case Policy::random: {
      auto it = entries_.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng_.next_below(entries_.size())));
      return it;
    }
    case Policy::orbbuf: {
      // Best victim sits at the front of the ordered index; the tail is
      // never indexed, so a single-entry buffer falls back to the forced
      // choice.
      if (score_index_.empty()) return std::prev(entries_.end());
      return locate(score_index_.begin()->id);
    }
  }
  return entries_.begin();
}

std::size_t SendBuffer::victim_preview() const {
  auto& self = const_cast<SendBuffer&>(*this);
  const auto victim = self.select_victim();  // pure for non-random policies
  return static_cast<std::size_t>(std::distance(self.entries_.begin(), victim));
}

std::size_t SendBuffer::victim_by_linear_scan() const {
  std::size_t best = entries_.size();
  std::optional<ScoreKey> best_key;
  std::size_t pos = 0;
  for (const auto& entry : entries_) {
    if (entry.score && entry.score->kind != EvictionScore::Kind::tail) {
      ScoreKey key{entry.score->kind == EvictionScore::Kind::free, entry.score->value,
                   entry.frame.id};
      if (!best_key || key < *best_key) {
        best_key = key;
        best = pos;
      }
    }
    ++pos;
  }
  return best_key ? best : entries_.size() - 1;
}

EnqueueOutcome SendBuffer::enqueue(const Frame& frame) {
  if (highest_id_seen_ && frame.id <= *highest_id_seen_)
    throw OrderingError("frame " + std::to_string(frame.id) +
                        " arrived after id " + std::to_string(*highest_id_seen_));
  highest_id_seen_ = frame.id;

  EnqueueOutcome outcome;
  outcome.inserted = frame.id;

  if (entries_.size() == capacity_) {
    const auto victim = select_victim();
    outcome.dropped = victim->frame.id;
    const auto before = victim == entries_.begin() ? entries_.end() : std::prev(victim);
    const auto after = std::next(victim);
    drop_index_key(victim);
    by_id_.erase(victim->frame.id);
    entries_.erase(victim);

    if (maintain_scores_) {
      // Only the victim's former neighbours see their context change; the
      // tail keeps its sentinel.
      if (before != entries_.end() && std::next(before) != entries_.end()) {
        assign_score(before, score_from_context(before));
        ++outcome.updates_performed;
      }
      if (after != entries_.end() && std::next(after) != entries_.end()) {
        assign_score(after, score_from_context(after));
        ++outcome.updates_performed;
      }
    }
  }

  entries_.push_back(BufferEntry{frame, std::nullopt, std::nullopt});
  const auto tail = std::prev(entries_.end());
  by_id_[frame.id] = tail;

  if (maintain_scores_) {
    tail->score = EvictionScore::tail();
    if (entries_.size() >= 2) {
      // The former tail just gained a successor.
      const auto former = std::prev(tail);
      assign_score(former, score_from_context(former));
      ++outcome.updates_performed;
    }
  }
  return outcome;
}

std::optional<Frame> SendBuffer::dequeue_for_send() {
  if (entries_.empty()) return std::nullopt;
  auto head = entries_.begin();
  if (maintain_scores_) {
    last_sent_features_ = features_of(*head);
    drop_index_key(head);
  }
  Frame frame = std::move(head->frame);
  by_id_.erase(frame.id);
  entries_.erase(head);
  // The new head's stored count already equals similarity(last_sent, next):
  // its former predecessor is exactly the frame that was just sent.
  return frame;
}

bool SendBuffer::verify_scores() const {
  auto& self = const_cast<SendBuffer&>(*this);
  if (!maintain_scores_) {
    if (!score_index_.empty()) return false;
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const BufferEntry& e) { return !e.score; });
  }
  std::size_t indexed = 0;
  for (auto it = self.entries_.begin(); it != self.entries_.end(); ++it) {
    if (!it->score) return false;
    if (*it->score != self.score_from_context(it)) return false;
    if (it->score->kind != EvictionScore::Kind::tail) {
      ++indexed;
      if (!score_index_.contains(ScoreKey{it->score->kind == EvictionScore::Kind::free,
                                          it->score->value, it->frame.id}))
        return false;
    }
  }
  return indexed == score_index_.size();
}

std::vector<std::uint64_t> SendBuffer::ids() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& entry : entries_) out.push_back(entry.frame.id);
  return out;
}

std::vector<std::optional<EvictionScore>> SendBuffer::scores() const {
  std::vector<std::optional<EvictionScore>> out;
  out.reserve(entries_.size());
  for (const auto& entry : entries_) out.push_back(entry.score);
  return out;
}

void SendBuffer::corrupt_score_for_test(std::size_t pos, int value) {
  auto it = entries_.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(pos));
  assign_score(it, EvictionScore::count_of(value));
}

}  // namespace orbbuf
