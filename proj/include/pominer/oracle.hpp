// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pominer/log_io.hpp"
#include "pominer/model.hpp"

namespace pominer {

/// Symmetric, irreflexive set of activity pairs declared concurrent.
class ConcurrencyRelation {
 public:
  ConcurrencyRelation() = default;
  explicit ConcurrencyRelation(std::vector<std::pair<std::string, std::string>> pairs);

  bool concurrent(std::string_view a, std::string_view b) const;
  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;  // (min, max), sorted
};

/// (a, b) pairs where some case contains a immediately followed by b.
std::vector<std::pair<std::string, std::string>> directly_follows(const SequentialLog& log);

/// Activities that directly follow each other in both directions.
ConcurrencyRelation alpha_concurrency(const SequentialLog& log);

/// Lifts one trace: generating arcs between every earlier/later event pair
/// whose labels are not concurrent, then normalized. Events with equal
/// labels stay ordered by trace position.
Lpo trace_to_lpo(const std::vector<Event>& events, const ConcurrencyRelation& concurrency);

/// Lifts one trace by timestamp bucket: arcs from every event to every event
/// in a strictly later bucket (bucket = floor(time / bucket_ms)).
Lpo trace_to_lpo_bucketed(const std::vector<Event>& events, std::int64_t bucket_ms);

/// Whole-log Alpha oracle: derive the concurrency relation from mutual
/// directly-follows pairs, lift every trace, fold into variants.
EventLog alpha_partialize(const SequentialLog& log);

/// Whole-log timestamp-granularity oracle; bucket_ms must be positive.
EventLog granularity_partialize(const SequentialLog& log, std::int64_t bucket_ms);

}  // namespace pominer
