// SPDX-License-Identifier: Apache-2.0
#include "pominer/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pominer {

ConcurrencyRelation::ConcurrencyRelation(std::vector<std::pair<std::string, std::string>> pairs) {
  for (auto& [a, b] : pairs) {
    if (a == b) continue;  // irreflexive
    if (b < a) std::swap(a, b);
    pairs_.emplace_back(std::move(a), std::move(b));
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool ConcurrencyRelation::concurrent(std::string_view a, std::string_view b) const {
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(std::string(a), std::string(b)));
}

std::vector<std::pair<std::string, std::string>> directly_follows(const SequentialLog& log) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : log.cases)
    for (std::size_t i = 0; i + 1 < c.events.size(); ++i)
      pairs.emplace(c.events[i].activity, c.events[i + 1].activity);
  return {pairs.begin(), pairs.end()};
}

ConcurrencyRelation alpha_concurrency(const SequentialLog& log) {
  auto follows = directly_follows(log);
  std::vector<std::pair<std::string, std::string>> mutual;
  for (const auto& [a, b] : follows) {
    if (a < b && std::binary_search(follows.begin(), follows.end(), std::make_pair(b, a)))
      mutual.emplace_back(a, b);
  }
  return ConcurrencyRelation(std::move(mutual));
}

Lpo trace_to_lpo(const std::vector<Event>& events, const ConcurrencyRelation& concurrency) {
  std::vector<std::string> labels;
  labels.reserve(events.size());
  for (const auto& e : events) labels.push_back(e.activity);
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (!concurrency.concurrent(labels[i], labels[j]))
        arcs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return Lpo::from_arcs(std::move(labels), arcs);
}

namespace {

std::int64_t floor_div(std::int64_t value, std::int64_t divisor) {
  std::int64_t q = value / divisor;
  if (value % divisor != 0 && (value < 0) != (divisor < 0)) --q;
  return q;
}

}  // namespace

Lpo trace_to_lpo_bucketed(const std::vector<Event>& events, std::int64_t bucket_ms) {
  if (bucket_ms <= 0) throw std::invalid_argument("bucket duration must be positive");
  std::vector<std::string> labels;
  std::vector<std::int64_t> buckets;
  labels.reserve(events.size());
  buckets.reserve(events.size());
  for (const auto& e : events) {
    labels.push_back(e.activity);
    buckets.push_back(floor_div(e.time_ms, bucket_ms));
  }
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j)
      if (buckets[i] < buckets[j]) arcs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return Lpo::from_arcs(std::move(labels), arcs);
}

namespace {

EventLog collect_and_fold(const SequentialLog& log, std::vector<LpoVariant> variants) {
  EventLog result;
  std::set<std::string> alphabet;
  for (const auto& c : log.cases)
    for (const auto& e : c.events) alphabet.insert(e.activity);
  result.alphabet.assign(alphabet.begin(), alphabet.end());
  result.variants = std::move(variants);
  return fold_variants(result);
}

}  // namespace

EventLog alpha_partialize(const SequentialLog& log) {
  ConcurrencyRelation concurrency = alpha_concurrency(log);
  std::vector<LpoVariant> variants;
  variants.reserve(log.cases.size());
  for (const auto& c : log.cases)
    variants.push_back(LpoVariant{trace_to_lpo(c.events, concurrency), 1});
  return collect_and_fold(log, std::move(variants));
}

EventLog granularity_partialize(const SequentialLog& log, std::int64_t bucket_ms) {
  if (bucket_ms <= 0) throw std::invalid_argument("bucket duration must be positive");
  std::vector<LpoVariant> variants;
  variants.reserve(log.cases.size());
  for (const auto& c : log.cases)
    variants.push_back(LpoVariant{trace_to_lpo_bucketed(c.events, bucket_ms), 1});
  return collect_and_fold(log, std::move(variants));
}

}  // namespace pominer
