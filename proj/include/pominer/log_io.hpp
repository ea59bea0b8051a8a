// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pominer/model.hpp"

namespace pominer {

/// One timestamped activity execution.
struct Event {
  std::string activity;
  std::int64_t time_ms = 0;  // milliseconds since the unix epoch

  bool operator==(const Event&) const = default;
};

struct SequentialCase {
  std::string id;
  std::vector<Event> events;  // sorted by time, ties keep file order

  bool operator==(const SequentialCase&) const = default;
};

/// A totally ordered log: cases in first-appearance order.
struct SequentialLog {
  std::vector<SequentialCase> cases;

  bool operator==(const SequentialLog&) const = default;
};

struct CsvColumns {
  std::string case_id = "case";
  std::string activity = "activity";
  std::string timestamp = "timestamp";
};

/// Parses "RFC-3339 timestamp or epoch seconds" into epoch milliseconds.
std::int64_t parse_timestamp_ms(std::string_view text);

/// Parses a comma-separated log with a header row naming the columns.
/// Events are grouped by case and stably sorted by timestamp. Throws
/// FormatError with a line number on malformed input.
SequentialLog parse_sequential_csv(std::string_view text, const CsvColumns& columns = {});

/// Parses the lpo-log JSON document format (see write_lpo_json). Arcs may be
/// any generating relation; every variant is normalized. Throws FormatError,
/// or CycleError naming the offending variant.
EventLog parse_lpo_json(std::string_view text);

/// Serializes an event log: {"alphabet": [...], "variants": [{"count": n,
/// "nodes": [{"id": i, "activity": a}...], "arcs": [[src, dst]...]}...]}.
/// Arcs are the skeleton, sorted; output is deterministic.
std::string write_lpo_json(const EventLog& log);

/// Deterministic relabeling of an lpo by iterated (label, degree,
/// neighbor-signature) refinement with lexicographic tie-breaks. Structurally
/// identical variants map to equal lpos unless refinement cannot tell their
/// nodes apart.
Lpo canonicalize_lpo(const Lpo& lpo);

/// Merges variants with identical canonical forms, summing multiplicities;
/// output variants are canonicalized and sorted.
EventLog fold_variants(const EventLog& log);

/// Adds the unique start node "▶" (before everything) and end node "■"
/// (after everything). Node ids shift by one; "▶" becomes node 0 and "■" the
/// last node. Throws ReservedLabelError if the input already uses "▶"/"■".
ExtendedLpo extend_with_endpoints(const Lpo& lpo);

/// Inverse of extend_with_endpoints: drops the endpoint nodes and
/// renormalizes.
Lpo strip_endpoints(const ExtendedLpo& lpo);

struct ExtendedVariant {
  ExtendedLpo lpo;
  std::uint64_t count = 1;
};

struct ExtendedEventLog {
  std::vector<std::string> alphabet;
  std::vector<ExtendedVariant> variants;

  std::uint64_t total_cases() const {
    std::uint64_t n = 0;
    for (const auto& v : variants) n += v.count;
    return n;
  }
};

/// Extends every variant once up front.
ExtendedEventLog extend_log(const EventLog& log);

/// Represents each case as a chain lpo (the totally ordered special case)
/// and folds the result into weighted variants.
EventLog chain_log(const SequentialLog& log);

}  // namespace pominer
