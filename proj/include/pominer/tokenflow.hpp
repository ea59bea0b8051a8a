// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pominer/log_io.hpp"
#include "pominer/model.hpp"

namespace pominer {

enum class DecidedBy { closed_form, forward, backward, maxflow };

const char* to_string(DecidedBy stage);

/// Per-lpo classification of a candidate place.
struct PlaceVerdict {
  bool underfed = false;
  bool overfed = false;
  std::int64_t final_marking = 0;
  DecidedBy decided_by = DecidedBy::closed_form;  // stage that decided underfed

  bool fitting() const { return !underfed && !overfed; }
};

/// One greedy token distribution over the skeleton arcs.
struct FlowAssignment {
  std::vector<std::uint64_t> flow;      // per skeleton arc (index into Lpo::skeleton())
  std::vector<std::uint8_t> satisfied;  // per node; forward pass only, empty for backward
  bool all_satisfied = false;           // every consuming node received a token / every demand absorbed
  bool choice_points = false;           // some positive budget had more than one arc to take
};

/// Unique final marking: producing nodes minus consuming nodes. The endpoint
/// nodes count like any other when "▶"/"■" are in the preset/postset.
std::int64_t final_marking(const CandidatePlace& place, const ExtendedLpo& lpo);

/// Greedy forward distribution: nodes in topological order, each node's
/// budget pushed entirely along the arc toward the nearest consumer-bearing
/// successor. Sound for definite answers, never exhaustive.
FlowAssignment forward_pass(const CandidatePlace& place, const ExtendedLpo& lpo);

/// The same greedy on the reversed skeleton with roles swapped: consumers
/// emit one demand each, producers absorb at most one. No final marking.
FlowAssignment backward_pass(const CandidatePlace& place, const ExtendedLpo& lpo);

/// Exact underfed decision via max-flow on the unit-capacity network with
/// split nodes (a node cannot satisfy its own demand). True iff some
/// consuming node cannot be supplied.
bool maxflow_classify(const CandidatePlace& place, const ExtendedLpo& lpo);

/// Full decision ladder: closed-form final marking, forward pass, backward
/// pass, max-flow. decided_by records the stage that settled underfed.
PlaceVerdict classify_lpo(const CandidatePlace& place, const ExtendedLpo& lpo);

/// Log-level fractions, weighted by variant multiplicity.
struct LogVerdict {
  double fitting_fraction = 0.0;
  double not_underfed_fraction = 0.0;
  double not_overfed_fraction = 0.0;
};

/// Exact case counts behind a LogVerdict; discovery compares these against
/// tau without floating-point drift.
struct VerdictCounts {
  std::uint64_t fitting = 0;
  std::uint64_t not_underfed = 0;
  std::uint64_t not_overfed = 0;
  std::uint64_t total = 0;

  LogVerdict fractions() const;
};

/// True iff count/total >= tau (with a tiny epsilon so tau = k/n thresholds
/// are not lost to rounding).
bool meets_threshold(std::uint64_t count, std::uint64_t total, double tau);

std::vector<PlaceVerdict> classify_variants(const CandidatePlace& place, const ExtendedEventLog& log);
VerdictCounts count_verdicts(const std::vector<PlaceVerdict>& verdicts, const ExtendedEventLog& log);
LogVerdict aggregate_verdicts(const CandidatePlace& place, const ExtendedEventLog& log);

}  // namespace pominer
