// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pominer {

// Reserved endpoint activities. They are added automatically when an lpo is
// extended and may not appear in user input.
inline constexpr std::string_view kStartActivity = "▶"; // "▶"
inline constexpr std::string_view kEndActivity = "■";   // "■"

inline bool is_reserved_activity(std::string_view name) {
  return name == kStartActivity || name == kEndActivity;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ReservedLabelError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyLogError : public Error {
 public:
  using Error::Error;
};

/// Directed pair of node ids (source, target).
using Arc = std::pair<int, int>;

/// Square boolean matrix backed by 64-bit words, used for order relations.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0) {}

  int size() const { return n_; }
  bool test(int r, int c) const {
    return (bits_[static_cast<std::size_t>(r) * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(int r, int c) {
    bits_[static_cast<std::size_t>(r) * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  /// rows[r] |= rows[src]
  void or_row(int r, int src) {
    std::uint64_t* dst = &bits_[static_cast<std::size_t>(r) * words_];
    const std::uint64_t* from = &bits_[static_cast<std::size_t>(src) * words_];
    for (int w = 0; w < words_; ++w) dst[w] |= from[w];
  }
  bool operator==(const BitMatrix& other) const = default;

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct NormalizedOrder {
  std::vector<Arc> order;     // transitive closure, sorted lexicographically
  std::vector<Arc> skeleton;  // transitive reduction, sorted lexicographically
};

/// Closes raw_arcs transitively and reduces the closure. Any generating set
/// with the same closure yields identical output. Throws CycleError (with a
/// witness cycle) if some node would precede itself, FormatError on ids
/// outside [0, node_count).
NormalizedOrder normalize_order(int node_count, const std::vector<Arc>& raw_arcs);

/// A labeled partial order: activity-labeled nodes, a strict transitively
/// closed order, and its skeleton (transitive reduction). Immutable.
class Lpo {
 public:
  Lpo() = default;

  /// Normalizes arcs via normalize_order.
  static Lpo from_arcs(std::vector<std::string> labels, const std::vector<Arc>& raw_arcs);
  /// Chain over consecutive nodes (a totally ordered trace).
  static Lpo chain(std::vector<std::string> labels);
  /// Builds without any normalization or checking; validate_lpo can be used
  /// to inspect the result. Intended for tests and deserializers.
  static Lpo unchecked(std::vector<std::string> labels, const std::vector<Arc>& order,
                       std::vector<Arc> skeleton);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_[static_cast<std::size_t>(v)]; }

  bool before(int a, int b) const { return order_.test(a, b); }
  std::vector<Arc> order_pairs() const;
  const std::vector<Arc>& skeleton() const { return skeleton_; }

  /// Adjacency over skeleton arcs; entries are indices into skeleton().
  const std::vector<std::vector<int>>& out_arcs() const { return out_arcs_; }
  const std::vector<std::vector<int>>& in_arcs() const { return in_arcs_; }

  std::vector<int> minimal_nodes() const;
  std::vector<int> maximal_nodes() const;

  bool operator==(const Lpo& other) const {
    return labels_ == other.labels_ && skeleton_ == other.skeleton_ && order_ == other.order_;
  }

 private:
  std::vector<std::string> labels_;
  BitMatrix order_;
  std::vector<Arc> skeleton_;
  std::vector<std::vector<int>> out_arcs_;
  std::vector<std::vector<int>> in_arcs_;

  void build_adjacency();
};

struct ValidationIssue {
  std::string rule;          // first violated invariant
  std::vector<int> witness;  // node ids witnessing the violation
};

/// Checks all Lpo invariants; returns the first violation or nullopt when ok.
std::optional<ValidationIssue> validate_lpo(const Lpo& lpo);

/// An Lpo whose node 0 is the unique start node "▶" (before every other node)
/// and whose last node is the unique end node "■" (after every other node).
/// Caches the deterministic topological order used by the replay passes.
class ExtendedLpo {
 public:
  explicit ExtendedLpo(Lpo lpo);

  const Lpo& lpo() const { return lpo_; }
  int size() const { return lpo_.size(); }

  /// Kahn topological order, ties broken by ascending node id.
  const std::vector<int>& topo_order() const { return topo_order_; }
  const std::vector<int>& topo_index() const { return topo_index_; }

  bool operator==(const ExtendedLpo& other) const { return lpo_ == other.lpo_; }

 private:
  Lpo lpo_;
  std::vector<int> topo_order_;
  std::vector<int> topo_index_;
};

struct LpoVariant {
  Lpo lpo;
  std::uint64_t count = 1;  // case multiplicity

  bool operator==(const LpoVariant&) const = default;
};

/// A multiset of lpo variants over a shared alphabet.
struct EventLog {
  std::vector<std::string> alphabet;  // sorted, unique
  std::vector<LpoVariant> variants;

  std::uint64_t total_cases() const {
    std::uint64_t n = 0;
    for (const auto& v : variants) n += v.count;
    return n;
  }
  bool operator==(const EventLog&) const = default;
};

/// A candidate place: preset I (producing transitions) and postset O
/// (consuming transitions). "▶" may appear only in I, "■" only in O.
class CandidatePlace {
 public:
  CandidatePlace() = default;
  CandidatePlace(std::vector<std::string> preset, std::vector<std::string> postset);

  const std::vector<std::string>& preset() const { return preset_; }
  const std::vector<std::string>& postset() const { return postset_; }
  int arity() const { return static_cast<int>(preset_.size() + postset_.size()); }

  bool produces(std::string_view label) const;
  bool consumes(std::string_view label) const;

  /// Canonical ordering: arity, then preset, then postset (lexicographic).
  friend bool operator<(const CandidatePlace& a, const CandidatePlace& b);
  bool operator==(const CandidatePlace&) const = default;

  std::string to_string() const;

 private:
  std::vector<std::string> preset_;   // sorted, unique
  std::vector<std::string> postset_;  // sorted, unique
};

/// A workflow net: the transitions "▶", alphabet..., "■", the discovered
/// inner places, and the implicit source place i (feeding "▶") and sink
/// place o (fed by "■").
struct WorkflowNet {
  std::vector<std::string> transitions;  // "▶" first, activities sorted, "■" last
  std::vector<CandidatePlace> places;    // canonical order, unique

  bool has_transition(std::string_view label) const;
  /// Activities with no adjacent place (not on any path from i to o).
  std::vector<std::string> disconnected_transitions() const;
};

/// Builds the transition list ["▶", sorted activities..., "■"].
std::vector<std::string> net_transitions(const std::vector<std::string>& alphabet);

}  // namespace pominer
