// SPDX-License-Identifier: Apache-2.0
#include "pominer/model.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace pominer {

namespace {

std::string format_cycle(const std::vector<int>& cycle) {
  std::ostringstream os;
  os << "cycle: ";
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) os << " -> ";
    os << cycle[i];
  }
  return os.str();
}

// Deterministic Kahn order, ties by ascending node id. Returns the order, or
// a short order when the arcs contain a cycle.
std::vector<int> kahn_order(int n, const std::vector<std::vector<int>>& succ) {
  std::vector<int> indegree(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v : succ[u]) ++indegree[v];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : succ[v])
      if (--indegree[w] == 0) ready.push(w);
  }
  return order;
}

// Extracts a witness cycle among nodes that Kahn could not order.
std::vector<int> witness_cycle(int n, const std::vector<std::vector<int>>& succ,
                               const std::vector<int>& ordered) {
  std::vector<char> in_order(n, 0);
  for (int v : ordered) in_order[v] = 1;
  int start = 0;
  while (start < n && in_order[start]) ++start;
  std::vector<int> path;
  std::vector<int> pos(n, -1);
  int v = start;
  while (pos[v] < 0) {
    pos[v] = static_cast<int>(path.size());
    path.push_back(v);
    for (int w : succ[v]) {
      if (!in_order[w]) {
        v = w;
        break;
      }
    }
  }
  std::vector<int> cycle(path.begin() + pos[v], path.end());
  cycle.push_back(v);
  return cycle;
}

}  // namespace

NormalizedOrder normalize_order(int node_count, const std::vector<Arc>& raw_arcs) {
  std::vector<std::vector<int>> succ(node_count);
  for (const auto& [src, dst] : raw_arcs) {
    if (src < 0 || src >= node_count || dst < 0 || dst >= node_count) {
      std::ostringstream os;
      os << "arc (" << src << ", " << dst << ") references an invalid node id";
      throw FormatError(os.str());
    }
    if (src == dst) throw CycleError(format_cycle({src, dst}));
    succ[src].push_back(dst);
  }

  std::vector<int> topo = kahn_order(node_count, succ);
  if (static_cast<int>(topo.size()) != node_count)
    throw CycleError(format_cycle(witness_cycle(node_count, succ, topo)));

  // Closure: sweep in reverse topological order so successor rows are final.
  BitMatrix closure(node_count);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int u = *it;
    for (int v : succ[u]) {
      closure.set(u, v);
      closure.or_row(u, v);
    }
  }

  // Reduction: drop (u, v) when some w has u < w < v.
  BitMatrix two_step(node_count);
  for (int u = 0; u < node_count; ++u)
    for (int w = 0; w < node_count; ++w)
      if (closure.test(u, w)) two_step.or_row(u, w);

  NormalizedOrder result;
  for (int u = 0; u < node_count; ++u) {
    for (int v = 0; v < node_count; ++v) {
      if (!closure.test(u, v)) continue;
      result.order.emplace_back(u, v);
      if (!two_step.test(u, v)) result.skeleton.emplace_back(u, v);
    }
  }
  return result;
}

void Lpo::build_adjacency() {
  out_arcs_.assign(labels_.size(), {});
  in_arcs_.assign(labels_.size(), {});
  for (std::size_t a = 0; a < skeleton_.size(); ++a) {
    out_arcs_[static_cast<std::size_t>(skeleton_[a].first)].push_back(static_cast<int>(a));
    in_arcs_[static_cast<std::size_t>(skeleton_[a].second)].push_back(static_cast<int>(a));
  }
}

Lpo Lpo::from_arcs(std::vector<std::string> labels, const std::vector<Arc>& raw_arcs) {
  for (const auto& l : labels)
    if (l.empty()) throw FormatError("empty activity label");
  NormalizedOrder normalized = normalize_order(static_cast<int>(labels.size()), raw_arcs);
  Lpo lpo;
  lpo.labels_ = std::move(labels);
  lpo.order_ = BitMatrix(lpo.size());
  for (const auto& [u, v] : normalized.order) lpo.order_.set(u, v);
  lpo.skeleton_ = std::move(normalized.skeleton);
  lpo.build_adjacency();
  return lpo;
}

Lpo Lpo::chain(std::vector<std::string> labels) {
  std::vector<Arc> arcs;
  for (int i = 0; i + 1 < static_cast<int>(labels.size()); ++i) arcs.emplace_back(i, i + 1);
  return from_arcs(std::move(labels), arcs);
}

Lpo Lpo::unchecked(std::vector<std::string> labels, const std::vector<Arc>& order,
                   std::vector<Arc> skeleton) {
  Lpo lpo;
  lpo.labels_ = std::move(labels);
  lpo.order_ = BitMatrix(lpo.size());
  for (const auto& [u, v] : order) lpo.order_.set(u, v);
  std::sort(skeleton.begin(), skeleton.end());
  lpo.skeleton_ = std::move(skeleton);
  lpo.build_adjacency();
  return lpo;
}

std::vector<Arc> Lpo::order_pairs() const {
  std::vector<Arc> pairs;
  for (int u = 0; u < size(); ++u)
    for (int v = 0; v < size(); ++v)
      if (order_.test(u, v)) pairs.emplace_back(u, v);
  return pairs;
}

std::vector<int> Lpo::minimal_nodes() const {
  std::vector<int> result;
  for (int v = 0; v < size(); ++v)
    if (in_arcs_[static_cast<std::size_t>(v)].empty()) result.push_back(v);
  return result;
}

std::vector<int> Lpo::maximal_nodes() const {
  std::vector<int> result;
  for (int v = 0; v < size(); ++v)
    if (out_arcs_[static_cast<std::size_t>(v)].empty()) result.push_back(v);
  return result;
}

std::optional<ValidationIssue> validate_lpo(const Lpo& lpo) {
  const int n = lpo.size();
  for (int v = 0; v < n; ++v)
    if (lpo.label(v).empty()) return ValidationIssue{"empty label", {v}};
  for (int v = 0; v < n; ++v)
    if (lpo.before(v, v)) return ValidationIssue{"not irreflexive", {v}};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!lpo.before(a, b)) continue;
      for (int c = 0; c < n; ++c)
        if (lpo.before(b, c) && !lpo.before(a, c))
          return ValidationIssue{"not transitive", {a, b, c}};
    }

  // Skeleton arcs must be order pairs, their closure must reproduce the
  // order, and no arc may be implied by two others.
  for (const auto& [u, v] : lpo.skeleton())
    if (!lpo.before(u, v)) return ValidationIssue{"skeleton not contained in order", {u, v}};
  for (const auto& [u, v] : lpo.skeleton())
    for (int w = 0; w < n; ++w)
      if (lpo.before(u, w) && lpo.before(w, v))
        return ValidationIssue{"skeleton not reduced", {u, w, v}};

  BitMatrix closed(n);
  std::vector<std::vector<int>> succ(n);
  for (const auto& [u, v] : lpo.skeleton()) succ[u].push_back(v);
  std::vector<int> topo = kahn_order(n, succ);
  if (static_cast<int>(topo.size()) != n) return ValidationIssue{"skeleton cyclic", {}};
  for (auto it = topo.rbegin(); it != topo.rend(); ++it)
    for (int v : succ[*it]) {
      closed.set(*it, v);
      closed.or_row(*it, v);
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (closed.test(a, b) != lpo.before(a, b))
        return ValidationIssue{"skeleton closure differs from order", {a, b}};

  return std::nullopt;
}

ExtendedLpo::ExtendedLpo(Lpo lpo) : lpo_(std::move(lpo)) {
  const int n = lpo_.size();
  if (n < 2) throw FormatError("extended lpo needs at least the two endpoint nodes");
  if (lpo_.label(0) != kStartActivity || lpo_.label(n - 1) != kEndActivity)
    throw FormatError("extended lpo must start with \"▶\" and end with \"■\"");
  for (int v = 1; v < n - 1; ++v) {
    if (is_reserved_activity(lpo_.label(v)))
      throw FormatError("reserved endpoint label on an inner node");
    if (!lpo_.before(0, v) || !lpo_.before(v, n - 1))
      throw FormatError("endpoint nodes must bound every inner node");
  }
  if (!lpo_.before(0, n - 1)) throw FormatError("\"▶\" must precede \"■\"");

  std::vector<std::vector<int>> succ(n);
  for (const auto& [u, v] : lpo_.skeleton()) succ[u].push_back(v);
  topo_order_ = kahn_order(n, succ);
  topo_index_.assign(n, 0);
  for (int i = 0; i < n; ++i) topo_index_[static_cast<std::size_t>(topo_order_[i])] = i;
}

CandidatePlace::CandidatePlace(std::vector<std::string> preset, std::vector<std::string> postset)
    : preset_(std::move(preset)), postset_(std::move(postset)) {
  std::sort(preset_.begin(), preset_.end());
  preset_.erase(std::unique(preset_.begin(), preset_.end()), preset_.end());
  std::sort(postset_.begin(), postset_.end());
  postset_.erase(std::unique(postset_.begin(), postset_.end()), postset_.end());
  if (preset_.empty() || postset_.empty())
    throw FormatError("candidate place needs a non-empty preset and postset");
  for (const auto& t : preset_)
    if (t == kEndActivity) throw FormatError("\"■\" cannot produce on a place");
  for (const auto& t : postset_)
    if (t == kStartActivity) throw FormatError("\"▶\" cannot consume from a place");
}

bool CandidatePlace::produces(std::string_view label) const {
  return std::binary_search(preset_.begin(), preset_.end(), label);
}

bool CandidatePlace::consumes(std::string_view label) const {
  return std::binary_search(postset_.begin(), postset_.end(), label);
}

bool operator<(const CandidatePlace& a, const CandidatePlace& b) {
  if (a.arity() != b.arity()) return a.arity() < b.arity();
  if (a.preset_ != b.preset_) return a.preset_ < b.preset_;
  return a.postset_ < b.postset_;
}

std::string CandidatePlace::to_string() const {
  std::ostringstream os;
  os << "({";
  for (std::size_t i = 0; i < preset_.size(); ++i) os << (i ? ", " : "") << preset_[i];
  os << "}, {";
  for (std::size_t i = 0; i < postset_.size(); ++i) os << (i ? ", " : "") << postset_[i];
  os << "})";
  return os.str();
}

bool WorkflowNet::has_transition(std::string_view label) const {
  return std::find(transitions.begin(), transitions.end(), label) != transitions.end();
}

std::vector<std::string> WorkflowNet::disconnected_transitions() const {
  std::vector<std::string> result;
  for (const auto& t : transitions) {
    if (t == kStartActivity || t == kEndActivity) continue;  // wired to i / o
    bool touched = false;
    for (const auto& p : places)
      if (p.produces(t) || p.consumes(t)) {
        touched = true;
        break;
      }
    if (!touched) result.push_back(t);
  }
  return result;
}

std::vector<std::string> net_transitions(const std::vector<std::string>& alphabet) {
  std::vector<std::string> transitions;
  transitions.reserve(alphabet.size() + 2);
  transitions.emplace_back(kStartActivity);
  std::vector<std::string> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto& a : sorted) transitions.push_back(std::move(a));
  transitions.emplace_back(kEndActivity);
  return transitions;
}

}  // namespace pominer
