// SPDX-License-Identifier: Apache-2.0
#include "pominer/log_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pominer {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void format_error_at(std::size_t line, const std::string& message) {
  std::ostringstream os;
  os << "line " << line << ": " << message;
  throw FormatError(os.str());
}

// Splits one RFC-4180-ish CSV record. `pos` points at the start of a record
// and is advanced past its line terminator. `line` tracks physical lines.
std::vector<std::string> read_csv_record(std::string_view text, std::size_t& pos,
                                         std::size_t& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  const std::size_t start_line = line;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          pos += 2;
        } else {
          quoted = false;
          ++pos;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
        ++pos;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        ++pos;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        ++pos;
        break;
      case '\r':
        ++pos;
        if (pos < text.size() && text[pos] == '\n') ++pos;
        ++line;
        fields.push_back(std::move(field));
        return fields;
      case '\n':
        ++pos;
        ++line;
        fields.push_back(std::move(field));
        return fields;
      default:
        field += c;
        ++pos;
        break;
    }
  }
  if (quoted) format_error_at(start_line, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_decimal_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      if (dot) return false;
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = true;
    } else {
      return false;
    }
  }
  return digits && dot;
}

// Days since the unix epoch for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int parse_fixed_digits(std::string_view s, std::size_t& i, int width) {
  int value = 0;
  for (int k = 0; k < width; ++k, ++i) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw FormatError("unparsable timestamp: \"" + std::string(s) + "\"");
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

void expect_char(std::string_view s, std::size_t& i, char c) {
  if (i >= s.size() || s[i] != c)
    throw FormatError("unparsable timestamp: \"" + std::string(s) + "\"");
  ++i;
}

}  // namespace

std::int64_t parse_timestamp_ms(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw FormatError("empty timestamp");

  if (is_integer_text(text)) {
    std::int64_t seconds = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seconds);
    if (ec != std::errc{}) throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");
    return seconds * 1000;
  }
  if (is_decimal_text(text)) {
    double seconds = std::strtod(std::string(text).c_str(), nullptr);
    return static_cast<std::int64_t>(std::llround(seconds * 1000.0));
  }

  // RFC-3339: YYYY-MM-DD[Tt ]HH:MM:SS[.frac][Z|±HH:MM]; date-only accepted.
  std::size_t i = 0;
  int year = parse_fixed_digits(text, i, 4);
  expect_char(text, i, '-');
  int month = parse_fixed_digits(text, i, 2);
  expect_char(text, i, '-');
  int day = parse_fixed_digits(text, i, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31)
    throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");

  int hour = 0, minute = 0, second = 0, milli = 0;
  std::int64_t offset_min = 0;
  if (i < text.size()) {
    if (text[i] != 'T' && text[i] != 't' && text[i] != ' ')
      throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");
    ++i;
    hour = parse_fixed_digits(text, i, 2);
    expect_char(text, i, ':');
    minute = parse_fixed_digits(text, i, 2);
    expect_char(text, i, ':');
    second = parse_fixed_digits(text, i, 2);
    if (hour > 23 || minute > 59 || second > 60)
      throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");
    if (i < text.size() && text[i] == '.') {
      ++i;
      int scale = 100;
      bool any = false;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (scale > 0) milli += (text[i] - '0') * scale;
        scale /= 10;
        any = true;
        ++i;
      }
      if (!any) throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");
    }
    if (i < text.size()) {
      char c = text[i];
      if (c == 'Z' || c == 'z') {
        ++i;
      } else if (c == '+' || c == '-') {
        ++i;
        int oh = parse_fixed_digits(text, i, 2);
        expect_char(text, i, ':');
        int om = parse_fixed_digits(text, i, 2);
        offset_min = oh * 60 + om;
        if (c == '+') offset_min = -offset_min;  // normalize to UTC
      }
    }
  }
  if (i != text.size()) throw FormatError("unparsable timestamp: \"" + std::string(text) + "\"");

  std::int64_t days = days_from_civil(year, month, day);
  std::int64_t seconds = days * 86400 + hour * 3600 + minute * 60 + second + offset_min * 60;
  return seconds * 1000 + milli;
}

SequentialLog parse_sequential_csv(std::string_view text, const CsvColumns& columns) {
  // Strip a UTF-8 BOM if present.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::size_t pos = 0, line = 1;
  if (pos >= text.size()) throw FormatError("line 1: empty document");
  std::vector<std::string> header = read_csv_record(text, pos, line);
  auto column_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      format_error_at(1, "missing column \"" + name + "\"");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t case_col = column_index(columns.case_id);
  const std::size_t act_col = column_index(columns.activity);
  const std::size_t time_col = column_index(columns.timestamp);

  std::vector<SequentialCase> cases;
  std::map<std::string, std::size_t> case_index;
  while (pos < text.size()) {
    const std::size_t record_line = line;
    std::vector<std::string> fields = read_csv_record(text, pos, line);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != header.size())
      format_error_at(record_line, "expected " + std::to_string(header.size()) + " fields, got " +
                                       std::to_string(fields.size()));
    const std::string& case_id = fields[case_col];
    const std::string& activity = fields[act_col];
    if (activity.empty()) format_error_at(record_line, "empty activity");
    if (is_reserved_activity(activity))
      format_error_at(record_line, "reserved activity name \"" + activity + "\"");
    std::int64_t time_ms;
    try {
      time_ms = parse_timestamp_ms(fields[time_col]);
    } catch (const FormatError& e) {
      format_error_at(record_line, e.what());
    }
    auto [it, inserted] = case_index.try_emplace(case_id, cases.size());
    if (inserted) cases.push_back(SequentialCase{case_id, {}});
    cases[it->second].events.push_back(Event{activity, time_ms});
  }

  for (auto& c : cases)
    std::stable_sort(c.events.begin(), c.events.end(),
                     [](const Event& a, const Event& b) { return a.time_ms < b.time_ms; });
  return SequentialLog{std::move(cases)};
}

EventLog parse_lpo_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("top-level value must be an object");

  std::set<std::string> alphabet;
  if (doc.contains("alphabet")) {
    if (!doc["alphabet"].is_array()) throw FormatError("\"alphabet\" must be an array");
    for (const auto& a : doc["alphabet"]) {
      if (!a.is_string()) throw FormatError("alphabet entries must be strings");
      const std::string name = a.get<std::string>();
      if (is_reserved_activity(name))
        throw FormatError("reserved activity name \"" + name + "\" in alphabet");
      alphabet.insert(name);
    }
  }
  if (!doc.contains("variants") || !doc["variants"].is_array())
    throw FormatError("missing \"variants\" array");

  EventLog log;
  std::size_t index = 0;
  for (const auto& var : doc["variants"]) {
    if (!var.is_object())
      throw FormatError("variant " + std::to_string(index) + ": must be an object");
    std::uint64_t count = 1;
    if (var.contains("count")) {
      if (!var["count"].is_number_unsigned() || var["count"].get<std::uint64_t>() == 0)
        throw FormatError("variant " + std::to_string(index) + ": count must be a positive integer");
      count = var["count"].get<std::uint64_t>();
    }
    if (!var.contains("nodes") || !var["nodes"].is_array())
      throw FormatError("variant " + std::to_string(index) + ": missing \"nodes\" array");
    const auto& nodes = var["nodes"];
    std::vector<std::string> labels(nodes.size());
    std::vector<char> seen(nodes.size(), 0);
    for (const auto& node : nodes) {
      if (!node.is_object() || !node.contains("id") || !node.contains("activity") ||
          !node["id"].is_number_integer() || !node["activity"].is_string())
        throw FormatError("variant " + std::to_string(index) +
                          ": nodes must be {\"id\": int, \"activity\": string}");
      const std::int64_t id = node["id"].get<std::int64_t>();
      if (id < 0 || id >= static_cast<std::int64_t>(nodes.size()) || seen[static_cast<std::size_t>(id)])
        throw FormatError("variant " + std::to_string(index) + ": node ids must be dense and unique");
      const std::string activity = node["activity"].get<std::string>();
      if (activity.empty())
        throw FormatError("variant " + std::to_string(index) + ": empty activity");
      if (is_reserved_activity(activity))
        throw FormatError("variant " + std::to_string(index) + ": reserved activity name \"" +
                          activity + "\"");
      labels[static_cast<std::size_t>(id)] = activity;
      seen[static_cast<std::size_t>(id)] = 1;
    }
    std::vector<Arc> arcs;
    if (var.contains("arcs")) {
      if (!var["arcs"].is_array())
        throw FormatError("variant " + std::to_string(index) + ": \"arcs\" must be an array");
      for (const auto& arc : var["arcs"]) {
        if (!arc.is_array() || arc.size() != 2 || !arc[0].is_number_integer() ||
            !arc[1].is_number_integer())
          throw FormatError("variant " + std::to_string(index) + ": arcs must be [src, dst] pairs");
        arcs.emplace_back(arc[0].get<int>(), arc[1].get<int>());
      }
    }
    for (const auto& label : labels) alphabet.insert(label);
    try {
      log.variants.push_back(LpoVariant{Lpo::from_arcs(std::move(labels), arcs), count});
    } catch (const CycleError& e) {
      throw CycleError("variant " + std::to_string(index) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("variant " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  log.alphabet.assign(alphabet.begin(), alphabet.end());
  return log;
}

std::string write_lpo_json(const EventLog& log) {
  ordered_json doc;
  doc["alphabet"] = log.alphabet;
  ordered_json variants = ordered_json::array();
  for (const auto& variant : log.variants) {
    ordered_json v;
    v["count"] = variant.count;
    ordered_json nodes = ordered_json::array();
    for (int id = 0; id < variant.lpo.size(); ++id)
      nodes.push_back(ordered_json{{"id", id}, {"activity", variant.lpo.label(id)}});
    v["nodes"] = std::move(nodes);
    ordered_json arcs = ordered_json::array();
    for (const auto& [src, dst] : variant.lpo.skeleton())
      arcs.push_back(ordered_json::array({src, dst}));
    v["arcs"] = std::move(arcs);
    variants.push_back(std::move(v));
  }
  doc["variants"] = std::move(variants);
  return doc.dump(2) + "\n";
}

namespace {

// One refinement round: new colors are ranks of (color, sorted predecessor
// colors, sorted successor colors) signatures. Ranks depend only on content,
// never on node ids, so equal structures converge to equal colorings.
std::vector<int> refine_colors(const Lpo& lpo, const std::vector<int>& colors) {
  using Signature = std::tuple<int, std::vector<int>, std::vector<int>>;
  const int n = lpo.size();
  std::vector<Signature> signatures(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::vector<int> preds, succs;
    for (int arc : lpo.in_arcs()[static_cast<std::size_t>(v)])
      preds.push_back(colors[static_cast<std::size_t>(lpo.skeleton()[static_cast<std::size_t>(arc)].first)]);
    for (int arc : lpo.out_arcs()[static_cast<std::size_t>(v)])
      succs.push_back(colors[static_cast<std::size_t>(lpo.skeleton()[static_cast<std::size_t>(arc)].second)]);
    std::sort(preds.begin(), preds.end());
    std::sort(succs.begin(), succs.end());
    signatures[static_cast<std::size_t>(v)] =
        Signature{colors[static_cast<std::size_t>(v)], std::move(preds), std::move(succs)};
  }
  std::vector<Signature> ranking = signatures;
  std::sort(ranking.begin(), ranking.end());
  ranking.erase(std::unique(ranking.begin(), ranking.end()), ranking.end());
  std::vector<int> next(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    next[static_cast<std::size_t>(v)] = static_cast<int>(
        std::lower_bound(ranking.begin(), ranking.end(), signatures[static_cast<std::size_t>(v)]) -
        ranking.begin());
  return next;
}

}  // namespace

Lpo canonicalize_lpo(const Lpo& lpo) {
  const int n = lpo.size();
  if (n == 0) return lpo;

  std::vector<std::string> sorted_labels = lpo.labels();
  std::sort(sorted_labels.begin(), sorted_labels.end());
  sorted_labels.erase(std::unique(sorted_labels.begin(), sorted_labels.end()), sorted_labels.end());
  std::vector<int> colors(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    colors[static_cast<std::size_t>(v)] = static_cast<int>(
        std::lower_bound(sorted_labels.begin(), sorted_labels.end(), lpo.label(v)) -
        sorted_labels.begin());

  int classes = static_cast<int>(sorted_labels.size());
  for (int round = 0; round < n; ++round) {
    std::vector<int> next = refine_colors(lpo, colors);
    int next_classes = *std::max_element(next.begin(), next.end()) + 1;
    colors = std::move(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }

  std::vector<int> by_rank(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) by_rank[static_cast<std::size_t>(v)] = v;
  std::sort(by_rank.begin(), by_rank.end(), [&](int a, int b) {
    if (colors[static_cast<std::size_t>(a)] != colors[static_cast<std::size_t>(b)])
      return colors[static_cast<std::size_t>(a)] < colors[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<int> new_id(static_cast<std::size_t>(n));
  for (int rank = 0; rank < n; ++rank) new_id[static_cast<std::size_t>(by_rank[rank])] = rank;

  std::vector<std::string> labels(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(new_id[v])] = lpo.label(v);
  std::vector<Arc> arcs;
  arcs.reserve(lpo.skeleton().size());
  for (const auto& [src, dst] : lpo.skeleton())
    arcs.emplace_back(new_id[static_cast<std::size_t>(src)], new_id[static_cast<std::size_t>(dst)]);
  return Lpo::from_arcs(std::move(labels), arcs);
}

namespace {

std::string serialize_variant(const Lpo& lpo) {
  std::ostringstream os;
  for (const auto& label : lpo.labels()) os << label << '\x1f';
  os << '\x1e';
  for (const auto& [src, dst] : lpo.skeleton()) os << src << ',' << dst << ';';
  return os.str();
}

}  // namespace

EventLog fold_variants(const EventLog& log) {
  std::map<std::string, LpoVariant> merged;
  for (const auto& variant : log.variants) {
    Lpo canonical = canonicalize_lpo(variant.lpo);
    std::string key = serialize_variant(canonical);
    auto [it, inserted] = merged.try_emplace(std::move(key), LpoVariant{std::move(canonical), 0});
    it->second.count += variant.count;
  }
  EventLog folded;
  folded.alphabet = log.alphabet;
  folded.variants.reserve(merged.size());
  for (auto& [key, variant] : merged) folded.variants.push_back(std::move(variant));
  return folded;
}

ExtendedLpo extend_with_endpoints(const Lpo& lpo) {
  for (const auto& label : lpo.labels())
    if (is_reserved_activity(label))
      throw ReservedLabelError("lpo already contains the reserved label \"" + label + "\"");

  const int n = lpo.size();
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n) + 2);
  labels.emplace_back(kStartActivity);
  for (const auto& label : lpo.labels()) labels.push_back(label);
  labels.emplace_back(kEndActivity);

  std::vector<Arc> arcs;
  for (const auto& [src, dst] : lpo.skeleton()) arcs.emplace_back(src + 1, dst + 1);
  for (int v : lpo.minimal_nodes()) arcs.emplace_back(0, v + 1);
  for (int v : lpo.maximal_nodes()) arcs.emplace_back(v + 1, n + 1);
  if (n == 0) arcs.emplace_back(0, 1);
  return ExtendedLpo(Lpo::from_arcs(std::move(labels), arcs));
}

Lpo strip_endpoints(const ExtendedLpo& extended) {
  const Lpo& lpo = extended.lpo();
  const int n = lpo.size();
  std::vector<std::string> labels(lpo.labels().begin() + 1, lpo.labels().end() - 1);
  std::vector<Arc> arcs;
  for (const auto& [src, dst] : lpo.skeleton())
    if (src != 0 && dst != n - 1) arcs.emplace_back(src - 1, dst - 1);
  return Lpo::from_arcs(std::move(labels), arcs);
}

ExtendedEventLog extend_log(const EventLog& log) {
  ExtendedEventLog extended;
  extended.alphabet = log.alphabet;
  extended.variants.reserve(log.variants.size());
  for (const auto& variant : log.variants)
    extended.variants.push_back(ExtendedVariant{extend_with_endpoints(variant.lpo), variant.count});
  return extended;
}

EventLog chain_log(const SequentialLog& log) {
  EventLog result;
  std::set<std::string> alphabet;
  for (const auto& c : log.cases) {
    std::vector<std::string> labels;
    labels.reserve(c.events.size());
    for (const auto& e : c.events) {
      alphabet.insert(e.activity);
      labels.push_back(e.activity);
    }
    result.variants.push_back(LpoVariant{Lpo::chain(std::move(labels)), 1});
  }
  result.alphabet.assign(alphabet.begin(), alphabet.end());
  return fold_variants(result);
}

}  // namespace pominer
