#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/substitution.hpp"

namespace bratteli {

using json = nlohmann::json;

struct DiagramDocument {
  StationaryDiagram diagram;
  std::optional<OrderedDiagram> ordered;
};

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

/// Line of the first occurrence of the key "name", or 0 when absent.
inline std::size_t line_of_key(const std::string& text, const std::string& name) {
  auto pos = text.find("\"" + name + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}
  [[noreturn]] void fail(const std::string& key, const std::string& field, const std::string& msg) const {
    throw ParseError(msg, line_of_key(text_, key), field);
  }

 private:
  const std::string& text_;
};

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    auto colon = msg.rfind("syntax error");
    if (colon != std::string::npos) msg = msg.substr(colon);
    throw ParseError(msg, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

inline BigInt parse_count(const json& v, const Locator& loc, const std::string& key,
                          const std::string& field) {
  if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
  if (v.is_number_integer()) {
    auto x = v.get<std::int64_t>();
    if (x < 0) loc.fail(key, field, "entries must be non-negative");
    return BigInt(x);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      return BigInt(s);
  }
  loc.fail(key, field, "expected a non-negative integer");
}

/// Splits a word into vertex tokens: on whitespace when present, into single
/// characters when every name is one character, else the whole string.
inline std::vector<std::string> tokenize(const std::string& word, bool single_char_names) {
  std::vector<std::string> out;
  if (std::any_of(word.begin(), word.end(), [](unsigned char c) { return std::isspace(c); })) {
    std::istringstream is(word);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }
  if (single_char_names) {
    for (char c : word) out.emplace_back(1, c);
    return out;
  }
  if (!word.empty()) out.push_back(word);
  return out;
}

inline bool single_char_names(const std::vector<std::string>& names) {
  return std::all_of(names.begin(), names.end(), [](const std::string& s) { return s.size() == 1; });
}

inline std::vector<std::string> vertex_names(const StationaryDiagram& d) {
  std::vector<std::string> names;
  for (std::size_t v = 0; v < d.size(); ++v) names.push_back(d.name(v));
  return names;
}

inline std::vector<std::vector<std::size_t>> parse_words(const json& node, const StationaryDiagram& d,
                                                         const Locator& loc, const std::string& key) {
  const std::size_t n = d.size();
  const bool single = single_char_names(vertex_names(d));
  std::vector<std::optional<std::string>> raw(n);
  if (node.is_array()) {
    if (node.size() != n) loc.fail(key, key, "expected " + std::to_string(n) + " words");
    for (std::size_t v = 0; v < n; ++v) {
      if (!node[v].is_string()) loc.fail(key, key + "[" + std::to_string(v) + "]", "word must be a string");
      raw[v] = node[v].get<std::string>();
    }
  } else if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      auto v = d.find_vertex(it.key());
      if (!v) loc.fail(key, key + "." + it.key(), "unknown vertex '" + it.key() + "'");
      if (!it.value().is_string()) loc.fail(key, key + "." + it.key(), "word must be a string");
      raw[*v] = it.value().get<std::string>();
    }
    for (std::size_t v = 0; v < n; ++v)
      if (!raw[v]) loc.fail(key, key + "." + d.name(v), "missing word for vertex " + d.name(v));
  } else {
    loc.fail(key, key, "expected a list of words or a map from vertex to word");
  }
  std::vector<std::vector<std::size_t>> words(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::string field = key + "." + d.name(v);
    for (const auto& tok : tokenize(*raw[v], single)) {
      auto w = d.find_vertex(tok);
      if (!w) loc.fail(key, field, "unknown letter '" + tok + "'");
      words[v].push_back(*w);
    }
    if (words[v].empty()) loc.fail(key, field, "empty word");
  }
  return words;
}

inline std::string join_word(const std::vector<std::size_t>& w, const std::vector<std::string>& names) {
  const bool single = single_char_names(names);
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!single && k > 0) out += ' ';
    out += names[w[k]];
  }
  return out;
}

inline std::string count_text(const BigInt& x) {
  static const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max());
  return x > limit ? json(x.str()).dump() : x.str();
}

inline std::string string_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out += ", ";
    out += json(items[k]).dump();
  }
  return out + "]";
}

}  // namespace detail

inline DiagramDocument parse_diagram(const std::string& text) {
  const json root = detail::parse_json(text);
  const detail::Locator loc(text);
  if (!root.is_object()) throw ParseError("document must be an object", 1);
  for (auto it = root.begin(); it != root.end(); ++it)
    if (it.key() != "n" && it.key() != "incidence" && it.key() != "labels" && it.key() != "order")
      loc.fail(it.key(), it.key(), "unknown field");
  if (!root.contains("n")) throw ParseError("missing field", 0, "n");
  if (!root.contains("incidence")) throw ParseError("missing field", 0, "incidence");
  const auto& nnode = root["n"];
  if (!nnode.is_number_integer() || nnode.get<std::int64_t>() < 1)
    loc.fail("n", "n", "expected a positive integer");
  const auto n = static_cast<std::size_t>(nnode.get<std::int64_t>());

  const auto& inc = root["incidence"];
  if (!inc.is_array() || inc.size() != n)
    loc.fail("incidence", "incidence", "expected " + std::to_string(n) + " rows");
  IntMatrix f;
  for (std::size_t v = 0; v < n; ++v) {
    const std::string field = "incidence[" + std::to_string(v) + "]";
    if (!inc[v].is_array() || inc[v].size() != n)
      loc.fail("incidence", field, "row must have " + std::to_string(n) + " entries");
    IntVector row;
    for (std::size_t w = 0; w < n; ++w)
      row.push_back(detail::parse_count(inc[v][w], loc, "incidence", field + "[" + std::to_string(w) + "]"));
    f.push_back(std::move(row));
  }

  std::vector<std::string> labels;
  if (root.contains("labels")) {
    const auto& ln = root["labels"];
    if (!ln.is_array() || ln.size() != n) loc.fail("labels", "labels", "expected " + std::to_string(n) + " labels");
    std::set<std::string> seen;
    for (std::size_t v = 0; v < n; ++v) {
      const std::string field = "labels[" + std::to_string(v) + "]";
      if (!ln[v].is_string()) loc.fail("labels", field, "label must be a string");
      auto s = ln[v].get<std::string>();
      if (s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }))
        loc.fail("labels", field, "label must be non-empty without whitespace");
      if (!seen.insert(s).second) loc.fail("labels", field, "duplicate label '" + s + "'");
      labels.push_back(std::move(s));
    }
  }

  DiagramDocument doc;
  doc.diagram = StationaryDiagram(std::move(f), std::move(labels));
  if (root.contains("order")) {
    auto words = detail::parse_words(root["order"], doc.diagram, loc, "order");
    try {
      doc.ordered = OrderedDiagram(doc.diagram, std::move(words));
    } catch (const DimensionMismatch& e) {
      loc.fail("order", "order", e.what());
    }
  }
  return doc;
}

/// Canonical text: fields n, incidence, labels, order; one row per line.
inline std::string serialize(const StationaryDiagram& d, const OrderedDiagram* od = nullptr) {
  std::ostringstream os;
  os << "{\n  \"n\": " << d.size() << ",\n  \"incidence\": [\n";
  for (std::size_t v = 0; v < d.size(); ++v) {
    os << "    [";
    for (std::size_t w = 0; w < d.size(); ++w) os << (w ? ", " : "") << detail::count_text(d.edges(v, w));
    os << "]" << (v + 1 < d.size() ? "," : "") << "\n";
  }
  os << "  ]";
  if (d.has_labels()) os << ",\n  \"labels\": " << detail::string_list(d.labels());
  if (od) {
    auto names = detail::vertex_names(d);
    std::vector<std::string> words;
    for (const auto& w : od->order) words.push_back(detail::join_word(w, names));
    os << ",\n  \"order\": " << detail::string_list(words);
  }
  os << "\n}\n";
  return os.str();
}

inline std::string serialize(const DiagramDocument& doc) {
  return serialize(doc.diagram, doc.ordered ? &*doc.ordered : nullptr);
}

inline std::string serialize(const OrderedDiagram& od) { return serialize(od.base, &od); }

inline Substitution parse_substitution(const std::string& text) {
  const json root = detail::parse_json(text);
  const detail::Locator loc(text);
  if (!root.is_object()) throw ParseError("document must be an object", 1);
  if (!root.contains("alphabet")) throw ParseError("missing field", 0, "alphabet");
  if (!root.contains("rules")) throw ParseError("missing field", 0, "rules");
  const auto& al = root["alphabet"];
  if (!al.is_array() || al.empty()) loc.fail("alphabet", "alphabet", "expected a non-empty list of letters");
  std::vector<std::string> letters;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < al.size(); ++k) {
    const std::string field = "alphabet[" + std::to_string(k) + "]";
    if (!al[k].is_string()) loc.fail("alphabet", field, "letter must be a string");
    auto s = al[k].get<std::string>();
    if (s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }))
      loc.fail("alphabet", field, "letter must be a single non-empty token");
    if (!seen.insert(s).second) loc.fail("alphabet", field, "duplicate letter '" + s + "'");
    letters.push_back(std::move(s));
  }
  // Letters resolve through a label-only diagram shell.
  StationaryDiagram shell(identity_matrix(letters.size()), letters);
  auto words = detail::parse_words(root["rules"], shell, loc, "rules");
  return Substitution(std::move(letters), std::move(words));
}

inline std::string serialize(const Substitution& s) {
  std::ostringstream os;
  os << "{\n  \"alphabet\": " << detail::string_list(s.alphabet) << ",\n  \"rules\": {\n";
  for (std::size_t a = 0; a < s.size(); ++a)
    os << "    " << json(s.alphabet[a]).dump() << ": " << json(detail::join_word(s.rules[a], s.alphabet)).dump()
       << (a + 1 < s.size() ? "," : "") << "\n";
  os << "  }\n}\n";
  return os.str();
}

/// Measure file: {"barycentric": [...]} over the ergodic measures, or
/// {"p1": [...]} giving the level-1 vector. Entries are integers, decimals
/// or "p/q" strings.
struct MeasureDocument {
  std::optional<RatVector> barycentric;
  std::optional<RatVector> p1;
};

inline MeasureDocument parse_measure_document(const std::string& text) {
  const json root = detail::parse_json(text);
  const detail::Locator loc(text);
  if (!root.is_object()) throw ParseError("document must be an object", 1);
  auto read = [&](const std::string& key) {
    const auto& node = root[key];
    if (!node.is_array()) loc.fail(key, key, "expected a list of numbers");
    RatVector out;
    for (std::size_t k = 0; k < node.size(); ++k) {
      const std::string field = key + "[" + std::to_string(k) + "]";
      std::optional<Rational> q;
      if (node[k].is_string()) q = parse_rational(node[k].get<std::string>());
      else if (node[k].is_number_integer()) q = Rational(node[k].get<std::int64_t>());
      else if (node[k].is_number()) q = parse_rational(node[k].dump());
      if (!q) loc.fail(key, field, "expected a rational number");
      out.push_back(*q);
    }
    return out;
  };
  MeasureDocument doc;
  if (root.contains("barycentric")) doc.barycentric = read("barycentric");
  if (root.contains("p1")) doc.p1 = read("p1");
  if (!doc.barycentric && !doc.p1) throw ParseError("expected field 'barycentric' or 'p1'", 1);
  return doc;
}

}  // namespace bratteli
