#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/errors.hpp"
#include "bratteli/numeric.hpp"

namespace bratteli {

/// Stationary Bratteli diagram. incidence[v][w] counts the edges from vertex
/// w at level n to vertex v at level n+1; vertices are 0-based internally.
class StationaryDiagram {
 public:
  StationaryDiagram() = default;

  explicit StationaryDiagram(IntMatrix incidence, std::vector<std::string> labels = {})
      : f_(std::move(incidence)), labels_(std::move(labels)) {
    if (f_.empty()) throw DimensionMismatch("diagram needs at least one vertex");
    for (const auto& row : f_) {
      if (row.size() != f_.size()) throw DimensionMismatch("incidence matrix is not square");
      for (const auto& x : row)
        if (x < 0) throw DimensionMismatch("incidence entries must be non-negative");
    }
    if (!labels_.empty() && labels_.size() != f_.size())
      throw DimensionMismatch("label count differs from vertex count");
  }

  std::size_t size() const noexcept { return f_.size(); }
  const IntMatrix& incidence() const noexcept { return f_; }
  const BigInt& edges(std::size_t target, std::size_t source) const { return f_[target][source]; }

  /// A = F^T, the matrix whose cone structure classifies the measures.
  IntMatrix a_matrix() const { return transpose(f_); }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Display name: the label if present, else the 1-based id.
  std::string name(std::size_t v) const {
    return labels_.empty() ? std::to_string(v + 1) : labels_[v];
  }

  /// Resolves a label or a 1-based id.
  std::optional<std::size_t> find_vertex(const std::string& token) const {
    for (std::size_t v = 0; v < labels_.size(); ++v)
      if (labels_[v] == token) return v;
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    if (token.size() > 9) return std::nullopt;
    std::size_t id = std::stoul(token);
    if (id == 0 || id > size()) return std::nullopt;
    return id - 1;
  }

  friend bool operator==(const StationaryDiagram& a, const StationaryDiagram& b) {
    return a.f_ == b.f_ && a.labels_ == b.labels_;
  }

 private:
  IntMatrix f_;
  std::vector<std::string> labels_;
};

struct Diagnostic {
  enum class Kind { EmptyRow, EmptyColumn, DuplicateLabel };
  Kind kind;
  std::size_t vertex;  // 0-based
  std::string message;
};

/// Reports structural defects; an empty result means the diagram is valid.
inline std::vector<Diagnostic> validate(const StationaryDiagram& d) {
  std::vector<Diagnostic> out;
  const auto& f = d.incidence();
  for (std::size_t v = 0; v < d.size(); ++v)
    if (row_sum(f, v) == 0)
      out.push_back({Diagnostic::Kind::EmptyRow, v,
                     "row " + std::to_string(v + 1) + " empty: vertex " + d.name(v) +
                         " has no incoming edges"});
  for (std::size_t w = 0; w < d.size(); ++w)
    if (column_sum(f, w) == 0)
      out.push_back({Diagnostic::Kind::EmptyColumn, w,
                     "column " + std::to_string(w + 1) + " empty: vertex " + d.name(w) +
                         " has no outgoing edges"});
  std::set<std::string> seen;
  for (std::size_t v = 0; v < d.labels().size(); ++v)
    if (!seen.insert(d.labels()[v]).second)
      out.push_back({Diagnostic::Kind::DuplicateLabel, v,
                     "duplicate label '" + d.labels()[v] + "'"});
  return out;
}

inline bool is_valid(const StationaryDiagram& d) { return validate(d).empty(); }

struct HeightVector {
  std::size_t level = 1;
  IntVector values;
};

inline HeightVector heights(const StationaryDiagram& d, std::size_t n) {
  if (n == 0) throw std::invalid_argument("heights: level must be >= 1");
  IntVector h(d.size(), BigInt(1));
  for (std::size_t k = 1; k < n; ++k) h = multiply(d.incidence(), h);
  return {n, std::move(h)};
}

/// Heights h^(1..n_max), index 0 unused.
inline std::vector<IntVector> height_table(const StationaryDiagram& d, std::size_t n_max) {
  std::vector<IntVector> table(n_max + 1);
  if (n_max == 0) return table;
  table[1] = IntVector(d.size(), BigInt(1));
  for (std::size_t n = 2; n <= n_max; ++n) table[n] = multiply(d.incidence(), table[n - 1]);
  return table;
}

inline StationaryDiagram telescope(const StationaryDiagram& d, std::size_t k) {
  if (k == 0) throw std::invalid_argument("telescope: k must be >= 1");
  return StationaryDiagram(matrix_power(d.incidence(), k), d.labels());
}

inline constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

/// Edge from level-(level-1) vertex `source` to level-`level` vertex
/// `target`; level-1 edges leave the root.
struct Edge {
  std::size_t level = 1;
  std::size_t source = kRoot;
  std::size_t target = 0;
  std::size_t index = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A finite chain of edges. Paths from the root start with a level-1 edge;
/// diamond legs may start at any level.
struct PathWord {
  std::vector<Edge> edges;

  std::size_t length() const noexcept { return edges.size(); }
  bool anchored() const noexcept { return !edges.empty() && edges.front().source == kRoot; }
  std::size_t source() const { return edges.front().source; }
  std::size_t target() const { return edges.back().target; }
  std::size_t end_level() const { return edges.back().level; }

  friend bool operator==(const PathWord&, const PathWord&) = default;
  friend auto operator<=>(const PathWord&, const PathWord&) = default;
};

struct CylinderSet {
  PathWord path;
  std::size_t terminal_vertex = 0;
  std::size_t level = 1;
};

/// Throws when `p` is not a valid chain in `d`.
inline void check_path(const StationaryDiagram& d, const PathWord& p) {
  if (p.edges.empty()) throw std::invalid_argument("empty path");
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Edge& e = p.edges[i];
    if (e.target >= d.size()) throw std::invalid_argument("edge target out of range");
    if (e.source == kRoot) {
      if (i != 0 || e.level != 1 || e.index != 0)
        throw std::invalid_argument("root edge must be the first, level-1 edge");
    } else {
      if (e.source >= d.size()) throw std::invalid_argument("edge source out of range");
      if (e.level < 2) throw std::invalid_argument("non-root edge below level 2");
      if (BigInt(e.index) >= d.edges(e.target, e.source))
        throw std::invalid_argument("edge index exceeds bundle size");
    }
    if (i > 0) {
      const Edge& prev = p.edges[i - 1];
      if (prev.target != e.source || prev.level + 1 != e.level)
        throw std::invalid_argument("edges do not chain");
    }
  }
}

inline CylinderSet make_cylinder(const StationaryDiagram& d, PathWord p) {
  check_path(d, p);
  if (!p.anchored()) throw std::invalid_argument("cylinder path must start at the root");
  CylinderSet c;
  c.terminal_vertex = p.target();
  c.level = p.end_level();
  c.path = std::move(p);
  return c;
}

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// All h_v^(n) paths from the root to vertex v at level n.
inline std::vector<PathWord> enumerate_paths(const StationaryDiagram& d, std::size_t v,
                                             std::size_t n,
                                             std::size_t cap = kDefaultPathCap) {
  if (n == 0) throw std::invalid_argument("enumerate_paths: level must be >= 1");
  if (v >= d.size()) throw std::invalid_argument("enumerate_paths: vertex out of range");
  const auto h = heights(d, n).values[v];
  if (h > BigInt(cap))
    throw CapExceeded("enumerate_paths: h = " + h.str() + " exceeds cap " + std::to_string(cap));

  std::vector<PathWord> out;
  out.reserve(h.convert_to<std::size_t>());
  std::vector<Edge> stack(n);
  // Fill edges from the top level down so each prefix is shared.
  auto recurse = [&](auto&& self, std::size_t level, std::size_t vertex) -> void {
    if (level == 1) {
      stack[0] = Edge{1, kRoot, vertex, 0};
      out.push_back(PathWord{stack});
      return;
    }
    for (std::size_t w = 0; w < d.size(); ++w) {
      const auto count = d.edges(vertex, w).convert_to<std::size_t>();
      for (std::size_t k = 0; k < count; ++k) {
        stack[level - 1] = Edge{level, w, vertex, k};
        self(self, level - 1, w);
      }
    }
  };
  recurse(recurse, n, v);
  return out;
}

/// Ordered stationary diagram: order[v] lists the sources of the edges into
/// v from smallest to largest. This is the substitution read on the diagram.
struct OrderedDiagram {
  StationaryDiagram base;
  std::vector<std::vector<std::size_t>> order;

  OrderedDiagram() = default;
  OrderedDiagram(StationaryDiagram d, std::vector<std::vector<std::size_t>> words)
      : base(std::move(d)), order(std::move(words)) {
    if (order.size() != base.size())
      throw DimensionMismatch("order needs one word per vertex");
    for (std::size_t v = 0; v < base.size(); ++v) {
      IntVector counts(base.size(), BigInt(0));
      for (auto w : order[v]) {
        if (w >= base.size()) throw DimensionMismatch("order letter out of range");
        counts[w] += 1;
      }
      if (counts != base.incidence()[v])
        throw DimensionMismatch("order word for vertex " + base.name(v) +
                                " does not match its incidence row");
    }
    build_positions();
  }

  std::size_t size() const noexcept { return base.size(); }

  /// Position of edge (source w, bundle index k) inside order[v].
  std::size_t position(std::size_t v, std::size_t w, std::size_t k) const {
    return positions_[v][w][k];
  }

  /// Source and bundle index of the edge at order position `pos` into v.
  std::pair<std::size_t, std::size_t> edge_at(std::size_t v, std::size_t pos) const {
    return edge_at_[v][pos];
  }

  /// Edge at position `pos` into v at `level` (level >= 2).
  Edge edge(std::size_t level, std::size_t v, std::size_t pos) const {
    auto [w, k] = edge_at_[v][pos];
    return Edge{level, w, v, k};
  }

  std::size_t position(const Edge& e) const {
    if (e.source == kRoot) return 0;
    return positions_[e.target][e.source][e.index];
  }

  friend bool operator==(const OrderedDiagram& a, const OrderedDiagram& b) {
    return a.base == b.base && a.order == b.order;
  }

 private:
  void build_positions() {
    const std::size_t n = base.size();
    positions_.assign(n, std::vector<std::vector<std::size_t>>(n));
    edge_at_.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t pos = 0; pos < order[v].size(); ++pos) {
        std::size_t w = order[v][pos];
        edge_at_[v].emplace_back(w, positions_[v][w].size());
        positions_[v][w].push_back(pos);
      }
    }
  }

  std::vector<std::vector<std::vector<std::size_t>>> positions_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edge_at_;
};

/// Order obtained by listing sources in increasing vertex index.
inline OrderedDiagram default_order(const StationaryDiagram& d) {
  std::vector<std::vector<std::size_t>> words(d.size());
  for (std::size_t v = 0; v < d.size(); ++v)
    for (std::size_t w = 0; w < d.size(); ++w)
      for (BigInt k = 0; k < d.edges(v, w); ++k) words[v].push_back(w);
  return OrderedDiagram(d, std::move(words));
}

}  // namespace bratteli
