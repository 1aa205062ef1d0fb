#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/spectral.hpp"

namespace bratteli {

// ---------------------------------------------------------------------------
// Paths and the successor map.

inline PathWord min_path(const OrderedDiagram& od, std::size_t v, std::size_t n) {
  if (n == 0) throw std::invalid_argument("min_path: level must be >= 1");
  PathWord p;
  p.edges.resize(n);
  std::size_t current = v;
  for (std::size_t level = n; level >= 2; --level) {
    p.edges[level - 1] = od.edge(level, current, 0);
    current = p.edges[level - 1].source;
  }
  p.edges[0] = Edge{1, kRoot, current, 0};
  return p;
}

inline PathWord max_path(const OrderedDiagram& od, std::size_t v, std::size_t n) {
  if (n == 0) throw std::invalid_argument("max_path: level must be >= 1");
  PathWord p;
  p.edges.resize(n);
  std::size_t current = v;
  for (std::size_t level = n; level >= 2; --level) {
    p.edges[level - 1] = od.edge(level, current, od.order[current].size() - 1);
    current = p.edges[level - 1].source;
  }
  p.edges[0] = Edge{1, kRoot, current, 0};
  return p;
}

inline bool is_maximal(const OrderedDiagram& od, const PathWord& p) {
  for (std::size_t i = 1; i < p.edges.size(); ++i)
    if (od.position(p.edges[i]) + 1 < od.order[p.edges[i].target].size()) return false;
  return true;
}

/// Replaces `p` by its successor in place; returns false (leaving p
/// unchanged) when p is the maximal path.
inline bool advance(const OrderedDiagram& od, PathWord& p) {
  for (std::size_t i = 1; i < p.edges.size(); ++i) {
    Edge& e = p.edges[i];
    std::size_t pos = od.position(e);
    if (pos + 1 >= od.order[e.target].size()) continue;
    e = od.edge(e.level, e.target, pos + 1);
    std::size_t current = e.source;
    for (std::size_t k = i; k-- > 1;) {
      p.edges[k] = od.edge(k + 1, current, 0);
      current = p.edges[k].source;
    }
    p.edges[0] = Edge{1, kRoot, current, 0};
    return true;
  }
  return false;
}

/// The successor of an anchored path, or nullopt for the maximal path.
inline std::optional<PathWord> successor(const OrderedDiagram& od, PathWord p) {
  if (!p.anchored()) throw std::invalid_argument("successor: path must start at the root");
  if (!advance(od, p)) return std::nullopt;
  return p;
}

/// Position of p in the successor enumeration of E(v0, r(p)).
inline BigInt rank(const OrderedDiagram& od, const PathWord& p,
                   const std::vector<IntVector>& heights_table) {
  BigInt r = 0;
  for (std::size_t i = 1; i < p.edges.size(); ++i) {
    const Edge& e = p.edges[i];
    const std::size_t pos = od.position(e);
    const auto& h = heights_table.at(e.level - 1);
    for (std::size_t k = 0; k < pos; ++k) r += h[od.order[e.target][k]];
  }
  return r;
}

inline BigInt rank(const OrderedDiagram& od, const PathWord& p) {
  return rank(od, p, height_table(od.base, p.length()));
}

/// Path of E(v0, v) at level n with the given rank.
inline PathWord path_at_rank(const OrderedDiagram& od, std::size_t v, std::size_t n, BigInt r) {
  auto table = height_table(od.base, n);
  if (r < 0 || r >= table[n][v]) throw std::out_of_range("path_at_rank: rank out of range");
  PathWord p;
  p.edges.resize(n);
  std::size_t current = v;
  for (std::size_t level = n; level >= 2; --level) {
    const auto& h = table[level - 1];
    std::size_t pos = 0;
    for (;; ++pos) {
      const auto& hw = h[od.order[current][pos]];
      if (r < hw) break;
      r -= hw;
    }
    p.edges[level - 1] = od.edge(level, current, pos);
    current = p.edges[level - 1].source;
  }
  p.edges[0] = Edge{1, kRoot, current, 0};
  return p;
}

/// Q(e, e') = rank(e') - rank(e), so that phi^Q(e) = e'.
inline BigInt Q(const OrderedDiagram& od, const PathWord& e, const PathWord& e_prime) {
  if (e.length() != e_prime.length() || e.target() != e_prime.target())
    throw EndpointMismatch("Q: paths must share length and terminal vertex");
  auto table = height_table(od.base, e.length());
  return rank(od, e_prime, table) - rank(od, e, table);
}

/// sigma^k: order words substituted into themselves.
inline OrderedDiagram telescope(const OrderedDiagram& od, std::size_t k) {
  if (k == 0) throw std::invalid_argument("telescope: k must be >= 1");
  auto words = od.order;
  for (std::size_t step = 1; step < k; ++step) {
    std::vector<std::vector<std::size_t>> next(od.size());
    for (std::size_t v = 0; v < od.size(); ++v)
      for (auto u : od.order[v]) next[v].insert(next[v].end(), words[u].begin(), words[u].end());
    words = std::move(next);
  }
  return OrderedDiagram(telescope(od.base, k), std::move(words));
}

/// Sub-diagram on a vertex set closed under taking sources.
inline OrderedDiagram restrict(const OrderedDiagram& od, const std::vector<std::size_t>& vertices) {
  std::vector<std::size_t> index(od.size(), kRoot);
  for (std::size_t k = 0; k < vertices.size(); ++k) index[vertices[k]] = k;
  IntMatrix f = zero_matrix(vertices.size(), vertices.size());
  std::vector<std::vector<std::size_t>> words(vertices.size());
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (auto w : od.order[vertices[k]]) {
      if (index[w] == kRoot)
        throw PreconditionFailed("restrict: vertex set receives edges from outside");
      words[k].push_back(index[w]);
      f[k][index[w]] += 1;
    }
    if (od.base.has_labels()) labels.push_back(od.base.labels()[vertices[k]]);
  }
  return OrderedDiagram(StationaryDiagram(std::move(f), std::move(labels)), std::move(words));
}

// ---------------------------------------------------------------------------
// Diamonds.

/// Leg edge between relative levels: source at level `depth`, target at
/// level depth + 1 once the diamond is placed with its source at level 1.
struct LegEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t index = 0;

  friend bool operator==(const LegEdge&, const LegEdge&) = default;
  friend auto operator<=>(const LegEdge&, const LegEdge&) = default;
};

/// Two distinct paths with common source and range. Legs are listed from the
/// source downwards; the lexicographically smaller leg comes first.
struct Diamond {
  std::vector<LegEdge> omega;
  std::vector<LegEdge> omega_prime;
  std::optional<std::size_t> class_id;

  std::size_t length() const noexcept { return omega.size(); }
  std::size_t source() const { return omega.front().source; }
  std::size_t range() const { return omega.back().target; }

  /// Leg as edges with the source placed at level n.
  PathWord placed(const std::vector<LegEdge>& leg, std::size_t n) const {
    PathWord p;
    for (std::size_t k = 0; k < leg.size(); ++k)
      p.edges.push_back(Edge{n + k + 1, leg[k].source, leg[k].target, leg[k].index});
    return p;
  }

  friend bool operator==(const Diamond& a, const Diamond& b) {
    return a.omega == b.omega && a.omega_prime == b.omega_prime;
  }
};

inline Diamond make_diamond(std::vector<LegEdge> a, std::vector<LegEdge> b,
                            std::optional<std::size_t> class_id = std::nullopt) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("diamond legs need equal positive length");
  if (a == b) throw std::invalid_argument("diamond legs must differ");
  if (a.front().source != b.front().source || a.back().target != b.back().target)
    throw EndpointMismatch("diamond legs must share source and range");
  if (b < a) std::swap(a, b);
  return Diamond{std::move(a), std::move(b), class_id};
}

/// All diamonds of length <= max_len (at most 2), either inside one class or
/// anywhere. Length-2 diamonds through a common middle vertex decompose and
/// are omitted.
inline std::vector<Diamond> enumerate_diamonds(const OrderedDiagram& od,
                                               std::optional<std::vector<std::size_t>> vertex_set,
                                               std::size_t max_len = 2,
                                               std::optional<std::size_t> class_id = std::nullopt) {
  if (max_len == 0 || max_len > 2) throw std::invalid_argument("enumerate_diamonds: max_len must be 1 or 2");
  const std::size_t n = od.size();
  std::vector<bool> allowed(n, !vertex_set.has_value());
  if (vertex_set)
    for (auto v : *vertex_set) allowed[v] = true;
  const auto& f = od.base.incidence();
  auto bundle = [&](std::size_t t, std::size_t s) { return f[t][s].convert_to<std::size_t>(); };

  std::vector<Diamond> out;
  for (std::size_t t = 0; t < n; ++t) {
    if (!allowed[t]) continue;
    for (std::size_t s = 0; s < n; ++s) {
      if (!allowed[s]) continue;
      const std::size_t b = bundle(t, s);
      for (std::size_t k = 0; k < b; ++k)
        for (std::size_t k2 = k + 1; k2 < b; ++k2)
          out.push_back(make_diamond({LegEdge{s, t, k}}, {LegEdge{s, t, k2}}, class_id));
    }
  }
  if (max_len < 2) return out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!allowed[s]) continue;
    for (std::size_t t = 0; t < n; ++t) {
      if (!allowed[t]) continue;
      for (std::size_t m = 0; m < n; ++m) {
        if (!allowed[m] || f[m][s] == 0 || f[t][m] == 0) continue;
        for (std::size_t m2 = m + 1; m2 < n; ++m2) {
          if (!allowed[m2] || f[m2][s] == 0 || f[t][m2] == 0) continue;
          for (std::size_t a1 = 0; a1 < bundle(m, s); ++a1)
            for (std::size_t a2 = 0; a2 < bundle(t, m); ++a2)
              for (std::size_t b1 = 0; b1 < bundle(m2, s); ++b1)
                for (std::size_t b2 = 0; b2 < bundle(t, m2); ++b2)
                  out.push_back(make_diamond({LegEdge{s, m, a1}, LegEdge{m, t, a2}},
                                             {LegEdge{s, m2, b1}, LegEdge{m2, t, b2}}, class_id));
        }
      }
    }
  }
  return out;
}

inline std::vector<Diamond> enumerate_diamonds(const OrderedDiagram& od, const ComponentDecomposition& dc,
                                               std::size_t alpha, std::size_t max_len = 2) {
  return enumerate_diamonds(od, dc.classes.at(alpha).vertices, max_len, alpha);
}

// ---------------------------------------------------------------------------
// Return times P_n.

namespace detail {

/// sum_{e' < e in r^-1(r(e))} h_{s(e')}.
inline BigInt below(const OrderedDiagram& od, const LegEdge& e, const IntVector& h) {
  BigInt s = 0;
  const std::size_t pos = od.position(e.target, e.source, e.index);
  for (std::size_t k = 0; k < pos; ++k) s += h[od.order[e.target][k]];
  return s;
}

/// sum_{lo <= pos < hi} h_{order[v][pos]}.
inline BigInt span(const OrderedDiagram& od, std::size_t v, std::size_t lo, std::size_t hi,
                   const IntVector& h) {
  BigInt s = 0;
  for (std::size_t k = lo; k < hi; ++k) s += h[od.order[v][k]];
  return s;
}

}  // namespace detail

/// P_n from the closed formulas for a diamond placed with its source at
/// level n: a sum of heights of the edges lying between the two legs.
inline BigInt P_formula(const OrderedDiagram& od, const Diamond& dm, std::size_t n,
                        const std::vector<IntVector>& table) {
  if (n == 0) throw std::invalid_argument("P_formula: level must be >= 1");
  if (dm.length() == 1) {
    const auto& e = dm.omega[0];
    const auto& e2 = dm.omega_prime[0];
    const std::size_t k = od.position(e.target, e.source, e.index);
    const std::size_t k2 = od.position(e2.target, e2.source, e2.index);
    const auto& h = table.at(n);
    return k <= k2 ? detail::span(od, e.target, k, k2, h) : -detail::span(od, e.target, k2, k, h);
  }
  if (dm.length() != 2) throw std::invalid_argument("P_formula: only diamonds of length <= 2");
  const auto& h0 = table.at(n);
  const auto& h1 = table.at(n + 1);
  auto oriented = [&](const std::vector<LegEdge>& a, const std::vector<LegEdge>& b) -> BigInt {
    // Requires the top edge of a to precede the top edge of b.
    const std::size_t t = a[1].target;
    const std::size_t top_a = od.position(t, a[1].source, a[1].index);
    const std::size_t top_b = od.position(t, b[1].source, b[1].index);
    const std::size_t middle = a[1].source;
    const std::size_t pos_a = od.position(middle, a[0].source, a[0].index);
    BigInt above_a = detail::span(od, middle, pos_a, od.order[middle].size(), h0);
    return above_a + detail::span(od, t, top_a + 1, top_b, h1) + detail::below(od, b[0], h0);
  };
  const auto& t = dm.omega[1].target;
  const std::size_t top = od.position(t, dm.omega[1].source, dm.omega[1].index);
  const std::size_t top2 = od.position(t, dm.omega_prime[1].source, dm.omega_prime[1].index);
  if (top == top2) {
    // Shared top edge: only the bottom edges differ.
    return detail::below(od, dm.omega_prime[0], h0) - detail::below(od, dm.omega[0], h0);
  }
  return top < top2 ? oriented(dm.omega, dm.omega_prime) : -oriented(dm.omega_prime, dm.omega);
}

inline BigInt P_formula(const OrderedDiagram& od, const Diamond& dm, std::size_t n) {
  return P_formula(od, dm, n, height_table(od.base, n + dm.length()));
}

/// P_n as the rank difference of the two anchored paths min_path + leg.
inline BigInt P_brute(const OrderedDiagram& od, const Diamond& dm, std::size_t n,
                      std::size_t cap = kDefaultPathCap) {
  auto table = height_table(od.base, n + dm.length());
  if (table[n + dm.length()][dm.range()] > BigInt(cap))
    throw CapExceeded("P_brute: height exceeds the enumeration cap");
  PathWord prefix = min_path(od, dm.source(), n);
  PathWord a = prefix, b = prefix;
  for (const auto& e : dm.placed(dm.omega, n).edges) a.edges.push_back(e);
  for (const auto& e : dm.placed(dm.omega_prime, n).edges) b.edges.push_back(e);
  return rank(od, b, table) - rank(od, a, table);
}

/// Coefficients d_1..d_N with det(zI - A) = z^N - d_1 z^{N-1} - ... - d_N.
inline IntVector recurrence_coefficients(const StationaryDiagram& d) {
  IntVector c = characteristic_polynomial(d.incidence());
  const std::size_t n = d.size();
  IntVector out(n);
  for (std::size_t i = 1; i <= n; ++i) out[i - 1] = -c[n - i];
  return out;
}

struct PSequence {
  Diamond diamond;
  IntVector values;        // values[n - 1] = P_n
  IntVector coefficients;  // d_1..d_N

  const BigInt& at(std::size_t n) const { return values.at(n - 1); }

  /// Checks P_{n+N} = d_1 P_{n+N-1} + ... + d_N P_n on all computed terms.
  bool satisfies_recurrence() const {
    const std::size_t order = coefficients.size();
    for (std::size_t n = 0; n + order < values.size(); ++n) {
      BigInt rhs = 0;
      for (std::size_t i = 1; i <= order; ++i) rhs += coefficients[i - 1] * values[n + order - i];
      if (rhs != values[n + order]) return false;
    }
    return true;
  }
};

inline PSequence P_sequence(const OrderedDiagram& od, const Diamond& dm, std::size_t n_max) {
  PSequence seq;
  seq.diamond = dm;
  seq.coefficients = recurrence_coefficients(od.base);
  auto table = height_table(od.base, n_max + dm.length());
  for (std::size_t n = 1; n <= n_max; ++n) seq.values.push_back(P_formula(od, dm, n, table));
  return seq;
}

/// Continues a sequence beyond its computed range through the recurrence.
inline void extend(PSequence& seq, std::size_t n_max) {
  const std::size_t order = seq.coefficients.size();
  while (seq.values.size() < n_max) {
    const std::size_t m = seq.values.size();
    if (m < order) throw std::logic_error("extend: not enough initial terms");
    BigInt next = 0;
    for (std::size_t i = 1; i <= order; ++i) next += seq.coefficients[i - 1] * seq.values[m - i];
    seq.values.push_back(next);
  }
}

// ---------------------------------------------------------------------------
// Eigenvalue criterion for rational theta.

struct Window {
  std::size_t first = 1;
  std::size_t last = 1;
  bool contains(const Window& w) const { return first <= w.first && w.last <= last; }
};

/// Largest prime exponent of q.
inline std::size_t max_prime_exponent(BigInt q) {
  if (q < 0) q = -q;
  std::size_t best = 0;
  for (BigInt p = 2; p * p <= q; ++p) {
    std::size_t e = 0;
    while (q % p == 0) {
      q /= p;
      ++e;
    }
    best = std::max(best, e);
  }
  if (q > 1) best = std::max<std::size_t>(best, 1);
  return best;
}

/// Window on which q | P_n for all n decides the question for all larger n:
/// modulo p^e the nilpotent part of F dies after N e steps, and on the rest
/// the order-N recurrence is invertible.
inline Window decisive_window(std::size_t n_vertices, const BigInt& q) {
  const std::size_t e = max_prime_exponent(q);
  return Window{1 + n_vertices * e, n_vertices * (e + 1)};
}

struct EigenvalueVerdict {
  bool pass = true;
  std::size_t failing_n = 0;
  std::optional<Diamond> failing_diamond;
  /// Pass on a window containing the decisive window, with strictly positive
  /// diagonal blocks, settles the question; otherwise Pass is evidence.
  bool decided = false;
};

inline void require_distinguished(const ComponentDecomposition& dc, std::size_t alpha) {
  if (alpha >= dc.size() || !dc.classes[alpha].distinguished)
    throw NotDistinguished("class " + std::to_string(alpha + 1) + " is not distinguished");
}

inline EigenvalueVerdict eigenvalue_check(const OrderedDiagram& od, const ComponentDecomposition& dc,
                                          std::size_t alpha, const Rational& theta, Window window) {
  require_distinguished(dc, alpha);
  if (window.first == 0 || window.last < window.first) throw std::invalid_argument("empty window");
  const BigInt q = boost::multiprecision::denominator(theta);
  EigenvalueVerdict v;
  const bool sufficient = positive_blocks(dc);
  if (q != 1) {
    auto diamonds = enumerate_diamonds(od, dc, alpha, 2);
    auto table = height_table(od.base, window.last + 2);
    for (std::size_t n = window.first; n <= window.last && v.pass; ++n)
      for (const auto& dm : diamonds)
        if (P_formula(od, dm, n, table) % q != 0) {
          v.pass = false;
          v.failing_n = n;
          v.failing_diamond = dm;
          break;
        }
  }
  const Window decisive = decisive_window(od.size(), q);
  // A failure inside the periodic regime recurs forever, so it needs no
  // positivity assumption.
  v.decided = v.pass ? sufficient && (q == 1 || window.contains(decisive))
                     : v.failing_n >= decisive.first;
  return v;
}

struct EigenvalueSearch {
  std::vector<Rational> eigenvalues;   // ascending, in [0, 1)
  std::vector<std::size_t> denominators;  // passing q
  bool decided = false;
  bool only_trivial() const { return eigenvalues.size() == 1 && eigenvalues.front() == 0; }
};

namespace detail {

inline void collect(EigenvalueSearch& out, const std::vector<char>& passes) {
  for (std::size_t q = 1; q < passes.size(); ++q) {
    if (!passes[q]) continue;
    out.denominators.push_back(q);
    for (std::size_t p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) out.eigenvalues.emplace_back(Rational(p, q));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
}

template <class F>
void for_each_q(std::size_t q_max, std::size_t jobs, F&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, q_max));
  auto work = [&](std::size_t start) {
    for (std::size_t q = start + 1; q <= q_max; q += jobs) body(q);
  };
  if (jobs == 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work, j);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// All theta = p/q in [0,1) with q <= q_max passing on the window. The test
/// q | P_n does not depend on p, so each passing q contributes every p
/// coprime to q.
inline EigenvalueSearch eigenvalue_search(const OrderedDiagram& od, const ComponentDecomposition& dc,
                                          std::size_t alpha, std::size_t q_max, Window window,
                                          std::size_t jobs = 1) {
  require_distinguished(dc, alpha);
  auto diamonds = enumerate_diamonds(od, dc, alpha, 2);
  auto table = height_table(od.base, window.last + 2);
  BigInt g = 0;
  for (std::size_t n = window.first; n <= window.last; ++n)
    for (const auto& dm : diamonds) g = gcd(g, P_formula(od, dm, n, table));

  std::vector<char> passes(q_max + 1, 0);
  detail::for_each_q(q_max, jobs, [&](std::size_t q) { passes[q] = (g % q == 0) ? 1 : 0; });
  EigenvalueSearch out;
  detail::collect(out, passes);
  out.decided = true;
  for (std::size_t q = 2; q <= q_max && out.decided; ++q) {
    const Window dw = decisive_window(od.size(), BigInt(q));
    out.decided = passes[q] ? positive_blocks(dc) && window.contains(dw) : window.last >= dw.first;
  }
  return out;
}

/// Search with every q tested on its own decisive window; grouped by the
/// largest prime exponent of q.
inline EigenvalueSearch eigenvalue_search(const OrderedDiagram& od, const ComponentDecomposition& dc,
                                          std::size_t alpha, std::size_t q_max, std::size_t jobs = 1) {
  require_distinguished(dc, alpha);
  auto diamonds = enumerate_diamonds(od, dc, alpha, 2);
  std::size_t e_top = 1;
  for (std::size_t q = 2; q <= q_max; ++q) e_top = std::max(e_top, max_prime_exponent(BigInt(q)));
  auto table = height_table(od.base, od.size() * (e_top + 1) + 2);
  std::vector<BigInt> g(e_top + 1, BigInt(0));
  for (std::size_t e = 1; e <= e_top; ++e) {
    const Window w = decisive_window(od.size(), BigInt(1) << e);
    for (std::size_t n = w.first; n <= w.last; ++n)
      for (const auto& dm : diamonds) g[e] = gcd(g[e], P_formula(od, dm, n, table));
  }
  std::vector<char> passes(q_max + 1, 0);
  detail::for_each_q(q_max, jobs, [&](std::size_t q) {
    passes[q] = q == 1 || g[max_prime_exponent(BigInt(q))] % q == 0 ? 1 : 0;
  });
  EigenvalueSearch out;
  detail::collect(out, passes);
  out.decided = out.only_trivial() || positive_blocks(dc);
  return out;
}

/// theta h_j^(n) in Z for every j in the class and n in the window.
inline EigenvalueVerdict rational_eigenvalue_sufficient(const StationaryDiagram& d,
                                                        const ComponentDecomposition& dc,
                                                        std::size_t alpha, const Rational& theta,
                                                        Window window) {
  const BigInt q = boost::multiprecision::denominator(theta);
  EigenvalueVerdict v;
  auto table = height_table(d, window.last);
  for (std::size_t n = window.first; n <= window.last && v.pass; ++n)
    for (auto j : dc.classes.at(alpha).vertices)
      if (table[n][j] % q != 0) {
        v.pass = false;
        v.failing_n = n;
        break;
      }
  v.decided = false;
  return v;
}

// ---------------------------------------------------------------------------
// Non-mixing witness.

struct NonMixingReport {
  std::size_t first_n = 0;
  std::vector<Real> ratios;  // ratios[k] = r_{first_n + k}
  Real infimum;
  Real limit;
};

/// r_n = mu([e ; diamond leg placed at level n+1]) / mu([e]) for the
/// distinguished measure of class alpha.
inline NonMixingReport nonmixing_witness(const ComponentDecomposition& dc, std::size_t alpha,
                                         const Diamond& dm, const PathWord& e, Window n_range) {
  auto ed = distinguished_eigenvector(dc, alpha);
  if (!e.anchored()) throw std::invalid_argument("nonmixing_witness: e must start at the root");
  const std::size_t m = e.length();
  const std::size_t i = e.target();
  const std::size_t j = dm.source();
  const std::size_t j2 = dm.range();
  if (ed.xi[i].is_zero()) throw ZeroMeasureCylinder("cylinder [e] has measure zero");
  if (n_range.first + 1 < m) throw std::invalid_argument("nonmixing_witness: n must be >= m - 1");
  const auto& lambda = ed.lambda.value;
  const long long len = static_cast<long long>(dm.length());

  NonMixingReport rep;
  rep.first_n = n_range.first;
  IntMatrix power = matrix_power(dc.a, n_range.first + 1 - m);
  for (std::size_t n = n_range.first; n <= n_range.last; ++n) {
    Real count{Rational(power[i][j])};
    Real r = ed.xi[j2] / ed.xi[i] * count *
             lambda.pow(static_cast<long long>(m) - 1 - static_cast<long long>(n) - len);
    rep.ratios.push_back(r);
    power = multiply(power, dc.a);
  }
  rep.infimum = rep.ratios.front();
  for (const auto& r : rep.ratios)
    if (r.value() < rep.infimum.value()) rep.infimum = r;

  // Limit x_{j'} eta_j lambda^-len / <eta, x>, eta the left Perron vector.
  const auto& cls = dc.classes[alpha];
  auto left = perron(transpose(cls.block));
  Real eta_j = 0, pairing = 0;
  for (std::size_t k = 0; k < cls.vertices.size(); ++k) {
    Real eta = left.rho.is_exact() ? Real(left.exact_vector[k]) : Real::approx(left.approx_vector[k]);
    if (cls.vertices[k] == j) eta_j = eta;
    pairing += eta * ed.xi[cls.vertices[k]];
  }
  if (lambda.is_exact() && !left.rho.is_exact()) {
    eta_j = Real::approx(eta_j.value());
  }
  rep.limit = ed.xi[j2] * eta_j * lambda.pow(-len) / pairing;
  return rep;
}

}  // namespace bratteli
