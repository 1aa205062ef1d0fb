#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/lp.hpp"
#include "bratteli/numeric.hpp"

namespace bratteli {

inline constexpr long double kDefaultGap = 1e-9L;

// ---------------------------------------------------------------------------
// Strongly connected components of G(M): edge i -> j iff m[i][j] > 0.

struct SccResult {
  std::vector<std::vector<std::size_t>> components;  // sorted vertex lists
  std::vector<std::size_t> component_of;
};

inline SccResult strongly_connected_components(const IntMatrix& m) {
  const std::size_t n = m.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0;
  SccResult out;
  out.component_of.assign(n, 0);

  // Iterative Tarjan; frames hold (vertex, next neighbour to scan).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      bool descended = false;
      while (next < n) {
        std::size_t w = next++;
        if (m[v][w] == 0) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      std::size_t finished = v;
      if (low[finished] == index[finished]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != finished);
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  for (std::size_t c = 0; c < out.components.size(); ++c)
    for (auto v : out.components[c]) out.component_of[v] = c;
  return out;
}

inline bool is_irreducible(const IntMatrix& m) {
  if (m.empty()) return false;
  auto scc = strongly_connected_components(m);
  if (scc.components.size() != 1) return false;
  if (m.size() == 1) return m[0][0] != 0;
  return true;
}

inline bool is_zero_matrix(const IntMatrix& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

/// gcd of the cycle lengths of an irreducible block.
inline std::size_t imprimitivity_index(const IntMatrix& block) {
  if (block.empty() || is_zero_matrix(block))
    throw ZeroBlock("imprimitivity index of a zero block");
  if (!is_irreducible(block)) throw PreconditionFailed("imprimitivity index needs an irreducible block");
  const std::size_t n = block.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> depth(n, kUnset);
  std::queue<std::size_t> q;
  depth[0] = 0;
  q.push(0);
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v)
      if (block[u][v] != 0 && depth[v] == kUnset) {
        depth[v] = depth[u] + 1;
        q.push(v);
      }
  }
  long long g = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (block[u][v] != 0) {
        long long diff = static_cast<long long>(depth[u]) + 1 - static_cast<long long>(depth[v]);
        g = std::gcd(g, diff < 0 ? -diff : diff);
      }
  return static_cast<std::size_t>(g);
}

// ---------------------------------------------------------------------------
// Perron-Frobenius data of a single irreducible block.

struct PerronData {
  NumericValue rho;
  RatVector exact_vector;   // set in exact mode, positive, sums to 1
  LdVector approx_vector;   // always set, positive, sums to 1
};

namespace detail {

inline LdVector mat_apply(const LdMatrix& m, const LdVector& x) {
  LdVector y(m.size(), 0.0L);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

inline void normalize_max(LdVector& x) {
  long double mx = 0.0L;
  for (auto v : x) mx = std::max(mx, std::fabs(v));
  if (mx > 0.0L)
    for (auto& v : x) v /= mx;
}

inline void normalize_sum(LdVector& x) {
  long double s = 0.0L;
  for (auto v : x) s += v;
  if (s != 0.0L)
    for (auto& v : x) v /= s;
}

inline void normalize_sum(RatVector& x) {
  Rational s = 0;
  for (const auto& v : x) s += v;
  if (s != 0)
    for (auto& v : x) v /= s;
}

struct Bracket {
  long double lower, upper, residual, lambda;
};

inline Bracket collatz_wielandt(const LdMatrix& m, const LdVector& x) {
  LdVector y = mat_apply(m, x);
  long double lo = std::numeric_limits<long double>::infinity();
  long double hi = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0L) continue;
    long double r = y[i] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (lo > hi) lo = hi = 0.0L;
  long double lambda = (lo + hi) / 2.0L;
  long double mx = 0.0L;
  for (auto v : x) mx = std::max(mx, std::fabs(v));
  long double res = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    res = std::max(res, std::fabs(y[i] - lambda * x[i]));
  if (mx > 0.0L) res /= mx;
  return {lo, hi, res, lambda};
}

/// Power iteration on B + I followed by shifted inverse iteration.
inline std::pair<long double, LdVector> approximate_perron(const IntMatrix& block, Bracket& out) {
  const std::size_t n = block.size();
  LdMatrix b = to_long_double(block);
  LdMatrix shifted = b;
  for (std::size_t i = 0; i < n; ++i) shifted[i][i] += 1.0L;
  LdVector x(n, 1.0L);
  for (int it = 0; it < 20000; ++it) {
    LdVector y = mat_apply(shifted, x);
    normalize_max(y);
    long double delta = 0.0L;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(y[i] - x[i]));
    x = std::move(y);
    if (delta < 1e-16L) break;
  }
  Bracket br = collatz_wielandt(b, x);
  const long double target = 1e-13L * std::max(1.0L, infinity_norm(block));
  for (int it = 0; it < 8 && br.residual > target; ++it) {
    long double mu = br.lambda * (1.0L + 1e-14L) + 1e-15L;
    LdMatrix sys = b;
    for (std::size_t i = 0; i < n; ++i) sys[i][i] -= mu;
    auto y = solve(sys, x);
    if (!y) break;
    for (auto& v : *y) v = std::fabs(v);
    normalize_max(*y);
    Bracket next = collatz_wielandt(b, *y);
    if (next.residual >= br.residual) break;
    x = std::move(*y);
    br = next;
  }
  out = br;
  return {br.lambda, x};
}

}  // namespace detail

/// Perron root and positive eigenvector of an irreducible non-zero block.
inline PerronData perron(const IntMatrix& block) {
  using detail::Bracket;
  if (block.empty() || is_zero_matrix(block)) throw ZeroBlock("Perron data of a zero block");
  if (!is_irreducible(block)) throw PreconditionFailed("Perron data needs an irreducible block");
  const std::size_t n = block.size();
  Bracket br{};
  auto [approx, vec] = detail::approximate_perron(block, br);

  PerronData out;
  out.approx_vector = vec;
  detail::normalize_sum(out.approx_vector);

  // Rational roots of a monic integer polynomial are integers.
  IntVector poly = characteristic_polynomial(block);
  std::size_t low = 0;
  while (low < poly.size() && poly[low] == 0) ++low;
  const BigInt constant = low < poly.size() ? poly[low] : BigInt(0);
  std::vector<BigInt> candidates;
  auto floor_r = static_cast<long long>(std::floor(approx));
  for (long long r = floor_r - 1; r <= floor_r + 2; ++r)
    if (r > 0 && std::fabs(static_cast<long double>(r) - approx) < 1e-6L * std::max(1.0L, approx))
      candidates.emplace_back(r);
  for (const auto& r : candidates) {
    if (constant != 0 && constant % r != 0) continue;
    if (evaluate_polynomial(poly, r) != 0) continue;
    RatMatrix sys = to_rational(block);
    for (std::size_t i = 0; i < n; ++i) sys[i][i] -= Rational(r);
    auto basis = kernel(sys);
    if (basis.size() != 1) continue;
    RatVector v = basis[0];
    if (v[0] < 0)
      for (auto& e : v) e = -e;
    if (!std::all_of(v.begin(), v.end(), [](const Rational& e) { return e > 0; })) continue;
    detail::normalize_sum(v);
    out.rho = NumericValue::exact(Rational(r));
    out.exact_vector = v;
    out.approx_vector.clear();
    for (const auto& e : v) out.approx_vector.push_back(to_long_double(e));
    return out;
  }
  out.rho.value = Real::approx(approx);
  out.rho.residual_bound = br.residual;
  out.rho.lower = br.lower;
  out.rho.upper = br.upper;
  return out;
}

/// Spectral radius of any square non-negative integer matrix.
inline NumericValue spectral_radius(const IntMatrix& block) {
  if (block.empty() || is_zero_matrix(block)) return NumericValue::exact(Rational(0));
  if (is_irreducible(block)) return perron(block).rho;
  auto scc = strongly_connected_components(block);
  NumericValue best = NumericValue::exact(Rational(0));
  for (const auto& comp : scc.components) {
    IntMatrix sub = submatrix(block, comp);
    if (is_zero_matrix(sub)) continue;
    NumericValue r = perron(sub).rho;
    if (r.approx() > best.approx()) best = r;
  }
  return best;
}

/// Three-way comparison; throws AmbiguousComparison when an approximate value
/// lies within `gap` of the other.
inline int compare(const NumericValue& a, const NumericValue& b, long double gap = kDefaultGap) {
  if (a.is_exact() && b.is_exact()) {
    const auto& x = a.value.rational();
    const auto& y = b.value.rational();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  long double d = a.approx() - b.approx();
  if (std::fabs(d) < gap)
    throw AmbiguousComparison("spectral radii " + a.str() + " and " + b.str() +
                              " closer than the gap tolerance");
  return d < 0 ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Component decomposition of A = F^T.

struct ComponentClass {
  std::vector<std::size_t> vertices;
  IntMatrix block;
  bool is_zero = false;
  NumericValue rho;
  std::size_t imprimitivity = 0;  // 0 for zero blocks
  bool distinguished = false;
  std::optional<PerronData> perron;  // set for non-zero blocks
};

struct ComponentDecomposition {
  IntMatrix a;
  std::vector<ComponentClass> classes;
  /// access[b][a]: class b reaches class a in G(A) (reflexive).
  std::vector<std::vector<bool>> access;
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> initial_classes;
  std::vector<std::size_t> final_classes;
  std::vector<std::size_t> fnf_permutation;
  std::vector<Diagnostic> diagnostics;
  long double gap = kDefaultGap;

  std::size_t size() const noexcept { return classes.size(); }
  bool accesses(std::size_t b, std::size_t alpha) const { return access[b][alpha]; }
  /// Strict access b > alpha.
  bool above(std::size_t b, std::size_t alpha) const { return b != alpha && access[b][alpha]; }
};

/// Condensation edges between distinct classes: edges[b] lists the classes a
/// with a direct A-edge from b to a.
inline std::vector<std::vector<std::size_t>> condensation_edges(const ComponentDecomposition& dc) {
  const std::size_t m = dc.size();
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < dc.a.size(); ++i)
    for (std::size_t j = 0; j < dc.a.size(); ++j)
      if (dc.a[i][j] != 0 && dc.class_of[i] != dc.class_of[j]) adj[dc.class_of[i]][dc.class_of[j]] = true;
  std::vector<std::vector<std::size_t>> out(m);
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t c = 0; c < m; ++c)
      if (adj[b][c]) out[b].push_back(c);
  return out;
}

/// Hasse diagram of the access order (transitive reduction of R(A)).
inline std::vector<std::pair<std::size_t, std::size_t>> reduced_graph_edges(const ComponentDecomposition& dc) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t m = dc.size();
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t a = 0; a < m; ++a) {
      if (!dc.above(b, a)) continue;
      bool covered = false;
      for (std::size_t c = 0; c < m && !covered; ++c)
        covered = dc.above(b, c) && dc.above(c, a);
      if (!covered) out.emplace_back(b, a);
    }
  return out;
}

inline ComponentDecomposition decompose_matrix(const IntMatrix& a, long double gap = kDefaultGap) {
  ComponentDecomposition dc;
  dc.a = a;
  dc.gap = gap;
  const std::size_t n = a.size();
  auto scc = strongly_connected_components(a);
  const std::size_t m = scc.components.size();

  // Topological order of the condensation: initial classes first, then Kahn
  // with ties broken by the smallest vertex.
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  std::vector<std::size_t> indegree(m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto ci = scc.component_of[i], cj = scc.component_of[j];
      if (a[i][j] != 0 && ci != cj && !adj[ci][cj]) {
        adj[ci][cj] = true;
        ++indegree[cj];
      }
    }
  std::vector<bool> initial(m);
  for (std::size_t c = 0; c < m; ++c) initial[c] = indegree[c] == 0;
  using Key = std::pair<int, std::size_t>;
  std::priority_queue<std::pair<Key, std::size_t>, std::vector<std::pair<Key, std::size_t>>,
                      std::greater<>> ready;
  for (std::size_t c = 0; c < m; ++c)
    if (indegree[c] == 0) ready.push({{0, scc.components[c].front()}, c});
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    auto c = ready.top().second;
    ready.pop();
    order.push_back(c);
    for (std::size_t d = 0; d < m; ++d)
      if (adj[c][d] && --indegree[d] == 0)
        ready.push({{initial[d] ? 0 : 1, scc.components[d].front()}, d});
  }
  std::vector<std::size_t> new_index(m);
  for (std::size_t k = 0; k < m; ++k) new_index[order[k]] = k;

  dc.class_of.assign(n, 0);
  dc.classes.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto& cls = dc.classes[k];
    cls.vertices = scc.components[order[k]];
    for (auto v : cls.vertices) dc.class_of[v] = k;
    cls.block = submatrix(a, cls.vertices);
    cls.is_zero = is_zero_matrix(cls.block);
    if (cls.is_zero) {
      cls.rho = NumericValue::exact(Rational(0));
    } else {
      cls.perron = perron(cls.block);
      cls.rho = cls.perron->rho;
      cls.imprimitivity = imprimitivity_index(cls.block);
    }
    for (auto v : cls.vertices) dc.fnf_permutation.push_back(v);
  }

  dc.access.assign(m, std::vector<bool>(m, false));
  for (std::size_t b = 0; b < m; ++b) dc.access[b][b] = true;
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t c = 0; c < m; ++c)
      if (adj[order[b]][order[c]]) dc.access[b][c] = true;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (dc.access[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (dc.access[k][j]) dc.access[i][j] = true;

  for (std::size_t c = 0; c < m; ++c) {
    bool has_pred = false, has_succ = false;
    for (std::size_t o = 0; o < m; ++o) {
      has_pred = has_pred || dc.above(o, c);
      has_succ = has_succ || dc.above(c, o);
    }
    if (!has_pred) dc.initial_classes.push_back(c);
    if (!has_succ) dc.final_classes.push_back(c);
  }

  for (std::size_t alpha = 0; alpha < m; ++alpha) {
    auto& cls = dc.classes[alpha];
    if (cls.is_zero) continue;
    bool dist = true;
    for (std::size_t b = 0; b < m && dist; ++b)
      if (dc.above(b, alpha)) dist = compare(cls.rho, dc.classes[b].rho, gap) > 0;
    cls.distinguished = dist;
  }
  return dc;
}

inline ComponentDecomposition decompose(const StationaryDiagram& d, long double gap = kDefaultGap) {
  auto dc = decompose_matrix(d.a_matrix(), gap);
  dc.diagnostics = validate(d);
  return dc;
}

inline std::vector<std::size_t> distinguished_classes(const ComponentDecomposition& dc) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < dc.size(); ++c)
    if (dc.classes[c].distinguished) out.push_back(c);
  return out;
}

/// lcm of the imprimitivity indices of the non-zero classes.
inline std::size_t primitivity_power(const ComponentDecomposition& dc) {
  std::size_t q = 1;
  for (const auto& cls : dc.classes)
    if (!cls.is_zero) q = std::lcm(q, cls.imprimitivity);
  return q;
}

inline std::pair<StationaryDiagram, std::size_t> telescope_to_primitive(const StationaryDiagram& d) {
  std::size_t q = primitivity_power(decompose(d));
  return {q == 1 ? d : telescope(d, q), q};
}

// ---------------------------------------------------------------------------
// Eigenvector propagation along the access order.

/// Result of extending a boundary vector on class alpha to the vertices that
/// access alpha by solving (lambda I - A_b) s_b = sum_{j not in b} A_ij s_j.
/// infinite[v] marks vertices whose series diverges.
template <class T>
struct Propagation {
  std::vector<T> values;
  std::vector<bool> infinite;
};

namespace detail {

inline RatVector solve_square(const RatMatrix& m, const RatVector& b) {
  auto x = solve(m, b);
  if (!x) throw std::logic_error("singular M-matrix system");
  return *x;
}

inline LdVector solve_square(const LdMatrix& m, const LdVector& b) {
  auto x = solve(m, b);
  if (!x) throw std::logic_error("singular M-matrix system");
  return *x;
}

template <class T>
T from_int(const BigInt& z) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(z);
  } else {
    return to_long_double(z);
  }
}

}  // namespace detail

template <class T>
Propagation<T> propagate(const ComponentDecomposition& dc, std::size_t alpha,
                         const NumericValue& lambda, const T& lambda_value,
                         const std::vector<T>& boundary) {
  const std::size_t n = dc.a.size();
  Propagation<T> out;
  out.values.assign(n, T(0));
  out.infinite.assign(n, false);
  const auto& home = dc.classes[alpha].vertices;
  for (std::size_t k = 0; k < home.size(); ++k) out.values[home[k]] = boundary[k];

  const auto succ = condensation_edges(dc);
  std::vector<bool> class_infinite(dc.size(), false);
  for (std::size_t b = dc.size(); b-- > 0;) {
    if (!dc.above(b, alpha)) continue;
    const auto& cls = dc.classes[b];
    bool inf = compare(cls.rho, lambda, dc.gap) >= 0;
    for (auto c : succ[b]) inf = inf || (c != alpha && dc.accesses(c, alpha) && class_infinite[c]);
    class_infinite[b] = inf;
    if (inf) {
      for (auto v : cls.vertices) out.infinite[v] = true;
      continue;
    }
    const std::size_t k = cls.vertices.size();
    std::vector<std::vector<T>> sys(k, std::vector<T>(k, T(0)));
    std::vector<T> rhs(k, T(0));
    for (std::size_t r = 0; r < k; ++r) {
      const auto i = cls.vertices[r];
      for (std::size_t c = 0; c < k; ++c)
        sys[r][c] = -detail::from_int<T>(dc.a[i][cls.vertices[c]]);
      sys[r][r] += lambda_value;
      for (std::size_t j = 0; j < n; ++j)
        if (dc.class_of[j] != b && dc.a[i][j] != 0)
          rhs[r] += detail::from_int<T>(dc.a[i][j]) * out.values[j];
    }
    auto sol = detail::solve_square(sys, rhs);
    for (std::size_t r = 0; r < k; ++r) out.values[cls.vertices[r]] = sol[r];
  }
  return out;
}

struct Eigendata {
  std::size_t class_id = 0;
  NumericValue lambda;
  RealVector xi;
  std::vector<std::size_t> support;
  long double residual = 0.0L;  // ||A xi - lambda xi||_inf

  bool is_exact() const { return lambda.is_exact(); }
  RatVector exact_xi() const {
    RatVector out;
    for (const auto& x : xi) out.push_back(x.rational());
    return out;
  }
  LdVector approx_xi() const {
    LdVector out;
    for (const auto& x : xi) out.push_back(x.value());
    return out;
  }
};

inline Eigendata distinguished_eigenvector(const ComponentDecomposition& dc, std::size_t alpha) {
  if (alpha >= dc.size()) throw std::out_of_range("class index out of range");
  const auto& cls = dc.classes[alpha];
  if (!cls.distinguished)
    throw NotDistinguished("class " + std::to_string(alpha + 1) + " is not distinguished");
  Eigendata ed;
  ed.class_id = alpha;
  ed.lambda = cls.rho;
  const std::size_t n = dc.a.size();
  for (std::size_t v = 0; v < n; ++v)
    if (dc.accesses(dc.class_of[v], alpha)) ed.support.push_back(v);

  if (cls.rho.is_exact()) {
    auto prop = propagate<Rational>(dc, alpha, cls.rho, cls.rho.value.rational(),
                                    cls.perron->exact_vector);
    detail::normalize_sum(prop.values);
    for (auto& v : prop.values) ed.xi.emplace_back(v);
  } else {
    auto prop = propagate<long double>(dc, alpha, cls.rho, cls.rho.approx(),
                                       cls.perron->approx_vector);
    detail::normalize_sum(prop.values);
    for (auto v : prop.values) ed.xi.push_back(Real::approx(v));
  }
  LdVector x = ed.approx_xi();
  LdVector ax = detail::mat_apply(to_long_double(dc.a), x);
  for (std::size_t i = 0; i < n; ++i)
    ed.residual = std::max(ed.residual, std::fabs(ax[i] - cls.rho.approx() * x[i]));
  return ed;
}

inline Eigendata distinguished_eigenvector(const StationaryDiagram& d, std::size_t alpha) {
  return distinguished_eigenvector(decompose(d), alpha);
}

// ---------------------------------------------------------------------------
// core(A) membership.

struct CoreVerdict {
  enum class Kind { InCore, NotInCore, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t failing_k = 0;   // NotInCore: first k with x outside A^k(R^N_+)
  RealVector coefficients;     // fast-path decomposition over the xi's
  bool in_span = false;
};

inline constexpr std::size_t kCoreOracleMaxN = 12;

/// Exact feasibility of A^k y = x with y >= 0.
inline FeasibilityResult core_preimage(const IntMatrix& a, const RatVector& x, std::size_t k) {
  if (a.size() > kCoreOracleMaxN)
    throw SizeRefused("exact core oracle is limited to N <= " + std::to_string(kCoreOracleMaxN));
  if (k > 2 * a.size()) throw SizeRefused("exact core oracle is limited to k <= 2N");
  return nonnegative_feasibility(to_rational(matrix_power(a, k)), x);
}

inline CoreVerdict core_membership(const ComponentDecomposition& dc, const RatVector& x,
                                   std::size_t k_max = 0, long double tol = kDefaultGap) {
  const std::size_t n = dc.a.size();
  if (x.size() != n) throw DimensionMismatch("core_membership: vector length differs from N");
  for (const auto& e : x)
    if (e < 0) throw std::invalid_argument("core_membership: vector must be non-negative");
  if (k_max == 0) k_max = 2 * n;

  CoreVerdict verdict;
  std::vector<Eigendata> rays;
  for (auto alpha : distinguished_classes(dc)) rays.push_back(distinguished_eigenvector(dc, alpha));
  const bool exact = std::all_of(rays.begin(), rays.end(), [](const Eigendata& e) { return e.is_exact(); });

  bool fast_in = false;
  if (exact) {
    RatMatrix m(n, RatVector(rays.size(), Rational(0)));
    for (std::size_t r = 0; r < rays.size(); ++r)
      for (std::size_t i = 0; i < n; ++i) m[i][r] = rays[r].xi[i].rational();
    auto c = solve(m, x);
    if (c) {
      verdict.in_span = true;
      fast_in = true;
      for (const auto& e : *c) {
        verdict.coefficients.emplace_back(e);
        if (e < 0) fast_in = false;
      }
    }
  } else {
    // Least squares through the normal equations; the rays are independent.
    const std::size_t k = rays.size();
    LdMatrix g(k, LdVector(k, 0.0L));
    LdVector rhs(k, 0.0L);
    std::vector<LdVector> cols;
    for (const auto& r : rays) cols.push_back(r.approx_xi());
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q)
        for (std::size_t i = 0; i < n; ++i) g[p][q] += cols[p][i] * cols[q][i];
      for (std::size_t i = 0; i < n; ++i) rhs[p] += cols[p][i] * to_long_double(x[i]);
    }
    auto c = solve(g, rhs);
    if (c) {
      long double resid = 0.0L, scale = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        long double s = 0.0L;
        for (std::size_t p = 0; p < k; ++p) s += (*c)[p] * cols[p][i];
        resid = std::max(resid, std::fabs(s - to_long_double(x[i])));
        scale = std::max(scale, std::fabs(to_long_double(x[i])));
      }
      verdict.in_span = resid <= 1e-9L * std::max(1.0L, scale);
      fast_in = verdict.in_span;
      for (auto e : *c) {
        verdict.coefficients.push_back(Real::approx(e));
        if (e < -tol) fast_in = false;
      }
    }
  }
  if (fast_in) {
    verdict.kind = CoreVerdict::Kind::InCore;
    return verdict;
  }
  if (n > kCoreOracleMaxN) {
    verdict.kind = CoreVerdict::Kind::Unknown;
    return verdict;
  }
  for (std::size_t k = 1; k <= std::min(k_max, 2 * n); ++k) {
    if (!core_preimage(dc.a, x, k).feasible) {
      verdict.kind = CoreVerdict::Kind::NotInCore;
      verdict.failing_k = k;
      return verdict;
    }
  }
  verdict.kind = CoreVerdict::Kind::Unknown;
  return verdict;
}

// ---------------------------------------------------------------------------
// Aperiodicity of the tail equivalence relation.

struct AperiodicityVerdict {
  enum class Kind { Aperiodic, NotAperiodic, InvalidDiagram };
  Kind kind = Kind::Aperiodic;
  std::size_t witness_class = 0;
  std::string reason;

  bool aperiodic() const { return kind == Kind::Aperiodic; }
};

inline AperiodicityVerdict aperiodicity_check(const ComponentDecomposition& dc) {
  AperiodicityVerdict v;
  if (!dc.diagnostics.empty()) {
    v.kind = AperiodicityVerdict::Kind::InvalidDiagram;
    v.reason = dc.diagnostics.front().message;
    return v;
  }
  const NumericValue one = NumericValue::exact(Rational(1));
  for (auto c : dc.initial_classes) {
    const auto& cls = dc.classes[c];
    if (cls.is_zero || compare(cls.rho, one, dc.gap) <= 0) {
      v.kind = AperiodicityVerdict::Kind::NotAperiodic;
      v.witness_class = c;
      v.reason = cls.is_zero ? "initial class has a zero block"
                             : "initial class has spectral radius 1";
      return v;
    }
  }
  for (std::size_t c = 0; c < dc.size(); ++c) {
    const auto& cls = dc.classes[c];
    if (cls.is_zero || compare(cls.rho, one, dc.gap) != 0) continue;
    bool fed = false;
    for (std::size_t b = 0; b < dc.size() && !fed; ++b)
      fed = dc.above(b, c) && !dc.classes[b].is_zero;
    if (!fed) {
      v.kind = AperiodicityVerdict::Kind::NotAperiodic;
      v.witness_class = c;
      v.reason = "class with spectral radius 1 has no non-zero ancestor";
      return v;
    }
  }
  return v;
}

inline void require_aperiodic(const ComponentDecomposition& dc) {
  auto v = aperiodicity_check(dc);
  if (v.kind == AperiodicityVerdict::Kind::InvalidDiagram) throw PreconditionFailed(v.reason);
  if (v.kind == AperiodicityVerdict::Kind::NotAperiodic)
    throw NotAperiodic(v.reason + " (class " + std::to_string(v.witness_class + 1) + ")",
                       v.witness_class);
}

/// Every non-zero diagonal block is primitive (property (prop-I)).
inline bool primitive_blocks(const ComponentDecomposition& dc) {
  return std::all_of(dc.classes.begin(), dc.classes.end(),
                     [](const ComponentClass& c) { return c.is_zero || c.imprimitivity == 1; });
}

/// Every non-zero diagonal block is strictly positive.
inline bool positive_blocks(const ComponentDecomposition& dc) {
  for (const auto& c : dc.classes) {
    if (c.is_zero) continue;
    for (const auto& row : c.block)
      for (const auto& x : row)
        if (x <= 0) return false;
  }
  return true;
}

}  // namespace bratteli
