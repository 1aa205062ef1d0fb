#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/lp.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/spectral.hpp"
#include "bratteli/vershik.hpp"

namespace bratteli {

struct Violation {
  char check = 'a';  // a: path independence, b: A p(n+1) = p(n), c: normalization
  std::size_t level = 0;
  std::size_t vertex = 0;
  std::string message;
};

struct InvarianceReport {
  std::vector<Violation> violations;
  std::size_t cylinders_checked = 0;
  bool ok() const { return violations.empty(); }
};

using CylinderMeasure = std::function<Real(std::size_t vertex, std::size_t level)>;

namespace detail {

inline bool close(const Real& a, const Real& b, long double tol) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  return std::fabs(a.value() - b.value()) <= tol * std::max(1.0L, std::fabs(b.value()));
}

}  // namespace detail

/// Exhaustive check of the invariance conditions for levels 1..n_max.
/// (a) each enumerated cylinder's measure, recomputed as the sum over its
/// one-step extensions, is the same across E(v0, w); (b) A p(n+1) = p(n);
/// (c) sum_w h_w(n) p_w(n) = 1.
inline InvarianceReport verify_invariance(const StationaryDiagram& d, const CylinderMeasure& mu,
                                          std::size_t n_max, long double tol = 1e-12L,
                                          std::size_t path_cap = 200'000) {
  InvarianceReport rep;
  const std::size_t n = d.size();
  const auto& f = d.incidence();
  auto table = height_table(d, n_max + 1);
  for (std::size_t level = 1; level <= n_max; ++level) {
    for (std::size_t w = 0; w < n; ++w) {
      if (table[level][w] > BigInt(path_cap)) continue;
      const Real expected = mu(w, level);
      std::optional<Real> first;
      for (const auto& p : enumerate_paths(d, w, level, path_cap)) {
        ++rep.cylinders_checked;
        Real sum = 0;
        for (std::size_t v = 0; v < n; ++v) {
          const auto count = f[v][w].convert_to<std::size_t>();
          for (std::size_t k = 0; k < count; ++k) {
            PathWord ext = p;
            ext.edges.push_back(Edge{level + 1, w, v, k});
            auto c = make_cylinder(d, std::move(ext));
            sum += mu(c.terminal_vertex, c.level);
          }
        }
        if (!first) first = sum;
        if (!detail::close(sum, *first, tol) || !detail::close(sum, expected, tol)) {
          rep.violations.push_back({'a', level, w,
                                    "cylinder at vertex " + d.name(w) + ", level " + std::to_string(level) +
                                        ": extensions sum to " + sum.str() + ", expected " + expected.str()});
          break;
        }
      }
    }
  }
  const IntMatrix a = d.a_matrix();
  for (std::size_t level = 1; level <= n_max; ++level) {
    for (std::size_t i = 0; i < n; ++i) {
      Real s = 0;
      for (std::size_t w = 0; w < n; ++w)
        if (a[i][w] != 0) s += Real(Rational(a[i][w])) * mu(w, level + 1);
      if (!detail::close(s, mu(i, level), tol))
        rep.violations.push_back({'b', level, i,
                                  "(A p(" + std::to_string(level + 1) + "))_" + d.name(i) + " = " + s.str() +
                                      " differs from p(" + std::to_string(level) + ")_" + d.name(i) + " = " +
                                      mu(i, level).str()});
    }
    Real total = 0;
    for (std::size_t w = 0; w < n; ++w) total += Real(Rational(table[level][w])) * mu(w, level);
    if (!detail::close(total, Real(1), tol))
      rep.violations.push_back({'c', level, 0,
                                "sum of h(" + std::to_string(level) + ") p(" + std::to_string(level) +
                                    ") = " + total.str() + ", expected 1"});
  }
  return rep;
}

inline InvarianceReport verify_invariance(const StationaryDiagram& d, const ErgodicMeasure& mu,
                                          std::size_t n_max, long double tol = 1e-12L) {
  return verify_invariance(d, [&](std::size_t v, std::size_t n) { return mu.value(v, n); }, n_max, tol);
}

inline InvarianceReport verify_invariance(const StationaryDiagram& d, const InvariantMeasure& mu,
                                          std::size_t n_max, long double tol = 1e-12L) {
  return verify_invariance(d, [&](std::size_t v, std::size_t n) { return mu.value(v, n); }, n_max, tol);
}

/// Q by explicit successor steps from e to e' (or back, negated).
inline BigInt brute_force_Q(const OrderedDiagram& od, const PathWord& e, const PathWord& e_prime,
                            std::size_t cap = kDefaultPathCap) {
  if (e.length() != e_prime.length() || e.target() != e_prime.target())
    throw EndpointMismatch("brute_force_Q: paths must share length and terminal vertex");
  auto walk = [&](PathWord from, const PathWord& to) -> std::optional<std::size_t> {
    for (std::size_t steps = 0;; ++steps) {
      if (from == to) return steps;
      if (steps >= cap) throw CapExceeded("brute_force_Q: step cap exceeded");
      if (!advance(od, from)) return std::nullopt;
    }
  };
  if (auto s = walk(e, e_prime)) return BigInt(*s);
  if (auto s = walk(e_prime, e)) return -BigInt(*s);
  throw std::logic_error("brute_force_Q: paths are not in the same tower");
}

struct PreimageCertificate {
  bool feasible = false;
  RatVector y;       // A^k y = x, y >= 0
  RatVector farkas;  // z^T A^k >= 0, z^T x < 0
  bool verified = false;
};

/// Exact feasibility of A^k y = x, y >= 0, with the certificate rechecked.
inline PreimageCertificate core_preimage_oracle(const IntMatrix& a, const RatVector& x, std::size_t k) {
  if (a.size() > kCoreOracleMaxN) throw SizeRefused("core oracle refuses N > 12");
  if (k == 0 || k > 2 * a.size()) throw SizeRefused("core oracle needs 1 <= k <= 2N");
  const RatMatrix m = to_rational(matrix_power(a, k));
  auto res = nonnegative_feasibility(m, x);
  PreimageCertificate cert;
  cert.feasible = res.feasible;
  const std::size_t n = a.size();
  if (res.feasible) {
    cert.y = res.solution;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * cert.y[j];
      ok = s == x[i] && cert.y[i] >= 0;
    }
    cert.verified = ok;
  } else {
    cert.farkas = res.farkas;
    bool ok = true;
    Rational zx = 0;
    for (std::size_t i = 0; i < n; ++i) zx += cert.farkas[i] * x[i];
    ok = zx < 0;
    for (std::size_t j = 0; j < n && ok; ++j) {
      Rational s = 0;
      for (std::size_t i = 0; i < n; ++i) s += cert.farkas[i] * m[i][j];
      ok = s >= 0;
    }
    cert.verified = ok;
  }
  return cert;
}

struct OrbitFrequency {
  std::size_t visits = 0;
  std::size_t steps = 0;  // samples actually taken
  bool exhausted = false; // maximal path reached before the budget
  std::size_t working_level = 0;
  Rational frequency() const { return steps == 0 ? Rational(0) : Rational(visits, steps); }
};

/// Fraction of the successor orbit of `start` (extended downwards by
/// minimal-index edges to the working level) lying in `target`.
inline OrbitFrequency empirical_orbit_frequency(const OrderedDiagram& od, const PathWord& start,
                                                std::size_t steps, const CylinderSet& target) {
  if (steps > 1'000'000) throw CapExceeded("empirical_orbit_frequency: at most 10^6 steps");
  if (!start.anchored()) throw std::invalid_argument("start path must begin at the root");
  const auto& f = od.base.incidence();
  PathWord p = start;
  auto extend_once = [&]() {
    const std::size_t w = p.target();
    for (std::size_t v = 0; v < od.size(); ++v)
      if (f[v][w] != 0) {
        p.edges.push_back(Edge{p.length() + 1, w, v, 0});
        return;
      }
    throw PreconditionFailed("vertex without outgoing edges");
  };
  while (p.length() < target.level + 4) extend_once();
  // Deepen until the tower above the start has room for the whole orbit.
  for (;;) {
    auto table = height_table(od.base, p.length());
    if (table[p.length()][p.target()] - rank(od, p, table) >= BigInt(steps)) break;
    extend_once();
  }
  OrbitFrequency out;
  out.working_level = p.length();
  const std::size_t t = target.level;
  for (std::size_t s = 0; s < steps; ++s) {
    bool inside = true;
    for (std::size_t k = 0; k < t && inside; ++k) inside = p.edges[k] == target.path.edges[k];
    if (inside) ++out.visits;
    ++out.steps;
    if (s + 1 < steps && !advance(od, p)) {
      out.exhausted = true;
      break;
    }
  }
  return out;
}

struct AsymptoticsReport {
  enum class Verdict { ConvergingPositive, Vanishing, Diverging, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::size_t first_n = 0;
  std::vector<Real> values;  // (A^n)_{ij} / lambda^n
};

inline const char* to_string(AsymptoticsReport::Verdict v) {
  switch (v) {
    case AsymptoticsReport::Verdict::ConvergingPositive: return "converging-positive";
    case AsymptoticsReport::Verdict::Vanishing: return "vanishing";
    case AsymptoticsReport::Verdict::Diverging: return "diverging";
    default: return "inconclusive";
  }
}

/// Sequence (A^n)_{ij}/lambda^n on [n1, n2] and a tail-ratio verdict.
inline AsymptoticsReport asymptotics_check(const IntMatrix& a, const NumericValue& lambda, std::size_t i,
                                           std::size_t j, std::size_t n1, std::size_t n2) {
  AsymptoticsReport rep;
  rep.first_n = n1;
  IntMatrix power = matrix_power(a, n1);
  for (std::size_t n = n1; n <= n2; ++n) {
    rep.values.push_back(Real(Rational(power[i][j])) * lambda.value.pow(-static_cast<long long>(n)));
    power = multiply(power, a);
  }
  // Judge the last third of the range.
  const std::size_t start = rep.values.size() - std::max<std::size_t>(3, rep.values.size() / 3);
  std::vector<long double> tail;
  for (std::size_t k = start; k < rep.values.size(); ++k) tail.push_back(rep.values[k].value());
  long double lo = *std::min_element(tail.begin(), tail.end());
  long double hi = *std::max_element(tail.begin(), tail.end());
  bool decreasing = true, increasing = true;
  for (std::size_t k = 1; k < tail.size(); ++k) {
    decreasing = decreasing && tail[k] < tail[k - 1];
    increasing = increasing && tail[k] > tail[k - 1];
  }
  using V = AsymptoticsReport::Verdict;
  if (hi == 0.0L) rep.verdict = V::Vanishing;
  else if (lo > 0.0L && (hi - lo) <= 1e-3L * hi) rep.verdict = V::ConvergingPositive;
  else if (decreasing && tail.back() < 0.5L * tail.front()) rep.verdict = V::Vanishing;
  else if (increasing && tail.back() > tail.front()) rep.verdict = V::Diverging;
  return rep;
}

}  // namespace bratteli
