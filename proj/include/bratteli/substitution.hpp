#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/spectral.hpp"

namespace bratteli {

/// Substitution over an ordered alphabet; rules[a] is sigma(a) as letter
/// indices.
struct Substitution {
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::size_t>> rules;

  Substitution() = default;
  Substitution(std::vector<std::string> letters, std::vector<std::vector<std::size_t>> words)
      : alphabet(std::move(letters)), rules(std::move(words)) {
    if (alphabet.empty()) throw DimensionMismatch("substitution needs a non-empty alphabet");
    if (rules.size() != alphabet.size()) throw DimensionMismatch("one rule per letter required");
    for (const auto& w : rules) {
      if (w.empty()) throw DimensionMismatch("substitution words must be non-empty");
      for (auto x : w)
        if (x >= alphabet.size()) throw DimensionMismatch("rule letter outside the alphabet");
    }
  }

  std::size_t size() const noexcept { return alphabet.size(); }

  std::string word_string(const std::vector<std::size_t>& w, bool spaced = false) const {
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (spaced && k > 0) out += ' ';
      out += alphabet[w[k]];
    }
    return out;
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

/// m[a][b] = number of occurrences of a in sigma(b).
inline IntMatrix substitution_matrix(const Substitution& s) {
  IntMatrix m = zero_matrix(s.size(), s.size());
  for (std::size_t b = 0; b < s.size(); ++b)
    for (auto a : s.rules[b]) m[a][b] += 1;
  return m;
}

inline OrderedDiagram diagram_from_substitution(const Substitution& s) {
  return OrderedDiagram(StationaryDiagram(transpose(substitution_matrix(s)), s.alphabet), s.rules);
}

inline Substitution substitution_from_diagram(const OrderedDiagram& od) {
  std::vector<std::string> letters;
  for (std::size_t v = 0; v < od.size(); ++v) letters.push_back(od.base.name(v));
  return Substitution(std::move(letters), od.order);
}

/// sigma^k as a substitution.
inline Substitution power(const Substitution& s, std::size_t k) {
  if (k == 0) throw std::invalid_argument("power: k must be >= 1");
  auto words = s.rules;
  for (std::size_t step = 1; step < k; ++step) {
    std::vector<std::vector<std::size_t>> next(s.size());
    for (std::size_t a = 0; a < s.size(); ++a)
      for (auto b : words[a]) next[a].insert(next[a].end(), s.rules[b].begin(), s.rules[b].end());
    words = std::move(next);
  }
  return Substitution(s.alphabet, std::move(words));
}

struct GrowthVerdict {
  std::vector<bool> growing;  // per letter
  bool all_growing() const {
    for (bool g : growing)
      if (!g) return false;
    return true;
  }
};

/// |sigma^n(a)| is unbounded iff a reaches a class with spectral radius > 1
/// or a chain through two distinct classes with spectral radius 1.
inline GrowthVerdict growth_check(const Substitution& s, long double gap = kDefaultGap) {
  // Edge a -> b iff b occurs in sigma(a): the graph of F = M^T.
  auto dc = decompose_matrix(transpose(substitution_matrix(s)), gap);
  const NumericValue one = NumericValue::exact(Rational(1));
  const std::size_t m = dc.size();
  std::vector<bool> big(m, false), unit(m, false);
  for (std::size_t c = 0; c < m; ++c) {
    if (dc.classes[c].is_zero) continue;
    int cmp = compare(dc.classes[c].rho, one, gap);
    big[c] = cmp > 0;
    unit[c] = cmp == 0;
  }
  // Longest chain of unit classes starting at or below each class.
  std::vector<std::size_t> chain(m, 0);
  std::vector<bool> grows(m, false);
  for (std::size_t c = m; c-- > 0;) {
    std::size_t best = 0;
    bool g = big[c];
    for (std::size_t d = c + 1; d < m; ++d)
      if (dc.above(c, d)) {
        best = std::max(best, chain[d]);
        g = g || big[d];
      }
    chain[c] = best + (unit[c] ? 1 : 0);
    grows[c] = g || chain[c] >= 2;
  }
  GrowthVerdict v;
  for (std::size_t a = 0; a < s.size(); ++a) v.growing.push_back(grows[dc.class_of[a]]);
  return v;
}

inline constexpr std::size_t kDefaultExpandCap = 10'000'000;

/// |sigma^n(a)| exactly.
inline BigInt expansion_length(const Substitution& s, std::size_t a, std::size_t n) {
  auto f = transpose(substitution_matrix(s));
  IntVector h(s.size(), BigInt(1));
  for (std::size_t k = 0; k < n; ++k) h = multiply(f, h);
  return h[a];
}

inline std::vector<std::size_t> expand(const Substitution& s, std::size_t a, std::size_t n,
                                       std::size_t cap = kDefaultExpandCap) {
  if (a >= s.size()) throw std::out_of_range("expand: letter out of range");
  BigInt len = expansion_length(s, a, n);
  if (len > BigInt(cap))
    throw CapExceeded("expand: |sigma^n(a)| = " + len.str() + " exceeds cap " + std::to_string(cap));
  std::vector<std::size_t> word{a}, next;
  for (std::size_t k = 0; k < n; ++k) {
    next.clear();
    for (auto x : word) next.insert(next.end(), s.rules[x].begin(), s.rules[x].end());
    word.swap(next);
  }
  return word;
}

/// Letter counts of sigma^n(a), propagated letter by letter; no word is built.
inline std::vector<BigInt> letter_counts(const Substitution& s, std::size_t a, std::size_t n) {
  std::vector<BigInt> counts(s.size(), 0), next(s.size());
  counts[a] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(next.begin(), next.end(), BigInt(0));
    for (std::size_t x = 0; x < s.size(); ++x)
      if (counts[x] != 0)
        for (auto y : s.rules[x]) next[y] += counts[x];
    counts.swap(next);
  }
  return counts;
}

inline RatVector letter_frequencies(const Substitution& s, std::size_t a, std::size_t n) {
  auto counts = letter_counts(s, a, n);
  BigInt total = 0;
  for (const auto& c : counts) total += c;
  RatVector out;
  for (const auto& c : counts) out.emplace_back(Rational(c, total));
  return out;
}

struct SubstitutionReport {
  Analysis analysis;
  GrowthVerdict growth;
  std::vector<TailMeasure> sigma_finite;  // non-atomic only
  bool uniquely_ergodic = false;
};

inline SubstitutionReport substitution_measures(const Substitution& s, const AnalysisOptions& opts = {}) {
  SubstitutionReport r;
  r.growth = growth_check(s, opts.gap);
  if (!r.growth.all_growing()) {
    std::string bounded;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (!r.growth.growing[a]) bounded += (bounded.empty() ? "" : ", ") + s.alphabet[a];
    throw NotGrowing("letters with bounded iterates: " + bounded);
  }
  r.analysis = analyze(diagram_from_substitution(s).base, opts);
  require_aperiodic(r.analysis.dc);
  for (const auto& t : r.analysis.infinite)
    if (!t.atomic) r.sigma_finite.push_back(t);
  r.uniquely_ergodic = r.analysis.ergodic.size() == 1;
  return r;
}

}  // namespace bratteli
