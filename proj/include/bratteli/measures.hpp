#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/spectral.hpp"

namespace bratteli {

/// Non-negative extended real: a finite Real or +infinity.
class MeasureValue {
 public:
  MeasureValue() = default;
  MeasureValue(Real v) : value_(std::move(v)) {}  // NOLINT(implicit)

  static MeasureValue infinity() {
    MeasureValue m;
    m.infinite_ = true;
    return m;
  }

  bool is_infinite() const noexcept { return infinite_; }
  const Real& value() const {
    if (infinite_) throw std::logic_error("MeasureValue::value on +inf");
    return value_;
  }
  std::string str() const { return infinite_ ? "inf" : value_.str(); }

  friend MeasureValue operator+(const MeasureValue& a, const MeasureValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return MeasureValue(a.value_ + b.value_);
  }

  /// Total order with +inf on top; approximate values compare by value.
  friend bool operator<(const MeasureValue& a, const MeasureValue& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    if (a.value_.is_exact() && b.value_.is_exact()) return a.value_.rational() < b.value_.rational();
    return a.value_.value() < b.value_.value();
  }

 private:
  bool infinite_ = false;
  Real value_ = Real(0);
};

/// Ergodic probability measure attached to a distinguished class.
struct ErgodicMeasure {
  std::size_t class_id = 0;
  NumericValue lambda;
  RealVector xi;
  std::vector<std::size_t> support;  // vertices with access to the class

  /// Measure of any level-n cylinder ending at v.
  Real value(std::size_t v, std::size_t n) const {
    if (n == 0) throw std::invalid_argument("cylinder level must be >= 1");
    if (xi[v].is_zero()) return Real(0);
    return xi[v] * lambda.value.pow(1 - static_cast<long long>(n));
  }

  /// The vector p^(n).
  RealVector level_vector(std::size_t n) const {
    RealVector out;
    for (std::size_t v = 0; v < xi.size(); ++v) out.push_back(value(v, n));
    return out;
  }
};

/// Convex combination of the ergodic measures.
struct InvariantMeasure {
  std::vector<ErgodicMeasure> components;
  RealVector barycentric;

  Real value(std::size_t v, std::size_t n) const {
    Real s = 0;
    for (std::size_t i = 0; i < components.size(); ++i)
      if (!barycentric[i].is_zero()) s += barycentric[i] * components[i].value(v, n);
    return s;
  }

  RealVector level_vector(std::size_t n) const {
    RealVector out;
    const std::size_t size = components.empty() ? 0 : components.front().xi.size();
    for (std::size_t v = 0; v < size; ++v) out.push_back(value(v, n));
    return out;
  }
};

/// Infinite ergodic measure attached to a non-zero class; canonical
/// normalization sum_{w in class} y_w = 1. Built on a distinguished class it is
/// a multiple of the ergodic measure.
struct TailMeasure {
  std::size_t class_id = 0;
  NumericValue lambda;
  RealVector y;                       // on the class vertices, in class order
  std::vector<std::size_t> vertices;  // class vertices
  bool atomic = false;                // block equals [1]
  std::vector<MeasureValue> level_one;  // s(v): value of level-1 cylinders

  MeasureValue value(std::size_t v, std::size_t n) const {
    if (n == 0) throw std::invalid_argument("cylinder level must be >= 1");
    const auto& s = level_one[v];
    if (s.is_infinite()) return s;
    if (s.value().is_zero()) return s;
    return MeasureValue(s.value() * lambda.value.pow(1 - static_cast<long long>(n)));
  }
};

inline Real measure_of_cylinder(const ErgodicMeasure& mu, const CylinderSet& c) {
  return mu.value(c.terminal_vertex, c.level);
}

inline Real measure_of_cylinder(const InvariantMeasure& mu, const CylinderSet& c) {
  return mu.value(c.terminal_vertex, c.level);
}

inline MeasureValue tail_measure_of_cylinder(const TailMeasure& nu, const CylinderSet& c) {
  return nu.value(c.terminal_vertex, c.level);
}

inline void require_measure_preconditions(const ComponentDecomposition& dc) {
  if (!primitive_blocks(dc))
    throw PreconditionFailed("diagonal blocks are not primitive; telescope first");
  require_aperiodic(dc);
}

inline ErgodicMeasure ergodic_measure(const ComponentDecomposition& dc, std::size_t alpha) {
  auto ed = distinguished_eigenvector(dc, alpha);
  return ErgodicMeasure{alpha, ed.lambda, std::move(ed.xi), std::move(ed.support)};
}

inline std::vector<ErgodicMeasure> enumerate_ergodic(const ComponentDecomposition& dc) {
  require_measure_preconditions(dc);
  std::vector<ErgodicMeasure> out;
  for (auto alpha : distinguished_classes(dc)) out.push_back(ergodic_measure(dc, alpha));
  return out;
}

inline std::size_t borel_invariant(const ComponentDecomposition& dc) {
  require_measure_preconditions(dc);
  return distinguished_classes(dc).size();
}

/// Initial classes of R(A), i.e. the minimal components.
inline std::vector<std::size_t> minimal_components(const ComponentDecomposition& dc) {
  return dc.initial_classes;
}

struct SupportInfo {
  std::vector<std::size_t> classes;
  bool full = false;
};

inline SupportInfo support_classes(const ComponentDecomposition& dc, std::size_t alpha) {
  SupportInfo s;
  for (std::size_t b = 0; b < dc.size(); ++b)
    if (dc.accesses(b, alpha)) s.classes.push_back(b);
  s.full = s.classes.size() == dc.size();
  return s;
}

inline SupportInfo support_classes(const ComponentDecomposition& dc, const ErgodicMeasure& mu) {
  return support_classes(dc, mu.class_id);
}

/// Decomposes p1 over the distinguished eigenvectors; p1 must lie in D.
inline InvariantMeasure measure_from_point(const ComponentDecomposition& dc, const RatVector& p1) {
  auto measures = enumerate_ergodic(dc);
  const std::size_t n = dc.a.size();
  if (p1.size() != n) throw DimensionMismatch("measure_from_point: vector length differs from N");
  Rational total = 0;
  for (const auto& x : p1) {
    if (x < 0) throw NotInD("vector has a negative entry");
    total += x;
  }
  if (total != 1) throw NotInD("vector is not normalized: sum of h^(1) x equals " + to_string(total));
  auto verdict = core_membership(dc, p1);
  if (verdict.kind != CoreVerdict::Kind::InCore) throw NotInD("vector is not in core(A)");
  InvariantMeasure m;
  m.components = std::move(measures);
  m.barycentric = verdict.coefficients;
  return m;
}

inline InvariantMeasure measure_from_barycentric(const ComponentDecomposition& dc, RealVector c) {
  InvariantMeasure m;
  m.components = enumerate_ergodic(dc);
  if (c.size() != m.components.size())
    throw DimensionMismatch("barycentric vector length differs from the number of ergodic measures");
  m.barycentric = std::move(c);
  return m;
}

/// Tail-measure construction on any non-zero class.
inline TailMeasure tail_construction(const ComponentDecomposition& dc, std::size_t alpha) {
  const auto& cls = dc.classes.at(alpha);
  if (cls.is_zero) throw ZeroBlock("tail measure on a zero class");
  TailMeasure t;
  t.class_id = alpha;
  t.lambda = cls.rho;
  t.vertices = cls.vertices;
  t.atomic = cls.block.size() == 1 && cls.block[0][0] == 1;
  const std::size_t n = dc.a.size();
  t.level_one.assign(n, MeasureValue(Real(0)));
  if (cls.rho.is_exact()) {
    auto prop = propagate<Rational>(dc, alpha, cls.rho, cls.rho.value.rational(),
                                    cls.perron->exact_vector);
    for (const auto& e : cls.perron->exact_vector) t.y.emplace_back(e);
    for (std::size_t v = 0; v < n; ++v)
      t.level_one[v] = prop.infinite[v] ? MeasureValue::infinity() : MeasureValue(Real(prop.values[v]));
  } else {
    auto prop = propagate<long double>(dc, alpha, cls.rho, cls.rho.approx(),
                                       cls.perron->approx_vector);
    for (auto e : cls.perron->approx_vector) t.y.push_back(Real::approx(e));
    for (std::size_t v = 0; v < n; ++v)
      t.level_one[v] = prop.infinite[v] ? MeasureValue::infinity()
                                         : MeasureValue(Real::approx(prop.values[v]));
  }
  return t;
}

/// One infinite ergodic measure per non-distinguished non-zero class.
/// Atomic measures (block [1]) are dropped unless requested.
inline std::vector<TailMeasure> enumerate_infinite(const ComponentDecomposition& dc,
                                                   bool include_atomic = true) {
  require_measure_preconditions(dc);
  std::vector<TailMeasure> out;
  for (std::size_t alpha = 0; alpha < dc.size(); ++alpha) {
    const auto& cls = dc.classes[alpha];
    if (cls.is_zero || cls.distinguished) continue;
    auto t = tail_construction(dc, alpha);
    if (t.atomic && !include_atomic) continue;
    out.push_back(std::move(t));
  }
  return out;
}

/// Truncated series s_m(v) = lambda^-m sum_{w in class} (A^m)_{v,w} y_w.
inline Real tail_partial_sum(const ComponentDecomposition& dc, const TailMeasure& t,
                             std::size_t v, std::size_t m) {
  IntMatrix am = matrix_power(dc.a, m);
  Real s = 0;
  for (std::size_t k = 0; k < t.vertices.size(); ++k)
    if (am[v][t.vertices[k]] != 0) s += Real(Rational(am[v][t.vertices[k]])) * t.y[k];
  return s * t.lambda.value.pow(-static_cast<long long>(m));
}

// ---------------------------------------------------------------------------
// Whole-diagram analysis with automatic telescoping to primitive blocks.

struct Analysis {
  StationaryDiagram original;
  std::size_t q = 1;           // applied telescoping power
  StationaryDiagram working;   // telescope(original, q)
  ComponentDecomposition dc;   // of the working diagram
  AperiodicityVerdict aperiodicity;
  std::vector<ErgodicMeasure> ergodic;
  std::vector<TailMeasure> infinite;

  /// p^(n) of ergodic measure k at original level n.
  RealVector ergodic_level_vector(std::size_t k, std::size_t n) const {
    const auto& mu = ergodic.at(k);
    if (q == 1) return mu.level_vector(n);
    auto [j, steps] = lift(n);
    RealVector p = mu.level_vector(j + 1);
    IntMatrix a = original.a_matrix();
    for (std::size_t s = 0; s < steps; ++s) {
      RealVector next(p.size(), Real(0));
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t w = 0; w < p.size(); ++w)
          if (a[i][w] != 0) next[i] += Real(Rational(a[i][w])) * p[w];
      p = std::move(next);
    }
    return p;
  }

  Real ergodic_value(std::size_t k, std::size_t v, std::size_t n) const {
    return ergodic_level_vector(k, n).at(v);
  }

  MeasureValue tail_value(std::size_t k, std::size_t v, std::size_t n) const {
    const auto& nu = infinite.at(k);
    if (q == 1) return nu.value(v, n);
    auto [j, steps] = lift(n);
    std::vector<MeasureValue> p;
    for (std::size_t w = 0; w < original.size(); ++w) p.push_back(nu.value(w, j + 1));
    IntMatrix a = original.a_matrix();
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<MeasureValue> next(p.size(), MeasureValue(Real(0)));
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t w = 0; w < p.size(); ++w) {
          if (a[i][w] == 0) continue;
          if (p[w].is_infinite()) next[i] = MeasureValue::infinity();
          else next[i] = next[i] + MeasureValue(Real(Rational(a[i][w])) * p[w].value());
        }
      p = std::move(next);
    }
    return p.at(v);
  }

 private:
  /// Smallest j with 1 + j q >= n, and the number of A-steps back to n.
  std::pair<std::size_t, std::size_t> lift(std::size_t n) const {
    if (n == 0) throw std::invalid_argument("cylinder level must be >= 1");
    std::size_t j = (n - 1 + q - 1) / q;
    return {j, 1 + j * q - n};
  }
};

struct AnalysisOptions {
  /// 0 selects the primitivity power automatically.
  std::size_t telescope = 0;
  long double gap = kDefaultGap;
};

/// Telescopes, decomposes and enumerates all measures. A non-aperiodic
/// diagram is reported through `aperiodicity` with empty measure lists.
inline Analysis analyze(const StationaryDiagram& d, const AnalysisOptions& opts = {}) {
  Analysis an;
  an.original = d;
  an.q = opts.telescope == 0 ? primitivity_power(decompose(d, opts.gap)) : opts.telescope;
  an.working = an.q == 1 ? d : telescope(d, an.q);
  an.dc = decompose(an.working, opts.gap);
  an.aperiodicity = aperiodicity_check(an.dc);
  if (an.aperiodicity.aperiodic() && primitive_blocks(an.dc)) {
    an.ergodic = enumerate_ergodic(an.dc);
    an.infinite = enumerate_infinite(an.dc);
  }
  return an;
}

}  // namespace bratteli
