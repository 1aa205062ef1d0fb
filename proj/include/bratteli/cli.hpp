#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bratteli/diagram.hpp"
#include "bratteli/document.hpp"
#include "bratteli/errors.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/numeric.hpp"
#include "bratteli/oracle.hpp"
#include "bratteli/spectral.hpp"
#include "bratteli/substitution.hpp"
#include "bratteli/vershik.hpp"

namespace bratteli::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kPrecondition = 3,
  kVerification = 4,
  kCap = 5,
};

namespace detail {

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string class_name(const StationaryDiagram& d, const ComponentDecomposition& dc, std::size_t c) {
  std::string out = "{";
  const auto& vs = dc.classes[c].vertices;
  for (std::size_t k = 0; k < vs.size(); ++k) out += (k ? ", " : "") + d.name(vs[k]);
  return out + "}";
}

inline std::string vector_text(const std::vector<MeasureValue>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k].str();
  return out + ")";
}

inline std::string vector_text(const RealVector& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k].str();
  return out + ")";
}

inline std::string plural(std::size_t n, const std::string& noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

inline std::size_t parse_telescope(const std::string& s) {
  if (s == "auto") return 0;
  try {
    std::size_t pos = 0;
    auto k = std::stoul(s, &pos);
    if (pos == s.size() && k >= 1) return k;
  } catch (const std::exception&) {
  }
  throw ParseError("--telescope expects 'auto' or a positive integer");
}

inline Window parse_window(const std::string& s) {
  auto colon = s.find(':');
  try {
    if (colon != std::string::npos) {
      Window w{std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
      if (w.first >= 1 && w.last >= w.first) return w;
    }
  } catch (const std::exception&) {
  }
  throw ParseError("--window expects a:b with 1 <= a <= b");
}

inline std::size_t resolve_vertex(const StationaryDiagram& d, const std::string& token) {
  auto v = d.find_vertex(token);
  if (!v) throw ParseError("unknown vertex '" + token + "'");
  return *v;
}

/// Path spec: vertex tokens level by level, each optionally suffixed with
/// ":k" selecting the k-th parallel edge (0-based) from the previous vertex.
inline PathWord parse_path(const StationaryDiagram& d, std::string spec) {
  std::replace(spec.begin(), spec.end(), ',', ' ');
  std::vector<std::string> names;
  for (std::size_t v = 0; v < d.size(); ++v) names.push_back(d.name(v));
  auto tokens = bratteli::detail::tokenize(spec, bratteli::detail::single_char_names(names) &&
                                                     spec.find(':') == std::string::npos);
  if (tokens.empty()) throw ParseError("empty path");
  PathWord p;
  for (std::size_t level = 1; level <= tokens.size(); ++level) {
    std::string tok = tokens[level - 1];
    std::size_t index = 0;
    auto colon = tok.find(':');
    if (colon != std::string::npos) {
      try {
        index = std::stoul(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("bad edge index in '" + tok + "'");
      }
      tok = tok.substr(0, colon);
    }
    std::size_t v = resolve_vertex(d, tok);
    if (level == 1) {
      p.edges.push_back(Edge{1, kRoot, v, 0});
    } else {
      std::size_t w = p.target();
      if (BigInt(index) >= d.edges(v, w))
        throw ParseError("no edge " + std::to_string(index) + " from " + d.name(w) + " to " + d.name(v));
      p.edges.push_back(Edge{level, w, v, index});
    }
  }
  return p;
}

inline AnalysisOptions options(const std::string& telescope, double tolerance) {
  AnalysisOptions o;
  o.telescope = parse_telescope(telescope);
  o.gap = tolerance;
  return o;
}

inline nlohmann::json measure_report(const Analysis& an) {
  using nlohmann::json;
  const auto& d = an.working;
  json out;
  out["vertices"] = d.size();
  out["telescope"] = an.q;
  json classes = json::array();
  for (std::size_t c = 0; c < an.dc.size(); ++c) {
    json vs = json::array();
    for (auto v : an.dc.classes[c].vertices) vs.push_back(d.name(v));
    classes.push_back({{"id", c + 1},
                       {"vertices", vs},
                       {"rho", an.dc.classes[c].rho.str()},
                       {"distinguished", an.dc.classes[c].distinguished}});
  }
  out["classes"] = classes;
  out["aperiodic"] = an.aperiodicity.aperiodic();
  json measures = json::array();
  auto support = [&](std::size_t alpha) {
    json s = json::array();
    for (auto c : support_classes(an.dc, alpha).classes) s.push_back(c + 1);
    return s;
  };
  for (std::size_t k = 0; k < an.ergodic.size(); ++k) {
    const auto& mu = an.ergodic[k];
    json vec = json::array();
    for (const auto& x : mu.xi) vec.push_back(x.str());
    measures.push_back({{"name", "mu_" + std::to_string(k + 1)},
                        {"type", "ergodic-finite"},
                        {"class", mu.class_id + 1},
                        {"eigenvalue", mu.lambda.str()},
                        {"eigenvector", vec},
                        {"support_classes", support(mu.class_id)}});
  }
  for (std::size_t k = 0; k < an.infinite.size(); ++k) {
    const auto& nu = an.infinite[k];
    json vec = json::array();
    for (const auto& x : nu.level_one) vec.push_back(x.str());
    measures.push_back({{"name", "nu_" + std::to_string(k + 1)},
                        {"type", nu.atomic ? "sigma-finite-atomic" : "sigma-finite"},
                        {"class", nu.class_id + 1},
                        {"eigenvalue", nu.lambda.str()},
                        {"eigenvector", vec},
                        {"support_classes", support(nu.class_id)}});
  }
  out["measures"] = measures;
  out["borel_invariant"] = an.ergodic.size();
  return out;
}

inline void print_analysis(std::ostream& out, const Analysis& an) {
  const auto& d = an.working;
  const auto& dc = an.dc;
  out << "vertices: " << d.size() << "\n";
  if (an.q > 1) out << "telescoped: q = " << an.q << " (diagonal blocks made primitive)\n";
  else out << "telescoped: q = 1\n";
  out << "classes:\n";
  for (std::size_t c = 0; c < dc.size(); ++c) {
    const auto& cls = dc.classes[c];
    out << "  [" << c + 1 << "] " << class_name(d, dc, c) << "  rho = " << cls.rho.str();
    if (cls.is_zero) out << "  zero";
    if (cls.distinguished) out << "  distinguished";
    if (std::find(dc.initial_classes.begin(), dc.initial_classes.end(), c) != dc.initial_classes.end())
      out << "  initial";
    out << "\n";
  }
  out << "R(A) edges:";
  auto edges = reduced_graph_edges(dc);
  if (edges.empty()) out << " none";
  for (std::size_t k = 0; k < edges.size(); ++k)
    out << (k ? "," : "") << " [" << edges[k].first + 1 << "] -> [" << edges[k].second + 1 << "]";
  out << "\n";
  out << "distinguished classes:";
  for (auto c : distinguished_classes(dc)) out << " [" << c + 1 << "]";
  out << "\n";
  if (!an.aperiodicity.aperiodic()) return;
  out << "aperiodicity: aperiodic\n";
  out << "minimal components:";
  for (auto c : minimal_components(dc)) out << " [" << c + 1 << "] " << class_name(d, dc, c);
  out << "\n";
  out << "ergodic measures:\n";
  for (std::size_t k = 0; k < an.ergodic.size(); ++k) {
    const auto& mu = an.ergodic[k];
    auto sup = support_classes(dc, mu.class_id);
    out << "  mu_" << k + 1 << "  class [" << mu.class_id + 1 << "]  lambda = " << mu.lambda.str()
        << "  xi = " << vector_text(mu.xi) << "  support:";
    for (auto c : sup.classes) out << " [" << c + 1 << "]";
    if (sup.full) out << " (full)";
    out << "\n";
  }
  out << "sigma-finite measures:\n";
  if (an.infinite.empty()) out << "  none\n";
  for (std::size_t k = 0; k < an.infinite.size(); ++k) {
    const auto& nu = an.infinite[k];
    out << "  nu_" << k + 1 << "  class [" << nu.class_id + 1 << "]  lambda = " << nu.lambda.str()
        << "  level-1 values = " << vector_text(nu.level_one) << (nu.atomic ? "  atomic" : "  non-atomic")
        << "\n";
  }
  out << "Borel invariant: " << an.ergodic.size() << "\n";
  out << plural(an.ergodic.size(), "ergodic probability measure") << "; "
      << plural(an.infinite.size(), "σ-finite measure") << "\n";
}

class NotAperiodicReport : public NotAperiodic {
 public:
  using NotAperiodic::NotAperiodic;
};

inline void require(const Analysis& an) {
  if (an.aperiodicity.kind == AperiodicityVerdict::Kind::InvalidDiagram)
    throw PreconditionFailed("invalid diagram: " + an.aperiodicity.reason);
  if (!an.aperiodicity.aperiodic())
    throw NotAperiodic("not aperiodic: " + an.aperiodicity.reason + " (witness class [" +
                           std::to_string(an.aperiodicity.witness_class + 1) + "])",
                       an.aperiodicity.witness_class);
}

inline OrderedDiagram ordered_of(const DiagramDocument& doc, std::ostream& err) {
  if (doc.ordered) return *doc.ordered;
  err << "note: document has no order; using sources in increasing vertex order\n";
  return default_order(doc.diagram);
}

/// Distinguished class with the largest spectral radius (first on ties).
inline std::size_t default_class(const ComponentDecomposition& dc) {
  auto ds = distinguished_classes(dc);
  if (ds.empty()) throw NotDistinguished("no distinguished class");
  std::size_t best = ds.front();
  for (auto c : ds)
    if (dc.classes[c].rho.approx() > dc.classes[best].rho.approx()) best = c;
  return best;
}

// ---------------------------------------------------------------------------
// Commands.

inline int cmd_analyze(const std::string& file, const AnalysisOptions& opts, bool json_out, std::ostream& out) {
  auto doc = parse_diagram(read_input(file));
  auto an = analyze(doc.diagram, opts);
  if (json_out) {
    require(an);
    out << measure_report(an).dump(2) << "\n";
    return kOk;
  }
  print_analysis(out, an);
  require(an);
  return kOk;
}

inline int cmd_cylinder(const std::string& file, const AnalysisOptions& opts, const std::string& measure,
                        const std::string& path_spec, bool sum_check, std::ostream& out) {
  auto doc = parse_diagram(read_input(file));
  auto an = analyze(doc.diagram, opts);
  require(an);
  auto path = parse_path(doc.diagram, path_spec);
  auto cyl = make_cylinder(doc.diagram, path);
  const std::size_t v = cyl.terminal_vertex, n = cyl.level;

  auto finite_value = [&](std::size_t w, std::size_t level) -> std::optional<MeasureValue> {
    if (measure.rfind("tail:", 0) == 0) {
      std::size_t k = std::stoul(measure.substr(5));
      if (k == 0 || k > an.infinite.size()) throw ParseError("no σ-finite measure " + measure.substr(5));
      return an.tail_value(k - 1, w, level);
    }
    if (!measure.empty() && measure[0] == '@') {
      auto md = parse_measure_document(read_input(measure.substr(1)));
      RealVector bary;
      if (md.barycentric) {
        for (const auto& c : *md.barycentric) bary.emplace_back(c);
      } else {
        auto m = measure_from_point(an.dc, *md.p1);
        bary = m.barycentric;
      }
      if (bary.size() != an.ergodic.size()) throw ParseError("barycentric vector has the wrong length");
      Real s = 0;
      for (std::size_t k = 0; k < bary.size(); ++k) s += bary[k] * an.ergodic_value(k, w, level);
      return MeasureValue(s);
    }
    std::size_t k = 0;
    try {
      k = std::stoul(measure);
    } catch (const std::exception&) {
      throw ParseError("--measure expects k, tail:k or @file");
    }
    if (k == 0 || k > an.ergodic.size()) throw ParseError("no ergodic measure " + measure);
    return MeasureValue(an.ergodic_value(k - 1, w, level));
  };

  if (sum_check) {
    auto table = height_table(doc.diagram, n);
    MeasureValue total(Real(0));
    for (std::size_t w = 0; w < doc.diagram.size(); ++w) {
      auto val = *finite_value(w, n);
      if (table[n][w] == 0) continue;
      total = total + (val.is_infinite() ? val : MeasureValue(Real(Rational(table[n][w])) * val.value()));
    }
    out << total.str() << "\n";
    return kOk;
  }
  out << finite_value(v, n)->str() << "\n";
  return kOk;
}

inline int cmd_eigenvalues(const std::string& file, const AnalysisOptions& opts, const std::string& cls,
                           std::size_t qmax, const std::string& window_spec, std::size_t jobs,
                           std::ostream& out, std::ostream& err) {
  auto doc = parse_diagram(read_input(file));
  auto od = ordered_of(doc, err);
  std::size_t q = opts.telescope == 0 ? primitivity_power(decompose(od.base, opts.gap)) : opts.telescope;
  if (q > 1) od = telescope(od, q);
  auto dc = decompose(od.base, opts.gap);
  require_aperiodic(dc);
  std::size_t alpha = cls.empty() ? default_class(dc) : dc.class_of[resolve_vertex(od.base, cls)];
  require_distinguished(dc, alpha);
  const bool fixed = !window_spec.empty();
  const Window window = fixed ? parse_window(window_spec) : Window{};
  auto res = fixed ? eigenvalue_search(od, dc, alpha, qmax, window, jobs) : eigenvalue_search(od, dc, alpha, qmax, jobs);
  const bool decided = res.decided;
  out << "telescoped: q = " << q << "\n";
  out << "class: [" << alpha + 1 << "] " << class_name(od.base, dc, alpha)
      << "  lambda = " << dc.classes[alpha].rho.str() << "\n";
  if (fixed) out << "window: " << window.first << ":" << window.last << "  qmax: " << qmax << "\n";
  else out << "window: decisive per q  qmax: " << qmax << "\n";
  out << "eigenvalues theta (gamma = exp(2 pi i theta)):";
  for (const auto& t : res.eigenvalues) out << " " << to_string(t);
  out << "\n";
  if (res.only_trivial())
    out << "weak-mixing evidence: only θ=0 up to q = " << qmax << (decided ? " (decided)" : "") << "\n";
  else
    out << "non-trivial eigenvalues: " << (res.eigenvalues.size() - 1) << " ("
        << (decided ? "decided" : "evidence") << ")\n";
  return kOk;
}

inline int cmd_subst(const std::string& file, const std::string& action, const std::string& letter,
                     std::size_t n, const AnalysisOptions& opts, bool json_out, std::ostream& out) {
  auto s = parse_substitution(read_input(file));
  auto letter_index = [&]() -> std::size_t {
    const std::string l = letter.empty() ? s.alphabet.front() : letter;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (s.alphabet[a] == l) return a;
    throw ParseError("unknown letter '" + l + "'");
  };
  if (action == "matrix") {
    auto m = substitution_matrix(s);
    for (const auto& row : m) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j].str();
      out << "\n";
    }
    return kOk;
  }
  if (action == "diagram") {
    out << serialize(diagram_from_substitution(s));
    return kOk;
  }
  if (action == "expand") {
    const bool spaced = !bratteli::detail::single_char_names(s.alphabet);
    out << s.word_string(expand(s, letter_index(), n), spaced) << "\n";
    return kOk;
  }
  if (action == "freqs") {
    auto f = letter_frequencies(s, letter_index(), n);
    for (std::size_t a = 0; a < s.size(); ++a) out << s.alphabet[a] << " " << to_string(f[a]) << "\n";
    return kOk;
  }
  if (action == "measures") {
    auto rep = substitution_measures(s, opts);
    if (json_out) {
      auto j = measure_report(rep.analysis);
      j["uniquely_ergodic"] = rep.uniquely_ergodic;
      out << j.dump(2) << "\n";
      return kOk;
    }
    print_analysis(out, rep.analysis);
    out << "non-atomic σ-finite measures: " << rep.sigma_finite.size() << "\n";
    out << "uniquely ergodic: " << (rep.uniquely_ergodic ? "yes" : "no") << "\n";
    return kOk;
  }
  throw ParseError("unknown subst action '" + action + "'");
}

inline int cmd_verify(const std::string& file, const AnalysisOptions& opts, std::size_t depth,
                      const std::string& measure_file, std::ostream& out) {
  auto doc = parse_diagram(read_input(file));
  auto an = analyze(doc.diagram, opts);
  require(an);
  std::size_t failures = 0;
  const auto& d = an.working;
  for (std::size_t k = 0; k < an.ergodic.size(); ++k) {
    auto rep = verify_invariance(d, an.ergodic[k], depth);
    out << "invariance mu_" << k + 1 << ": " << (rep.ok() ? "ok" : "FAILED") << " (" << rep.cylinders_checked
        << " cylinders)\n";
    for (const auto& v : rep.violations) out << "  violation (" << v.check << "): " << v.message << "\n";
    failures += rep.violations.size();
  }
  for (std::size_t k = 0; k < an.ergodic.size(); ++k) {
    RatVector x;
    bool exact = an.ergodic[k].lambda.is_exact();
    if (!exact) continue;
    for (const auto& e : an.ergodic[k].xi) x.push_back(e.rational());
    auto v = core_membership(an.dc, x);
    bool ok = v.kind == CoreVerdict::Kind::InCore;
    out << "core membership xi_" << k + 1 << ": " << (ok ? "ok" : "FAILED") << "\n";
    failures += ok ? 0 : 1;
  }
  {
    const OrderedDiagram base = doc.ordered ? *doc.ordered : default_order(doc.diagram);
    auto od = an.q > 1 ? telescope(base, an.q) : base;
    const std::size_t levels = std::min<std::size_t>(depth, 6);
    auto table = height_table(od.base, levels);
    bool ok = true;
    for (std::size_t v = 0; v < od.size() && ok; ++v)
      for (std::size_t lv = 1; lv <= levels && ok; ++lv) {
        if (table[lv][v] > BigInt(200'000)) continue;
        PathWord p = min_path(od, v, lv);
        BigInt count = 1;
        while (advance(od, p)) ++count;
        ok = count == table[lv][v] && p == max_path(od, v, lv);
      }
    out << "successor enumeration: " << (ok ? "ok" : "FAILED") << "\n";
    failures += ok ? 0 : 1;
    std::size_t mismatches = 0, checked = 0;
    auto diamonds = enumerate_diamonds(od, std::nullopt, 2);
    for (const auto& dm : diamonds)
      for (std::size_t lv = 1; lv <= std::min<std::size_t>(depth, 4); ++lv) {
        auto t = height_table(od.base, lv + dm.length());
        if (t[lv + dm.length()][dm.range()] > BigInt(100'000)) continue;
        PathWord prefix = min_path(od, dm.source(), lv);
        PathWord a = prefix, b = prefix;
        for (const auto& e : dm.placed(dm.omega, lv).edges) a.edges.push_back(e);
        for (const auto& e : dm.placed(dm.omega_prime, lv).edges) b.edges.push_back(e);
        ++checked;
        if (brute_force_Q(od, a, b) != P_formula(od, dm, lv, t)) ++mismatches;
      }
    out << "return times: " << (mismatches == 0 ? "ok" : "FAILED") << " (" << checked << " checked)\n";
    failures += mismatches;
  }
  if (!measure_file.empty()) {
    auto md = parse_measure_document(read_input(measure_file));
    std::optional<InvariantMeasure> m;
    try {
      if (md.barycentric) {
        RealVector c;
        for (const auto& x : *md.barycentric) c.emplace_back(x);
        m = measure_from_barycentric(an.dc, c);
      } else {
        m = measure_from_point(an.dc, *md.p1);
      }
    } catch (const NotInD& e) {
      out << "measure file: FAILED\n  violation: " << e.what() << "\n";
      ++failures;
    } catch (const DimensionMismatch& e) {
      out << "measure file: FAILED\n  violation: " << e.what() << "\n";
      ++failures;
    }
    if (m) {
      auto rep = verify_invariance(d, *m, depth);
      out << "measure file: " << (rep.ok() ? "ok" : "FAILED") << "\n";
      for (const auto& v : rep.violations) out << "  violation (" << v.check << "): " << v.message << "\n";
      failures += rep.violations.size();
    }
  }
  out << (failures == 0 ? "all checks passed" : plural(failures, "violation")) << "\n";
  return failures == 0 ? kOk : kVerification;
}

inline int cmd_export_dot(const std::string& file, const std::string& graph, const std::string& orientation,
                          std::size_t levels, std::ostream& out) {
  auto doc = parse_diagram(read_input(file));
  const auto& d = doc.diagram;
  if (graph == "levels") {
    out << "digraph bratteli {\n  rankdir=TB;\n  v0 [label=\"v0\"];\n";
    for (std::size_t lv = 1; lv <= levels; ++lv)
      for (std::size_t v = 0; v < d.size(); ++v)
        out << "  n" << lv << "_" << v + 1 << " [label=\"" << d.name(v) << "\"];\n";
    for (std::size_t v = 0; v < d.size(); ++v) out << "  v0 -> n1_" << v + 1 << ";\n";
    for (std::size_t lv = 1; lv < levels; ++lv)
      for (std::size_t v = 0; v < d.size(); ++v)
        for (std::size_t w = 0; w < d.size(); ++w)
          for (BigInt k = 0; k < d.edges(v, w); ++k)
            out << "  n" << lv << "_" << w + 1 << " -> n" << lv + 1 << "_" << v + 1 << ";\n";
    out << "}\n";
    return kOk;
  }
  if (graph != "reduced") throw ParseError("--graph expects levels or reduced");
  if (orientation != "F" && orientation != "A") throw ParseError("--orientation expects F or A");
  auto dc = decompose(d);
  out << "digraph reduced {\n";
  for (std::size_t c = 0; c < dc.size(); ++c)
    out << "  c" << c + 1 << " [label=\"" << class_name(d, dc, c) << "\\nrho = " << dc.classes[c].rho.str()
        << "\"" << (dc.classes[c].distinguished ? ", peripheries=2" : "") << "];\n";
  for (const auto& [b, a] : reduced_graph_edges(dc)) {
    if (orientation == "A") out << "  c" << b + 1 << " -> c" << a + 1 << ";\n";
    else out << "  c" << a + 1 << " -> c" << b + 1 << ";\n";
  }
  out << "}\n";
  return kOk;
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant measures and spectral analysis of stationary Bratteli diagrams", "bratteli"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string telescope = "auto";
  double tolerance = 1e-9;
  bool json_out = false;
  app.add_option("--telescope", telescope, "auto or a telescoping power k")->capture_default_str();
  app.add_option("--tolerance", tolerance, "spectral gap tolerance")->capture_default_str();
  app.add_flag("--json", json_out, "machine-readable report");

  std::string file;
  auto* analyze_cmd = app.add_subcommand("analyze", "classes, spectral radii and all tail-invariant measures");
  analyze_cmd->add_option("file", file, "diagram document (- for stdin)")->required();

  std::string measure = "1", path_spec;
  bool sum_check = false;
  auto* cylinder_cmd = app.add_subcommand("cylinder", "measure of a cylinder set");
  cylinder_cmd->add_option("file", file)->required();
  cylinder_cmd->add_option("--measure", measure, "k (ergodic), tail:k (σ-finite) or @file")->capture_default_str();
  cylinder_cmd->add_option("--path", path_spec, "vertices level by level, e.g. \"a b:1 c\"")->required();
  cylinder_cmd->add_flag("--sum-check", sum_check, "sum over all cylinders of the path's level");

  std::string cls, window;
  std::size_t qmax = 64, jobs = 1;
  auto* eig_cmd = app.add_subcommand("eigenvalues", "rational eigenvalue search over diamonds");
  eig_cmd->add_option("file", file)->required();
  eig_cmd->add_option("--class", cls, "vertex whose class carries the measure");
  eig_cmd->add_option("--qmax", qmax, "largest denominator")->capture_default_str();
  eig_cmd->add_option("--window", window, "fixed levels a:b (default: the decisive window of each q)");
  eig_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();

  std::string action, letter;
  std::size_t steps = 1;
  auto* subst_cmd = app.add_subcommand("subst", "substitution tools");
  subst_cmd->add_option("action", action, "matrix | diagram | expand | freqs | measures")
      ->required()
      ->check(CLI::IsMember({"matrix", "diagram", "expand", "freqs", "measures"}));
  subst_cmd->add_option("file", file)->required();
  subst_cmd->add_option("--letter", letter, "start letter (default: first)");
  subst_cmd->add_option("-n", steps, "number of iterations")->capture_default_str();

  std::size_t depth = 5;
  std::string measure_file;
  auto* verify_cmd = app.add_subcommand("verify", "run the brute-force oracle suite");
  verify_cmd->add_option("file", file)->required();
  verify_cmd->add_option("--depth", depth, "deepest level checked")->capture_default_str();
  verify_cmd->add_option("--measure", measure_file, "measure document to verify");

  std::string graph = "reduced", orientation = "F";
  std::size_t levels = 3;
  auto* dot_cmd = app.add_subcommand("export-dot", "DOT export of the diagram or its reduced graph");
  dot_cmd->add_option("file", file)->required();
  dot_cmd->add_option("--graph", graph, "levels | reduced")->capture_default_str();
  dot_cmd->add_option("--orientation", orientation, "reduced graph of F or of A")->capture_default_str();
  dot_cmd->add_option("--levels", levels, "levels drawn by --graph levels")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }

  try {
    auto opts = detail::options(telescope, tolerance);
    if (*analyze_cmd) return detail::cmd_analyze(file, opts, json_out, out);
    if (*cylinder_cmd) return detail::cmd_cylinder(file, opts, measure, path_spec, sum_check, out);
    if (*eig_cmd) return detail::cmd_eigenvalues(file, opts, cls, qmax, window, jobs, out, err);
    if (*subst_cmd) return detail::cmd_subst(file, action, letter, steps, opts, json_out, out);
    if (*verify_cmd) return detail::cmd_verify(file, opts, depth, measure_file, out);
    if (*dot_cmd) return detail::cmd_export_dot(file, graph, orientation, levels, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const NotAperiodic& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace bratteli::cli
