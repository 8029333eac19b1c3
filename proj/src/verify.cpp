#include "entrolab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrolab/entropy_lab.hpp"
#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

template <class... Args>
std::string text(const Args&... args) {
  std::ostringstream out;
  (out << ... << args);
  return out.str();
}

std::string matrix_text(const TransitionMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += '/';
    for (std::size_t j = 0; j < m.size(); ++j) s += m(i, j) ? '1' : '0';
  }
  return s;
}

std::string subset_text(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Accumulates failures of one property; keeps the first few for the log.
class Tally {
 public:
  explicit Tally(std::string name) : name_(std::move(name)) {}
  void check(bool ok, const std::string& what) {
    ++cases_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) examples_ += (examples_.empty() ? "" : "; ") + what;
  }
  PropertyResult result() const {
    if (failures_ == 0) return {name_, true, text(cases_, " cases")};
    return {name_, false, text(failures_, "/", cases_, " failed: ", examples_)};
  }

 private:
  std::string name_;
  std::size_t cases_ = 0, failures_ = 0;
  std::string examples_;
};

// Independent theta checks on one (matrix, subset) pair.
void check_theta(Tally& t, const TransitionMatrix& m, const std::vector<std::size_t>& subset, const std::string& label) {
  const FrequencySpec spec = theta(m, subset);
  const std::size_t n = m.size();
  const Rational walks = theta_closed_walk_oracle(m, subset, n);
  const Rational limit = theta_dp_limit(m, subset);
  bool ok = spec.theta == walks && spec.theta == limit;
  for (std::size_t len = 1; ok && len <= 8 * n; ++len) {
    const Rational k = theta_dp_oracle(m, subset, len);
    ok = abs_value(k - spec.theta) <= ratio(static_cast<long>(n), static_cast<long>(len));
  }
  // The witness is a cycle of the graph attaining theta.
  const auto& w = spec.witness;
  ok = ok && !w.empty();
  long outside = 0;
  for (std::size_t i = 0; ok && i < w.size(); ++i) {
    ok = m(w[i], w[(i + 1) % w.size()]) != 0;
    if (!std::binary_search(spec.subset.begin(), spec.subset.end(), w[i])) ++outside;
  }
  ok = ok && ratio(outside, static_cast<long>(w.size())) == spec.theta;
  t.check(ok, text(label, " theta=", to_string(spec.theta), " walks=", to_string(walks), " dp=", to_string(limit)));
}

std::vector<std::vector<std::size_t>> bound_subsets(const System& s) {
  auto out = s.subsets;
  for (auto& t : threshold_subsets(s.map)) out.push_back(std::move(t));
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < s.map.piece_count(); ++i) {
    out.push_back({i});
    all.push_back(i);
  }
  out.push_back(all);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string label(const System& s) {
  std::string out = s.spec.kind;
  if (s.spec.kind == "star_minimal" || s.spec.kind == "arr_example") {
    out += "(n=" + std::to_string(s.spec.n) + ")";
  } else if (s.spec.kind != "two_piece_swap") {
    out += "(k=" + std::to_string(s.spec.k) + ")";
  }
  if (s.spec.kind == "two_piece_swap") out += "(" + s.spec.shape + ")";
  if (s.spec.arms == "tree") out += "[tree]";
  if (s.spec.exact) out += "[exact]";
  return out;
}

std::vector<PropertyResult> theta_suite(std::uint64_t seed) {
  Tally exhaustive("theta: exhaustive digraphs on <= 3 vertices, every nonempty subset");
  for (std::size_t n = 1; n <= 3; ++n) {
    for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
      std::vector<std::vector<int>> rows(n, std::vector<int>(n));
      bool nonzero = true;
      for (std::size_t i = 0; i < n; ++i) {
        int any = 0;
        for (std::size_t j = 0; j < n; ++j) any |= rows[i][j] = (bits >> (i * n + j)) & 1;
        nonzero = nonzero && any;
      }
      if (!nonzero) continue;
      const TransitionMatrix m(rows);
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1) subset.push_back(i);
        }
        check_theta(exhaustive, m, subset, text(matrix_text(m), " B=", subset_text(subset)));
      }
    }
  }
  Tally random("theta: 500 random digraphs on <= 8 vertices");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 500; ++i) {
    const TransitionMatrix m = random_digraph(rng, 8);
    std::vector<std::size_t> subset;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (rng() & 1) subset.push_back(v);
    }
    if (subset.empty()) subset.push_back(rng() % m.size());
    check_theta(random, m, subset, text(matrix_text(m), " B=", subset_text(subset)));
  }
  Tally built("theta: constructions, designed and threshold subsets");
  for (const System& s : standard_catalog()) {
    const TransitionMatrix m = transition_matrix(s.map);
    for (const auto& subset : bound_subsets(s)) check_theta(built, m, subset, label(s) + " B=" + subset_text(subset));
  }
  Tally stars("theta: star_exact(k) designed subset gives 2/k <= 2/(k-1)");
  for (long k = 2; k <= 12; ++k) {
    const System s = star_exact(k);
    const Rational th = theta(transition_matrix(s.map), s.subsets.front()).theta;
    stars.check(th == ratio(2, k) && th <= ratio(2, k - 1), text("k=", k, " theta=", to_string(th)));
  }
  return {exhaustive.result(), random.result(), built.result(), stars.result()};
}

std::vector<PropertyResult> bounds_suite() {
  Tally perron("bounds: perron_entropy <= plipschitz_bound, every tested subset");
  Tally lip("bounds: perron_entropy <= lipschitz_bound");
  Tally mono("bounds: plipschitz_bound <= lipschitz_bound * (1 + 2 theta)");
  for (const System& s : standard_catalog()) {
    const TransitionMatrix m = transition_matrix(s.map);
    const PerronRoot root = perron_root(m);
    const double h = root.value > 1 ? std::log(root.value) : 0.0;
    const double lb = lipschitz_bound(s.map);
    lip.check(h <= lb + 1e-9, text(label(s), " h=", h, " lip=", lb));
    for (const auto& subset : bound_subsets(s)) {
      const BoundDetail b = plipschitz_bound(s.map, m, subset);
      perron.check(h <= b.value + 1e-9, text(label(s), " B=", subset_text(subset), " h=", h, " bound=", b.value));
      mono.check(b.value <= lb * (1 + 2 * to_double(b.theta.theta)) + 1e-12, text(label(s), " B=", subset_text(subset)));
    }
  }
  return {perron.result(), lip.result(), mono.result()};
}

std::vector<PropertyResult> metric_suite(std::uint64_t seed) {
  Tally triangle("metric: triangle inequality, symmetry, identity on random graphs");
  Tally geodesic("metric: geodesic is a path of length d(p, q) with an exact midpoint");
  std::mt19937_64 rng(seed);
  for (int gi = 0; gi < 100; ++gi) {
    const MetricGraph g = random_graph(rng, 10);
    for (int i = 0; i < 20; ++i) {
      const GraphPoint p = random_point(rng, g, 12), q = random_point(rng, g, 12), r = random_point(rng, g, 12);
      const Rational pq = g.distance(p, q), qr = g.distance(q, r), pr = g.distance(p, r);
      triangle.check(pr <= pq + qr && pq == g.distance(q, p) && g.distance(p, p) == 0 && (pq == 0) == (p == q),
                     text("graph ", gi, " ", g.describe(p), " ", g.describe(q), " ", g.describe(r)));
      if (p == q) continue;
      const Geodesic geo = g.geodesic(p, q);
      bool ok = geo.length == pq && path_length(geo.segments) == pq;
      ok = ok && g.segment_start(geo.segments.front()) == p && g.segment_end(geo.segments.back()) == q;
      try {
        check_path(g, geo.segments, "geodesic");
      } catch (const InvariantError&) {
        ok = false;
      }
      const GraphPoint mid = point_along(g, geo.segments, pq / 2);
      ok = ok && g.distance(p, mid) == pq / 2 && g.distance(mid, q) == pq / 2;
      geodesic.check(ok, text("graph ", gi, " ", g.describe(p), " -> ", g.describe(q)));
    }
  }
  return {triangle.result(), geodesic.result()};
}

std::vector<PropertyResult> itinerary_suite(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(seed);
  for (const System& s : standard_catalog()) {
    Tally t("itinerary: 1000 random points, n=50, " + label(s));
    for (int i = 0; i < 1000; ++i) {
      const PropertyResult r = check_itinerary(s.map, random_point(rng, s.map.graph()), 50);
      t.check(r.ok, r.detail);
    }
    out.push_back(t.result());
  }
  return out;
}

std::vector<PropertyResult> classification_suite() {
  Tally logic("classification: exactly_devaney => devaney => transitive, exact => transitive");
  Tally lemma("classification: irreducible and not primitive => not totally transitive");
  Tally expected("classification: designed outcome of each construction");
  ReportParams params;
  params.bounds = params.bowen = false;
  for (const System& s : standard_catalog()) {
    const EntropyReport r = devaney_report(s.map, params);
    const Classification& c = r.classification;
    logic.check((!c.exactly_devaney || c.devaney) && (!c.devaney || c.transitive) && (!c.exact || c.transitive),
                label(s));
    lemma.check(!(r.irreducible && !r.primitive) || !c.totally_transitive, label(s));
    const std::string& k = s.spec.kind;
    const bool want_exact = k == "tent" || k == "star_exact" || k == "arr_example" || (k == "free_arc_cycle" && s.spec.exact);
    bool ok = c.applicable && c.devaney && c.exact == want_exact && c.exactly_devaney == want_exact;
    if (!want_exact) ok = ok && !c.totally_transitive;
    if (k == "two_piece_swap") ok = ok && r.period == 2;
    if (k == "star_devaney") ok = ok && r.period == static_cast<std::size_t>(s.spec.k + 1);
    expected.check(ok, text(label(s), " exact=", c.exact, " devaney=", c.devaney, " period=", r.period, " ", c.note));
  }
  return {logic.result(), lemma.result(), expected.result()};
}

std::vector<PropertyResult> separated_suite(std::uint64_t seed) {
  Tally t("separated: greedy eps-separated counts <= 2 * total_length / eps on 100 random graphs");
  std::mt19937_64 rng(seed);
  for (int gi = 0; gi < 100; ++gi) {
    const MetricGraph g = random_graph(rng, 10);
    const double diam = to_double(g.diameter());
    std::vector<double> eps;
    for (double f : {0.75, 0.5, 0.25, 0.1, 0.05}) eps.push_back(f * diam);
    const SeparatedVerdict v = separated_bound_check(g, eps);
    std::string worst;
    for (const auto& c : v.checks) {
      if (!c.ok) worst = text("eps=", c.eps, " count=", c.count, " bound=", c.bound);
    }
    t.check(v.ok, text("graph ", gi, " ", worst));
  }
  return {t.result()};
}

bool on_path(const MetricGraph& g, const Path& path, const GraphPoint& p) {
  for (const Segment& s : path) {
    if (p.is_vertex()) {
      if (g.segment_start(s) == p || g.segment_end(s) == p) return true;
    } else if (p.edge() == s.edge && std::min(s.from, s.to) <= p.offset() && p.offset() <= std::max(s.from, s.to)) {
      return true;
    }
  }
  return false;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"theta-oracle", "bounds", "metric", "itinerary", "classification",
                                              "separated"};
  return names;
}

std::vector<PropertyResult> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "all") {
    std::vector<PropertyResult> out;
    for (const auto& s : verify_suites()) {
      auto part = run_suite(s, seed);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (name == "theta-oracle") return theta_suite(seed);
  if (name == "bounds") return bounds_suite();
  if (name == "metric") return metric_suite(seed);
  if (name == "itinerary") return itinerary_suite(seed);
  if (name == "classification") return classification_suite();
  if (name == "separated") return separated_suite(seed);
  throw ParameterError("unknown suite '" + name + "'");
}

std::vector<System> standard_catalog() {
  std::vector<System> out;
  out.push_back(tent_family(2));
  out.push_back(tent_family(3));
  out.push_back(star_devaney(3));
  out.push_back(star_devaney(3, 2, "tree"));
  out.push_back(star_exact(3));
  out.push_back(star_exact(5, 3));
  out.push_back(star_exact(3, 2, "tree"));
  out.push_back(star_minimal(4));
  out.push_back(free_arc_cycle(3, false));
  out.push_back(free_arc_cycle(3, true));
  out.push_back(arr_example(5));
  out.push_back(two_piece_swap("circle"));
  out.push_back(two_piece_swap("dendrite-pair", 2));
  return out;
}

TransitionMatrix random_digraph(std::mt19937_64& rng, std::size_t max_vertices) {
  const std::size_t n = 1 + rng() % max_vertices;
  // Vary the density so sparse cycles and dense graphs both appear.
  std::uniform_real_distribution<double> unit(0, 1);
  const double density = 0.1 + 0.6 * unit(rng);
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (auto& row : rows) {
    for (auto& x : row) x = unit(rng) < density;
    if (std::count(row.begin(), row.end(), 1) == 0) row[rng() % n] = 1;
  }
  return TransitionMatrix(rows);
}

MetricGraph random_graph(std::mt19937_64& rng, std::size_t max_edges) {
  const std::size_t edges = 1 + rng() % max_edges;
  const std::size_t vertices = 1 + rng() % (edges + 1);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < vertices; ++v) names.push_back("v" + std::to_string(v));
  auto length = [&] {
    const long q = 1 + static_cast<long>(rng() % 8);
    return ratio(1 + static_cast<long>(rng() % (3 * q)), q);
  };
  std::vector<Edge> list;
  // A spanning tree first keeps the graph connected.
  for (std::size_t v = 1; v < vertices; ++v) {
    list.push_back(Edge{"e" + std::to_string(list.size()), rng() % v, v, length()});
  }
  while (list.size() < edges) {
    list.push_back(Edge{"e" + std::to_string(list.size()), rng() % vertices, rng() % vertices, length()});
  }
  if (list.empty()) list.push_back(Edge{"e0", 0, 0, length()});
  return MetricGraph(names, list);
}

GraphPoint random_point(std::mt19937_64& rng, const MetricGraph& g, long denominator) {
  const std::size_t e = rng() % g.edge_count();
  const long j = static_cast<long>(rng() % static_cast<std::uint64_t>(denominator + 1));
  return g.point(e, g.edge(e).length * ratio(j, denominator));
}

Rational theta_dp_limit(const TransitionMatrix& m, const std::vector<std::size_t>& subset) {
  const long n = static_cast<long>(m.size());
  const Rational x = theta_dp_oracle(m, subset, static_cast<std::size_t>(4 * n * n * n));
  Rational best = -1;
  for (long q = 1; q <= n; ++q) {
    const Rational y = x * q + Rational(1, 2);
    mpz_class p;
    mpz_fdiv_q(p.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    Rational cand(p, q);
    cand.canonicalize();
    if (best < 0 || abs_value(cand - x) < abs_value(best - x)) best = cand;
  }
  return best;
}

PropertyResult check_itinerary(const PLMarkovMap& f, const GraphPoint& x, std::size_t n) {
  const MetricGraph& g = f.graph();
  const Itinerary it = f.itinerary(x, n);
  const std::string where = "x=" + g.describe(x);
  if (it.pieces.size() != n) return {"itinerary", false, text(where, ": length ", it.pieces.size())};
  GraphPoint y = x;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = it.pieces[i];
    if (!on_path(g, f.piece(a).path, y)) {
      return {"itinerary", false, text(where, ": f^", i, "(x)=", g.describe(y), " not in ", f.piece(a).name)};
    }
    if (i + 1 < n && !f.transition(a, it.pieces[i + 1])) {
      return {"itinerary", false, text(where, ": ", f.piece(a).name, " -> ", f.piece(it.pieces[i + 1]).name,
                                       " is not a transition")};
    }
    y = f.evaluate(y);
  }
  return {"itinerary", true, where};
}

}  // namespace entrolab
