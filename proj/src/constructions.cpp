#include "entrolab/constructions.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

std::string real_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Builder {
 public:
  std::size_t vertex(const std::string& name) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i] == name) return i;
    }
    vertices_.push_back(name);
    return vertices_.size() - 1;
  }
  std::size_t edge(const std::string& id, const std::string& u, const std::string& v, const Rational& length) {
    const std::size_t a = vertex(u), b = vertex(v);
    edges_.push_back(Edge{id, a, b, length});
    return edges_.size() - 1;
  }
  Segment fwd(std::size_t e) const { return Segment{e, 0, edges_[e].length}; }
  Segment bwd(std::size_t e) const { return Segment{e, edges_[e].length, 0}; }
  // m back-and-forth traversals of edge e, the first one in the given direction.
  Path laps(std::size_t e, bool forward_first, long m) const {
    Path p;
    for (long i = 0; i < m; ++i) p.push_back((i % 2 == 0) == forward_first ? fwd(e) : bwd(e));
    return p;
  }
  MetricGraph graph() const { return MetricGraph(vertices_, edges_); }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
};

Path join(Path a, const Path& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> r;
  for (std::size_t i = from; i < to; ++i) r.push_back(i);
  return r;
}

// Generalized star with arms 0..arm_count-1 meeting at "a". Each arm is either
// an edge a -> t_i or a Y (stem a -> b_i, twigs b_i -> c_i, b_i -> d_i).
class Star {
 public:
  Star(long arm_count, bool tree) : tree_(tree) {
    for (long i = 0; i < arm_count; ++i) {
      const std::string s = std::to_string(i);
      if (tree_) {
        stem_.push_back(b_.edge("s" + s, "a", "b" + s, 1));
        c_.push_back(b_.edge("c" + s, "b" + s, "c" + s, 1));
        d_.push_back(b_.edge("d" + s, "b" + s, "d" + s, 1));
      } else {
        stem_.push_back(b_.edge("e" + s, "a", "t" + s, 1));
      }
    }
    images_.resize(pieces_per_arm() * static_cast<std::size_t>(arm_count));
  }

  std::size_t pieces_per_arm() const { return tree_ ? 3 : 1; }

  void isometric(long from, long to) {
    images_[slot(from, 0)] = {b_.fwd(stem_[to])};
    if (tree_) {
      images_[slot(from, 1)] = {b_.fwd(c_[to])};
      images_[slot(from, 2)] = {b_.fwd(d_[to])};
    }
  }

  // Expanding leg starting at the center; on arc arms an m-lap traversal.
  void expanding(long from, long to, long m) {
    if (!tree_) {
      images_[slot(from, 0)] = b_.laps(stem_[to], true, m);
      return;
    }
    images_[slot(from, 0)] = sweep(to);
    images_[slot(from, 1)] = {b_.bwd(stem_[to]), b_.fwd(stem_[to])};
    images_[slot(from, 2)] = {b_.bwd(stem_[to]), b_.fwd(stem_[to])};
  }

  // Arm `from` onto arms one and two through the center.
  void branching(long from, long one, long two) {
    if (!tree_) {
      images_[slot(from, 0)] = {b_.fwd(stem_[one]), b_.bwd(stem_[one]), b_.fwd(stem_[two])};
      return;
    }
    images_[slot(from, 0)] = join(join(sweep(one), {b_.bwd(stem_[one])}), sweep(two));
    images_[slot(from, 1)] = {b_.bwd(stem_[two]), b_.fwd(stem_[two])};
    images_[slot(from, 2)] = {b_.bwd(stem_[two]), b_.fwd(stem_[two])};
  }

  PLMarkovMap finish() const {
    MetricGraph g = b_.graph();
    Splitting split;
    for (std::size_t i = 0; i < stem_.size(); ++i) {
      const std::string s = std::to_string(i);
      if (tree_) {
        split.pieces.push_back(Piece{"X" + s + ".stem", {b_.fwd(stem_[i])}});
        split.pieces.push_back(Piece{"X" + s + ".c", {b_.fwd(c_[i])}});
        split.pieces.push_back(Piece{"X" + s + ".d", {b_.fwd(d_[i])}});
        split.boundary.push_back(g.segment_end(b_.fwd(stem_[i])));
      } else {
        split.pieces.push_back(Piece{"X" + s, {b_.fwd(stem_[i])}});
      }
    }
    split.boundary.push_back(GraphPoint::at_vertex(*g.find_vertex("a")));
    return PLMarkovMap(std::move(g), std::move(split), images_);
  }

  std::vector<std::size_t> arm_pieces(long from, long to) const {
    return range(pieces_per_arm() * static_cast<std::size_t>(from), pieces_per_arm() * static_cast<std::size_t>(to));
  }

 private:
  std::size_t slot(long arm, std::size_t part) const { return pieces_per_arm() * static_cast<std::size_t>(arm) + part; }
  // a -> b -> c -> b -> d -> b over a tree arm.
  Path sweep(long arm) const {
    return {b_.fwd(stem_[arm]), b_.fwd(c_[arm]), b_.bwd(c_[arm]), b_.fwd(d_[arm]), b_.bwd(d_[arm])};
  }

  bool tree_;
  Builder b_;
  std::vector<std::size_t> stem_, c_, d_;
  std::vector<Path> images_;
};

ConstructionSpec spec_of(const std::string& kind) {
  ConstructionSpec spec;
  spec.kind = kind;
  return spec;
}

bool tree_arms(const std::string& arms) {
  if (arms == "arc") return false;
  if (arms == "tree") return true;
  throw ParameterError("arms must be 'arc' or 'tree', got '" + arms + "'");
}

}  // namespace

const std::vector<std::string>& construction_kinds() {
  static const std::vector<std::string> kinds{"tent",           "star_devaney", "star_exact",    "star_minimal",
                                              "free_arc_cycle", "arr_example",  "two_piece_swap"};
  return kinds;
}

System tent_family(long k) {
  require(k >= 2, "tent needs k >= 2");
  Builder b;
  const std::size_t e = b.edge("I", "0", "1", 1);
  MetricGraph g = b.graph();
  Splitting split;
  std::vector<Path> images;
  for (long i = 1; i <= k; ++i) {
    const Rational lo = ratio(i - 1, k), hi = ratio(i, k);
    split.pieces.push_back(Piece{"L" + std::to_string(i), {Segment{e, lo, hi}}});
    images.push_back({i % 2 == 1 ? b.fwd(e) : b.bwd(e)});
  }
  for (long i = 0; i <= k; ++i) split.boundary.push_back(g.point(e, ratio(i, k)));
  ConstructionSpec spec = spec_of("tent");
  spec.k = k;
  System s{spec, PLMarkovMap(std::move(g), std::move(split), std::move(images)), {}, {}, {}};
  s.subsets = {range(0, static_cast<std::size_t>(k))};
  s.constants = {{"L", std::to_string(k)}, {"entropy", "log " + std::to_string(k)},
                 {"entropy_value", real_text(std::log(static_cast<double>(k)))}};
  s.summary = "tent map with " + std::to_string(k) + " laps on the unit interval, fixing 0";
  return s;
}

System star_devaney(long k, long m, const std::string& arms) {
  require(k >= 2, "star_devaney needs k >= 2");
  require(m >= 2, "star_devaney needs m >= 2");
  const bool tree = tree_arms(arms);
  Star star(k + 1, tree);
  star.expanding(0, 1, m);
  for (long i = 1; i < k; ++i) star.isometric(i, i + 1);
  star.expanding(k, 0, m);
  ConstructionSpec spec = spec_of("star_devaney");
  spec.k = k;
  spec.m = m;
  spec.arms = arms;
  System s{spec, star.finish(), {star.arm_pieces(1, k)}, {}, {}};
  s.subsets.push_back(star.arm_pieces(0, k + 1));
  if (!tree) {
    s.constants = {{"L", std::to_string(m)},
                   {"entropy", "2 log " + std::to_string(m) + " / " + std::to_string(k + 1)},
                   {"entropy_value", real_text(2 * std::log(static_cast<double>(m)) / static_cast<double>(k + 1))}};
  }
  s.summary = std::to_string(k + 1) + "-arm star (" + arms + " arms): arms 1.." + std::to_string(k - 1) +
              " shift isometrically, X0 -> X1 and X" + std::to_string(k) + " -> X0 expand";
  return s;
}

System star_exact(long k, long m, const std::string& arms) {
  require(k >= 2, "star_exact needs k >= 2");
  require(m >= 2, "star_exact needs m >= 2");
  const bool tree = tree_arms(arms);
  Star star(k + 1, tree);
  star.branching(0, 1, 2);
  for (long i = 1; i < k; ++i) star.isometric(i, i + 1);
  star.expanding(k, 0, m);
  ConstructionSpec spec = spec_of("star_exact");
  spec.k = k;
  spec.m = m;
  spec.arms = arms;
  System s{spec, star.finish(), {star.arm_pieces(1, k)}, {}, {}};
  s.subsets.push_back(star.arm_pieces(0, k + 1));
  if (!tree) {
    s.constants = {{"L", std::to_string(std::max(3L, m))},
                   {"theta", "2/" + std::to_string(k)},
                   {"perron_equation", "rho^" + std::to_string(k + 1) + " = " + std::to_string(2 * m) + " + " +
                                           std::to_string(m) + " rho"}};
  }
  s.summary = std::to_string(k + 1) + "-arm star (" + arms + " arms): X0 branches onto X1 and X2, arms 1.." +
              std::to_string(k - 1) + " shift isometrically, X" + std::to_string(k) + " -> X0 expands";
  return s;
}

System star_minimal(long n) {
  require(n >= 2, "star_minimal needs n >= 2");
  Star star(n, false);
  for (long i = 0; i + 1 < n; ++i) star.isometric(i, i + 1);
  star.expanding(n - 1, 0, 2);
  ConstructionSpec spec = spec_of("star_minimal");
  spec.n = n;
  System s{spec, star.finish(), {star.arm_pieces(0, n - 1)}, {}, {}};
  s.subsets.push_back(star.arm_pieces(0, n));
  s.constants = {{"L", "2"},
                 {"entropy", "log 2 / " + std::to_string(n)},
                 {"entropy_value", real_text(std::log(2.0) / static_cast<double>(n))}};
  s.summary = std::to_string(n) + "-arm star: arms cycle isometrically, X" + std::to_string(n - 1) +
              " returns to X0 with two laps";
  return s;
}

System free_arc_cycle(long k, bool exact, long m) {
  require(k >= 2, "free_arc_cycle needs k >= 2");
  require(m >= 3 && m % 2 == 1, "free_arc_cycle needs an odd m >= 3 (endpoint conditions force odd lap counts)");
  Builder b;
  auto a = [](long i) { return "a" + std::to_string(i); };
  std::vector<std::size_t> x;
  x.push_back(b.edge("x0", a(k), a(0), 1));
  for (long i = 1; i <= k; ++i) x.push_back(b.edge("x" + std::to_string(i), a(i - 1), a(i), 1));
  std::vector<Path> images(static_cast<std::size_t>(k + 1));
  if (exact) {
    images[0] = {b.fwd(x[1]), b.fwd(x[2]), b.bwd(x[2])};
  } else {
    images[0] = b.laps(x[1], true, m);
  }
  for (long i = 1; i < k; ++i) images[i] = {b.fwd(x[i + 1])};
  images[k] = b.laps(x[0], true, m);
  MetricGraph g = b.graph();
  Splitting split;
  for (long i = 0; i <= k; ++i) {
    split.pieces.push_back(Piece{"X" + std::to_string(i), {b.fwd(x[i])}});
    split.boundary.push_back(GraphPoint::at_vertex(*g.find_vertex(a(i))));
  }
  ConstructionSpec spec = spec_of("free_arc_cycle");
  spec.k = k;
  spec.m = m;
  spec.exact = exact;
  System s{spec, PLMarkovMap(std::move(g), std::move(split), std::move(images)), {range(1, k)}, {}, {}};
  s.subsets.push_back(range(0, k + 1));
  s.constants = {{"L", std::to_string(m)}};
  s.summary = "loop of " + std::to_string(k + 1) + " free arcs: X1.." + std::to_string(k - 1) +
              " shift isometrically, X" + std::to_string(k) + " -> X0 expands, X0 -> " +
              (exact ? "X1 u X2 (branching)" : "X1");
  return s;
}

Rational arr_lambda(long n) {
  require(n >= 3, "arr_example needs n >= 3");
  const long e = n - 2;
  const BigInt denom = BigInt(1) << 16;
  auto big_enough = [&](const BigInt& p) {
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), denom.get_mpz_t(), static_cast<unsigned long>(e));
    return num >= 2 * den;
  };
  BigInt p(static_cast<long>(std::ceil(65536.0 * std::pow(2.0, 1.0 / static_cast<double>(e)))));
  while (!big_enough(p)) ++p;
  while (big_enough(p - 1)) --p;
  Rational lambda(p, denom);
  lambda.canonicalize();
  return lambda;
}

System arr_example(long n) {
  require(n >= 3, "arr_example needs n >= 3");
  const Rational lambda = arr_lambda(n);
  const std::string N = std::to_string(n);
  auto mark = [&](long i) { return i == 0 ? std::string("0") : i == n ? std::string("1") : std::to_string(i) + "/" + N; };
  Builder b;
  std::vector<std::size_t> chain;  // X_0, X_1^-, X_1^+, X_2 .. X_{n-1}
  chain.push_back(b.edge("x0", mark(0), mark(1), 1));
  chain.push_back(b.edge("x1-", mark(1), "3/" + std::to_string(2 * n), Rational(1, 2)));
  chain.push_back(b.edge("x1+", "3/" + std::to_string(2 * n), mark(2), Rational(1, 2)));
  Rational c = (lambda - 1) / 2;
  for (long i = 2; i < n; ++i) {
    chain.push_back(b.edge("x" + std::to_string(i), mark(i), mark(i + 1), c));
    c *= lambda;
  }
  const std::size_t gedge = b.edge("g", mark(n), mark(0), 1);

  std::vector<Path> images;
  images.push_back({b.fwd(chain[1]), b.fwd(chain[2])});  // X_0 onto X_1
  images.push_back({b.bwd(chain[2])});                   // X_1^- onto X_1^+, reversed
  images.push_back({b.fwd(chain[2]), b.fwd(chain[3])});  // X_1^+ onto X_1^+ u X_2
  for (std::size_t i = 3; i + 1 < chain.size(); ++i) images.push_back({b.fwd(chain[i + 1])});
  images.push_back({b.fwd(gedge)});      // X_{n-1} onto G
  images.push_back({b.fwd(chain[0])});   // G onto X_0

  MetricGraph g = b.graph();
  const Rational big_l = images[chain.size() - 1].front().length() / g.edge(chain.back()).length;
  Splitting split;
  std::vector<std::string> names{"X0", "X1-", "X1+"};
  for (long i = 2; i < n; ++i) names.push_back("X" + std::to_string(i));
  names.push_back("G");
  for (std::size_t i = 0; i < chain.size(); ++i) split.pieces.push_back(Piece{names[i], {b.fwd(chain[i])}});
  split.pieces.push_back(Piece{"G", {b.fwd(gedge)}});
  for (std::size_t v = 0; v < g.vertex_count(); ++v) split.boundary.push_back(GraphPoint::at_vertex(v));

  ConstructionSpec spec = spec_of("arr_example");
  spec.n = n;
  const std::size_t count = chain.size() + 1;
  System s{spec, PLMarkovMap(std::move(g), std::move(split), std::move(images)), {range(0, count - 2)}, {}, {}};
  s.subsets.push_back(range(0, count));
  s.constants = {{"lambda", to_string(lambda)},
                 {"lambda_value", real_text(to_double(lambda))},
                 {"lambda_real", real_text(std::pow(2.0, 1.0 / static_cast<double>(n - 2)))},
                 {"L", to_string(big_l)},
                 {"L_value", real_text(to_double(big_l))}};
  s.summary = "arc I = [0,1] closed into a loop by G; chain X0, X1-, X1+, X2.." + std::to_string(n - 1) +
              " expands by lambda, X" + std::to_string(n - 1) + " -> G -> X0 closes the cycle";
  return s;
}

System two_piece_swap(const std::string& shape, std::optional<long> m_opt) {
  Builder b;
  std::size_t e0, e1;
  bool circle;
  if (shape == "circle") {
    circle = true;
    e0 = b.edge("e0", "a", "b", 1);
    e1 = b.edge("e1", "a", "b", 1);
  } else if (shape == "dendrite-pair") {
    circle = false;
    e0 = b.edge("e0", "a", "b0", 1);
    e1 = b.edge("e1", "a", "b1", 1);
  } else {
    throw ParameterError("shape must be 'circle' or 'dendrite-pair', got '" + shape + "'");
  }
  const long m = m_opt.value_or(circle ? 3 : 2);
  require(m >= 2, "two_piece_swap needs m >= 2");
  require(!circle || m % 2 == 1, "two_piece_swap on the circle needs odd m (both junctions are shared)");
  std::vector<Path> images{{b.fwd(e1)}, b.laps(e0, true, m)};
  MetricGraph g = b.graph();
  Splitting split;
  split.pieces = {Piece{"X0", {b.fwd(e0)}}, Piece{"X1", {b.fwd(e1)}}};
  for (std::size_t v = 0; v < g.vertex_count(); ++v) split.boundary.push_back(GraphPoint::at_vertex(v));
  ConstructionSpec spec = spec_of("two_piece_swap");
  spec.m = m;
  spec.shape = shape;
  System s{spec, PLMarkovMap(std::move(g), std::move(split), std::move(images)), {{0}}, {}, {}};
  s.subsets.push_back({0, 1});
  s.constants = {{"L", std::to_string(m)},
                 {"entropy", "log " + std::to_string(m) + " / 2"},
                 {"entropy_value", real_text(std::log(static_cast<double>(m)) / 2)}};
  s.summary = std::string(circle ? "circle" : "two arcs joined at a") +
              ": X0 -> X1 isometric, X1 -> X0 with " + std::to_string(m) + " laps";
  return s;
}

System build_system(const ConstructionSpec& spec) {
  const std::string& kind = spec.kind;
  if (kind == "tent") return tent_family(spec.k);
  if (kind == "star_devaney") return star_devaney(spec.k, spec.m.value_or(2), spec.arms);
  if (kind == "star_exact") return star_exact(spec.k, spec.m.value_or(2), spec.arms);
  if (kind == "star_minimal") return star_minimal(spec.n);
  if (kind == "free_arc_cycle") return free_arc_cycle(spec.k, spec.exact, spec.m.value_or(3));
  if (kind == "arr_example") return arr_example(spec.n);
  if (kind == "two_piece_swap") return two_piece_swap(spec.shape, spec.m);
  throw ParameterError("unknown construction kind '" + kind + "'");
}

std::string sweep_parameter(const std::string& kind) {
  if (kind == "star_minimal" || kind == "arr_example") return "n";
  if (kind == "two_piece_swap") return "m";
  return "k";
}

std::string describe(const System& s) {
  const PLMarkovMap& f = s.map;
  const MetricGraph& g = f.graph();
  std::ostringstream out;
  out << s.summary << "\n";
  out << "pieces:\n";
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    out << "  " << f.piece(i).name << ": length " << to_string(f.piece_length(i)) << ", L = "
        << to_string(f.lipschitz_profile()[i]) << ", image length " << to_string(f.image_length(i)) << "\n";
  }
  out << "P:";
  for (const auto& p : f.boundary()) out << " " << g.describe(p);
  out << "\n";
  for (const auto& [name, value] : s.constants) out << name << " = " << value << "\n";
  return out.str();
}

}  // namespace entrolab
