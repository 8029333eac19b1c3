#include "entrolab/entropy_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <unordered_map>

#include "entrolab/errors.hpp"
#include "entrolab/numeric_map.hpp"

namespace entrolab {

namespace {

void orbit(const NumericMap& m, const NPoint& x, std::size_t n, NPoint* out) {
  out[0] = x;
  for (std::size_t i = 1; i < n; ++i) out[i] = m.evaluate(out[i - 1]);
}

double orbit_distance(const NumericGraph& g, const NPoint* a, const NPoint* b, std::size_t n, double stop) {
  double d = 0;
  for (std::size_t i = 0; i < n && d <= stop; ++i) d = std::max(d, g.distance(a[i], b[i]));
  return d;
}

// Selected orbits indexed by a trie over eps-cell sequences. A node keeps a
// single point until a second one arrives; nodes at depth n keep a list.
class SeparatedSet {
 public:
  SeparatedSet(const NumericGraph& g, const NumericGraph::Cells& cells, std::size_t n, double eps)
      : g_(g), cells_(cells), n_(n), eps_(eps) {
    nodes_.push_back(Node{});
  }

  std::size_t size() const { return next_.size(); }

  // Some selected orbit within eps of x in d_n.
  bool covers(const NPoint* x) const {
    cell_buf_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) cell_buf_[i] = cells_.cell(x[i]);
    stack_.clear();
    stack_.push_back({0, 0});
    while (!stack_.empty()) {
      const auto [id, depth] = stack_.back();
      stack_.pop_back();
      const Node& node = nodes_[id];
      if (!node.internal) {
        for (std::int32_t s = node.head; s >= 0; s = next_[s]) {
          if (orbit_distance(g_, x, &orbits_[s * n_], n_, eps_) <= eps_) return true;
        }
        continue;
      }
      for (std::uint32_t c : cells_.near(cell_buf_[depth])) {
        auto it = children_.find(key(id, c));
        if (it != children_.end()) stack_.push_back({it->second, depth + 1});
      }
    }
    return false;
  }

  void insert(const NPoint* x) {
    const auto s = static_cast<std::int32_t>(next_.size());
    orbits_.insert(orbits_.end(), x, x + n_);
    next_.push_back(-1);
    place(s, 0, 0);
  }

 private:
  struct Node {
    bool internal = false;
    std::int32_t head = -1;
  };
  static std::uint64_t key(std::uint32_t node, std::uint32_t cell) {
    return (static_cast<std::uint64_t>(node) << 32) | cell;
  }
  std::uint32_t cell_of(std::int32_t s, std::size_t depth) const { return cells_.cell(orbits_[s * n_ + depth]); }

  void place(std::int32_t s, std::uint32_t id, std::size_t depth) {
    while (true) {
      if (!nodes_[id].internal) {
        if (nodes_[id].head < 0 || depth == n_) {
          next_[s] = nodes_[id].head;
          nodes_[id].head = s;
          return;
        }
        const std::int32_t q = nodes_[id].head;
        nodes_[id].internal = true;
        nodes_[id].head = -1;
        const std::uint32_t child = child_of(id, cell_of(q, depth));
        next_[q] = -1;
        nodes_[child].head = q;
      }
      id = child_of(id, cell_of(s, depth));
      ++depth;
    }
  }

  std::uint32_t child_of(std::uint32_t id, std::uint32_t cell) {
    auto [it, fresh] = children_.try_emplace(key(id, cell), static_cast<std::uint32_t>(nodes_.size()));
    if (fresh) nodes_.push_back(Node{});
    return it->second;
  }

  const NumericGraph& g_;
  const NumericGraph::Cells& cells_;
  std::size_t n_;
  double eps_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
  std::vector<NPoint> orbits_;
  std::vector<std::int32_t> next_;
  mutable std::vector<std::uint32_t> cell_buf_;
  mutable std::vector<std::pair<std::uint32_t, std::size_t>> stack_;
};

std::vector<NPoint> uniform_grid(const NumericGraph& g, double spacing) {
  std::vector<NPoint> pts;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    const double len = g.edge_length(e);
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-9)));
    for (std::size_t j = 0; j <= count; ++j) pts.push_back(NPoint{e, len * static_cast<double>(j) / static_cast<double>(count)});
  }
  return pts;
}

void check_eps(const PLMarkovMap& f, double eps) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (eps >= to_double(f.graph().diameter())) throw DomainError("eps must be smaller than the diameter");
}

std::size_t greedy_count(const NumericMap& m, const std::vector<NPoint>& samples, std::size_t n, double eps,
                         bool spanning) {
  const auto cells = m.graph().cells(eps);
  SeparatedSet set(m.graph(), cells, n, eps);
  std::vector<NPoint> x(n), y(n), best(n);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    orbit(m, samples[i], n, x.data());
    if (set.covers(x.data())) continue;
    if (!spanning) {
      set.insert(x.data());
      continue;
    }
    // Centre on the furthest later sample of the same edge still within eps.
    best = x;
    for (std::size_t j = i + 1; j < samples.size() && samples[j].edge == samples[i].edge; ++j) {
      orbit(m, samples[j], n, y.data());
      if (orbit_distance(m.graph(), x.data(), y.data(), n, eps) > eps) break;
      best = y;
    }
    set.insert(best.data());
  }
  return set.size();
}

void fit(BowenSeries& s) {
  std::vector<double> xs, ys;
  for (const auto& p : s.points) {
    if (p.n >= kBowenBurnIn && p.count > 0) {
      xs.push_back(static_cast<double>(p.n));
      ys.push_back(std::log(static_cast<double>(p.count)));
    }
  }
  if (xs.size() < kBowenMinPoints) return;
  s.fitted = true;
  s.fit_from = static_cast<std::size_t>(xs.front());
  s.fit_to = static_cast<std::size_t>(xs.back());
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  s.flat = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys.front(); });
  s.slope = s.flat ? 0 : sxy / sxx;
  s.intercept = my - s.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (s.intercept + s.slope * xs[i]);
    rss += r * r;
  }
  s.residual = std::sqrt(rss / k);
}

BowenSeries bowen_series(const NumericMap& m, double eps, std::size_t n_max, double grid, std::size_t cap) {
  BowenSeries series;
  series.eps = eps;
  const NumericGraph& g = m.graph();
  const double tol = grid * eps;
  std::vector<NPoint> samples = uniform_grid(g, tol);
  const auto cells = g.cells(eps);
  for (std::size_t n = 1; n <= n_max; ++n) {
    SeparatedSet set(g, cells, n, eps);
    std::vector<NPoint> refined;
    refined.reserve(samples.size());
    std::vector<NPoint> prev(n), cur(n);
    bool saturated = false;

    auto accept = [&](const NPoint* orb) {
      refined.push_back(orb[0]);
      if (!set.covers(orb)) set.insert(orb);
    };
    // Bisect between two orbits of the same edge until d_n is resolved;
    // emits the points strictly after `left`, up to and including `right`.
    std::function<void(const std::vector<NPoint>&, const std::vector<NPoint>&, int)> bisect =
        [&](const std::vector<NPoint>& left, const std::vector<NPoint>& right, int depth) {
          if (saturated) return;
          if (orbit_distance(g, left.data(), right.data(), n, tol) > tol && depth < 60 &&
              right[0].offset - left[0].offset > 1e-13) {
            if (refined.size() >= cap) {
              saturated = true;
              return;
            }
            std::vector<NPoint> middle(n);
            orbit(m, NPoint{left[0].edge, (left[0].offset + right[0].offset) / 2}, n, middle.data());
            bisect(left, middle, depth + 1);
            bisect(middle, right, depth + 1);
            return;
          }
          accept(right.data());
        };

    for (std::size_t i = 0; i < samples.size() && !saturated; ++i) {
      orbit(m, samples[i], n, cur.data());
      if (i > 0 && samples[i - 1].edge == samples[i].edge) {
        bisect(prev, cur, 0);
      } else {
        accept(cur.data());
      }
      prev.swap(cur);
    }
    if (saturated) {
      series.saturated_at = n;
      break;
    }
    samples.swap(refined);
    series.points.push_back(BowenPoint{n, set.size(), samples.size()});
  }
  fit(series);
  return series;
}

}  // namespace

std::size_t separated_count(const PLMarkovMap& f, std::size_t n, double eps, double spacing) {
  check_eps(f, eps);
  if (n == 0) throw DomainError("n must be positive");
  if (!(spacing > 0)) throw DomainError("grid spacing must be positive");
  const NumericMap m(f);
  return greedy_count(m, uniform_grid(m.graph(), spacing), n, eps, false);
}

std::size_t spanning_count(const PLMarkovMap& f, std::size_t n, double eps, double spacing) {
  check_eps(f, eps);
  if (n == 0) throw DomainError("n must be positive");
  if (!(spacing > 0)) throw DomainError("grid spacing must be positive");
  const NumericMap m(f);
  const auto grid = uniform_grid(m.graph(), spacing);
  // A maximal separated set also spans, so keep the smaller of the two.
  return std::min(greedy_count(m, grid, n, eps, true), greedy_count(m, grid, n, eps, false));
}

BowenEstimate bowen_estimate(const PLMarkovMap& f, const std::vector<double>& eps_list, std::size_t n_max,
                             double grid, std::size_t max_samples) {
  if (eps_list.empty()) throw DomainError("eps list is empty");
  if (n_max == 0) throw DomainError("n_max must be positive");
  if (!(grid > 0) || grid > 1) throw DomainError("grid must lie in (0, 1]");
  for (double eps : eps_list) check_eps(f, eps);
  const NumericMap m(f);
  BowenEstimate est;
  est.n_max = n_max;
  est.grid = grid;
  est.max_samples = max_samples;
  bool any = false, all_flat = true;
  for (double eps : eps_list) {
    est.series.push_back(bowen_series(m, eps, n_max, grid, max_samples));
    const auto& s = est.series.back();
    if (!s.fitted) continue;
    if (!any || s.slope > est.estimate) est.estimate = s.slope;
    any = true;
    all_flat = all_flat && s.flat;
  }
  if (!any) {
    est.estimate = 0;
    est.diagnostic = "no eps had " + std::to_string(kBowenMinPoints) + " resolved points with n >= " +
                     std::to_string(kBowenBurnIn);
  } else if (all_flat) {
    est.estimate = 0;
    est.diagnostic = "flat: separated counts do not grow";
  }
  est.estimate = std::max(est.estimate, 0.0);
  return est;
}

double log_plus(const Rational& x) { return x > 1 ? std::log(to_double(x)) : 0.0; }

BoundDetail plipschitz_bound(const PLMarkovMap& f, const TransitionMatrix& m, const std::vector<std::size_t>& subset) {
  BoundDetail d;
  d.theta = theta(m, subset);
  d.lipschitz_subset = 0;
  for (std::size_t a : d.theta.subset) d.lipschitz_subset = std::max(d.lipschitz_subset, f.lipschitz_profile()[a]);
  d.lipschitz_all = f.global_lipschitz();
  const double th = to_double(d.theta.theta);
  d.value = log_plus(d.lipschitz_subset) + 2 * th * log_plus(d.lipschitz_all);
  d.single_theta = log_plus(d.lipschitz_subset) + th * log_plus(d.lipschitz_all);
  return d;
}

BoundDetail plipschitz_bound(const PLMarkovMap& f, const std::vector<std::size_t>& subset) {
  return plipschitz_bound(f, transition_matrix(f), subset);
}

double lipschitz_bound(const PLMarkovMap& f) { return log_plus(f.global_lipschitz()); }

std::vector<std::vector<std::size_t>> threshold_subsets(const PLMarkovMap& f) {
  std::vector<Rational> levels = f.lipschitz_profile();
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<std::vector<std::size_t>> out;
  for (const auto& t : levels) {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < f.piece_count(); ++a) {
      if (f.lipschitz_profile()[a] <= t) s.push_back(a);
    }
    out.push_back(std::move(s));
  }
  return out;
}

SeparatedVerdict separated_bound_check(const MetricGraph& g, const std::vector<double>& eps_list, int refine) {
  if (refine < 1) throw DomainError("refine must be positive");
  const NumericGraph ng(g);
  const double diameter = to_double(g.diameter());
  SeparatedVerdict verdict;
  for (double eps : eps_list) {
    if (!(eps > 0) || eps >= diameter) throw DomainError("eps must lie in (0, diameter)");
    const auto cells = ng.cells(eps);
    SeparatedSet set(ng, cells, 1, eps);
    for (const NPoint& p : uniform_grid(ng, eps / refine)) {
      if (!set.covers(&p)) set.insert(&p);
    }
    SeparatedCheck c;
    c.eps = eps;
    c.count = set.size();
    c.bound = 2 * ng.total_length() / eps;
    c.margin = c.bound - static_cast<double>(c.count);
    c.ok = c.margin >= 0;
    verdict.ok = verdict.ok && c.ok;
    verdict.checks.push_back(c);
  }
  return verdict;
}

namespace {

// psi(x) = alpha + beta x maps K = [lo, hi] (positions in the starting piece)
// onto the current interval.
struct Branch {
  Rational alpha{0}, beta{1}, lo, hi;
  std::vector<std::size_t> pieces;
};

// Follows run r of the current piece on the image arclength window [a, b].
void follow(Branch& br, const Rational& lip, const ImageRun& r, const Rational& a, const Rational& b) {
  const Rational x1 = (a / lip - br.alpha) / br.beta, x2 = (b / lip - br.alpha) / br.beta;
  br.lo = std::min(x1, x2);
  br.hi = std::max(x1, x2);
  const int sign = r.target_to > r.target_from ? 1 : -1;
  br.alpha = r.target_from + sign * (lip * br.alpha - r.image_from);
  br.beta = sign * lip * br.beta;
  br.pieces.push_back(r.piece);
}

Rational target_at(const ImageRun& r, const Rational& u) {
  return r.target_to > r.target_from ? Rational(r.target_from + (u - r.image_from))
                                     : Rational(r.target_from - (u - r.image_from));
}

}  // namespace

DensePeriodic dense_periodic_certificates(const PLMarkovMap& f, const Rational& eps, bool keep_all) {
  if (eps <= 0) throw DomainError("eps must be positive");
  DensePeriodic out;
  out.eps = eps;
  const std::size_t pieces = f.piece_count();
  const std::size_t cap = 64 * (pieces + 1);

  // Shortest full-run route from `from` to `to`, as (piece, run index) steps.
  auto route = [&](std::size_t from, std::size_t to, bool allow_empty) {
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    if (from == to && allow_empty) return std::optional(steps);
    std::vector<long> parent_piece(pieces, -1), parent_run(pieces, -1);
    std::vector<bool> seen(pieces, false);
    std::vector<std::size_t> queue{from};
    seen[from] = true;
    long last_piece = -1, last_run = -1;
    for (std::size_t h = 0; h < queue.size() && last_piece < 0; ++h) {
      const std::size_t u = queue[h];
      const auto& runs = f.runs(u);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        if (!runs[r].full) continue;
        const std::size_t v = runs[r].piece;
        if (v == to) {
          last_piece = static_cast<long>(u);
          last_run = static_cast<long>(r);
          break;
        }
        if (!seen[v]) {
          seen[v] = true;
          parent_piece[v] = static_cast<long>(u);
          parent_run[v] = static_cast<long>(r);
          queue.push_back(v);
        }
      }
    }
    if (last_piece < 0) return std::optional<decltype(steps)>();
    steps.emplace_back(last_piece, last_run);
    for (long v = last_piece; v != static_cast<long>(from); v = parent_piece[v]) {
      steps.emplace_back(parent_piece[v], parent_run[v]);
    }
    std::reverse(steps.begin(), steps.end());
    return std::optional(steps);
  };

  for (std::size_t a = 0; a < pieces; ++a) {
    const Rational& len = f.piece_length(a);
    BigInt count_z;
    {
      const Rational q = len / eps;
      mpz_cdiv_q(count_z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    }
    const long count = std::max(1L, count_z.get_si());
    for (long j = 0; j < count; ++j) {
      ++out.cells;
      Branch br;
      br.lo = len * j / count;
      br.hi = len * (j + 1) / count;
      br.alpha = 0;
      br.beta = 1;
      br.pieces.push_back(a);
      Rational from = br.lo, to = br.hi;  // current interval in the current piece
      std::size_t piece = a;
      // Expand along the longest branch until a whole piece is covered.
      std::size_t steps = 0;
      while (!(from == 0 && to == f.piece_length(piece))) {
        if (++steps > cap) break;
        const Rational& lip = f.lipschitz_profile()[piece];
        const Rational s = from * lip, t = to * lip;
        const ImageRun* best = nullptr;
        Rational ba, bb, blen = 0;
        for (const auto& r : f.runs(piece)) {
          const Rational lo = std::max(s, r.image_from), hi = std::min(t, r.image_to);
          if (hi - lo > blen) {
            best = &r;
            ba = lo;
            bb = hi;
            blen = hi - lo;
          }
        }
        follow(br, lip, *best, ba, bb);
        const Rational u = target_at(*best, ba), v = target_at(*best, bb);
        from = std::min(u, v);
        to = std::max(u, v);
        piece = best->piece;
      }
      if (steps > cap) {
        out.expands = false;
        out.ok = false;
        if (out.failure.empty()) {
          out.failure = "cell [" + to_string(br.lo) + ", " + to_string(br.hi) + "] of piece '" + f.piece(a).name +
                        "' never covers a full piece";
        }
        continue;
      }
      const auto back = route(piece, a, br.pieces.size() > 1);
      if (!back) {
        out.ok = false;
        if (out.failure.empty()) {
          out.failure = "no full-lap route from '" + f.piece(piece).name + "' back to '" + f.piece(a).name + "'";
        }
        continue;
      }
      for (const auto& [u, r] : *back) {
        const ImageRun& run = f.runs(u)[r];
        follow(br, f.lipschitz_profile()[u], run, run.image_from, run.image_to);
      }
      br.pieces.pop_back();  // the final piece is a again
      Rational x = br.beta == 1 ? Rational((br.lo + br.hi) / 2) : Rational(br.alpha / (1 - br.beta));
      x.canonicalize();
      const std::size_t period = br.pieces.size();
      const GraphPoint p = point_along(f.graph(), f.piece(a).path, x);
      if (x < br.lo || x > br.hi || f.iterate(p, period) != p) {
        out.ok = false;
        if (out.failure.empty()) {
          out.failure = "periodic point check failed in piece '" + f.piece(a).name + "' at position " + to_string(x);
        }
        continue;
      }
      out.max_period = std::max(out.max_period, period);
      if (keep_all) {
        out.certificates.push_back(
            PeriodicCertificate{a, len * j / count, len * (j + 1) / count, x, period, br.pieces});
      }
    }
  }
  return out;
}

EntropyReport devaney_report(const PLMarkovMap& f, const ReportParams& params) {
  EntropyReport r(transition_matrix(f));
  r.irreducible = is_irreducible(r.matrix);
  r.period = r.irreducible ? period(r.matrix) : 0;
  r.primitive = r.irreducible && r.period == 1;
  r.perron = perron_root(r.matrix);
  r.perron_entropy = r.perron.value > 1 ? std::log(r.perron.value) : 0.0;
  const PerronRoot p01 = perron_root_01(r.matrix);
  r.perron_entropy_01 = p01.value > 1 ? std::log(p01.value) : 0.0;
  r.lipschitz_bound = lipschitz_bound(f);
  if (params.bounds) {
    const auto subsets = params.subsets.empty() ? threshold_subsets(f) : params.subsets;
    for (const auto& s : subsets) r.bounds.push_back(plipschitz_bound(f, r.matrix, s));
    r.plipschitz_bound = r.bounds.front().value;
    for (const auto& b : r.bounds) r.plipschitz_bound = std::min(r.plipschitz_bound, b.value);
  }
  if (params.bowen) {
    r.has_bowen = true;
    r.bowen = bowen_estimate(f, params.eps_list, params.n_max, params.grid);
  }
  if (params.classify) {
    r.has_classification = true;
    Classification& c = r.classification;
    if (!r.matrix.covering()) {
      c.note = "matrix criteria inapplicable: some A -> B has f(A) not containing B";
    } else {
      r.periodic = dense_periodic_certificates(f, params.periodic_eps);
      if (!r.periodic.expands) {
        c.note = "matrix criteria inapplicable: " + r.periodic.failure;
      } else {
        c.applicable = true;
        c.transitive = r.irreducible;
        c.totally_transitive = r.primitive;
        c.exact = r.primitive;
        c.dense_periodic = r.periodic.ok;
        c.devaney = c.transitive && c.dense_periodic;
        c.exactly_devaney = c.exact && c.dense_periodic;
        if (!r.periodic.ok) c.note = r.periodic.failure;
      }
    }
  }
  return r;
}

ExampleBounds arr_example_bounds(long n) {
  const System s = arr_example(n);
  const BoundDetail d = plipschitz_bound(s.map, s.subsets.front());
  ExampleBounds b;
  b.theta = d.theta.theta;
  b.lambda = arr_lambda(n);
  b.big_l = d.lipschitz_all;
  b.proposition = d.value;
  b.single_theta = d.single_theta;
  const double big_l = to_double(b.big_l);
  b.display = std::log(to_double(b.lambda)) + 2.0 / static_cast<double>(n) * std::log(big_l);
  b.reference = std::log(2 * big_l * big_l) / static_cast<double>(n - 2);
  return b;
}

}  // namespace entrolab
