#include "entrolab/transition_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

std::vector<std::vector<long>> as_laps(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<long>> laps(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) laps[i].assign(rows[i].begin(), rows[i].end());
  return laps;
}

std::vector<bool> membership(std::size_t n, const std::vector<std::size_t>& subset) {
  std::vector<bool> in(n, false);
  for (std::size_t s : subset) {
    if (s >= n) throw DomainError("piece index " + std::to_string(s) + " out of range");
    in[s] = true;
  }
  return in;
}

constexpr long kNone = std::numeric_limits<long>::min() / 4;

}  // namespace

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> rows, bool covering)
    : TransitionMatrix(rows, as_laps(rows), covering) {}

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> rows, std::vector<std::vector<long>> laps,
                                   bool covering)
    : rows_(std::move(rows)), laps_(std::move(laps)), covering_(covering) {
  const std::size_t n = rows_.size();
  if (n == 0) throw InvariantError("transition matrix is empty");
  if (laps_.size() != n) throw InvariantError("lap matrix shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != n || laps_[i].size() != n) throw InvariantError("transition matrix is not square");
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (rows_[i][j] != 0 && rows_[i][j] != 1) throw InvariantError("transition matrix entries must be 0 or 1");
      if ((rows_[i][j] == 1) != (laps_[i][j] > 0)) throw InvariantError("lap matrix disagrees with M_f");
      any = any || rows_[i][j] == 1;
    }
    if (!any) throw InvariantError("row " + std::to_string(i) + " of the transition matrix is zero");
  }
}

std::vector<std::size_t> TransitionMatrix::successors(std::size_t a) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < size(); ++b) {
    if (rows_[a][b]) out.push_back(b);
  }
  return out;
}

TransitionMatrix transition_matrix(const PLMarkovMap& f) {
  const std::size_t n = f.piece_count();
  std::vector<std::vector<int>> rows(n, std::vector<int>(n, 0));
  std::vector<std::vector<long>> laps(n, std::vector<long>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (const ImageRun& run : f.runs(a)) {
      rows[a][run.piece] = 1;
      ++laps[a][run.piece];
    }
  }
  return TransitionMatrix(std::move(rows), std::move(laps), f.covering());
}

std::vector<std::size_t> strong_components(const TransitionMatrix& m, std::size_t* count) {
  const std::size_t n = m.size();
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t next = 0, components = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!m(v, w)) continue;
      if (index[w] == unset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = components;
      } while (w != v);
      ++components;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == unset) visit(v);
  }
  if (count) *count = components;
  return comp;
}

bool is_irreducible(const TransitionMatrix& m) {
  std::size_t count = 0;
  strong_components(m, &count);
  return count == 1;
}

std::size_t period(const TransitionMatrix& m) {
  if (!is_irreducible(m)) throw PreconditionError("period is defined for irreducible matrices only");
  const std::size_t n = m.size();
  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (std::size_t w = 0; w < n; ++w) {
      if (m(v, w) && level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      }
    }
  }
  long g = 0;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) {
      if (m(v, w)) g = std::gcd(g, std::labs(level[v] + 1 - level[w]));
    }
  }
  return static_cast<std::size_t>(g);
}

bool is_primitive(const TransitionMatrix& m) { return is_irreducible(m) && period(m) == 1; }

PerronRoot perron_root(const std::vector<std::vector<long>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> pattern(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] < 0) throw DomainError("matrix entries must be nonnegative");
      pattern[i][j] = a[i][j] > 0;
    }
  }
  std::size_t count = 0;
  const auto comp = strong_components(TransitionMatrix(pattern), &count);

  PerronRoot best;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] == c) members.push_back(v);
    }
    const std::size_t k = members.size();
    if (k == 1 && a[members[0]][members[0]] == 0) continue;  // no cycle: contributes 0
    // Power iteration on B = A_c + I, which is primitive; Collatz-Wielandt
    // ratios bracket rho(B) = rho(A_c) + 1.
    std::vector<long double> x(k, 1.0L), y(k);
    long double lo = 0, hi = std::numeric_limits<long double>::max();
    for (int iter = 0; iter < 2000000; ++iter) {
      long double rmin = std::numeric_limits<long double>::max(), rmax = 0, norm = 0;
      for (std::size_t i = 0; i < k; ++i) {
        long double s = x[i];
        for (std::size_t j = 0; j < k; ++j) s += static_cast<long double>(a[members[i]][members[j]]) * x[j];
        y[i] = s;
        rmin = std::min(rmin, s / x[i]);
        rmax = std::max(rmax, s / x[i]);
        norm = std::max(norm, s);
      }
      lo = std::max(lo, rmin);
      hi = std::min(hi, rmax);
      for (std::size_t i = 0; i < k; ++i) x[i] = y[i] / norm;
      if (hi - lo <= 1e-14L * hi) break;
    }
    PerronRoot r;
    r.lower = static_cast<double>(lo - 1);
    r.upper = static_cast<double>(hi - 1);
    r.value = static_cast<double>((lo + hi) / 2 - 1);
    if (r.value > best.value) best = r;
  }
  return best;
}

PerronRoot perron_root(const TransitionMatrix& m) { return perron_root(m.laps()); }

PerronRoot perron_root_01(const TransitionMatrix& m) {
  std::vector<std::vector<long>> a(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) a[i].assign(m.rows()[i].begin(), m.rows()[i].end());
  return perron_root(a);
}

BigInt periodic_count_lower_bound(const TransitionMatrix& m, std::size_t n) {
  if (!m.covering()) throw UnsupportedError("periodic point counts need the covering property");
  if (n == 0) throw DomainError("n must be positive");
  const std::size_t k = m.size();
  using Mat = std::vector<std::vector<BigInt>>;
  auto multiply = [k](const Mat& x, const Mat& y) {
    Mat z(k, std::vector<BigInt>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < k; ++l) {
        if (x[i][l] == 0) continue;
        for (std::size_t j = 0; j < k; ++j) z[i][j] += x[i][l] * y[l][j];
      }
    return z;
  };
  Mat base(k, std::vector<BigInt>(k, 0)), acc(k, std::vector<BigInt>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    acc[i][i] = 1;
    for (std::size_t j = 0; j < k; ++j) base[i][j] = m(i, j);
  }
  for (std::size_t e = n; e > 0; e >>= 1) {
    if (e & 1) acc = multiply(acc, base);
    if (e > 1) base = multiply(base, base);
  }
  BigInt trace = 0;
  for (std::size_t i = 0; i < k; ++i) trace += acc[i][i];
  return trace;
}

FrequencySpec theta(const TransitionMatrix& m, const std::vector<std::size_t>& subset) {
  const std::size_t n = m.size();
  const auto in = membership(n, subset);
  if (subset.empty()) throw DomainError("subset must be nonempty");
  std::vector<long> w(n);
  for (std::size_t v = 0; v < n; ++v) w[v] = in[v] ? 0 : 1;

  // Karp: D[k][v] = best weight of a k-edge walk ending at v from a super
  // source; edge u -> v carries w(u).
  std::vector<std::vector<long>> d(n + 1, std::vector<long>(n, kNone));
  std::fill(d[0].begin(), d[0].end(), 0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      if (d[k - 1][u] == kNone) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (m(u, v)) d[k][v] = std::max(d[k][v], d[k - 1][u] + w[u]);
      }
    }
  }
  Rational best(-1);
  for (std::size_t v = 0; v < n; ++v) {
    if (d[n][v] == kNone) continue;
    Rational worst(std::numeric_limits<long>::max());
    for (std::size_t k = 0; k < n; ++k) {
      if (d[k][v] == kNone) continue;
      worst = std::min(worst, ratio(d[n][v] - d[k][v], static_cast<long>(n - k)));
    }
    best = std::max(best, worst);
  }
  best.canonicalize();

  FrequencySpec spec;
  spec.subset = subset;
  std::sort(spec.subset.begin(), spec.subset.end());
  spec.subset.erase(std::unique(spec.subset.begin(), spec.subset.end()), spec.subset.end());
  spec.theta = best;

  // Witness: with integer weights c = q*w - p every cycle weighs <= 0 and the
  // optimal ones weigh exactly 0. Find the shortest zero closed walk, then the
  // least start vertex, then the lexicographically least continuation.
  const long p = best.get_num().get_si(), q = best.get_den().get_si();
  std::vector<long> c(n);
  for (std::size_t v = 0; v < n; ++v) c[v] = q * w[v] - p;
  // back[r][v]: best weight of an r-edge walk v -> s inside vertices >= s.
  auto backward = [&](std::size_t s, std::size_t len) {
    std::vector<std::vector<long>> back(len + 1, std::vector<long>(n, kNone));
    back[0][s] = 0;
    for (std::size_t r = 1; r <= len; ++r) {
      for (std::size_t v = s; v < n; ++v) {
        for (std::size_t u = s; u < n; ++u) {
          if (m(v, u) && back[r - 1][u] != kNone) back[r][v] = std::max(back[r][v], c[v] + back[r - 1][u]);
        }
      }
    }
    return back;
  };
  for (std::size_t len = 1; len <= n && spec.witness.empty(); ++len) {
    for (std::size_t s = 0; s < n; ++s) {
      const auto back = backward(s, len);
      if (back[len][s] != 0) continue;
      std::size_t v = s;
      for (std::size_t r = len; r > 0; --r) {
        spec.witness.push_back(v);
        for (std::size_t u = s; u < n; ++u) {
          if (m(v, u) && back[r - 1][u] != kNone && c[v] + back[r - 1][u] == back[r][v]) {
            v = u;
            break;
          }
        }
      }
      break;
    }
  }
  if (spec.witness.empty()) throw InvariantError("no optimal cycle found");
  return spec;
}

Rational theta_dp_oracle(const TransitionMatrix& m, const std::vector<std::size_t>& subset, std::size_t n) {
  if (n == 0) throw DomainError("path length must be positive");
  const std::size_t k = m.size();
  const auto in = membership(k, subset);
  std::vector<long> best(k), next(k);
  for (std::size_t v = 0; v < k; ++v) best[v] = in[v] ? 0 : 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::fill(next.begin(), next.end(), kNone);
    for (std::size_t u = 0; u < k; ++u) {
      for (std::size_t v = 0; v < k; ++v) {
        if (m(u, v)) next[v] = std::max(next[v], best[u] + (in[v] ? 0 : 1));
      }
    }
    best.swap(next);
  }
  return ratio(*std::max_element(best.begin(), best.end()), static_cast<long>(n));
}

Rational theta_closed_walk_oracle(const TransitionMatrix& m, const std::vector<std::size_t>& subset,
                                  std::size_t max_length) {
  const std::size_t k = m.size();
  const auto in = membership(k, subset);
  Rational best(0);
  for (std::size_t s = 0; s < k; ++s) {
    // walk[v]: most out-of-subset vertices on a walk s -> v, counting s but not v.
    std::vector<long> walk(k, kNone), next(k);
    walk[s] = 0;
    for (std::size_t len = 1; len <= max_length; ++len) {
      std::fill(next.begin(), next.end(), kNone);
      for (std::size_t u = 0; u < k; ++u) {
        if (walk[u] == kNone) continue;
        for (std::size_t v = 0; v < k; ++v) {
          if (m(u, v)) next[v] = std::max(next[v], walk[u] + (in[u] ? 0 : 1));
        }
      }
      walk.swap(next);
      if (walk[s] != kNone) best = std::max(best, ratio(walk[s], static_cast<long>(len)));
    }
  }
  best.canonicalize();
  return best;
}

}  // namespace entrolab
