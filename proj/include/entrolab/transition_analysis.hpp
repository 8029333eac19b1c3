#pragma once

#include <cstddef>
#include <vector>

#include "entrolab/markov_map.hpp"
#include "entrolab/rational.hpp"

namespace entrolab {

class TransitionMatrix {
 public:
  // 0/1 matrix from rows; laps default to the same entries. Every row must
  // have a nonzero entry (InvariantError otherwise).
  explicit TransitionMatrix(std::vector<std::vector<int>> rows, bool covering = true);
  TransitionMatrix(std::vector<std::vector<int>> rows, std::vector<std::vector<long>> laps, bool covering);

  std::size_t size() const { return rows_.size(); }
  int operator()(std::size_t a, std::size_t b) const { return rows_[a][b]; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  // Number of monotone runs of f(A) through B; equals the lap count of a
  // full-lap map and gives the symbolic entropy.
  const std::vector<std::vector<long>>& laps() const { return laps_; }
  bool covering() const { return covering_; }
  std::vector<std::size_t> successors(std::size_t a) const;

 private:
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<long>> laps_;
  bool covering_;
};

TransitionMatrix transition_matrix(const PLMarkovMap& f);

// Strongly connected components; comp[v] numbers components in reverse
// topological order (Tarjan).
std::vector<std::size_t> strong_components(const TransitionMatrix& m, std::size_t* count = nullptr);
bool is_irreducible(const TransitionMatrix& m);
// gcd of cycle lengths. PreconditionError unless irreducible.
std::size_t period(const TransitionMatrix& m);
bool is_primitive(const TransitionMatrix& m);

struct PerronRoot {
  double value = 0;
  double lower = 0;  // certified Collatz-Wielandt bracket
  double upper = 0;
  double error() const { return upper - lower; }
};

// Spectral radius of a nonnegative integer matrix with nonzero rows.
PerronRoot perron_root(const std::vector<std::vector<long>>& a);
// Uses the lap matrix, whose spectral radius is exp of the entropy of a
// covering full-lap map.
PerronRoot perron_root(const TransitionMatrix& m);
// Spectral radius of the 0/1 matrix M_f itself.
PerronRoot perron_root_01(const TransitionMatrix& m);

// trace(M^n) in exact arithmetic. UnsupportedError unless covering.
BigInt periodic_count_lower_bound(const TransitionMatrix& m, std::size_t n);

struct FrequencySpec {
  std::vector<std::size_t> subset;   // sorted
  Rational theta;
  std::vector<std::size_t> witness;  // cycle v_0 -> ... -> v_{L-1} -> v_0
};

// Maximum over cycles of the fraction of vertices outside `subset` (Karp).
// Witness: shortest optimal cycle, lexicographically least rotation.
FrequencySpec theta(const TransitionMatrix& m, const std::vector<std::size_t>& subset);

// k_n / n where k_n is the most out-of-subset vertices on an admissible path of n vertices.
Rational theta_dp_oracle(const TransitionMatrix& m, const std::vector<std::size_t>& subset, std::size_t n);
// max over L <= max_length of C_L / L, C_L the most out-of-subset vertices on
// a closed admissible walk of L vertices. Independent of Karp.
Rational theta_closed_walk_oracle(const TransitionMatrix& m, const std::vector<std::size_t>& subset,
                                  std::size_t max_length);

}  // namespace entrolab
