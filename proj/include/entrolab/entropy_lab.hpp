#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "entrolab/constructions.hpp"
#include "entrolab/markov_map.hpp"
#include "entrolab/transition_analysis.hpp"

namespace entrolab {

// Greedy maximal (n, eps)-separated subset of the uniform arclength grid with
// the given spacing, scanned in (edge, offset) order. DomainError unless
// 0 < eps < diameter.
std::size_t separated_count(const PLMarkovMap& f, std::size_t n, double eps, double spacing);
// Size of a greedy (n, eps)-spanning subset of the same grid: every grid
// point lies within eps (in d_n) of a chosen one. The smaller of a
// centre-pushing greedy cover and the greedy maximal separated set.
std::size_t spanning_count(const PLMarkovMap& f, std::size_t n, double eps, double spacing);

struct BowenPoint {
  std::size_t n = 0;
  std::size_t count = 0;
  std::size_t samples = 0;
};

struct BowenSeries {
  double eps = 0;
  std::vector<BowenPoint> points;  // resolved n only
  std::size_t saturated_at = 0;    // first n the sample cap could not resolve, 0 if none
  bool fitted = false;
  bool flat = false;
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS of the log-count fit
  std::size_t fit_from = 0, fit_to = 0;
};

struct BowenEstimate {
  double estimate = 0;
  std::vector<BowenSeries> series;
  std::size_t n_max = 0;
  double grid = 0;
  std::size_t max_samples = 0;
  std::string diagnostic;
};

constexpr std::size_t kBowenBurnIn = 4;
constexpr std::size_t kBowenMinPoints = 5;

// Slope of log s_n against n per eps; the estimate is the largest slope.
// Samples start on the arclength grid of spacing grid*eps and are bisected
// until neighbours are within grid*eps in d_n.
BowenEstimate bowen_estimate(const PLMarkovMap& f, const std::vector<double>& eps_list, std::size_t n_max,
                             double grid = 0.25, std::size_t max_samples = std::size_t(1) << 22);

// log+ x = max(log x, 0).
double log_plus(const Rational& x);

struct BoundDetail {
  FrequencySpec theta;
  Rational lipschitz_subset;  // max L over the subset
  Rational lipschitz_all;     // max L over all pieces
  double value = 0;           // log+ L_B + 2 theta log+ L_A
  double single_theta = 0;    // log+ L_B + theta log+ L_A
};

BoundDetail plipschitz_bound(const PLMarkovMap& f, const std::vector<std::size_t>& subset);
BoundDetail plipschitz_bound(const PLMarkovMap& f, const TransitionMatrix& m, const std::vector<std::size_t>& subset);
double lipschitz_bound(const PLMarkovMap& f);
// Subsets {A : L_A <= t} for every distinct constant t (nonempty ones).
std::vector<std::vector<std::size_t>> threshold_subsets(const PLMarkovMap& f);

struct SeparatedCheck {
  double eps = 0;
  std::size_t count = 0;
  double bound = 0;  // 2 * total length / eps
  double margin = 0;
  bool ok = true;
};
struct SeparatedVerdict {
  bool ok = true;
  std::vector<SeparatedCheck> checks;
};
// Greedy eps-separated subsets of the grid of spacing eps/refine.
SeparatedVerdict separated_bound_check(const MetricGraph& g, const std::vector<double>& eps_list, int refine = 64);

struct PeriodicCertificate {
  std::size_t piece = 0;
  Rational cell_from, cell_to;  // positions inside the piece
  Rational position;            // the periodic point
  std::size_t period = 0;
  std::vector<std::size_t> itinerary;
};

struct DensePeriodic {
  Rational eps;
  bool expands = true;  // every cell eventually covers a full piece
  bool ok = true;       // a verified periodic point in every cell
  std::size_t cells = 0;
  std::size_t max_period = 0;
  std::vector<PeriodicCertificate> certificates;  // empty unless keep_all
  std::string failure;
};

// Splits each piece into cells of length <= eps and finds in each an exact
// periodic point, checked by iterating the map in rational arithmetic.
DensePeriodic dense_periodic_certificates(const PLMarkovMap& f, const Rational& eps, bool keep_all = false);

struct Classification {
  bool applicable = false;
  bool transitive = false;
  bool totally_transitive = false;
  bool exact = false;
  bool dense_periodic = false;
  bool devaney = false;
  bool exactly_devaney = false;
  std::string note;
};

struct ReportParams {
  std::vector<double> eps_list{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::size_t n_max = 14;
  double grid = 0.25;
  Rational periodic_eps{1, 100};
  std::vector<std::vector<std::size_t>> subsets;  // empty: threshold subsets
  bool bounds = true;
  bool bowen = true;
  bool classify = true;
};

struct EntropyReport {
  explicit EntropyReport(TransitionMatrix m) : matrix(std::move(m)) {}

  TransitionMatrix matrix;
  bool irreducible = false;
  std::size_t period = 0;  // 0 when reducible
  bool primitive = false;
  PerronRoot perron;
  double perron_entropy = 0;
  double perron_entropy_01 = 0;  // log rho(M_f)
  std::vector<BoundDetail> bounds;
  double plipschitz_bound = 0;  // minimum over the tested subsets
  double lipschitz_bound = 0;
  bool has_bowen = false;
  BowenEstimate bowen;
  bool has_classification = false;
  DensePeriodic periodic;
  Classification classification;
};

EntropyReport devaney_report(const PLMarkovMap& f, const ReportParams& params);

// The three bounds compared for arr_example(n) with 𝔅 = all pieces but
// X_{n-1} and G: the proposition form log+ L_B + 2 theta log+ L_A, the form
// with a single theta, and log lambda + (2/n) log L. `reference` is
// log(2 L^2) / (n - 2) with the realized L.
struct ExampleBounds {
  Rational theta;
  Rational lambda;
  Rational big_l;
  double proposition = 0;
  double single_theta = 0;
  double display = 0;
  double reference = 0;
};
ExampleBounds arr_example_bounds(long n);

}  // namespace entrolab
