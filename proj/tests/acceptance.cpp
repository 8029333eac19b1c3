// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entrolab/constructions.hpp"
#include "entrolab/entropy_lab.hpp"
#include "entrolab/report.hpp"
#include "entrolab/transition_analysis.hpp"
#include "entrolab/verify.hpp"

using namespace entrolab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail << why;
    ok = false;
  }
};

double perron_entropy(const System& s) { return std::log(perron_root(transition_matrix(s.map)).value); }

// 1. Tent calibration.
void tent(Outcome& o) {
  const auto t0 = Clock::now();
  const System s = tent_family(2);
  const double h = perron_entropy(s);
  const BowenEstimate b = bowen_estimate(s.map, {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}, 14, 0.25);
  const double t = seconds_since(t0);
  if (std::abs(h - std::log(2.0)) > 1e-9) o.fail("perron " + number_text(h));
  if (b.estimate < 0.62 || b.estimate > 0.77) o.fail("bowen " + number_text(b.estimate) + " outside [0.62, 0.77]");
  if (t >= 60) o.fail("runtime " + number_text(t) + " s");
  o.detail << (o.ok ? "" : "; ") << "perron=" << h << " bowen=" << b.estimate << " time=" << t << "s";
}

// 2. star_minimal(n) entropy is log 2 / n.
void star_minimal_row(Outcome& o) {
  double worst = 0;
  for (long n = 2; n <= 10; ++n) {
    const double err = std::abs(perron_entropy(star_minimal(n)) - std::log(2.0) / double(n));
    worst = std::max(worst, err);
    if (err > 1e-9) o.fail("n=" + std::to_string(n) + " ");
  }
  o.detail << "max error " << worst;
}

// 3. star_exact(k, 2) trend.
void star_exact_trend(Outcome& o) {
  const auto t0 = Clock::now();
  ReportParams p;
  p.bowen = false;
  double previous = INFINITY, max_kh = 0;
  for (long k = 2; k <= 32; ++k) {
    const EntropyReport r = devaney_report(star_exact(k, 2).map, p);
    if (!(r.perron_entropy < previous)) o.fail("not decreasing at k=" + std::to_string(k) + " ");
    if (!r.classification.exact) o.fail("not exact at k=" + std::to_string(k) + " ");
    previous = r.perron_entropy;
    max_kh = std::max(max_kh, double(k) * r.perron_entropy);
  }
  const double t = seconds_since(t0);
  if (max_kh > 3 * std::log(2.0)) o.fail("k*h=" + number_text(max_kh) + " ");
  if (t >= 120) o.fail("runtime ");
  o.detail << "max k*h=" << max_kh << " (3 log 2=" << 3 * std::log(2.0) << ") h(32)=" << previous
           << " time=" << t << "s";
}

// 4. Bound soundness over the catalog and its tested subsets.
void bound_soundness(Outcome& o) {
  const auto t0 = Clock::now();
  std::size_t checks = 0;
  double worst_bowen_gap = -INFINITY;
  for (const System& s : standard_catalog()) {
    const TransitionMatrix m = transition_matrix(s.map);
    const double h = std::log(perron_root(m).value);
    const BowenEstimate b = bowen_estimate(s.map, {1.0 / 16, 1.0 / 32, 1.0 / 64}, 14, 0.25);
    for (const auto& subset : tested_subsets(s)) {
      const double bound = plipschitz_bound(s.map, m, subset).value;
      ++checks;
      if (h > bound + 1e-9) o.fail(s.summary + ": perron above bound ");
      if (b.estimate > bound + 0.03) o.fail(s.summary + ": bowen above bound ");
      worst_bowen_gap = std::max(worst_bowen_gap, b.estimate - bound);
    }
  }
  o.detail << checks << " (system, subset) pairs, max bowen-bound=" << worst_bowen_gap
           << " time=" << seconds_since(t0) << "s";
}

// 5. theta against the path-count oracles.
void theta_oracles(Outcome& o) {
  std::size_t cases = 0;
  auto check = [&](const TransitionMatrix& m, const std::vector<std::size_t>& subset, const std::string& what) {
    ++cases;
    const Rational th = theta(m, subset).theta;
    const std::size_t v = m.size();
    if (th != theta_dp_limit(m, subset)) o.fail(what + ": dp limit ");
    if (th != theta_closed_walk_oracle(m, subset, v)) o.fail(what + ": closed walks ");
    // k_n / n settles onto theta at rate v / n.
    for (std::size_t n = 1; n <= 8 * v; ++n) {
      const Rational gap = theta_dp_oracle(m, subset, n) - th;
      if (abs(gap) * Rational(static_cast<long>(n)) > Rational(static_cast<long>(v))) {
        o.fail(what + ": transient at n=" + std::to_string(n) + " ");
        break;
      }
    }
  };
  for (const System& s : standard_catalog()) {
    const TransitionMatrix m = transition_matrix(s.map);
    for (const auto& subset : tested_subsets(s)) check(m, subset, s.summary);
  }
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const TransitionMatrix m = random_digraph(rng, 8);
    std::vector<std::size_t> subset;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (rng() % 2) subset.push_back(v);
    }
    if (subset.empty()) subset.push_back(rng() % m.size());
    check(m, subset, "random digraph " + std::to_string(i));
  }
  for (long k = 2; k <= 32; ++k) {
    const System s = star_exact(k, 2);
    const Rational th = theta(transition_matrix(s.map), s.subsets.front()).theta;
    if (th != ratio(2, k)) o.fail("star k=" + std::to_string(k) + " theta " + th.get_str() + " ");
    if (k > 2 && th > ratio(2, k - 1)) o.fail("star bound ");
  }
  o.detail << cases << " exact comparisons; star theta = 2/k for k=2..32";
}

// 6. The graph example: theta and the reported bound.
void arr_example_check(Outcome& o) {
  double previous = INFINITY;
  for (long n = 3; n <= 24; ++n) {
    const ExampleBounds e = arr_example_bounds(n);
    const std::string tag = "n=" + std::to_string(n) + " ";
    if (e.theta > ratio(2, n)) o.fail(tag + "theta ");
    if (e.display > e.reference) o.fail(tag + "display above reference ");
    if (e.single_theta > e.reference) o.fail(tag + "single-theta above reference ");
    if (!(e.reference < previous)) o.fail(tag + "reference not decreasing ");
    previous = e.reference;
    if (n == 3 || n == 24) {
      o.detail << "n=" << n << ": theta=" << e.theta.get_str() << " display=" << e.display
               << " reference=" << e.reference << "; ";
    }
  }
  if (previous > 0.5) o.fail("reference at n=24 not small ");
}

// 7. Transitive-but-not-totally-transitive versus exact.
void dichotomy(Outcome& o) {
  const auto t0 = Clock::now();
  ReportParams p;
  p.bowen = false;
  p.bounds = false;
  p.periodic_eps = ratio(1, 1000);
  auto every_piece_certified = [&](const System& s) {
    const DensePeriodic d = dense_periodic_certificates(s.map, ratio(1, 1000), true);
    std::set<std::size_t> pieces;
    for (const auto& c : d.certificates) pieces.insert(c.piece);
    return d.ok && d.certificates.size() == d.cells && pieces.size() == s.map.piece_count();
  };
  struct Case {
    System s;
    bool exact;
    std::size_t period;
  };
  std::vector<Case> cases;
  cases.push_back({two_piece_swap(), false, 2});
  cases.push_back({two_piece_swap("dendrite-pair", 2), false, 2});
  for (long k : {2L, 3L, 5L}) cases.push_back({star_devaney(k, 2), false, static_cast<std::size_t>(k + 1)});
  for (long k : {2L, 3L, 5L}) cases.push_back({star_exact(k, 2), true, 1});
  cases.push_back({tent_family(2), true, 1});
  cases.push_back({tent_family(3), true, 1});
  for (const Case& c : cases) {
    const EntropyReport r = devaney_report(c.s.map, p);
    const Classification& k = r.classification;
    const bool good = c.exact ? (k.exact && k.exactly_devaney && r.primitive)
                              : (k.transitive && k.devaney && !k.totally_transitive && !k.exact && r.irreducible &&
                                 !r.primitive && r.period == c.period);
    if (!good) o.fail(c.s.summary + ": classification ");
    if (!every_piece_certified(c.s)) o.fail(c.s.summary + ": periodic certificates ");
  }
  o.detail << cases.size() << " systems at eps=1/1000, time=" << seconds_since(t0) << "s";
}

void from_suite(Outcome& o, const std::string& suite) {
  for (const PropertyResult& r : run_suite(suite, 1)) {
    if (!r.ok) o.fail(r.name + ": " + r.detail + " ");
    else o.detail << r.name << " (" << r.detail << ") ";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"1 tent calibration", tent},
      {"2 star_minimal entropy log2/n", star_minimal_row},
      {"3 star_exact trend", star_exact_trend},
      {"4 bound soundness", bound_soundness},
      {"5 theta oracle equivalence", theta_oracles},
      {"6 graph example bound", arr_example_check},
      {"7 dichotomy classification", dichotomy},
      {"8 separated-set bound", [](Outcome& o) { from_suite(o, "separated"); }},
      {"9 itinerary soundness", [](Outcome& o) { from_suite(o, "itinerary"); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
