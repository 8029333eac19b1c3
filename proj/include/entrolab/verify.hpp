#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "entrolab/constructions.hpp"
#include "entrolab/metric_graph.hpp"
#include "entrolab/transition_analysis.hpp"

namespace entrolab {

struct PropertyResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

// theta-oracle, bounds, metric, itinerary, classification, separated.
const std::vector<std::string>& verify_suites();
// "all" runs every suite. ParameterError for unknown names.
std::vector<PropertyResult> run_suite(const std::string& name, std::uint64_t seed = 1);

// One small instance of every construction kind (and the variants).
std::vector<System> standard_catalog();

// Random 0/1 matrix on 1..max_vertices vertices with nonzero rows.
TransitionMatrix random_digraph(std::mt19937_64& rng, std::size_t max_vertices);
// Random connected metric graph with 1..max_edges edges (loops and
// multi-edges allowed) and lengths p/q with q <= 8.
MetricGraph random_graph(std::mt19937_64& rng, std::size_t max_edges);
// Random point with offset length * j / denominator.
GraphPoint random_point(std::mt19937_64& rng, const MetricGraph& g, long denominator = 997);

// The exact limit of k_n / n: k_n for n = 4 N^3 lies within 1/(4N^2) of
// theta, which pins the unique fraction with denominator <= N.
Rational theta_dp_limit(const TransitionMatrix& m, const std::vector<std::size_t>& subset);

// Checks an itinerary of x independently of PLMarkovMap::itinerary: each
// step is an edge of the transition graph and f^i(x) lies on piece A_i.
PropertyResult check_itinerary(const PLMarkovMap& f, const GraphPoint& x, std::size_t n);

}  // namespace entrolab
