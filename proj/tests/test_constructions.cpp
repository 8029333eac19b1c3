#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "entrolab/constructions.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/transition_analysis.hpp"
#include "entrolab/verify.hpp"
#include "helpers.hpp"

using namespace entrolab;

namespace {

double entropy(const System& s) { return std::log(perron_root(transition_matrix(s.map)).value); }

std::size_t piece_named(const PLMarkovMap& f, const std::string& name) {
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    if (f.piece(i).name == name) return i;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST(Constructions, AllValidCoveringAndFullLap) {
  for (const System& s : standard_catalog()) {
    EXPECT_TRUE(validate_splitting(s.map.graph(), s.map.splitting()).ok) << s.summary;
    EXPECT_TRUE(s.map.covering()) << s.summary;
    EXPECT_TRUE(s.map.full_laps()) << s.summary;
    EXPECT_FALSE(s.subsets.empty());
    EXPECT_FALSE(describe(s).empty());
  }
}

TEST(Constructions, IrreducibilityAndPrimitivityByKind) {
  for (const System& s : standard_catalog()) {
    const TransitionMatrix m = transition_matrix(s.map);
    const std::string& k = s.spec.kind;
    const bool want_primitive =
        k == "tent" || k == "star_exact" || k == "arr_example" || (k == "free_arc_cycle" && s.spec.exact);
    EXPECT_TRUE(is_irreducible(m)) << s.summary;
    EXPECT_EQ(is_primitive(m), want_primitive) << s.summary;
  }
}

TEST(Constructions, ParameterErrors) {
  EXPECT_THROW(tent_family(1), ParameterError);
  EXPECT_THROW(star_devaney(1), ParameterError);
  EXPECT_THROW(star_exact(2, 1), ParameterError);
  EXPECT_THROW(star_minimal(1), ParameterError);
  EXPECT_THROW(arr_example(2), ParameterError);
  EXPECT_THROW(free_arc_cycle(3, false, 2), ParameterError);
  EXPECT_THROW(two_piece_swap("circle", 2), ParameterError);
  EXPECT_THROW(two_piece_swap("torus"), ParameterError);
  ConstructionSpec bad;
  bad.kind = "nope";
  EXPECT_THROW(build_system(bad), ParameterError);
}

TEST(Tent, LapsAndBoundary) {
  const System s = tent_family(2);
  ASSERT_EQ(s.map.piece_count(), 2u);
  EXPECT_EQ(s.map.boundary().size(), 3u);
  EXPECT_NEAR(entropy(s), std::log(2.0), 1e-9);
  for (long k = 2; k <= 6; ++k) EXPECT_NEAR(entropy(tent_family(k)), std::log(double(k)), 1e-9);
}

TEST(StarDevaney, PerronMatchesFoldedReturn) {
  // f^3 on X_0 is a 4-lap map, so the entropy is log 4 / 3.
  EXPECT_NEAR(entropy(star_devaney(2, 2)), std::log(4.0) / 3, 1e-9);
  for (long k = 2; k <= 8; ++k) {
    for (long m : {2L, 3L}) {
      const System s = star_devaney(k, m);
      const double h = entropy(s);
      EXPECT_NEAR(h, std::log(double(m * m)) / double(k + 1), 1e-9);
      EXPECT_LE(h, 3 * std::log(double(m)) / double(k));
      EXPECT_EQ(period(transition_matrix(s.map)), static_cast<std::size_t>(k + 1));
    }
  }
}

TEST(StarExact, CharacteristicEquationAndMonotonicity) {
  double previous = 1e9;
  for (long k = 2; k <= 16; ++k) {
    const System s = star_exact(k, 2);
    const double rho = perron_root(transition_matrix(s.map)).value;
    // One-lap return through the chord: rho^(k+1) = m * (2 + rho) with m = 2.
    EXPECT_NEAR(std::pow(rho, double(k + 1)), 2 * (2 + rho), 1e-7) << k;
    EXPECT_LT(std::log(rho), previous);
    previous = std::log(rho);
    EXPECT_TRUE(is_primitive(transition_matrix(s.map)));
  }
}

TEST(StarMinimal, EntropyIsLogTwoOverN) {
  EXPECT_NEAR(entropy(star_minimal(2)), 0.5 * std::log(2.0), 1e-9);
  EXPECT_NEAR(perron_root(transition_matrix(star_minimal(3).map)).value, std::cbrt(2.0), 1e-9);
  EXPECT_NEAR(entropy(star_minimal(6)), 0.1155, 5e-5);
}

TEST(FreeArc, PeriodsAndEndpointAudit) {
  for (long k = 2; k <= 6; ++k) {
    const System f = free_arc_cycle(k, false);
    const System g = free_arc_cycle(k, true);
    EXPECT_EQ(period(transition_matrix(f.map)), static_cast<std::size_t>(k + 1));
    EXPECT_TRUE(is_primitive(transition_matrix(g.map)));
    EXPECT_EQ(theta(transition_matrix(g.map), g.subsets.front()).theta, ratio(2, k));
    for (const System* s : {&f, &g}) {
      for (const GraphPoint& p : s->map.boundary()) EXPECT_TRUE(contains_point(s->map.boundary(), s->map.evaluate(p)));
    }
  }
}

TEST(ArrExample, PiecesConstantsAndTheta) {
  for (long n = 3; n <= 12; ++n) {
    const System s = arr_example(n);
    const PLMarkovMap& f = s.map;
    EXPECT_EQ(f.piece_count(), static_cast<std::size_t>(n + 2));
    const auto& lip = f.lipschitz_profile();
    EXPECT_EQ(lip[piece_named(f, "X0")], 1);
    EXPECT_EQ(lip[piece_named(f, "X1-")], 1);
    // Both are at most L; here G is an isometry and X_{n-1} carries L.
    EXPECT_EQ(lip[piece_named(f, "G")], 1);
    EXPECT_EQ(lip[piece_named(f, "X" + std::to_string(n - 1))], *std::max_element(lip.begin(), lip.end()));
    const Rational th = theta(transition_matrix(f), s.subsets.front()).theta;
    EXPECT_LE(th, ratio(2, n));
    EXPECT_EQ(th, ratio(2, n + 1));
    // lambda is the least p/2^16 with lambda^(n-2) >= 2.
    const Rational lambda = arr_lambda(n);
    EXPECT_GE(std::pow(to_double(lambda), double(n - 2)), 2.0 - 1e-12);
    EXPECT_LT(std::pow(to_double(lambda) - 1.0 / 65536, double(n - 2)), 2.0);
  }
}

TEST(TwoPieceSwap, EntropyIsHalfLogM) {
  EXPECT_NEAR(entropy(two_piece_swap("dendrite-pair", 2)), 0.5 * std::log(2.0), 1e-9);
  EXPECT_NEAR(entropy(two_piece_swap("circle")), 0.5 * std::log(3.0), 1e-9);
  EXPECT_NEAR(entropy(two_piece_swap("circle", 5)), 0.5 * std::log(5.0), 1e-9);
  for (long m = 2; m <= 5; ++m) EXPECT_NEAR(entropy(two_piece_swap("dendrite-pair", m)), 0.5 * std::log(double(m)), 1e-9);
}

TEST(TreeArms, GeneralizedStarVariantIsValid) {
  for (long k = 2; k <= 4; ++k) {
    const System d = star_devaney(k, 2, "tree");
    const System e = star_exact(k, 2, "tree");
    EXPECT_TRUE(is_irreducible(transition_matrix(d.map)));
    EXPECT_FALSE(is_primitive(transition_matrix(d.map)));
    EXPECT_TRUE(is_primitive(transition_matrix(e.map)));
  }
}

TEST(BuildSystem, DispatchesOnKind) {
  ConstructionSpec spec;
  spec.kind = "star_exact";
  spec.k = 5;
  spec.m = 2;
  const System s = build_system(spec);
  EXPECT_EQ(s.map.piece_count(), 6u);
  EXPECT_EQ(transition_matrix(s.map)(0, 2), 1);
  EXPECT_EQ(sweep_parameter("star_exact"), "k");
  EXPECT_EQ(sweep_parameter("star_minimal"), "n");
  EXPECT_EQ(sweep_parameter("arr_example"), "n");
}
