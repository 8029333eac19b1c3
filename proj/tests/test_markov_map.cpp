#include <gtest/gtest.h>

#include <random>

#include "entrolab/constructions.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/markov_map.hpp"
#include "entrolab/verify.hpp"
#include "helpers.hpp"

using namespace entrolab;
using entrolab::test::q;

namespace {

GraphPoint at(const PLMarkovMap& f, const char* offset) { return f.graph().point(0, q(offset)); }

// Tent map f_2 on [0,1] computed from its formula.
Rational tent(const Rational& x) { return x <= q("1/2") ? Rational(2 * x) : Rational(2 - 2 * x); }

std::size_t piece_named(const PLMarkovMap& f, const std::string& name) {
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    if (f.piece(i).name == name) return i;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST(Evaluate, TentTwoValues) {
  const PLMarkovMap f = tent_family(2).map;
  EXPECT_EQ(f.evaluate(at(f, "1/4")), at(f, "1/2"));
  EXPECT_EQ(f.evaluate(at(f, "2/3")), at(f, "2/3"));
  EXPECT_EQ(f.evaluate(at(f, "0")), at(f, "0"));
}

TEST(Evaluate, TentThreeCentreIsFixed) {
  const PLMarkovMap f = tent_family(3).map;
  EXPECT_EQ(f.evaluate(at(f, "1/2")), at(f, "1/2"));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.lipschitz_profile()[i], 3);
}

TEST(Evaluate, TentMatchesFormulaOnRandomRationals) {
  const PLMarkovMap f = tent_family(2).map;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Rational x = ratio(static_cast<long>(rng() % 1001), 1000);
    EXPECT_EQ(f.evaluate(f.graph().point(0, x)), f.graph().point(0, tent(x)));
  }
}

TEST(Iterate, ZeroStepsIsIdentityAndTwoStepsCompose) {
  const PLMarkovMap f = tent_family(2).map;
  EXPECT_EQ(f.iterate(at(f, "1/5"), 0), at(f, "1/5"));
  EXPECT_EQ(f.iterate(at(f, "1/5"), 2), at(f, "4/5"));
  EXPECT_EQ(f.iterate(at(f, "1/5"), 2), f.evaluate(f.evaluate(at(f, "1/5"))));
}

TEST(Iterate, SwapReturnsToOwnPieceAfterTwoSteps) {
  for (const System& s : {two_piece_swap("circle"), two_piece_swap("dendrite-pair", 2)}) {
    const PLMarkovMap& f = s.map;
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
      const GraphPoint x = random_point(rng, f.graph());
      const auto here = f.locate(x), there = f.locate(f.iterate(x, 2));
      bool shared = false;
      for (const auto& a : here) {
        for (const auto& b : there) shared = shared || a.piece == b.piece;
      }
      EXPECT_TRUE(shared) << f.graph().describe(x);
    }
  }
}

TEST(Lipschitz, ProfilesOfConstructions) {
  const PLMarkovMap tent2 = tent_family(2).map;
  EXPECT_EQ(tent2.lipschitz_profile(), (std::vector<Rational>{2, 2}));
  EXPECT_EQ(test::arm_cycling_isometry().global_lipschitz(), 1);
  const System sd = star_devaney(4);
  for (long i = 1; i < 4; ++i) EXPECT_EQ(sd.map.lipschitz_profile()[piece_named(sd.map, "X" + std::to_string(i))], 1);
  // Chain pieces of the example expand by lambda.
  for (long n : {4L, 6L, 9L}) {
    const System s = arr_example(n);
    const Rational lambda = arr_lambda(n);
    EXPECT_EQ(s.map.lipschitz_profile()[piece_named(s.map, "X1+")], lambda);
    for (long i = 2; i <= n - 2; ++i) {
      EXPECT_EQ(s.map.lipschitz_profile()[piece_named(s.map, "X" + std::to_string(i))], lambda) << n << " " << i;
    }
  }
}

TEST(Lipschitz, MetricContractOnRandomPairs) {
  std::mt19937_64 rng(21);
  for (const System& s : standard_catalog()) {
    const PLMarkovMap& f = s.map;
    const MetricGraph& g = f.graph();
    const Rational big_l = f.global_lipschitz();
    for (int i = 0; i < 60; ++i) {
      const GraphPoint x = random_point(rng, g, 40), y = random_point(rng, g, 40);
      EXPECT_LE(g.distance(f.evaluate(x), f.evaluate(y)), big_l * g.distance(x, y)) << s.summary;
      // Within one piece, positions along the piece bound the distance too.
      for (const auto& lx : f.locate(x)) {
        for (const auto& ly : f.locate(y)) {
          if (lx.piece != ly.piece) continue;
          const Rational along = abs_value(lx.position - ly.position);
          EXPECT_LE(g.distance(f.evaluate(x), f.evaluate(y)), f.lipschitz_profile()[lx.piece] * along);
        }
      }
    }
  }
}

TEST(Continuity, SharedPointsAgreeAndPIsInvariant) {
  for (const System& s : standard_catalog()) {
    const PLMarkovMap& f = s.map;
    for (const GraphPoint& p : f.boundary()) {
      const auto where = f.locate(p);
      ASSERT_FALSE(where.empty());
      for (const auto& l : where) EXPECT_EQ(f.evaluate_in_piece(l.piece, l.position), f.evaluate(p)) << s.summary;
      EXPECT_TRUE(contains_point(f.boundary(), f.evaluate(p))) << s.summary << " " << f.graph().describe(p);
    }
  }
}

TEST(Itinerary, TentOneThird) {
  const PLMarkovMap f = tent_family(2).map;
  EXPECT_EQ(f.itinerary(at(f, "1/3"), 3).pieces, (std::vector<std::size_t>{0, 1, 1}));
}

TEST(Itinerary, StarArmsInCyclicOrder) {
  const long k = 4;
  const PLMarkovMap f = star_devaney(k).map;
  const std::size_t x1 = piece_named(f, "X1");
  const GraphPoint x = point_along(f.graph(), f.piece(x1).path, q("1/3"));
  const auto it = f.itinerary(x, k).pieces;
  for (long i = 0; i < k; ++i) EXPECT_EQ(f.piece(it[i]).name, "X" + std::to_string((1 + i) % (k + 1)));
}

TEST(Itinerary, FixedCentreFollowsTieBreak) {
  // The centre lies in every arm; no arm maps into itself, so the lowest
  // admissible piece after X_i is X_{i+1}.
  const PLMarkovMap f = star_devaney(3).map;
  const GraphPoint a = f.graph().vertex_point(*f.graph().find_vertex("a"));
  EXPECT_EQ(f.evaluate(a), a);
  const auto it = f.itinerary(a, 5).pieces;
  EXPECT_EQ(it, (std::vector<std::size_t>{0, 1, 2, 3, 0}));
}

TEST(Itinerary, AdmissibleAndPointwiseCorrect) {
  std::mt19937_64 rng(4);
  for (const System& s : standard_catalog()) {
    for (int i = 0; i < 50; ++i) {
      const PropertyResult r = check_itinerary(s.map, random_point(rng, s.map.graph()), 30);
      EXPECT_TRUE(r.ok) << s.summary << ": " << r.detail;
    }
  }
}

TEST(Construction, RejectsDiscontinuousMap) {
  // The two halves send the shared point 1/2 to different places.
  EXPECT_THROW(test::system_from("vertices = 0 m 1\nedge = a : 0 : m : 1/2\nedge = b : m : 1 : 1/2\n"
                                 "piece = A : a\npiece = B : b\nimage = A : a b\nimage = B : a b\nboundary = 0 m 1\n"),
               InvariantError);
}

TEST(Construction, RejectsNonInvariantBoundary) {
  // f(1/2) = 3/4 is not in P.
  EXPECT_THROW(test::system_from("vertices = 0 m 1\nedge = a : 0 : m : 1/2\nedge = b : m : 1 : 1/2\n"
                                 "piece = A : a\npiece = B : b\nimage = A : a b[0->1/4]\nimage = B : b[1/4->1/2] ~b ~a\n"
                                 "boundary = 0 m 1\n"),
               InvariantError);
}

TEST(Construction, RejectsBrokenImagePath) {
  EXPECT_THROW(test::system_from("vertices = 0 m 1\nedge = a : 0 : m : 1/2\nedge = b : m : 1 : 1/2\n"
                                 "piece = A : a\npiece = B : b\nimage = A : a ~a b\nimage = B : ~b a\n"
                                 "boundary = 0 m 1\n"),
               InvariantError);
}

TEST(Runs, TentImagesAreFullLaps) {
  const PLMarkovMap f = tent_family(3).map;
  EXPECT_TRUE(f.covering());
  EXPECT_TRUE(f.full_laps());
  for (std::size_t a = 0; a < 3; ++a) {
    ASSERT_EQ(f.runs(a).size(), 3u);
    for (const auto& r : f.runs(a)) EXPECT_TRUE(r.full);
  }
}
