#include <gtest/gtest.h>

#include <random>

#include "entrolab/errors.hpp"
#include "entrolab/metric_graph.hpp"
#include "entrolab/verify.hpp"
#include "helpers.hpp"

using namespace entrolab;
using entrolab::test::q;

namespace {

// Distance by Floyd-Warshall on the graph subdivided at p and q.
Rational brute_distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& r) {
  struct E {
    std::size_t u, v;
    Rational len;
  };
  std::size_t n = g.vertex_count();
  std::vector<E> edges;
  std::vector<std::vector<Rational>> cuts(g.edge_count());
  auto node_of = [&](const GraphPoint& x) -> std::size_t {
    if (x.is_vertex()) return x.vertex();
    cuts[x.edge()].push_back(x.offset());
    return 0;  // patched below
  };
  node_of(p);
  node_of(r);
  std::vector<std::vector<std::pair<Rational, std::size_t>>> inner(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto& c = cuts[e];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t prev = g.edge(e).u;
    Rational at = 0;
    for (const auto& o : c) {
      inner[e].push_back({o, n});
      edges.push_back({prev, n, o - at});
      prev = n++;
      at = o;
    }
    edges.push_back({prev, g.edge(e).v, g.edge(e).length - at});
  }
  auto id = [&](const GraphPoint& x) {
    if (x.is_vertex()) return x.vertex();
    for (const auto& [o, k] : inner[x.edge()]) {
      if (o == x.offset()) return k;
    }
    return std::size_t(-1);
  };
  const Rational inf = g.total_length() + 1;
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.len);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.len);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min<Rational>(d[i][j], d[i][k] + d[k][j]);
  return d[id(p)][id(r)];
}

}  // namespace

TEST(MetricGraph, IntervalEndpointsAreOneApart) {
  const MetricGraph g = test::unit_interval();
  EXPECT_EQ(g.distance(g.vertex_point(0), g.vertex_point(1)), 1);
  EXPECT_EQ(g.total_length(), 1);
  const Geodesic geo = g.geodesic(g.vertex_point(0), g.vertex_point(1));
  ASSERT_EQ(geo.segments.size(), 1u);
  EXPECT_EQ(geo.segments[0], (Segment{0, 0, 1}));
}

TEST(MetricGraph, CircleOfTwoHalvesUsesLowestEdge) {
  const MetricGraph g = test::half_circle_pair();
  EXPECT_EQ(g.distance(g.vertex_point(0), g.vertex_point(1)), q("1/2"));
  EXPECT_EQ(g.total_length(), 1);
  const Geodesic geo = g.geodesic(g.vertex_point(0), g.vertex_point(1));
  ASSERT_EQ(geo.segments.size(), 1u);
  EXPECT_EQ(geo.segments[0].edge, 0u);
  // Interior points on opposite halves go round the shorter way.
  EXPECT_EQ(g.distance(g.point(0, q("1/8")), g.point(1, q("1/8"))), q("1/4"));
  EXPECT_EQ(g.distance(g.point(0, q("3/8")), g.point(1, q("1/8"))), q("1/2"));
}

TEST(MetricGraph, StarTipsMeetAtCentre) {
  const MetricGraph g = test::star(3);
  EXPECT_EQ(g.distance(g.vertex_point(1), g.vertex_point(2)), 2);
  EXPECT_EQ(g.total_length(), 3);
  EXPECT_EQ(test::star(7).total_length(), 7);
  const Geodesic geo = g.geodesic(g.vertex_point(1), g.vertex_point(2));
  ASSERT_EQ(geo.segments.size(), 2u);
  EXPECT_EQ(geo.length, 2);
  EXPECT_TRUE(contains_point(geo.waypoints, g.vertex_point(0)));
  EXPECT_EQ(g.diameter(), 2);
}

TEST(MetricGraph, PointsAtEdgeEndsBecomeVertices) {
  const MetricGraph g = test::unit_interval();
  EXPECT_EQ(g.point(0, 0), g.vertex_point(0));
  EXPECT_EQ(g.point(0, 1), g.vertex_point(1));
  EXPECT_FALSE(g.point(0, q("1/2")).is_vertex());
  EXPECT_EQ(g.describe(g.point(0, q("1/2"))), "I@1/2");
  EXPECT_EQ(g.describe(g.vertex_point(1)), "1");
  EXPECT_THROW(g.point(0, q("3/2")), DomainError);
  EXPECT_THROW(g.point(0, q("-1/2")), DomainError);
}

TEST(MetricGraph, RejectsInvalidGraphs) {
  EXPECT_THROW(MetricGraph({"a", "b"}, {Edge{"e", 0, 1, Rational(0)}}), InvariantError);
  EXPECT_THROW(MetricGraph({"a", "b", "c"}, {Edge{"e", 0, 1, Rational(1)}}), InvariantError);
  EXPECT_THROW(MetricGraph({"a"}, {}), InvariantError);
  EXPECT_THROW(MetricGraph({"a", "a"}, {Edge{"e", 0, 1, Rational(1)}}), InvariantError);
  EXPECT_THROW(MetricGraph({"a", "b"}, {Edge{"e", 0, 2, Rational(1)}}), InvariantError);
}

TEST(MetricGraph, DegenerateGeodesicIsAnError) {
  const MetricGraph g = test::unit_interval();
  EXPECT_THROW(g.geodesic(g.point(0, q("1/3")), g.point(0, q("1/3"))), DomainError);
}

TEST(MetricGraph, LoopEdgeDistances) {
  // A single loop of length 1: antipodal points are 1/2 apart.
  const MetricGraph g({"o"}, {Edge{"l", 0, 0, Rational(1)}});
  EXPECT_EQ(g.distance(g.vertex_point(0), g.point(0, q("1/2"))), q("1/2"));
  EXPECT_EQ(g.distance(g.point(0, q("1/8")), g.point(0, q("7/8"))), q("1/4"));
  EXPECT_EQ(g.diameter(), q("1/2"));
}

TEST(MetricGraph, DistanceMatchesSubdividedFloydWarshall) {
  std::mt19937_64 rng(7);
  for (int gi = 0; gi < 60; ++gi) {
    const MetricGraph g = random_graph(rng, 8);
    for (int i = 0; i < 10; ++i) {
      const GraphPoint p = random_point(rng, g, 10), r = random_point(rng, g, 10);
      ASSERT_EQ(g.distance(p, r), brute_distance(g, p, r)) << g.describe(p) << " " << g.describe(r);
    }
  }
}

TEST(MetricGraph, GeodesicSubpathsAreShortest) {
  std::mt19937_64 rng(11);
  for (int gi = 0; gi < 40; ++gi) {
    const MetricGraph g = random_graph(rng, 8);
    const GraphPoint p = random_point(rng, g, 6), r = random_point(rng, g, 6);
    if (p == r) continue;
    const Geodesic geo = g.geodesic(p, r);
    for (const GraphPoint& w : geo.waypoints) {
      EXPECT_EQ(g.distance(p, w) + g.distance(w, r), g.distance(p, r));
    }
    // Every point at arclength t along the geodesic is t away from p.
    for (int k = 0; k <= 4; ++k) {
      const Rational t = geo.length * ratio(k, 4);
      EXPECT_EQ(g.distance(p, point_along(g, geo.segments, t)), t);
    }
  }
}

TEST(MetricGraph, LengthDominatesDiameter) {
  std::mt19937_64 rng(3);
  for (int gi = 0; gi < 50; ++gi) {
    const MetricGraph g = random_graph(rng, 10);
    EXPECT_GE(g.total_length(), g.diameter());
    // A geodesic arc is a connected subset whose length equals its diameter.
    const GraphPoint p = random_point(rng, g, 5), r = random_point(rng, g, 5);
    if (p != r) EXPECT_EQ(path_length(g.geodesic(p, r).segments), g.distance(p, r));
  }
}

TEST(Splitting, IntervalSplitAtHalfIsValid) {
  const MetricGraph g = test::unit_interval();
  const Splitting s{{Piece{"A", {Segment{0, 0, q("1/2")}}}, Piece{"B", {Segment{0, q("1/2"), 1}}}},
                    {g.point(0, q("1/2"))}};
  EXPECT_TRUE(validate_splitting(g, s).ok) << validate_splitting(g, s).message;
}

TEST(Splitting, OverlappingPiecesAreRejected) {
  const MetricGraph g = test::unit_interval();
  const Splitting s{{Piece{"A", {Segment{0, 0, q("2/3")}}}, Piece{"B", {Segment{0, q("1/3"), 1}}}},
                    {g.point(0, q("1/3")), g.point(0, q("2/3"))}};
  EXPECT_FALSE(validate_splitting(g, s).ok);
}

TEST(Splitting, MissingBoundaryPointOrGapIsRejected) {
  const MetricGraph g = test::unit_interval();
  const Splitting no_p{{Piece{"A", {Segment{0, 0, q("1/2")}}}, Piece{"B", {Segment{0, q("1/2"), 1}}}}, {}};
  EXPECT_FALSE(validate_splitting(g, no_p).ok);
  const Splitting gap{{Piece{"A", {Segment{0, 0, q("1/3")}}}, Piece{"B", {Segment{0, q("1/2"), 1}}}},
                      {g.point(0, q("1/3")), g.point(0, q("1/2"))}};
  EXPECT_FALSE(validate_splitting(g, gap).ok);
}

TEST(Splitting, StarArmsWithCentreAreValid) {
  const MetricGraph g = test::star(4);
  Splitting s;
  for (std::size_t e = 0; e < 4; ++e) s.pieces.push_back(Piece{"X" + std::to_string(e), {Segment{e, 0, 1}}});
  s.boundary = {g.vertex_point(0)};
  EXPECT_TRUE(validate_splitting(g, s).ok) << validate_splitting(g, s).message;
  const auto b = piece_boundary(g, s.pieces[0]);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], g.vertex_point(0));
}
