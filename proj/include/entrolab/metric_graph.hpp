#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "entrolab/rational.hpp"

namespace entrolab {

struct Edge {
  std::string id;
  std::size_t u = 0;
  std::size_t v = 0;
  Rational length;
};

// A location on a metric graph. Points at an edge end are always stored as the
// vertex, so coincident points compare equal. Create through MetricGraph.
class GraphPoint {
 public:
  static GraphPoint at_vertex(std::size_t vertex) { return GraphPoint(true, vertex, Rational(0)); }

  bool is_vertex() const { return is_vertex_; }
  std::size_t vertex() const { return index_; }
  std::size_t edge() const { return index_; }
  // Offset from the edge's u end; zero for vertex points.
  const Rational& offset() const { return offset_; }

  friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
    return a.is_vertex_ == b.is_vertex_ && a.index_ == b.index_ && a.offset_ == b.offset_;
  }
  friend bool operator!=(const GraphPoint& a, const GraphPoint& b) { return !(a == b); }
  // Canonical order: vertices first by index, then edge interiors by (edge, offset).
  friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
    if (a.is_vertex_ != b.is_vertex_) return a.is_vertex_;
    if (a.index_ != b.index_) return a.index_ < b.index_;
    return a.offset_ < b.offset_;
  }

 private:
  friend class MetricGraph;
  GraphPoint(bool is_vertex, std::size_t index, Rational offset)
      : is_vertex_(is_vertex), index_(index), offset_(std::move(offset)) {}

  bool is_vertex_;
  std::size_t index_;
  Rational offset_;
};

// Directed subsegment of a single edge, traversed from `from` to `to` (offsets
// measured from the edge's u end). Its length is |to - from|.
struct Segment {
  std::size_t edge = 0;
  Rational from;
  Rational to;

  Rational length() const { return abs_value(to - from); }
  bool forward() const { return to > from; }
  friend bool operator==(const Segment& a, const Segment& b) {
    return a.edge == b.edge && a.from == b.from && a.to == b.to;
  }
};

using Path = std::vector<Segment>;

struct Geodesic {
  std::vector<GraphPoint> waypoints;  // endpoints and every vertex passed through
  Path segments;
  Rational length;
};

class MetricGraph {
 public:
  // Throws InvariantError for disconnected graphs, non-positive lengths, bad
  // endpoints, duplicate names or an edgeless graph.
  MetricGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::string& vertex_name(std::size_t v) const { return vertex_names_.at(v); }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  std::optional<std::size_t> find_vertex(const std::string& name) const;
  std::optional<std::size_t> find_edge(const std::string& id) const;
  // Edges with an end at v; a loop appears once.
  const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }

  Rational total_length() const;
  const Rational& vertex_distance(std::size_t a, std::size_t b) const { return vertex_dist_[a][b]; }

  GraphPoint vertex_point(std::size_t v) const;
  // Canonicalizes offsets 0 and length to the edge's vertices. DomainError when
  // the offset lies outside [0, length].
  GraphPoint point(std::size_t edge, const Rational& offset) const;
  // Throws DomainError unless p is a valid point of this graph.
  void check_point(const GraphPoint& p) const;
  // "name" for vertices, "edge@offset" for interior points.
  std::string describe(const GraphPoint& p) const;

  Rational distance(const GraphPoint& p, const GraphPoint& q) const;
  // Shortest path; ties broken by the lexicographically least edge-index
  // sequence. Throws DomainError when p == q.
  Geodesic geodesic(const GraphPoint& p, const GraphPoint& q) const;
  Rational diameter() const;

  GraphPoint segment_start(const Segment& s) const { return point(s.edge, s.from); }
  GraphPoint segment_end(const Segment& s) const { return point(s.edge, s.to); }

 private:
  struct Anchor {
    std::size_t vertex;
    Rational cost;
    std::optional<Segment> leg;  // from the point to the vertex, when the point is interior
  };
  std::vector<Anchor> anchors(const GraphPoint& p) const;
  std::vector<std::size_t> lexmin_vertex_path(std::size_t a, std::size_t b,
                                              std::vector<std::size_t>* via) const;

  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<Rational>> vertex_dist_;
};

Rational path_length(const Path& path);
// Point at the given arclength (clamped to [0, length]) along a path.
GraphPoint point_along(const MetricGraph& g, const Path& path, const Rational& arclength);
// Throws InvariantError unless consecutive segments join end to start.
void check_path(const MetricGraph& g, const Path& path, const std::string& what);

struct Piece {
  std::string name;
  Path path;  // an arc (or a simple closed loop) of the graph
};

struct Splitting {
  std::vector<Piece> pieces;
  std::vector<GraphPoint> boundary;  // the finite set P
};

struct Verdict {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

// Accepts iff pieces are non-degenerate simple arcs covering the graph, distinct
// pieces meet only in P, and P holds every piece's topological boundary.
Verdict validate_splitting(const MetricGraph& g, const Splitting& s);

// Points of the piece's topological boundary in the graph.
std::vector<GraphPoint> piece_boundary(const MetricGraph& g, const Piece& piece);

bool contains_point(const std::vector<GraphPoint>& set, const GraphPoint& p);

}  // namespace entrolab
