#include "entrolab/metric_graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <utility>

#include "entrolab/errors.hpp"

namespace entrolab {

MetricGraph::MetricGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
  if (vertex_names_.empty() || edges_.empty()) {
    throw InvariantError("graph must have at least one edge (degenerate continuum)");
  }
  std::set<std::string> names;
  for (const auto& name : vertex_names_) {
    if (name.empty()) throw InvariantError("vertex names must be non-empty");
    if (!names.insert(name).second) throw InvariantError("duplicate vertex '" + name + "'");
  }
  std::set<std::string> ids;
  const std::size_t n = vertex_names_.size();
  incident_.assign(n, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (!ids.insert(edge.id).second) throw InvariantError("duplicate edge id '" + edge.id + "'");
    if (edge.u >= n || edge.v >= n) throw InvariantError("edge '" + edge.id + "' has an unknown endpoint");
    if (edge.length <= 0) throw InvariantError("edge length must be positive (edge '" + edge.id + "')");
    incident_[edge.u].push_back(e);
    if (edge.v != edge.u) incident_[edge.v].push_back(e);
  }

  // Floyd-Warshall over exact rationals; graphs here have few vertices.
  std::vector<std::vector<bool>> known(n, std::vector<bool>(n, false));
  vertex_dist_.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t v = 0; v < n; ++v) known[v][v] = true;
  for (const Edge& edge : edges_) {
    if (edge.u == edge.v) continue;
    for (auto [a, b] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
      if (!known[a][b] || edge.length < vertex_dist_[a][b]) {
        known[a][b] = true;
        vertex_dist_[a][b] = edge.length;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!known[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!known[k][j]) continue;
        Rational via = vertex_dist_[i][k] + vertex_dist_[k][j];
        if (!known[i][j] || via < vertex_dist_[i][j]) {
          known[i][j] = true;
          vertex_dist_[i][j] = std::move(via);
        }
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!known[0][v]) throw InvariantError("graph is not connected (vertex '" + vertex_names_[v] + "')");
  }
}

std::optional<std::size_t> MetricGraph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertex_names_.begin());
}

std::optional<std::size_t> MetricGraph::find_edge(const std::string& id) const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id == id) return e;
  }
  return std::nullopt;
}

Rational MetricGraph::total_length() const {
  Rational total = 0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

GraphPoint MetricGraph::vertex_point(std::size_t v) const {
  if (v >= vertex_count()) throw DomainError("vertex index out of range");
  return GraphPoint::at_vertex(v);
}

GraphPoint MetricGraph::point(std::size_t e, const Rational& offset) const {
  if (e >= edges_.size()) throw DomainError("edge index out of range");
  const Edge& edge = edges_[e];
  if (offset < 0 || offset > edge.length) {
    throw DomainError("offset " + to_string(offset) + " outside edge '" + edge.id + "'");
  }
  if (offset == 0) return GraphPoint::at_vertex(edge.u);
  if (offset == edge.length) return GraphPoint::at_vertex(edge.v);
  return GraphPoint(false, e, offset);
}

void MetricGraph::check_point(const GraphPoint& p) const {
  if (p.is_vertex()) {
    if (p.vertex() >= vertex_count()) throw DomainError("point not on graph: vertex index out of range");
    return;
  }
  if (p.edge() >= edges_.size()) throw DomainError("point not on graph: edge index out of range");
  if (p.offset() <= 0 || p.offset() >= edges_[p.edge()].length) {
    throw DomainError("point not on graph: offset outside edge interior");
  }
}

std::string MetricGraph::describe(const GraphPoint& p) const {
  if (p.is_vertex()) return vertex_names_.at(p.vertex());
  return edges_.at(p.edge()).id + "@" + to_string(p.offset());
}

std::vector<MetricGraph::Anchor> MetricGraph::anchors(const GraphPoint& p) const {
  check_point(p);
  if (p.is_vertex()) return {Anchor{p.vertex(), Rational(0), std::nullopt}};
  const Edge& edge = edges_[p.edge()];
  return {
      Anchor{edge.u, p.offset(), Segment{p.edge(), p.offset(), Rational(0)}},
      Anchor{edge.v, edge.length - p.offset(), Segment{p.edge(), p.offset(), edge.length}},
  };
}

Rational MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  const auto ap = anchors(p);
  const auto aq = anchors(q);
  std::optional<Rational> best;
  if (!p.is_vertex() && !q.is_vertex() && p.edge() == q.edge()) best = abs_value(p.offset() - q.offset());
  for (const auto& a : ap) {
    for (const auto& b : aq) {
      Rational d = a.cost + vertex_dist_[a.vertex][b.vertex] + b.cost;
      if (!best || d < *best) best = std::move(d);
    }
  }
  return *best;
}

std::vector<std::size_t> MetricGraph::lexmin_vertex_path(std::size_t a, std::size_t b,
                                                         std::vector<std::size_t>* via) const {
  std::vector<std::size_t> path_edges;
  if (via) via->assign(1, a);
  std::size_t cur = a;
  while (cur != b) {
    std::optional<std::size_t> chosen;
    std::size_t next = cur;
    for (std::size_t e : incident_[cur]) {
      const Edge& edge = edges_[e];
      if (edge.u == edge.v) continue;
      const std::size_t w = edge.u == cur ? edge.v : edge.u;
      if (edge.length + vertex_dist_[w][b] == vertex_dist_[cur][b] && (!chosen || e < *chosen)) {
        chosen = e;
        next = w;
      }
    }
    path_edges.push_back(*chosen);
    cur = next;
    if (via) via->push_back(cur);
  }
  return path_edges;
}

Geodesic MetricGraph::geodesic(const GraphPoint& p, const GraphPoint& q) const {
  if (p == q) throw DomainError("degenerate geodesic: endpoints coincide");
  struct Candidate {
    Rational length;
    std::vector<std::size_t> edge_sequence;
    Geodesic geodesic;
  };
  std::optional<Candidate> best;
  auto consider = [&best](Candidate c) {
    if (!best || c.length < best->length ||
        (c.length == best->length && c.edge_sequence < best->edge_sequence)) {
      best = std::move(c);
    }
  };

  const auto ap = anchors(p);
  const auto aq = anchors(q);
  if (!p.is_vertex() && !q.is_vertex() && p.edge() == q.edge()) {
    Candidate c;
    c.length = abs_value(p.offset() - q.offset());
    c.edge_sequence = {p.edge()};
    c.geodesic.waypoints = {p, q};
    c.geodesic.segments = {Segment{p.edge(), p.offset(), q.offset()}};
    c.geodesic.length = c.length;
    consider(std::move(c));
  }
  for (const auto& a : ap) {
    for (const auto& b : aq) {
      Candidate c;
      c.length = a.cost + vertex_dist_[a.vertex][b.vertex] + b.cost;
      if (best && c.length > best->length) continue;
      std::vector<std::size_t> vertices;
      const auto inner = lexmin_vertex_path(a.vertex, b.vertex, &vertices);
      Geodesic& geo = c.geodesic;
      geo.waypoints.push_back(p);
      if (a.leg) {
        c.edge_sequence.push_back(a.leg->edge);
        geo.segments.push_back(*a.leg);
      }
      for (std::size_t i = 0; i < inner.size(); ++i) {
        const Edge& edge = edges_[inner[i]];
        c.edge_sequence.push_back(inner[i]);
        if (edge.u == vertices[i]) {
          geo.segments.push_back(Segment{inner[i], Rational(0), edge.length});
        } else {
          geo.segments.push_back(Segment{inner[i], edge.length, Rational(0)});
        }
      }
      for (std::size_t v : vertices) {
        GraphPoint vp = GraphPoint::at_vertex(v);
        if (geo.waypoints.back() != vp) geo.waypoints.push_back(vp);
      }
      if (b.leg) {
        c.edge_sequence.push_back(b.leg->edge);
        geo.segments.push_back(Segment{b.leg->edge, b.leg->to, b.leg->from});
      }
      if (geo.waypoints.back() != q) geo.waypoints.push_back(q);
      geo.length = c.length;
      consider(std::move(c));
    }
  }
  return std::move(best->geodesic);
}

Rational MetricGraph::diameter() const {
  // For x at offset s on edge e and y at offset t on edge f, d(x, y) is the
  // minimum of four affine routes (plus |s - t| when e == f). On each region
  // where that minimum is concave its maximum sits at an intersection of two
  // lines among the route-equality lines, the box sides and s = t.
  struct Line {
    Rational a, b, c;  // a*s + b*t = c
  };
  Rational best = 0;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    for (std::size_t f = e; f < edges_.size(); ++f) {
      const Edge& x = edges_[e];
      const Edge& y = edges_[f];
      // route = cs*s + ct*t + k
      struct Route {
        int cs, ct;
        Rational k;
      };
      const std::vector<Route> routes{
          {1, 1, vertex_dist_[x.u][y.u]},
          {1, -1, y.length + vertex_dist_[x.u][y.v]},
          {-1, 1, x.length + vertex_dist_[x.v][y.u]},
          {-1, -1, x.length + y.length + vertex_dist_[x.v][y.v]},
      };
      std::vector<Line> lines{{1, 0, 0}, {1, 0, x.length}, {0, 1, 0}, {0, 1, y.length}};
      if (e == f) lines.push_back({1, -1, 0});
      for (std::size_t i = 0; i < routes.size(); ++i) {
        for (std::size_t j = i + 1; j < routes.size(); ++j) {
          Rational a = routes[i].cs - routes[j].cs;
          Rational b = routes[i].ct - routes[j].ct;
          if (a == 0 && b == 0) continue;
          lines.push_back({a, b, routes[j].k - routes[i].k});
        }
      }
      for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
          const Line& l1 = lines[i];
          const Line& l2 = lines[j];
          const Rational det = l1.a * l2.b - l1.b * l2.a;
          if (det == 0) continue;
          const Rational s = (l1.c * l2.b - l1.b * l2.c) / det;
          const Rational t = (l1.a * l2.c - l1.c * l2.a) / det;
          if (s < 0 || s > x.length || t < 0 || t > y.length) continue;
          const Rational d = distance(point(e, s), point(f, t));
          if (d > best) best = d;
        }
      }
    }
  }
  return best;
}

Rational path_length(const Path& path) {
  Rational total = 0;
  for (const auto& s : path) total += s.length();
  return total;
}

GraphPoint point_along(const MetricGraph& g, const Path& path, const Rational& arclength) {
  if (path.empty()) throw DomainError("empty path");
  Rational remaining = arclength < 0 ? Rational(0) : arclength;
  for (const auto& s : path) {
    const Rational len = s.length();
    if (remaining <= len) {
      const Rational offset = s.forward() ? Rational(s.from + remaining) : Rational(s.from - remaining);
      return g.point(s.edge, offset);
    }
    remaining -= len;
  }
  return g.segment_end(path.back());
}

void check_path(const MetricGraph& g, const Path& path, const std::string& what) {
  if (path.empty()) throw InvariantError(what + " is empty");
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Segment& s = path[i];
    if (s.edge >= g.edge_count()) throw InvariantError(what + " uses an unknown edge");
    const Rational& len = g.edge(s.edge).length;
    if (s.from < 0 || s.from > len || s.to < 0 || s.to > len) {
      throw InvariantError(what + " leaves edge '" + g.edge(s.edge).id + "'");
    }
    if (s.from == s.to) throw InvariantError(what + " has a degenerate segment");
    if (i > 0 && g.segment_end(path[i - 1]) != g.segment_start(s)) {
      throw InvariantError(what + " is not contiguous at segment " + std::to_string(i));
    }
  }
}

namespace {

using Interval = std::pair<Rational, Rational>;

// Merged closed intervals covered by a path, per edge.
std::map<std::size_t, std::vector<Interval>> coverage(const Path& path) {
  std::map<std::size_t, std::vector<Interval>> raw;
  for (const auto& s : path) {
    raw[s.edge].emplace_back(s.forward() ? s.from : s.to, s.forward() ? s.to : s.from);
  }
  for (auto& [edge, list] : raw) {
    std::sort(list.begin(), list.end());
    std::vector<Interval> merged;
    for (auto& iv : list) {
      if (!merged.empty() && iv.first <= merged.back().second) {
        if (iv.second > merged.back().second) merged.back().second = iv.second;
      } else {
        merged.push_back(iv);
      }
    }
    list = std::move(merged);
  }
  return raw;
}

bool covers_near(const std::vector<Interval>& list, const Rational& t, bool left) {
  for (const auto& [lo, hi] : list) {
    if (left ? (lo < t && t <= hi) : (lo <= t && t < hi)) return true;
  }
  return false;
}

bool piece_contains(const MetricGraph& g, const std::map<std::size_t, std::vector<Interval>>& cov,
                    const GraphPoint& p) {
  if (p.is_vertex()) {
    for (std::size_t e : g.incident_edges(p.vertex())) {
      auto it = cov.find(e);
      if (it == cov.end()) continue;
      const Edge& edge = g.edge(e);
      for (const auto& [lo, hi] : it->second) {
        if ((edge.u == p.vertex() && lo == 0) || (edge.v == p.vertex() && hi == edge.length)) return true;
      }
    }
    return false;
  }
  auto it = cov.find(p.edge());
  if (it == cov.end()) return false;
  for (const auto& [lo, hi] : it->second) {
    if (lo <= p.offset() && p.offset() <= hi) return true;
  }
  return false;
}

}  // namespace

std::vector<GraphPoint> piece_boundary(const MetricGraph& g, const Piece& piece) {
  const auto cov = coverage(piece.path);
  std::vector<GraphPoint> result;
  auto add = [&result](GraphPoint p) {
    if (!contains_point(result, p)) result.push_back(std::move(p));
  };
  for (const auto& s : piece.path) {
    for (const Rational& t : {s.from, s.to}) {
      GraphPoint p = g.point(s.edge, t);
      if (p.is_vertex()) {
        for (std::size_t e : g.incident_edges(p.vertex())) {
          const Edge& edge = g.edge(e);
          auto it = cov.find(e);
          static const std::vector<Interval> kEmpty;
          const auto& list = it == cov.end() ? kEmpty : it->second;
          const bool at_u = edge.u == p.vertex() && !covers_near(list, Rational(0), false);
          const bool at_v = edge.v == p.vertex() && !covers_near(list, edge.length, true);
          if (at_u || at_v) {
            add(p);
            break;
          }
        }
      } else {
        const auto& list = cov.at(s.edge);
        if (!covers_near(list, t, true) || !covers_near(list, t, false)) add(p);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool contains_point(const std::vector<GraphPoint>& set, const GraphPoint& p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

Verdict validate_splitting(const MetricGraph& g, const Splitting& s) {
  auto fail = [](std::string message) { return Verdict{false, std::move(message)}; };
  if (s.pieces.empty()) return fail("splitting has no pieces");
  for (const auto& p : s.boundary) {
    try {
      g.check_point(p);
    } catch (const DomainError& e) {
      return fail(std::string("boundary point: ") + e.what());
    }
  }

  std::vector<std::map<std::size_t, std::vector<Interval>>> covs;
  for (const auto& piece : s.pieces) {
    const std::string what = "piece '" + piece.name + "'";
    try {
      check_path(g, piece.path, what);
    } catch (const InvariantError& e) {
      return fail(e.what());
    }
    if (path_length(piece.path) <= 0) return fail(what + " is degenerate");
    // Simple arc: junction points distinct (a closed loop may return to its start),
    // and no positive-length overlap of the piece with itself.
    std::vector<GraphPoint> junctions{g.segment_start(piece.path.front())};
    for (const auto& seg : piece.path) junctions.push_back(g.segment_end(seg));
    for (std::size_t i = 0; i < junctions.size(); ++i) {
      for (std::size_t j = i + 1; j < junctions.size(); ++j) {
        if (junctions[i] == junctions[j] && !(i == 0 && j + 1 == junctions.size())) {
          return fail(what + " is not a simple arc");
        }
      }
    }
    Rational covered = 0;
    auto cov = coverage(piece.path);
    for (const auto& [edge, list] : cov) {
      for (const auto& [lo, hi] : list) covered += hi - lo;
    }
    if (covered != path_length(piece.path)) return fail(what + " overlaps itself");
    covs.push_back(std::move(cov));
  }

  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < s.pieces.size(); ++j) {
      for (const auto& [edge, a_list] : covs[i]) {
        auto it = covs[j].find(edge);
        if (it == covs[j].end()) continue;
        for (const auto& [a_lo, a_hi] : a_list) {
          for (const auto& [b_lo, b_hi] : it->second) {
            const Rational lo = a_lo > b_lo ? a_lo : b_lo;
            const Rational hi = a_hi < b_hi ? a_hi : b_hi;
            if (lo < hi) {
              return fail("pieces '" + s.pieces[i].name + "' and '" + s.pieces[j].name +
                          "' share a positive-length subarc (non-finite intersection)");
            }
            if (lo == hi) {
              const GraphPoint p = g.point(edge, lo);
              if (!contains_point(s.boundary, p)) {
                return fail("pieces '" + s.pieces[i].name + "' and '" + s.pieces[j].name + "' meet at " +
                            g.describe(p) + " outside P");
              }
            }
          }
        }
      }
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const GraphPoint p = GraphPoint::at_vertex(v);
        if (piece_contains(g, covs[i], p) && piece_contains(g, covs[j], p) && !contains_point(s.boundary, p)) {
          return fail("pieces '" + s.pieces[i].name + "' and '" + s.pieces[j].name + "' meet at " +
                      g.describe(p) + " outside P");
        }
      }
    }
  }

  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::vector<Interval> all;
    for (const auto& cov : covs) {
      auto it = cov.find(e);
      if (it != cov.end()) all.insert(all.end(), it->second.begin(), it->second.end());
    }
    std::sort(all.begin(), all.end());
    Rational reach = 0;
    for (const auto& [lo, hi] : all) {
      if (lo > reach) break;
      if (hi > reach) reach = hi;
    }
    if (reach != g.edge(e).length) return fail("pieces do not cover edge '" + g.edge(e).id + "'");
  }

  for (const auto& piece : s.pieces) {
    for (const auto& p : piece_boundary(g, piece)) {
      if (!contains_point(s.boundary, p)) {
        return fail("boundary point " + g.describe(p) + " of piece '" + piece.name + "' is not in P");
      }
    }
  }
  return {};
}

}  // namespace entrolab
