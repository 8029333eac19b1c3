#include "entrolab/numeric_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entrolab {

NumericGraph::NumericGraph(const MetricGraph& g) {
  const std::size_t nv = g.vertex_count();
  incident_.resize(nv);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    length_.push_back(to_double(edge.length));
    u_.push_back(static_cast<std::uint32_t>(edge.u));
    v_.push_back(static_cast<std::uint32_t>(edge.v));
    incident_[edge.u].push_back(static_cast<std::uint32_t>(e));
    if (edge.v != edge.u) incident_[edge.v].push_back(static_cast<std::uint32_t>(e));
    total_ += length_.back();
  }
  dist_.assign(nv, std::vector<double>(nv));
  for (std::size_t a = 0; a < nv; ++a) {
    for (std::size_t b = 0; b < nv; ++b) dist_[a][b] = to_double(g.vertex_distance(a, b));
  }
}

double NumericGraph::distance(const NPoint& p, const NPoint& q) const {
  double best = std::numeric_limits<double>::infinity();
  if (p.edge == q.edge) best = std::fabs(p.offset - q.offset);
  const double pu = p.offset, pv = length_[p.edge] - p.offset;
  const double qu = q.offset, qv = length_[q.edge] - q.offset;
  const auto& du = dist_[u_[p.edge]];
  const auto& dv = dist_[v_[p.edge]];
  best = std::min(best, pu + du[u_[q.edge]] + qu);
  best = std::min(best, pu + du[v_[q.edge]] + qv);
  best = std::min(best, pv + dv[u_[q.edge]] + qu);
  best = std::min(best, pv + dv[v_[q.edge]] + qv);
  return best;
}

std::uint32_t NumericGraph::Cells::cell(const NPoint& p) const {
  const auto i = static_cast<std::uint32_t>(std::max(0.0, p.offset) / width_[p.edge]);
  return first_[p.edge] + std::min(i, count_[p.edge] - 1);
}

NumericGraph::Cells NumericGraph::cells(double eps) const {
  Cells c;
  std::uint32_t next = 0;
  for (double len : length_) {
    const auto count = static_cast<std::uint32_t>(std::max(1.0, std::floor(len / eps)));
    c.first_.push_back(next);
    c.count_.push_back(count);
    c.width_.push_back(len / count);
    next += count;
  }
  c.near_.resize(next);
  // Cells of edge f within r of its end w.
  auto from_vertex = [&](std::uint32_t w, double r, std::vector<std::uint32_t>& out) {
    for (std::uint32_t f : incident_[w]) {
      const double width = c.width_[f];
      const std::uint32_t reach = std::min(c.count_[f] - 1, static_cast<std::uint32_t>(r / width));
      for (std::uint32_t j = 0; j <= reach; ++j) {
        if (u_[f] == w) out.push_back(c.first_[f] + j);
        if (v_[f] == w) out.push_back(c.first_[f] + c.count_[f] - 1 - j);
      }
    }
  };
  const double slack = eps * 1e-9;
  for (std::uint32_t e = 0; e < length_.size(); ++e) {
    for (std::uint32_t i = 0; i < c.count_[e]; ++i) {
      auto& out = c.near_[c.first_[e] + i];
      for (std::uint32_t j = (i == 0 ? 0 : i - 1); j <= std::min(i + 1, c.count_[e] - 1); ++j) out.push_back(c.first_[e] + j);
      const double a = i * c.width_[e], b = (i + 1) * c.width_[e];
      const double to_u = eps + slack - a, to_v = eps + slack - (length_[e] - b);
      for (std::uint32_t w = 0; w < dist_.size(); ++w) {
        if (to_u >= 0 && dist_[u_[e]][w] <= to_u) from_vertex(w, to_u - dist_[u_[e]][w], out);
        if (to_v >= 0 && dist_[v_[e]][w] <= to_v) from_vertex(w, to_v - dist_[v_[e]][w], out);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return c;
}

NumericMap::NumericMap(const PLMarkovMap& f) : graph_(f.graph()) {
  const MetricGraph& g = f.graph();
  slots_.resize(g.edge_count());
  for (std::size_t p = 0; p < f.piece_count(); ++p) {
    double position = 0;
    for (const Segment& s : f.piece(p).path) {
      const bool forward = s.forward();
      const double from = to_double(s.from), to = to_double(s.to), len = std::fabs(to - from);
      slots_[s.edge].push_back(Slot{static_cast<std::uint32_t>(p), std::min(from, to), std::max(from, to),
                                    forward ? position : position + len, forward});
      position += len;
    }
    std::vector<Leg> legs;
    double start = 0;
    for (const Segment& s : f.image(p)) {
      legs.push_back(Leg{static_cast<std::uint32_t>(s.edge), to_double(s.from), to_double(s.to), start});
      start += std::fabs(legs.back().to - legs.back().from);
    }
    images_.push_back(std::move(legs));
    lipschitz_.push_back(to_double(f.lipschitz_profile()[p]));
  }
}

NPoint NumericMap::evaluate(const NPoint& p) const {
  const auto& slots = slots_[p.edge];
  const Slot* slot = &slots.front();
  for (const Slot& s : slots) {
    if (s.lo <= p.offset && p.offset <= s.hi) {
      slot = &s;
      break;
    }
    // Rounding can leave a point just outside every slot; take the nearest.
    const double gap = std::max(s.lo - p.offset, p.offset - s.hi);
    if (gap < std::max(slot->lo - p.offset, p.offset - slot->hi)) slot = &s;
  }
  const double offset = std::clamp(p.offset, slot->lo, slot->hi);
  const double position = slot->forward ? slot->position_lo + (offset - slot->lo) : slot->position_lo - (offset - slot->lo);
  const auto& legs = images_[slot->piece];
  const double t = position * lipschitz_[slot->piece];
  auto it = std::upper_bound(legs.begin(), legs.end(), t, [](double v, const Leg& l) { return v < l.start; });
  const Leg& leg = it == legs.begin() ? legs.front() : *(it - 1);
  const double len = std::fabs(leg.to - leg.from);
  const double along = std::clamp(t - leg.start, 0.0, len);
  return NPoint{leg.edge, leg.to > leg.from ? leg.from + along : leg.from - along};
}

}  // namespace entrolab
