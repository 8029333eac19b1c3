#include "entrolab/markov_map.hpp"

#include <algorithm>
#include <utility>

#include "entrolab/errors.hpp"

namespace entrolab {

PLMarkovMap::PLMarkovMap(MetricGraph graph, Splitting splitting, std::vector<Path> images)
    : graph_(std::move(graph)), splitting_(std::move(splitting)), images_(std::move(images)) {
  if (const Verdict v = validate_splitting(graph_, splitting_); !v) throw InvariantError(v.message);
  if (images_.size() != splitting_.pieces.size()) {
    throw InvariantError("every piece needs exactly one image path");
  }
  std::sort(splitting_.boundary.begin(), splitting_.boundary.end());
  splitting_.boundary.erase(std::unique(splitting_.boundary.begin(), splitting_.boundary.end()),
                            splitting_.boundary.end());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const std::string what = "image of piece '" + splitting_.pieces[i].name + "'";
    check_path(graph_, images_[i], what);
    piece_lengths_.push_back(path_length(splitting_.pieces[i].path));
    image_lengths_.push_back(path_length(images_[i]));
    if (image_lengths_.back() <= 0) throw InvariantError(what + " is degenerate");
    lipschitz_.push_back(image_lengths_.back() / piece_lengths_.back());
  }
  build_index();
  check_continuity_and_invariance();
  decompose_images();
}

Rational PLMarkovMap::global_lipschitz() const {
  return *std::max_element(lipschitz_.begin(), lipschitz_.end());
}

void PLMarkovMap::build_index() {
  slots_.assign(graph_.edge_count(), {});
  for (std::size_t p = 0; p < piece_count(); ++p) {
    Rational position = 0;
    for (const Segment& s : splitting_.pieces[p].path) {
      const bool forward = s.forward();
      const Rational lo = forward ? s.from : s.to;
      const Rational hi = forward ? s.to : s.from;
      const Rational position_lo = forward ? position : Rational(position + s.length());
      slots_[s.edge].push_back(EdgeSlot{p, lo, hi, position_lo, forward});
      position += s.length();
    }
  }
}

std::vector<PieceLocation> PLMarkovMap::locate(const GraphPoint& x) const {
  graph_.check_point(x);
  std::vector<PieceLocation> found;
  auto add = [&found](std::size_t piece, Rational position) {
    for (const auto& f : found) {
      if (f.piece == piece) return;
    }
    found.push_back(PieceLocation{piece, std::move(position)});
  };
  auto position_at = [](const EdgeSlot& slot, const Rational& offset) {
    return slot.forward ? Rational(slot.position_lo + (offset - slot.lo))
                        : Rational(slot.position_lo - (offset - slot.lo));
  };
  if (x.is_vertex()) {
    for (std::size_t e : graph_.incident_edges(x.vertex())) {
      const Edge& edge = graph_.edge(e);
      for (const EdgeSlot& slot : slots_[e]) {
        if (edge.u == x.vertex() && slot.lo == 0) add(slot.piece, position_at(slot, Rational(0)));
        if (edge.v == x.vertex() && slot.hi == edge.length) add(slot.piece, position_at(slot, edge.length));
      }
    }
  } else {
    for (const EdgeSlot& slot : slots_[x.edge()]) {
      if (slot.lo <= x.offset() && x.offset() <= slot.hi) add(slot.piece, position_at(slot, x.offset()));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const PieceLocation& a, const PieceLocation& b) { return a.piece < b.piece; });
  return found;
}

GraphPoint PLMarkovMap::evaluate_in_piece(std::size_t piece, const Rational& position) const {
  return point_along(graph_, images_.at(piece), position * lipschitz_[piece]);
}

GraphPoint PLMarkovMap::evaluate(const GraphPoint& x) const {
  const auto where = locate(x);
  if (where.empty()) throw DomainError("point " + graph_.describe(x) + " lies in no piece");
  return evaluate_in_piece(where.front().piece, where.front().position);
}

GraphPoint PLMarkovMap::iterate(const GraphPoint& x, std::size_t n) const {
  GraphPoint y = x;
  graph_.check_point(y);
  for (std::size_t i = 0; i < n; ++i) y = evaluate(y);
  return y;
}

void PLMarkovMap::check_continuity_and_invariance() const {
  std::vector<GraphPoint> probes = splitting_.boundary;
  for (const auto& piece : splitting_.pieces) {
    for (const auto& s : piece.path) {
      probes.push_back(graph_.segment_start(s));
      probes.push_back(graph_.segment_end(s));
    }
  }
  for (const auto& x : probes) {
    const auto where = locate(x);
    const GraphPoint first = evaluate_in_piece(where.front().piece, where.front().position);
    for (std::size_t i = 1; i < where.size(); ++i) {
      if (evaluate_in_piece(where[i].piece, where[i].position) != first) {
        throw InvariantError("map is discontinuous at " + graph_.describe(x) + " (pieces '" +
                             splitting_.pieces[where.front().piece].name + "' and '" +
                             splitting_.pieces[where[i].piece].name + "' disagree)");
      }
    }
  }
  for (const auto& p : splitting_.boundary) {
    const GraphPoint image = evaluate(p);
    if (!contains_point(splitting_.boundary, image)) {
      throw InvariantError("P is not forward-invariant: f(" + graph_.describe(p) + ") = " +
                           graph_.describe(image) + " is not in P");
    }
  }
}

void PLMarkovMap::decompose_images() {
  const std::size_t n = piece_count();
  runs_.assign(n, {});
  transitions_.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<ImageRun> chunks;
    Rational start = 0;
    for (const Segment& s : images_[a]) {
      const bool forward = s.forward();
      const Rational seg_lo = forward ? s.from : s.to;
      const Rational seg_hi = forward ? s.to : s.from;
      for (const EdgeSlot& slot : slots_[s.edge]) {
        const Rational lo = std::max(seg_lo, slot.lo);
        const Rational hi = std::min(seg_hi, slot.hi);
        if (lo >= hi) continue;
        auto position_at = [&slot](const Rational& offset) {
          return slot.forward ? Rational(slot.position_lo + (offset - slot.lo))
                              : Rational(slot.position_lo - (offset - slot.lo));
        };
        ImageRun chunk;
        chunk.piece = slot.piece;
        if (forward) {
          chunk.image_from = start + (lo - s.from);
          chunk.image_to = start + (hi - s.from);
          chunk.target_from = position_at(lo);
          chunk.target_to = position_at(hi);
        } else {
          chunk.image_from = start + (s.from - hi);
          chunk.image_to = start + (s.from - lo);
          chunk.target_from = position_at(hi);
          chunk.target_to = position_at(lo);
        }
        chunks.push_back(std::move(chunk));
      }
      start += s.length();
    }
    std::sort(chunks.begin(), chunks.end(),
              [](const ImageRun& x, const ImageRun& y) { return x.image_from < y.image_from; });
    std::vector<ImageRun> merged;
    for (auto& c : chunks) {
      if (!merged.empty()) {
        ImageRun& last = merged.back();
        const bool same_direction = (last.target_to > last.target_from) == (c.target_to > c.target_from);
        if (last.piece == c.piece && last.image_to == c.image_from && last.target_to == c.target_from &&
            same_direction) {
          last.image_to = c.image_to;
          last.target_to = c.target_to;
          continue;
        }
      }
      merged.push_back(std::move(c));
    }
    for (auto& run : merged) {
      const Rational& len = piece_lengths_[run.piece];
      run.full = (run.target_from == 0 && run.target_to == len) || (run.target_from == len && run.target_to == 0);
      if (!run.full) full_laps_ = false;
      transitions_[a][run.piece] = true;
    }
    runs_[a] = std::move(merged);

    for (std::size_t b = 0; b < n; ++b) {
      if (!transitions_[a][b]) continue;
      std::vector<std::pair<Rational, Rational>> cover;
      for (const auto& run : runs_[a]) {
        if (run.piece != b) continue;
        cover.emplace_back(std::min(run.target_from, run.target_to), std::max(run.target_from, run.target_to));
      }
      std::sort(cover.begin(), cover.end());
      Rational reach = 0;
      for (const auto& [lo, hi] : cover) {
        if (lo > reach) break;
        reach = std::max(reach, hi);
      }
      if (reach != piece_lengths_[b]) covering_ = false;
    }
  }
}

Itinerary PLMarkovMap::itinerary(const GraphPoint& x, std::size_t n) const {
  Itinerary result;
  if (n == 0) return result;
  GraphPoint y = x;
  result.pieces.push_back(locate(y).front().piece);
  for (std::size_t i = 1; i < n; ++i) {
    y = evaluate(y);
    const std::size_t previous = result.pieces.back();
    bool placed = false;
    for (const auto& loc : locate(y)) {
      if (transitions_[previous][loc.piece]) {
        result.pieces.push_back(loc.piece);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InvariantError("no admissible piece contains " + graph_.describe(y) + " after piece '" +
                           splitting_.pieces[previous].name + "'");
    }
  }
  return result;
}

}  // namespace entrolab
