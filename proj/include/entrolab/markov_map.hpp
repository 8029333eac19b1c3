#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "entrolab/metric_graph.hpp"
#include "entrolab/rational.hpp"

namespace entrolab {

// Position of a point inside a piece, as arclength from the piece's start.
struct PieceLocation {
  std::size_t piece = 0;
  Rational position;
};

// A maximal stretch of a piece's image path that stays inside one piece B and
// moves monotonically along it.
struct ImageRun {
  std::size_t piece = 0;
  Rational image_from;  // arclength along the image path
  Rational image_to;
  Rational target_from;  // arclength inside piece B
  Rational target_to;
  bool full = false;  // runs from one end of B to the other
};

struct Itinerary {
  std::vector<std::size_t> pieces;
};

// A P-Lipschitz map whose restriction to every piece A traverses A's image
// path at constant speed L_A = |image(A)| / |A|.
class PLMarkovMap {
 public:
  // Throws InvariantError on an invalid splitting, a degenerate or broken image
  // path, a discontinuity at a shared point, or P not being forward-invariant.
  PLMarkovMap(MetricGraph graph, Splitting splitting, std::vector<Path> images);

  const MetricGraph& graph() const { return graph_; }
  const Splitting& splitting() const { return splitting_; }
  std::size_t piece_count() const { return splitting_.pieces.size(); }
  const Piece& piece(std::size_t i) const { return splitting_.pieces.at(i); }
  const std::vector<GraphPoint>& boundary() const { return splitting_.boundary; }
  const Path& image(std::size_t i) const { return images_.at(i); }
  const Rational& piece_length(std::size_t i) const { return piece_lengths_.at(i); }
  const Rational& image_length(std::size_t i) const { return image_lengths_.at(i); }

  // Per-piece Lipschitz constants, indexed like the pieces.
  const std::vector<Rational>& lipschitz_profile() const { return lipschitz_; }
  // max_A L_A, a Lipschitz constant of the glued map.
  Rational global_lipschitz() const;

  // Every piece containing x with x's position inside it, ordered by piece index.
  std::vector<PieceLocation> locate(const GraphPoint& x) const;
  GraphPoint evaluate(const GraphPoint& x) const;
  GraphPoint evaluate_in_piece(std::size_t piece, const Rational& position) const;
  GraphPoint iterate(const GraphPoint& x, std::size_t n) const;

  // A -> B when f(A) meets the interior of B.
  bool transition(std::size_t a, std::size_t b) const { return transitions_[a][b]; }
  // Image of A decomposed into runs through pieces, in image-path order.
  const std::vector<ImageRun>& runs(std::size_t a) const { return runs_.at(a); }
  // f(A) contains B whenever A -> B.
  bool covering() const { return covering_; }
  // Every run is a full traversal, so the lap-count matrix describes f exactly.
  bool full_laps() const { return full_laps_; }

  // Itinerary (A_0, ..., A_{n-1}) with f^i(x) in A_i; at points of several
  // pieces picks the lowest-index piece admissible after the previous one.
  Itinerary itinerary(const GraphPoint& x, std::size_t n) const;

 private:
  struct EdgeSlot {
    std::size_t piece;
    Rational lo, hi;       // covered interval of the edge
    Rational position_lo;  // piece position at offset lo
    bool forward;          // piece position increases with offset
  };

  void build_index();
  void decompose_images();
  void check_continuity_and_invariance() const;

  MetricGraph graph_;
  Splitting splitting_;
  std::vector<Path> images_;
  std::vector<Rational> piece_lengths_;
  std::vector<Rational> image_lengths_;
  std::vector<Rational> lipschitz_;
  std::vector<std::vector<EdgeSlot>> slots_;  // per edge
  std::vector<std::vector<ImageRun>> runs_;
  std::vector<std::vector<bool>> transitions_;
  bool covering_ = true;
  bool full_laps_ = true;
};

}  // namespace entrolab
