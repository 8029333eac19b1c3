#pragma once

#include <cstdint>
#include <vector>

#include "entrolab/markov_map.hpp"

namespace entrolab {

// Double-precision mirror of a metric graph, for orbit sampling where exact
// rationals would be too slow. A point is (edge, offset); vertex points may
// appear under any incident edge.
struct NPoint {
  std::uint32_t edge = 0;
  double offset = 0;
};

class NumericGraph {
 public:
  explicit NumericGraph(const MetricGraph& g);

  std::size_t edge_count() const { return length_.size(); }
  double edge_length(std::size_t e) const { return length_[e]; }
  double total_length() const { return total_; }
  double distance(const NPoint& p, const NPoint& q) const;

  // Partition of every edge into cells of width >= eps, for neighbour pruning.
  class Cells {
   public:
    std::uint32_t cell(const NPoint& p) const;
    // Cells holding every point within eps of some point of cell c (a superset).
    const std::vector<std::uint32_t>& near(std::uint32_t c) const { return near_[c]; }
    std::size_t size() const { return near_.size(); }

   private:
    friend class NumericGraph;
    std::vector<std::uint32_t> first_;  // first cell of each edge
    std::vector<double> width_;
    std::vector<std::uint32_t> count_;
    std::vector<std::vector<std::uint32_t>> near_;
  };
  Cells cells(double eps) const;

 private:
  std::vector<double> length_;
  std::vector<std::uint32_t> u_, v_;
  std::vector<std::vector<double>> dist_;  // vertex distances
  std::vector<std::vector<std::uint32_t>> incident_;
  double total_ = 0;
};

class NumericMap {
 public:
  explicit NumericMap(const PLMarkovMap& f);

  const NumericGraph& graph() const { return graph_; }
  NPoint evaluate(const NPoint& p) const;

 private:
  struct Slot {
    std::uint32_t piece;
    double lo, hi, position_lo;
    bool forward;
  };
  struct Leg {
    std::uint32_t edge;
    double from, to, start;  // start = arclength of the leg along the image
  };
  NumericGraph graph_;
  std::vector<std::vector<Slot>> slots_;  // per edge
  std::vector<std::vector<Leg>> images_;  // per piece
  std::vector<double> lipschitz_;
};

}  // namespace entrolab
