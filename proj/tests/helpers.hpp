#pragma once

#include <string>

#include "entrolab/markov_map.hpp"
#include "entrolab/text_format.hpp"

namespace entrolab::test {

inline Rational q(const char* text) { return parse_rational(text); }

inline PLMarkovMap system_from(const std::string& text) { return parse_system(parse_key_values(text)); }

inline MetricGraph unit_interval() { return MetricGraph({"0", "1"}, {Edge{"I", 0, 1, Rational(1)}}); }

// Circle of two edges e0, e1 of length 1/2 between v0 and v1.
inline MetricGraph half_circle_pair() {
  return MetricGraph({"v0", "v1"}, {Edge{"e0", 0, 1, q("1/2")}, Edge{"e1", 0, 1, q("1/2")}});
}

// k arms of length 1 from centre c to tips t1..tk.
inline MetricGraph star(int k) {
  std::vector<std::string> names{"c"};
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i) {
    names.push_back("t" + std::to_string(i));
    edges.push_back(Edge{"a" + std::to_string(i), 0, static_cast<std::size_t>(i), Rational(1)});
  }
  return MetricGraph(names, edges);
}

// 3-star whose arms are permuted cyclically by isometries.
inline PLMarkovMap arm_cycling_isometry() {
  return system_from(
      "vertices = c t1 t2 t3\n"
      "edge = a1 : c : t1 : 1\nedge = a2 : c : t2 : 1\nedge = a3 : c : t3 : 1\n"
      "piece = X1 : a1\npiece = X2 : a2\npiece = X3 : a3\n"
      "image = X1 : a2\nimage = X2 : a3\nimage = X3 : a1\n"
      "boundary = c\n");
}

}  // namespace entrolab::test
