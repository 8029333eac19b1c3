#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entrolab/markov_map.hpp"

namespace entrolab {

// Which explicit system to build. Unused parameters are ignored; m defaults to
// 2 where any fold count works and to 3 where the legs need an odd count.
struct ConstructionSpec {
  std::string kind;                 // tent, star_devaney, star_exact, star_minimal,
                                    // free_arc_cycle, arr_example, two_piece_swap
  long k = 2;                       // tent laps, star arms minus one, free-arc chain length
  long n = 3;                       // star_minimal arms, arr_example index
  std::optional<long> m;            // fold count of the expanding legs
  bool exact = false;               // free_arc_cycle: g_0 instead of f_0
  std::string shape = "circle";     // two_piece_swap: circle | dendrite-pair
  std::string arms = "arc";         // star_devaney / star_exact: arc | tree
};

struct System {
  ConstructionSpec spec;
  PLMarkovMap map;
  // Piece subsets worth feeding to the entropy bound; the first is the one
  // the construction is designed around.
  std::vector<std::vector<std::size_t>> subsets;
  // Exact or real constants realized by the construction, name -> text.
  std::vector<std::pair<std::string, std::string>> constants;
  std::string summary;
};

const std::vector<std::string>& construction_kinds();

System tent_family(long k);
System star_devaney(long k, long m = 2, const std::string& arms = "arc");
System star_exact(long k, long m = 2, const std::string& arms = "arc");
System star_minimal(long n);
System free_arc_cycle(long k, bool exact, long m = 3);
System arr_example(long n);
System two_piece_swap(const std::string& shape = "circle", std::optional<long> m = std::nullopt);

// Dispatches on spec.kind. ParameterError on unknown kinds or bad parameters.
System build_system(const ConstructionSpec& spec);

// Name of the parameter a sweep varies for this kind ("k" or "n").
std::string sweep_parameter(const std::string& kind);

// Smallest p / 2^16 with (p / 2^16)^(n-2) >= 2, the rational stand-in for
// the (n-2)-th root of 2 used by arr_example.
Rational arr_lambda(long n);

// Human-readable listing of pieces, boundary, images and per-piece constants.
std::string describe(const System& s);

}  // namespace entrolab
