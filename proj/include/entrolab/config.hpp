#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrolab/constructions.hpp"
#include "entrolab/rational.hpp"
#include "entrolab/text_format.hpp"

namespace entrolab {

inline constexpr const char* kSchemaTag = "entrolab/1";
inline constexpr const char* kVersion = "1.0.0";

struct ParameterRange {
  long from = 0;
  long to = 0;
};

// A parsed config file. Exactly one system source: `kind` (a named
// construction) or inline system keys.
struct ExperimentConfig {
  std::optional<ConstructionSpec> construction;
  std::vector<KeyValue> inline_system;
  std::vector<std::vector<std::string>> subsets;  // piece names, one line each
  bool bounds = true;
  bool bowen = true;
  bool classify = true;
  std::vector<Rational> eps{Rational(1, 16), Rational(1, 32), Rational(1, 64), Rational(1, 128)};
  long nmax = 14;
  Rational grid{1, 4};
  Rational periodic_eps{1, 100};
  std::optional<ParameterRange> range;
};

// SchemaError (with line numbers) for unknown keys, bad values, a missing or
// wrong schema tag, or zero or two system sources.
ExperimentConfig parse_config(std::string_view text);

// "A..B" with A <= B.
ParameterRange parse_range(const std::string& text);
// Comma or space separated exact fractions.
std::vector<Rational> parse_fraction_list(const std::string& text);

// The configured system. Inline systems get kind "inline" and take their
// subsets from `subset` lines.
System resolve_system(const ExperimentConfig& config);

}  // namespace entrolab
