#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "entrolab/markov_map.hpp"

namespace entrolab {

// One "key = value" line of a config file.
struct KeyValue {
  int line = 0;
  std::string key;
  std::string value;
};

// Splits text into key/value lines. '#' starts a comment; blank lines are
// skipped. SchemaError on a line without '=' or with an empty key.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Whitespace-separated words of a value.
std::vector<std::string> words(std::string_view value);

// Builds a map from the inline keys:
//   vertices = a b c
//   edge     = id : u : v : length
//   piece    = NAME : seg seg ...
//   image    = NAME : seg seg ...
//   boundary = point point ...
// A segment is "id" (whole edge, u to v), "~id" (whole edge, v to u) or
// "id[from->to]"; a point is a vertex name or "id@offset". Offsets and lengths
// are exact fractions. Malformed text raises SchemaError; a well-formed but
// invalid system raises InvariantError.
PLMarkovMap parse_system(const std::vector<KeyValue>& entries);

// Inline text that parse_system reads back to the same map.
std::string format_system(const PLMarkovMap& f);

bool is_system_key(const std::string& key);

}  // namespace entrolab
