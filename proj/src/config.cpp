#include "entrolab/config.hpp"

#include <algorithm>
#include <set>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

long integer(const KeyValue& kv) {
  try {
    std::size_t used = 0;
    const long v = std::stol(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw SchemaError(kv.line, "'" + kv.key + "' must be an integer, got '" + kv.value + "'");
  }
}

bool boolean(const KeyValue& kv) {
  if (kv.value == "true") return true;
  if (kv.value == "false") return false;
  throw SchemaError(kv.line, "'" + kv.key + "' must be true or false, got '" + kv.value + "'");
}

Rational positive_fraction(const KeyValue& kv, const std::string& text) {
  Rational r;
  try {
    r = parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(kv.line, "'" + kv.key + "': " + e.what());
  }
  if (r <= 0) throw SchemaError(kv.line, "'" + kv.key + "' must be positive");
  return r;
}

}  // namespace

std::vector<Rational> parse_fraction_list(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::vector<Rational> out;
  for (const auto& w : words(spaced)) {
    const Rational r = parse_rational(w);
    if (r <= 0) throw std::invalid_argument("values must be positive: '" + w + "'");
    out.push_back(r);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

ParameterRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("range must look like A..B, got '" + text + "'");
  ParameterRange r;
  try {
    std::size_t used = 0;
    r.from = std::stol(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument("");
    r.to = std::stol(text.substr(dots + 2), &used);
    if (used != text.size() - dots - 2) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("range must look like A..B, got '" + text + "'");
  }
  if (r.from > r.to) throw std::invalid_argument("empty range '" + text + "'");
  return r;
}

ExperimentConfig parse_config(std::string_view text) {
  const auto entries = parse_key_values(text);
  if (entries.empty() || entries.front().key != "schema") {
    throw SchemaError(entries.empty() ? 0 : entries.front().line,
                      std::string("first entry must be 'schema = ") + kSchemaTag + "'");
  }
  if (entries.front().value != kSchemaTag) {
    throw SchemaError(entries.front().line,
                      "unsupported schema '" + entries.front().value + "' (expected " + kSchemaTag + ")");
  }
  ExperimentConfig c;
  ConstructionSpec spec;
  bool named = false;
  int construction_line = 0;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const KeyValue& kv = entries[i];
    if (is_system_key(kv.key)) {
      c.inline_system.push_back(kv);
      continue;
    }
    static const std::set<std::string> repeatable{"subset"};
    if (!repeatable.count(kv.key) && !seen.insert(kv.key).second) {
      throw SchemaError(kv.line, "duplicate key '" + kv.key + "'");
    }
    if (kv.key == "schema") {
      throw SchemaError(kv.line, "duplicate key 'schema'");
    } else if (kv.key == "kind") {
      const auto& kinds = construction_kinds();
      if (std::find(kinds.begin(), kinds.end(), kv.value) == kinds.end()) {
        throw SchemaError(kv.line, "unknown kind '" + kv.value + "'");
      }
      spec.kind = kv.value;
      named = true;
      construction_line = kv.line;
    } else if (kv.key == "k") {
      spec.k = integer(kv);
    } else if (kv.key == "n") {
      spec.n = integer(kv);
    } else if (kv.key == "m") {
      spec.m = integer(kv);
    } else if (kv.key == "exact") {
      spec.exact = boolean(kv);
    } else if (kv.key == "shape") {
      spec.shape = kv.value;
    } else if (kv.key == "arms") {
      spec.arms = kv.value;
    } else if (kv.key == "subset") {
      c.subsets.push_back(words(kv.value));
      if (c.subsets.back().empty()) throw SchemaError(kv.line, "empty subset");
    } else if (kv.key == "analyses") {
      c.bounds = c.bowen = c.classify = false;
      for (const auto& w : words(kv.value)) {
        if (w == "bounds") {
          c.bounds = true;
        } else if (w == "bowen") {
          c.bowen = true;
        } else if (w == "classify") {
          c.classify = true;
        } else {
          throw SchemaError(kv.line, "unknown analysis '" + w + "' (bounds, bowen, classify)");
        }
      }
    } else if (kv.key == "eps") {
      try {
        c.eps = parse_fraction_list(kv.value);
      } catch (const std::invalid_argument& e) {
        throw SchemaError(kv.line, std::string("'eps': ") + e.what());
      }
    } else if (kv.key == "nmax") {
      c.nmax = integer(kv);
      if (c.nmax < 1) throw SchemaError(kv.line, "'nmax' must be positive");
    } else if (kv.key == "grid") {
      c.grid = positive_fraction(kv, kv.value);
      if (c.grid > 1) throw SchemaError(kv.line, "'grid' must be at most 1");
    } else if (kv.key == "periodic_eps") {
      c.periodic_eps = positive_fraction(kv, kv.value);
    } else if (kv.key == "range") {
      try {
        c.range = parse_range(kv.value);
      } catch (const std::invalid_argument& e) {
        throw SchemaError(kv.line, e.what());
      }
    } else {
      throw SchemaError(kv.line, "unknown key '" + kv.key + "'");
    }
  }
  if (named && !c.inline_system.empty()) {
    throw SchemaError(construction_line, "config has both 'kind' and an inline system; use one");
  }
  if (!named && c.inline_system.empty()) throw SchemaError(0, "config names no system ('kind' or inline keys)");
  if (named) c.construction = spec;
  return c;
}

System resolve_system(const ExperimentConfig& config) {
  ConstructionSpec inline_spec;
  inline_spec.kind = "inline";
  System s = config.construction ? build_system(*config.construction)
                                 : System{inline_spec, parse_system(config.inline_system), {}, {}, "inline system"};
  if (config.subsets.empty()) return s;
  s.subsets.clear();
  for (const auto& names : config.subsets) {
    std::vector<std::size_t> ids;
    for (const auto& name : names) {
      std::size_t i = 0;
      while (i < s.map.piece_count() && s.map.piece(i).name != name) ++i;
      if (i == s.map.piece_count()) throw SchemaError(0, "subset names unknown piece '" + name + "'");
      ids.push_back(i);
    }
    s.subsets.push_back(std::move(ids));
  }
  return s;
}

}  // namespace entrolab
