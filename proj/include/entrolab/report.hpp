#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "entrolab/config.hpp"
#include "entrolab/constructions.hpp"
#include "entrolab/entropy_lab.hpp"

namespace entrolab {

using Json = nlohmann::ordered_json;

// Subsets tested by analyses: the system's own, then every threshold subset
// not already listed.
std::vector<std::vector<std::size_t>> tested_subsets(const System& s);

ReportParams report_params(const ExperimentConfig& config, const System& s);

Json provenance_json(const ExperimentConfig& config);
Json system_json(const System& s);
Json report_json(const System& s, const EntropyReport& r, const ExperimentConfig& config);

struct SweepRow {
  long parameter = 0;
  double perron_entropy = 0;
  double plipschitz_bound = 0;
  bool has_bowen = false;
  double bowen_estimate = 0;
  bool exact = false;
  Rational theta;
  bool has_example = false;  // arr_example only
  double display_bound = 0;
  double reference_bound = 0;
};

SweepRow sweep_row(const System& s, const EntropyReport& r);
std::string sweep_csv(const std::string& kind, std::vector<SweepRow> rows);

// Shortest round-trip text for a double ("%.17g" trimmed).
std::string number_text(double x);

}  // namespace entrolab
