#include "entrolab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "entrolab/text_format.hpp"

namespace entrolab {

namespace {

Json names_of(const PLMarkovMap& f, const std::vector<std::size_t>& ids) {
  Json out = Json::array();
  for (std::size_t i : ids) out.push_back(f.piece(i).name);
  return out;
}

Json path_json(const MetricGraph& g, const Path& path) {
  Json out = Json::array();
  for (const auto& s : path) {
    out.push_back(Json{{"edge", g.edge(s.edge).id}, {"from", to_string(s.from)}, {"to", to_string(s.to)}});
  }
  return out;
}

Json params_json(const ConstructionSpec& spec) {
  Json p = Json::object();
  p["kind"] = spec.kind;
  const std::string& k = spec.kind;
  if (k == "tent" || k == "star_devaney" || k == "star_exact" || k == "free_arc_cycle") p["k"] = spec.k;
  if (k == "star_minimal" || k == "arr_example") p["n"] = spec.n;
  if (spec.m) p["m"] = *spec.m;
  if (k == "free_arc_cycle") p["exact"] = spec.exact;
  if (k == "two_piece_swap") p["shape"] = spec.shape;
  if (k == "star_devaney" || k == "star_exact") p["arms"] = spec.arms;
  return p;
}

Json matrix_json(const TransitionMatrix& m) {
  Json rows = Json::array(), laps = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    rows.push_back(m.rows()[i]);
    laps.push_back(m.laps()[i]);
  }
  return Json{{"rows", rows}, {"laps", laps}, {"covering", m.covering()}};
}

}  // namespace

std::string number_text(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::vector<std::size_t>> tested_subsets(const System& s) {
  auto out = s.subsets;
  for (auto& t : threshold_subsets(s.map)) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  }
  return out;
}

ReportParams report_params(const ExperimentConfig& config, const System& s) {
  ReportParams p;
  p.eps_list.clear();
  for (const auto& e : config.eps) p.eps_list.push_back(to_double(e));
  p.n_max = static_cast<std::size_t>(config.nmax);
  p.grid = to_double(config.grid);
  p.periodic_eps = config.periodic_eps;
  p.subsets = tested_subsets(s);
  p.bounds = config.bounds;
  p.bowen = config.bowen;
  p.classify = config.classify;
  return p;
}

Json provenance_json(const ExperimentConfig& config) {
  Json eps = Json::array();
  for (const auto& e : config.eps) eps.push_back(to_string(e));
  Json analyses = Json::array();
  if (config.bounds) analyses.push_back("bounds");
  if (config.bowen) analyses.push_back("bowen");
  if (config.classify) analyses.push_back("classify");
  return Json{{"schema", kSchemaTag},
              {"version", kVersion},
              {"analyses", analyses},
              {"eps", eps},
              {"nmax", config.nmax},
              {"grid", to_string(config.grid)},
              {"periodic_eps", to_string(config.periodic_eps)},
              {"bowen_burn_in", kBowenBurnIn},
              {"bowen_min_points", kBowenMinPoints},
              {"perron_tolerance", 1e-9}};
}

Json system_json(const System& s) {
  const PLMarkovMap& f = s.map;
  const MetricGraph& g = f.graph();
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back(Json{{"id", e.id}, {"u", g.vertex_name(e.u)}, {"v", g.vertex_name(e.v)}, {"length", to_string(e.length)}});
  }
  Json pieces = Json::array();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    pieces.push_back(Json{{"name", f.piece(i).name},
                          {"path", path_json(g, f.piece(i).path)},
                          {"length", to_string(f.piece_length(i))},
                          {"lipschitz", to_string(f.lipschitz_profile()[i])},
                          {"image", path_json(g, f.image(i))},
                          {"image_length", to_string(f.image_length(i))}});
  }
  Json boundary = Json::array();
  for (const auto& p : f.boundary()) boundary.push_back(g.describe(p));
  Json subsets = Json::array();
  for (const auto& sub : s.subsets) subsets.push_back(names_of(f, sub));
  Json constants = Json::object();
  for (const auto& [k, v] : s.constants) constants[k] = v;
  Json out;
  out["construction"] = params_json(s.spec);
  out["summary"] = s.summary;
  out["graph"] = Json{{"vertices", g.vertex_names()},
                      {"edges", edges},
                      {"total_length", to_string(g.total_length())},
                      {"diameter", to_string(g.diameter())}};
  out["pieces"] = pieces;
  out["boundary"] = boundary;
  out["global_lipschitz"] = to_string(f.global_lipschitz());
  out["transition"] = matrix_json(transition_matrix(f));
  out["subsets"] = subsets;
  out["constants"] = constants;
  out["system_text"] = format_system(f);
  return out;
}

Json report_json(const System& s, const EntropyReport& r, const ExperimentConfig& config) {
  const PLMarkovMap& f = s.map;
  Json out;
  out["provenance"] = provenance_json(config);
  out["system"] = Json{{"construction", params_json(s.spec)}, {"summary", s.summary}, {"pieces", f.piece_count()}};
  Json names = Json::array();
  for (std::size_t i = 0; i < f.piece_count(); ++i) names.push_back(f.piece(i).name);
  Json matrix = matrix_json(r.matrix);
  matrix["pieces"] = names;
  matrix["irreducible"] = r.irreducible;
  if (r.irreducible) matrix["period"] = r.period;
  matrix["primitive"] = r.primitive;
  out["transition"] = matrix;
  out["perron"] = Json{{"root", r.perron.value},
                       {"lower", r.perron.lower},
                       {"upper", r.perron.upper},
                       {"entropy", r.perron_entropy},
                       {"entropy_01", r.perron_entropy_01}};
  if (config.bounds) {
    Json bounds = Json::array();
    for (const auto& b : r.bounds) {
      bounds.push_back(Json{{"subset", names_of(f, b.theta.subset)},
                            {"theta", to_string(b.theta.theta)},
                            {"theta_value", to_double(b.theta.theta)},
                            {"witness", names_of(f, b.theta.witness)},
                            {"lipschitz_subset", to_string(b.lipschitz_subset)},
                            {"lipschitz_all", to_string(b.lipschitz_all)},
                            {"bound", b.value},
                            {"bound_single_theta", b.single_theta}});
    }
    out["bounds"] = Json{{"plipschitz_bound", r.plipschitz_bound}, {"lipschitz_bound", r.lipschitz_bound}, {"subsets", bounds}};
    if (s.spec.kind == "arr_example") {
      const ExampleBounds e = arr_example_bounds(s.spec.n);
      out["bounds"]["example"] = Json{{"theta", to_string(e.theta)},
                                      {"lambda", to_string(e.lambda)},
                                      {"L", to_string(e.big_l)},
                                      {"proposition", e.proposition},
                                      {"single_theta", e.single_theta},
                                      {"display", e.display},
                                      {"reference", e.reference}};
    }
  }
  if (r.has_bowen) {
    Json series = Json::array();
    for (const auto& sr : r.bowen.series) {
      Json counts = Json::array();
      for (const auto& p : sr.points) counts.push_back(Json{{"n", p.n}, {"count", p.count}, {"samples", p.samples}});
      Json item{{"eps", sr.eps}, {"fitted", sr.fitted}};
      if (sr.fitted) {
        item["slope"] = sr.slope;
        item["intercept"] = sr.intercept;
        item["residual"] = sr.residual;
        item["fit_range"] = Json::array({sr.fit_from, sr.fit_to});
        item["flat"] = sr.flat;
      }
      item["saturated_at"] = sr.saturated_at;
      item["counts"] = counts;
      series.push_back(item);
    }
    out["bowen"] = Json{{"estimate", r.bowen.estimate},
                        {"diagnostic", r.bowen.diagnostic},
                        {"n_max", r.bowen.n_max},
                        {"grid", r.bowen.grid},
                        {"max_samples", r.bowen.max_samples},
                        {"series", series}};
  }
  if (r.has_classification) {
    const Classification& c = r.classification;
    out["classification"] = Json{{"applicable", c.applicable},
                                 {"transitive", c.transitive},
                                 {"totally_transitive", c.totally_transitive},
                                 {"exact", c.exact},
                                 {"dense_periodic", c.dense_periodic},
                                 {"devaney", c.devaney},
                                 {"exactly_devaney", c.exactly_devaney},
                                 {"note", c.note},
                                 {"periodic", Json{{"eps", to_string(r.periodic.eps)},
                                                   {"cells", r.periodic.cells},
                                                   {"expands", r.periodic.expands},
                                                   {"certified", r.periodic.ok},
                                                   {"max_period", r.periodic.max_period}}}};
  }
  return out;
}

SweepRow sweep_row(const System& s, const EntropyReport& r) {
  SweepRow row;
  const std::string p = sweep_parameter(s.spec.kind);
  row.parameter = p == "n" ? s.spec.n : p == "m" ? s.spec.m.value_or(0) : s.spec.k;
  row.perron_entropy = r.perron_entropy;
  row.plipschitz_bound = r.plipschitz_bound;
  row.has_bowen = r.has_bowen;
  row.bowen_estimate = r.bowen.estimate;
  row.exact = r.has_classification && r.classification.exact;
  row.theta = r.bounds.empty() ? Rational(0) : r.bounds.front().theta.theta;
  if (s.spec.kind == "arr_example") {
    const ExampleBounds e = arr_example_bounds(s.spec.n);
    row.has_example = true;
    row.display_bound = e.display;
    row.reference_bound = e.reference;
  }
  return row;
}

std::string sweep_csv(const std::string& kind, std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.parameter < b.parameter; });
  const bool example = kind == "arr_example";
  std::ostringstream out;
  out << sweep_parameter(kind) << ",perron_entropy,plipschitz_bound,bowen_estimate,exact,theta";
  if (example) out << ",display_bound,reference_bound";
  out << "\n";
  for (const auto& r : rows) {
    out << r.parameter << "," << number_text(r.perron_entropy) << "," << number_text(r.plipschitz_bound) << ","
        << (r.has_bowen ? number_text(r.bowen_estimate) : "") << "," << (r.exact ? "true" : "false") << ","
        << to_string(r.theta);
    if (example) out << "," << number_text(r.display_bound) << "," << number_text(r.reference_bound);
    out << "\n";
  }
  return out.str();
}

}  // namespace entrolab
