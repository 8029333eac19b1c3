#include "entrolab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "CLI11.hpp"

#include "entrolab/config.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/report.hpp"
#include "entrolab/verify.hpp"

namespace entrolab {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string eps;
  long nmax = 0;
  std::string grid;
  std::string range;
  std::string kind;
  std::string analyses;
  std::string suite = "all";
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(0, "cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void set_analyses(ExperimentConfig& c, const std::string& list) {
  std::string spaced = list;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  c.bounds = c.bowen = c.classify = false;
  for (const auto& w : words(spaced)) {
    if (w == "bounds") {
      c.bounds = true;
    } else if (w == "bowen") {
      c.bowen = true;
    } else if (w == "classify") {
      c.classify = true;
    } else {
      throw ParameterError("unknown analysis '" + w + "' (bounds, bowen, classify)");
    }
  }
}

// Config file, then flags on top.
ExperimentConfig load(const Options& o) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = parse_config(read_file(o.config));
  } else if (o.kind.empty()) {
    throw ParameterError("--config is required");
  }
  if (!o.kind.empty()) {
    const auto& kinds = construction_kinds();
    if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end()) {
      throw ParameterError("unknown kind '" + o.kind + "'");
    }
    if (!c.construction) {
      if (!c.inline_system.empty()) throw ParameterError("--kind conflicts with the config's inline system");
      c.construction = ConstructionSpec{};
      // Sweeps default to the cheap analyses; ask for bowen explicitly.
      if (o.config.empty()) c.bowen = false;
    }
    c.construction->kind = o.kind;
  }
  try {
    if (!o.eps.empty()) c.eps = parse_fraction_list(o.eps);
    if (!o.grid.empty()) {
      c.grid = parse_rational(o.grid);
      if (c.grid <= 0 || c.grid > 1) throw std::invalid_argument("--grid must lie in (0, 1]");
    }
    if (!o.range.empty()) c.range = parse_range(o.range);
  } catch (const std::invalid_argument& e) {
    throw ParameterError(e.what());
  }
  if (o.nmax != 0) {
    if (o.nmax < 1) throw ParameterError("--nmax must be positive");
    c.nmax = o.nmax;
  }
  if (!o.analyses.empty()) set_analyses(c, o.analyses);
  return c;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

void emit(const Options& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
  } else {
    write_atomic(o.out, content);
  }
}

int cmd_build(const Options& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  const System s = resolve_system(c);
  Json j;
  j["provenance"] = Json{{"schema", kSchemaTag}, {"version", kVersion}};
  j["system"] = system_json(s);
  j["description"] = describe(s);
  emit(o, json_text(j), out);
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  const System s = resolve_system(c);
  const EntropyReport r = devaney_report(s.map, report_params(c, s));
  emit(o, json_text(report_json(s, r, c)), out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  if (!c.construction) throw ParameterError("sweep needs a named construction (kind), not an inline system");
  if (!c.range) throw ParameterError("sweep needs a parameter range (--range A..B or 'range' in the config)");
  const std::string param = sweep_parameter(c.construction->kind);
  std::vector<long> values;
  for (long v = c.range->from; v <= c.range->to; ++v) values.push_back(v);

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < values.size();) {
      try {
        ExperimentConfig point = c;
        ConstructionSpec& spec = *point.construction;
        (param == "n" ? spec.n : param == "m" ? spec.m.emplace() : spec.k) = values[i];
        point.subsets.clear();
        const System s = resolve_system(point);
        rows[i] = sweep_row(s, devaney_report(s.map, report_params(point, s)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(worker_count(), values.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  // Report the error of the smallest failing parameter, whatever the scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  emit(o, sweep_csv(c.construction->kind, rows), out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto results = run_suite(o.suite, o.seed);
  std::ostringstream log;
  std::size_t failed = 0;
  for (const auto& r : results) {
    log << (r.ok ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    failed += !r.ok;
  }
  log << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " properties passed\n";
  emit(o, log.str(), out);
  return failed ? kExitVerifyFailed : kExitOk;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("ENTROLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw ParameterError("cannot write '" + tmp.string() + "'");
    file << content;
    file.close();
    if (!file) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw ParameterError("cannot write '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ParameterError("cannot rename onto '" + path + "'");
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy laboratory for P-Lipschitz Markov maps on metric graphs", "entrolab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file (schema entrolab/1)");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto estimator = [&](CLI::App* sub) {
    sub->add_option("--eps", o.eps, "Bowen eps list, e.g. 1/16,1/32");
    sub->add_option("--nmax", o.nmax, "Largest orbit length n");
    sub->add_option("--grid", o.grid, "Sample spacing as a fraction of eps");
    sub->add_option("--analyses", o.analyses, "Subset of bounds,bowen,classify");
  };
  auto* build = app.add_subcommand("build", "Elaborate a system and print it as JSON");
  common(build);
  auto* analyze = app.add_subcommand("analyze", "Full entropy report as JSON");
  common(analyze);
  estimator(analyze);
  auto* sweep = app.add_subcommand("sweep", "One CSV row per parameter value");
  common(sweep);
  estimator(sweep);
  sweep->add_option("--kind", o.kind, "Construction kind (instead of, or overriding, the config)");
  sweep->add_option("--range", o.range, "Parameter range A..B");
  auto* verify = app.add_subcommand("verify", "Run property suites");
  verify->add_option("--suite", o.suite, "theta-oracle, bounds, metric, itinerary, classification, separated or all");
  verify->add_option("--seed", o.seed, "Seed of the random instances");
  verify->add_option("--out", o.out, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*build) return cmd_build(o, out);
    if (*analyze) return cmd_analyze(o, out);
    if (*sweep) return cmd_sweep(o, out);
    return cmd_verify(o, out);
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const SchemaError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    // Parameter, domain, precondition and unsupported-input errors.
    err << "error: " << e.what() << "\n";
    return kExitSchema;
  }
}

}  // namespace entrolab
