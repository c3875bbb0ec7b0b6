// teichflow: convergent tables, shortest-vector checks, ratio traces and the
// invariant suite for the two-slit-torus Teichmüller ray.
//
// Exit codes: 0 success, 1 invalid configuration, 2 computation error,
// 3 verification failure.

#include <deque>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "teichflow/config.hpp"
#include "teichflow/errors.hpp"
#include "teichflow/report.hpp"
#include "teichflow/verify.hpp"

using namespace teichflow;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("write failed for '" + path + "'");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) std::cout << text;
  else write_file(cfg.out, text);
}

std::string strip_extension(std::string base) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e = ext;
    if (base.size() > e.size() && base.compare(base.size() - e.size(), e.size(), e) == 0) {
      base.erase(base.size() - e.size());
      break;
    }
  }
  return base;
}

int cmd_convergents(const RunConfig& cfg) {
  auto rows = convergent_rows(ContinuedFraction::parse(cfg.theta), static_cast<std::size_t>(cfg.n), cfg.precision());
  emit(cfg, cfg.format == "json" ? convergents_json(rows) : convergents_csv(rows));
  for (const auto& r : rows)
    if (!r.error.empty()) return 2;
  return 0;
}

int cmd_shortest(const RunConfig& cfg) {
  ContinuedFraction cf = ContinuedFraction::parse(cfg.theta);
  Slope probe(cf, 8, cfg.precision());
  const double t_min = cfg.t_min != 0.0 ? cfg.t_min : shortest_threshold(probe).hi_up();
  const double t_max = cfg.t_max != 0.0 ? cfg.t_max : min_time(probe, 6).value().hi_up();
  if (t_min > t_max) throw ConfigError("t_min exceeds t_max");
  auto rows = shortest_rows(cf, t_min, t_max, cfg.t_count, Rational::parse(cfg.s), cfg.oracle_cap, cfg.precision());
  emit(cfg, cfg.format == "json" ? shortest_json(rows) : shortest_csv(rows));
  for (const auto& r : rows)
    for (const auto& f : r.flags)
      if (f.rfind("error", 0) == 0) return 2;
  return 0;
}

int cmd_trace(const RunConfig& cfg) {
  Scenario scn = cfg.scenario();
  scn.validate();
  auto points = trace(scn, cfg.effective_jobs());
  if (cfg.out.empty()) {
    std::cout << (cfg.format == "json" ? trace_json(points, scn) : trace_csv(points));
  } else {
    const std::string base = strip_extension(cfg.out);
    write_file(base + ".csv", trace_csv(points));
    write_file(base + ".json", trace_json(points, scn));
    write_file(base + ".plot.dat", trace_plot(points));
  }
  std::cerr << trace_summary(points);
  int errors = 0;
  for (const auto& p : points) {
    if (!p.error) continue;
    ++errors;
    std::cerr << "point t=" << format_double(p.t.value().mid()) << " (" << to_string(p.parity) << ", k=" << p.k
              << "): " << *p.error << "\n";
  }
  return errors == 0 ? 0 : 2;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyReport report = run_verify(cfg);
  emit(cfg, report.to_json());
  for (const auto& g : report.groups) std::cerr << g.name << ": " << to_string(g.status) << "\n";
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teichmüller rays on a two-slit-torus surface"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::deque<std::pair<std::string, std::optional<std::string>>> overrides;
  auto value_option = [&](const std::string& flag, const std::string& key, const std::string& help) {
    overrides.emplace_back(key, std::nullopt);
    app.add_option(flag, overrides.back().second, help);
  };
  app.add_option("--config", config_path, "key = value configuration file");
  value_option("--theta", "theta", "slope for convergents/shortest");
  value_option("--theta1", "theta1", "slope of sheet 1");
  value_option("--theta2", "theta2", "slope of sheet 2");
  value_option("--s", "s", "slit length as num/den");
  value_option("--n", "n", "last convergent index");
  value_option("--kmax", "k_max", "number of spikes traced");
  value_option("--samples", "samples", "generic times per gap");
  value_option("--bits", "bits", "MPFR precision");
  value_option("--oracle-cap", "oracle_cap", "oracle denominator cap and search window");
  value_option("--tmin", "t_min", "first time of the shortest grid (0: threshold)");
  value_option("--tmax", "t_max", "last time of the shortest grid (0: T_6)");
  value_option("--count", "t_count", "grid size for shortest");
  value_option("--out", "out", "output path (trace: base name for .csv/.json/.plot.dat)");
  value_option("--format", "format", "csv or json");
  value_option("--jobs", "jobs", "worker threads (0: all processors)");
  bool control = false;
  app.add_flag("--control", control, "replace spikes by the base element");

  app.add_subcommand("convergents", "convergent table with gap enclosures");
  app.add_subcommand("shortest", "predicted and exhaustive shortest vectors on a time grid");
  app.add_subcommand("trace", "length-ratio trace along the spike times");
  app.add_subcommand("verify", "invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  RunConfig cfg;
  try {
    cfg = config_path ? RunConfig::load(*config_path) : RunConfig::defaults();
    for (const auto& [key, value] : overrides)
      if (value) cfg.set(key, *value);
    if (control) cfg.control = true;
    cfg.validate();
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "convergents") return cmd_convergents(cfg);
    if (sub == "shortest") return cmd_shortest(cfg);
    if (sub == "trace") return cmd_trace(cfg);
    return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
