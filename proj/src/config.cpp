#include "teichflow/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "teichflow/errors.hpp"

namespace teichflow {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

long to_long(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonical_slope(const std::string& key, const std::string& v) {
  try {
    return ContinuedFraction::parse(v).to_string();
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.bits = Precision::from_env(Precision{c.bits, c.target_width}).bits;
  return c;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "theta1") theta1 = canonical_slope(key, v);
  else if (key == "theta2") theta2 = canonical_slope(key, v);
  else if (key == "theta") theta = canonical_slope(key, v);
  else if (key == "s") s = Rational::parse(v).to_string();
  else if (key == "k_max") k_max = to_long(key, v);
  else if (key == "samples") samples = to_long(key, v);
  else if (key == "control") control = to_bool(key, v);
  else if (key == "delta") delta = to_double(key, v);
  else if (key == "bits") bits = static_cast<int>(to_long(key, v));
  else if (key == "target_width") target_width = to_double(key, v);
  else if (key == "oracle_cap") oracle_cap = to_long(key, v);
  else if (key == "n") n = to_long(key, v);
  else if (key == "t_min") t_min = to_double(key, v);
  else if (key == "t_max") t_max = to_double(key, v);
  else if (key == "t_count") t_count = to_long(key, v);
  else if (key == "format") format = v;
  else if (key == "out") out = v;
  else if (key == "jobs") {
    long j = to_long(key, v);
    if (j < 0) throw ConfigError("jobs must be non-negative");
    jobs = static_cast<unsigned>(j);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c = defaults();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "theta1 = " << theta1 << "\n"
    << "theta2 = " << theta2 << "\n"
    << "s = " << s << "\n"
    << "k_max = " << k_max << "\n"
    << "samples = " << samples << "\n"
    << "control = " << (control ? "true" : "false") << "\n"
    << "delta = " << exact(delta) << "\n"
    << "bits = " << bits << "\n"
    << "target_width = " << exact(target_width) << "\n"
    << "oracle_cap = " << oracle_cap << "\n"
    << "theta = " << theta << "\n"
    << "n = " << n << "\n"
    << "t_min = " << exact(t_min) << "\n"
    << "t_max = " << exact(t_max) << "\n"
    << "t_count = " << t_count << "\n"
    << "format = " << format << "\n"
    << "out = " << out << "\n"
    << "jobs = " << jobs << "\n";
  return o.str();
}

void RunConfig::validate() const {
  precision().validate();
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json, got '" + format + "'");
  if (n < 0) throw ConfigError("n must be non-negative");
  if (t_count < 1) throw ConfigError("t_count must be positive");
  if (t_max != 0.0 && t_min > t_max) throw ConfigError("t_min exceeds t_max");
  if (oracle_cap < 1) throw ConfigError("oracle_cap must be positive");
}

Precision RunConfig::precision() const { return Precision{bits, target_width}; }

Scenario RunConfig::scenario() const {
  Scenario scn;
  scn.cfg.theta1 = ContinuedFraction::parse(theta1);
  scn.cfg.theta2 = ContinuedFraction::parse(theta2);
  scn.cfg.s = Rational::parse(s);
  scn.k_max = k_max;
  scn.samples = samples;
  scn.prec = precision();
  scn.oracle_cap = oracle_cap;
  scn.delta = delta;
  // The spiked sheet is whichever slope carries the spikes.
  if (scn.cfg.theta1.kind() == ContinuedFraction::Kind::spiked &&
      scn.cfg.theta2.kind() != ContinuedFraction::Kind::spiked) {
    scn.spiked_sheet = 1;
  }
  return control ? scn.as_control() : scn;
}

unsigned RunConfig::effective_jobs() const {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace teichflow
