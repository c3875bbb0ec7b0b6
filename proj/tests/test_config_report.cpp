#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "teichflow/config.hpp"
#include "teichflow/errors.hpp"
#include "teichflow/report.hpp"

using namespace teichflow;
using testing::uniform;

namespace {

std::size_t count_fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults round-trip") {
  RunConfig c = RunConfig::defaults();
  CHECK(RunConfig::parse(c.serialize()) == c);
}

TEST_CASE("mutated configs round-trip") {
  const char* slopes[] = {"a0=3,const:3", "a0=2,periodic:3,4,5", "a0=3,spiked:base=3,positions=2k+1,values=5^k",
                          "a0=4,spiked:base=4,positions=3k,values=2^(k+2)"};
  for (int trial = 0; trial < 50; ++trial) {
    RunConfig c = RunConfig::defaults();
    c.set("theta1", slopes[static_cast<int>(uniform(0, 4))]);
    c.set("theta2", slopes[static_cast<int>(uniform(0, 4))]);
    c.set("s", std::to_string(static_cast<int>(uniform(1, 9))) + "/10");
    c.k_max = static_cast<long>(uniform(1, 8));
    c.delta = uniform(0.01, 0.5);
    c.target_width = uniform(1e-40, 1e-20);
    c.t_min = uniform(0.0, 10.0);
    c.control = uniform(0, 1) < 0.5;
    c.format = uniform(0, 1) < 0.5 ? "csv" : "json";
    c.out = "out_" + std::to_string(trial);
    c.jobs = static_cast<unsigned>(uniform(0, 9));
    CHECK(RunConfig::parse(c.serialize()) == c);
  }
}

TEST_CASE("parsing") {
  RunConfig c = RunConfig::parse("# comment\n\n  k_max = 3  # trailing\ntheta = const:3\ns = 2/4\n");
  CHECK(c.k_max == 3);
  CHECK(c.theta == "a0=0,const:3");
  CHECK(c.s == "1/2");
  CHECK_THROWS_AS(RunConfig::parse("nonsense = 1"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("k_max = three"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("just words"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("theta1 = const:"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/teichflow.conf"), ConfigError);
}

TEST_CASE("validation") {
  RunConfig c = RunConfig::defaults();
  CHECK_NOTHROW(c.validate());
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig::defaults();
  c.bits = 16;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig::defaults();
  c.t_min = 9.0;
  c.t_max = 5.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("scenario from a config") {
  RunConfig c = RunConfig::defaults();
  Scenario scn = c.scenario();
  CHECK(scn.spiked_sheet == 2);
  CHECK_NOTHROW(scn.validate());
  std::swap(c.theta1, c.theta2);
  CHECK(c.scenario().spiked_sheet == 1);
  c = RunConfig::defaults();
  c.control = true;
  CHECK(c.scenario().control);
}

TEST_CASE("bits from the environment") {
  ::setenv("TEICHFLOW_BITS", "384", 1);
  CHECK(RunConfig::defaults().bits == 384);
  ::unsetenv("TEICHFLOW_BITS");
  CHECK(RunConfig::defaults().bits == 256);
}

}  // TEST_SUITE

TEST_SUITE("report") {

TEST_CASE("directed formatting") {
  Interval third = Interval::rational(1, 3, 256);
  CHECK(std::stod(format_down(third.lo())) <= std::stod(format_up(third.hi())));
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("convergent table") {
  auto rows = convergent_rows(ContinuedFraction::parse("a0=3,const:3"), 3, Precision{});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].c.p == 3);
  CHECK(rows[3].c.p == 109);
  for (const auto& r : rows) {
    REQUIRE(r.gap.has_value());
    CHECK(r.bracket_lo.certainly_less(*r.gap));
    CHECK(r.gap->certainly_less(r.bracket_hi));
  }
  auto lines = lines_of(convergents_csv(rows));
  CHECK(lines[0] == "n,p,q,gap_lo,gap_mid,gap_hi,bracket_lo,bracket_hi,error");
  CHECK(lines[4].rfind("3,109,33,", 0) == 0);
  auto j = nlohmann::json::parse(convergents_json(rows));
  CHECK(j["convergents"].size() == 4);
  CHECK(j["convergents"][1]["p"] == "10");
}

TEST_CASE("trace CSV schema") {
  CHECK(std::string(kTraceCsvHeader) ==
        "t_lo,t_hi,parity,k,sheet1_q,sheet1_p,sheet2_q,sheet2_p,a1_lo,a1_hi,a2_lo,a2_hi,"
        "ratio_lo,ratio_mid,ratio_hi,w1_lo,w1_mid,w1_hi,mod_bound,ct_bound,flags");
  Scenario scn = Scenario::default_scenario();
  scn.k_max = 1;
  scn.samples = 1;
  auto tr = trace(scn, 2);
  auto lines = lines_of(trace_csv(tr));
  REQUIRE(lines.size() == tr.size() + 1);
  for (const auto& l : lines) CHECK(count_fields(l) == 21);
  auto j = nlohmann::json::parse(trace_json(tr, scn));
  CHECK(j["points"].size() == tr.size());
  CHECK(j["points"][0]["ratio"].contains("mid"));
  CHECK(j["points"][0]["sheet1"].contains("candidates"));
  std::string plot = trace_plot(tr);
  CHECK(plot.find("# w1") != std::string::npos);
}

TEST_CASE("shortest table") {
  Slope probe(ContinuedFraction::parse("a0=3,const:3"), 8);
  const double hi = min_time(probe, 6).value().hi_up();
  auto rows = shortest_rows(ContinuedFraction::parse("a0=3,const:3"), 3.6, hi, 12, Rational::parse("1/2"), 1000000,
                            Precision{});
  int tagged = 0;
  for (const auto& r : rows) {
    REQUIRE(r.predicted.has_value());
    REQUIRE(r.oracle.has_value());
    CHECK(*r.oracle == LatticeVector::of(*r.predicted));
    CHECK(r.second_in_candidates);
    tagged += r.t.tag() == TimeTag::min_time ? 1 : 0;
  }
  CHECK(tagged == 6);
  auto low = shortest_rows(ContinuedFraction::parse("a0=3,const:3"), 0.0, 0.0, 1, Rational::parse("1/2"), 1000,
                           Precision{});
  REQUIRE(low.size() == 1);
  CHECK(std::find(low[0].flags.begin(), low[0].flags.end(), "below_threshold") != low[0].flags.end());
  CHECK(low[0].oracle_tie);
  auto lines = lines_of(shortest_csv(rows));
  CHECK(lines.size() == rows.size() + 1);
  CHECK(nlohmann::json::parse(shortest_json(rows))["shortest"].size() == rows.size());
}

}  // TEST_SUITE
