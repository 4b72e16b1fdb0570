#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agentattack/errors.hpp"
#include "agentattack/experiment.hpp"
#include "agentattack/scenario.hpp"

using namespace agentattack;

namespace {

const std::filesystem::path kScenarios = AGENTATTACK_SCENARIO_DIR;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::size_t count_lines(const std::string& csv, const std::string& needle) {
  std::size_t n = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("bundled scenarios load") {
  const auto a = load_scenario(kScenarios / "circle-alltime.yaml");
  CHECK(a.mode == AttackMode::all_time);
  CHECK(a.mdp.horizon == 5);
  CHECK(a.budgets == std::vector<double>{10, 10});
  REQUIRE(a.costs.has_value());
  CHECK((*a.costs)(0, 0) == 3);
  const auto b = load_scenario(kScenarios / "circle-instant.yaml");
  CHECK(b.mode == AttackMode::instant);
  CHECK(b.attacker_locations == std::vector<int>{0, 2});
  CHECK(b.epsilon.value() == 1e-4);
  CHECK(validate_scenario(a).empty());
  CHECK(validate_scenario(b).empty());
}

TEST_CASE("config errors are reported per field") {
  const auto text = read_file(kScenarios / "circle-instant.yaml");
  const auto bad_row = replace(text, "[0.8, 0.2, 0.0], [0.1, 0.1, 0.8]", "[0.8, 0.2, 0.1], [0.1, 0.1, 0.8]");
  const auto v = violations_of(bad_row);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("mdp.") == 0);
  CHECK(v[0].find("transition(2,1)") != std::string::npos);

  CHECK(mentions(violations_of(replace(text, "  epsilon: 0.0001\n", "")), "attackers.epsilon required"));
  CHECK(mentions(violations_of(replace(text, "budgets: [0.8, 0.5]", "budgets: [0.8, -0.5]")), "attackers.budgets"));
  CHECK(mentions(violations_of(replace(text, "locations: [0, 2]", "locations: [0, 7]")), "attackers.locations"));
  CHECK(mentions(violations_of(replace(text, "initial_states: [0, 0]", "initial_states: [0]")),
                 "mdp.initial_states"));

  try {
    parse_scenario("mdp: [unterminated");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(e.kind() == "parse");
  }
  CHECK_THROWS_AS(load_scenario(kScenarios / "missing.yaml"), Error);
}

TEST_CASE("emit and parse round-trip") {
  for (const char* name : {"circle-alltime.yaml", "circle-instant.yaml"}) {
    const auto cfg = load_scenario(kScenarios / name);
    const auto once = emit_scenario(cfg);
    const auto again = emit_scenario(parse_scenario(once));
    CHECK(once == again);
  }
}

TEST_CASE("experiment outputs") {
  auto cfg = load_scenario(kScenarios / "circle-alltime.yaml");
  RunOptions opts;
  opts.episodes = 500;
  const auto bundle = run_experiment(cfg, opts);
  REQUIRE(bundle.policies.size() == 3);
  CHECK(bundle.policies[0].policy == PolicyKind::optimal);
  const auto csv = curves_csv(bundle);
  CHECK(csv.rfind("time_index,policy,cumulative_expected_reward,estimator\n", 0) == 0);
  for (const char* p : {",optimal,", ",random,", ",none,"}) {
    CHECK(count_lines(csv, std::string(p)) == 12);
  }
  CHECK(count_lines(csv, ",exact") == 18);
  CHECK(count_lines(csv, ",monte_carlo") == 18);
  CHECK(curves_csv(run_experiment(cfg, opts)) == csv);

  const auto summary = summary_text(bundle);
  CHECK(summary.find("optimal/random = 0.") != std::string::npos);
  CHECK(summary.find("optimal/none = 0.") != std::string::npos);
  CHECK(tables_json(bundle).find("\"value_tables\"") != std::string::npos);
}

TEST_CASE("degenerate experiments") {
  SUBCASE("empty horizon") {
    auto cfg = load_scenario(kScenarios / "circle-alltime.yaml");
    cfg.mdp.horizon = 0;
    RunOptions opts;
    opts.episodes = 10;
    const auto bundle = run_experiment(cfg, opts);
    for (const auto& c : bundle.curves) CHECK(c.values == std::vector<double>{0.0});
    CHECK_FALSE(bundle.ratio_optimal_random.has_value());
    CHECK_FALSE(bundle.ratio_optimal_none.has_value());
    CHECK(summary_text(bundle).find("optimal/random = undefined") != std::string::npos);
  }
  SUBCASE("zero budget") {
    for (const char* name : {"circle-alltime.yaml", "circle-instant.yaml"}) {
      auto cfg = load_scenario(kScenarios / name);
      cfg.budgets = {0, 0};
      RunOptions opts;
      opts.monte_carlo = false;
      const auto bundle = run_experiment(cfg, opts);
      CHECK(bundle.find(PolicyKind::optimal)->exact == bundle.find(PolicyKind::none)->exact);
      CHECK(bundle.ratio_optimal_none.value() == 1.0);
    }
  }
}

TEST_CASE("format_real") {
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(8.0) == "8");
  CHECK(format_real(0.925623) == "0.925623");
}
