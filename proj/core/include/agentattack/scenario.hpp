#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentattack/alltime_planner.hpp"
#include "agentattack/attack_model.hpp"
#include "agentattack/instant_planner.hpp"
#include "agentattack/mdp.hpp"
#include "agentattack/rollout.hpp"

namespace agentattack {

enum class AttackMode { all_time, instant };

const char* to_string(AttackMode mode);

/// Everything needed to plan, simulate and compare one experiment.
/// The YAML grammar is described in the README.
struct ScenarioConfig {
  std::string name;

  // mdp
  RecipientMDP mdp;
  JointState initial_states;

  // attackers
  AttackMode mode = AttackMode::all_time;
  std::vector<double> budgets;
  std::optional<CostMatrix> costs;
  std::optional<double> budget_step;
  AttackEnumeration enumeration = AttackEnumeration::all_subsets;
  std::vector<int> attacker_locations;
  std::optional<double> epsilon;
  StepSolverOptions solver;

  // experiment
  std::vector<PolicyKind> baselines{PolicyKind::random, PolicyKind::none};
  std::size_t episodes = 10000;
  std::uint64_t seed = 1;

  std::size_t attackers() const noexcept { return budgets.size(); }
  EffortCostModel effort_model() const;
};

/// Parses and validates YAML text. Throws ValidationError with kind "parse"
/// for malformed input and kind "config" with one message per violation
/// (each prefixed by its field path) otherwise.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Field-level checks on an in-memory config; empty when valid.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

/// YAML text that parse_scenario maps back to an equal config.
std::string emit_scenario(const ScenarioConfig& config);

}  // namespace agentattack
