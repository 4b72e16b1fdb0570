#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "agentattack/alltime_planner.hpp"
#include "agentattack/instant_planner.hpp"
#include "agentattack/mdp.hpp"
#include "agentattack/rng.hpp"

namespace agentattack {

enum class PolicyKind { optimal, random, none };

const char* to_string(PolicyKind kind);

/// Uniform draw from enumerate_feasible_attacks (no-attack included).
JointAttackAction random_alltime_baseline(const DPState& state, int num_states, const CostMatrix& costs,
                                          const BudgetGrid& grid, Rng& rng,
                                          AttackEnumeration mode = AttackEnumeration::all_subsets);

/// Two recipients only: attacker 1 puts its whole budget on a fair-coin
/// chosen recipient, attacker 2 its whole budget on the other one.
AllocationMatrix random_instant_baseline(std::size_t n_recipients, std::span<const double> budget,
                                         Rng& rng);

/// Attack behaviour for the all-time game.
class AllTimeAttackPolicy {
 public:
  static AllTimeAttackPolicy optimal(const AllTimeTables& tables);
  static AllTimeAttackPolicy random(const CostMatrix& costs, const BudgetGrid& grid, int num_states,
                                    AttackEnumeration mode = AttackEnumeration::all_subsets);
  static AllTimeAttackPolicy none(const CostMatrix& costs, const BudgetGrid& grid);

  PolicyKind kind() const noexcept { return kind_; }
  const CostMatrix& costs() const noexcept { return costs_; }
  const BudgetGrid& grid() const noexcept { return grid_; }

  /// Attack distribution at integer index t.
  std::vector<std::pair<JointAttackAction, double>> distribution(int t, const DPState& state) const;
  JointAttackAction sample(int t, const DPState& state, Rng& rng) const;

 private:
  AllTimeAttackPolicy(PolicyKind kind, CostMatrix costs, BudgetGrid grid, int num_states)
      : kind_(kind), costs_(std::move(costs)), grid_(std::move(grid)), num_states_(num_states) {}
  PolicyKind kind_;
  CostMatrix costs_;
  BudgetGrid grid_;
  int num_states_;
  AttackEnumeration mode_ = AttackEnumeration::all_subsets;
  const AllTimeTables* tables_ = nullptr;
};

/// Allocation behaviour for the instant game.
class InstantAttackPolicy {
 public:
  static InstantAttackPolicy optimal(const InstantTables& tables, std::vector<double> budget);
  static InstantAttackPolicy random(std::vector<double> budget);
  static InstantAttackPolicy none(std::vector<double> budget);

  PolicyKind kind() const noexcept { return kind_; }
  const std::vector<double>& budget() const noexcept { return budget_; }

  std::vector<std::pair<AllocationMatrix, double>> distribution(int t, std::span<const int> actual) const;
  AllocationMatrix sample(int t, std::span<const int> actual, Rng& rng) const;

 private:
  InstantAttackPolicy(PolicyKind kind, std::vector<double> budget)
      : kind_(kind), budget_(std::move(budget)) {}
  PolicyKind kind_;
  std::vector<double> budget_;
  const InstantTables* tables_ = nullptr;
};

using AttackRecord = std::variant<JointAttackAction, AllocationMatrix>;

struct EpisodeTrace {
  /// true states at integer indices 0..T
  std::vector<JointState> actual;
  /// observed states at half indices 0.5..T-0.5
  std::vector<JointState> delusion;
  /// leftover budget at integer indices 0..T (refilled amount in instant mode)
  std::vector<std::vector<double>> budget;
  std::vector<AttackRecord> attacks;
  std::vector<double> step_reward;
  double total_reward = 0.0;
};

EpisodeTrace simulate_episode(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              const AllTimeAttackPolicy& attacker, std::span<const int> initial,
                              Rng& rng);
EpisodeTrace simulate_episode(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              const InstantAttackPolicy& attacker, const EffortCostModel& model,
                              std::span<const int> initial, Rng& rng);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  /// cumulative reward means and standard errors at indices 0..T
  std::vector<double> cumulative_mean;
  std::vector<double> cumulative_standard_error;
};

/// Episode e runs on Rng(seed).split(e); results are reduced in episode order.
MonteCarloEstimate monte_carlo_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                     const AllTimeAttackPolicy& attacker,
                                     std::span<const int> initial, std::size_t episodes,
                                     std::uint64_t seed);
MonteCarloEstimate monte_carlo_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                     const InstantAttackPolicy& attacker,
                                     const EffortCostModel& model, std::span<const int> initial,
                                     std::size_t episodes, std::uint64_t seed);

/// Exact expected cumulative group reward at indices 0..T, by pushing the
/// state distribution forward through attack and move phases.
std::vector<double> exact_curve(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                const AllTimeAttackPolicy& attacker, std::span<const int> initial);
std::vector<double> exact_curve(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                const InstantAttackPolicy& attacker, const EffortCostModel& model,
                                std::span<const int> initial);

}  // namespace agentattack
