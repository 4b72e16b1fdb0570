#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "agentattack/attack_model.hpp"
#include "agentattack/dps_space.hpp"
#include "agentattack/mdp.hpp"

namespace agentattack {

enum class AttackEnumeration {
  /// every nonempty attacker subset per attacked recipient
  all_subsets,
  /// at most one attacker per recipient (smaller action set)
  single_attacker,
};

/// Every feasible joint attack from true states `actual` under leftover
/// `budget`. Order: recipient 0 varies slowest; per recipient the no-attack
/// option comes first, then targets ascending, then attacker subsets by
/// bitmask. The no-attack action is always first.
std::vector<JointAttackAction> enumerate_feasible_attacks(
    std::span<const int> actual, int num_states, const CostMatrix& costs,
    std::span<const double> budget, AttackEnumeration mode = AttackEnumeration::all_subsets);

std::vector<JointAttackAction> enumerate_feasible_attacks(
    const DPState& state, int num_states, const CostMatrix& costs, const BudgetGrid& grid,
    AttackEnumeration mode = AttackEnumeration::all_subsets);

/// Distribution over the post-attack state (time t - 0.5) given the DP state
/// at t - 1 and a joint attack.
class AttackOutcomeModel {
 public:
  virtual ~AttackOutcomeModel() = default;
  virtual std::vector<std::pair<DPState, double>> outcomes(const DPState& state,
                                                           const JointAttackAction& action,
                                                           const Matrix<long>& cost_units) const = 0;
};

/// Attacks always succeed: an attacked recipient observes its target.
class DeterministicAttackOutcome final : public AttackOutcomeModel {
 public:
  std::vector<std::pair<DPState, double>> outcomes(const DPState& state,
                                                   const JointAttackAction& action,
                                                   const Matrix<long>& cost_units) const override;
};

/// Deterministic attack phase: true states kept, attacked recipients see their
/// target, unattacked ones see the truth, spend is removed from the budget.
/// Throws InfeasibleAttackError if the action is not affordable or not
/// canonically encoded.
DPState attack_transition(const DPState& state, const JointAttackAction& action,
                          const Matrix<long>& cost_units);

/// Expected (value + group reward) over the move phase from the post-attack
/// state `half`. `next_row` is the value row at the following integer index,
/// indexed by `index`; successors keep the delusion and budget of `half`.
double move_backup(const DPSIndex& index, std::span<const double> next_row, const DPState& half,
                   const TimeIndexedPolicy& policy, int policy_t, const RecipientMDP& mdp);

struct AllTimeOptions {
  /// Budget grid step; defaults to BudgetGrid::default_step.
  std::optional<double> budget_step;
  AttackEnumeration enumeration = AttackEnumeration::all_subsets;
  /// Null means DeterministicAttackOutcome.
  std::shared_ptr<const AttackOutcomeModel> outcome_model;
};

/// Minimal possible values and the minimizing attacks for every DP state.
struct AllTimeTables {
  DPSIndex index;
  CostMatrix costs;
  /// value[t][k] for integer indices t = 0..T
  std::vector<std::vector<double>> value;
  /// half_value[t-1][k] for the post-attack index t - 0.5, t = 1..T
  std::vector<std::vector<double>> half_value;
  /// best_attack[t][k] for t = 0..T-1
  std::vector<std::vector<JointAttackAction>> best_attack;

  int horizon() const noexcept { return static_cast<int>(best_attack.size()); }
  const BudgetGrid& grid() const { return *index.grid(); }
  double value_at(int t, const DPState& state) const { return value.at(t).at(index.index_of(state)); }
  const JointAttackAction& attack_at(int t, const DPState& state) const {
    return best_attack.at(t).at(index.index_of(state));
  }
  /// DP state at index 0 with truthful observations and full budgets.
  DPState initial_state(std::span<const int> actual) const;
};

/// Backward dynamic program over DP states for the all-time budget case.
AllTimeTables plan_alltime(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                           const CostMatrix& costs, std::span<const double> initial_budget,
                           const AllTimeOptions& options = {});

}  // namespace agentattack
