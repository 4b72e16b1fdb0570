#pragma once

#include <optional>
#include <span>
#include <vector>

#include "agentattack/attack_model.hpp"
#include "agentattack/matrix.hpp"

namespace agentattack {

/// Discretization of leftover budgets. Budgets are carried as integer
/// multiples of `step`; `max_units[j]` is attacker j's initial budget in units.
struct BudgetGrid {
  double step = 1.0;
  std::vector<long> max_units;

  /// Tolerance for "is an integer multiple of step".
  static constexpr double kMultipleTolerance = 1e-9;

  /// Builds the grid for `initial` budgets and checks that every cost and
  /// budget is a multiple of `step`. Throws GridError otherwise.
  static BudgetGrid make(double step, std::span<const double> initial, const CostMatrix& costs);

  /// Largest step that divides every nonzero cost and budget, searching
  /// decimal scalings up to 1e-9. Falls back to 1 when all values are zero.
  static double default_step(std::span<const double> initial, const CostMatrix& costs);

  long units_of(double amount) const;
  double amount_of(long units) const { return static_cast<double>(units) * step; }
  Matrix<long> cost_units(const CostMatrix& costs) const;
};

/// Dynamic programming state: true states, delusional states and leftover
/// budget (in grid units; empty when the space carries no budget).
struct DPState {
  JointState actual;
  JointState delusion;
  std::vector<long> budget;

  friend bool operator==(const DPState&, const DPState&) = default;
};

/// Dense bijection between DP states and [0, size). Ordering is
/// lexicographic over (actual, delusion, budget), last budget entry fastest.
class DPSIndex {
 public:
  DPSIndex(int num_states, int n_recipients, std::optional<BudgetGrid> grid = std::nullopt);

  std::size_t size() const noexcept { return size_; }
  int num_states() const noexcept { return num_states_; }
  int recipients() const noexcept { return n_; }
  bool has_budget() const noexcept { return grid_.has_value(); }
  const std::optional<BudgetGrid>& grid() const noexcept { return grid_; }
  std::size_t joint_count() const noexcept { return joint_count_; }
  std::size_t budget_count() const noexcept { return budget_count_; }

  std::size_t index_of(const DPState& state) const;
  DPState state_of(std::size_t index) const;

  /// Index from already-encoded parts; `budget_code` is the mixed-radix code of
  /// the budget vector (0 without budget).
  std::size_t compose(std::size_t actual_code, std::size_t delusion_code,
                      std::size_t budget_code) const noexcept {
    return (actual_code * joint_count_ + delusion_code) * budget_count_ + budget_code;
  }
  std::size_t budget_code(std::span<const long> budget) const;
  std::vector<long> budget_of(std::size_t budget_code) const;

 private:
  int num_states_;
  int n_;
  std::optional<BudgetGrid> grid_;
  std::size_t joint_count_;
  std::size_t budget_count_;
  std::size_t size_;
};

/// All DP states in index order.
std::vector<DPState> enumerate_dps(int num_states, int n_recipients,
                                   const std::optional<BudgetGrid>& grid = std::nullopt);

}  // namespace agentattack
