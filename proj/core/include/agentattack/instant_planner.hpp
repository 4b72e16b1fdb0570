#pragma once

#include <span>
#include <vector>

#include "agentattack/attack_model.hpp"
#include "agentattack/dps_space.hpp"
#include "agentattack/mdp.hpp"

namespace agentattack {

/// Expected next value when recipient i is deluded with probability p[i].
/// `next_values` holds S^n entries indexed by the joint delusion code, with
/// the true states fixed at `actual`.
double expected_delusion_value(std::span<const double> p, std::span<const int> actual,
                               std::span<const double> next_values, int num_states);

/// Within-step objective: the expectation of `next_values` under the
/// proportional-effort delusion distribution induced by allocation `x`.
double step_objective(const AllocationMatrix& x, std::span<const int> actual,
                      std::span<const double> next_values, const Matrix<double>& coeffs,
                      int num_states);
double step_objective(const AllocationMatrix& x, std::span<const int> actual,
                      std::span<const double> next_values, const EffortCostModel& model);

struct StepSolverOptions {
  /// Grid resolution per attacker is budget / grid_divisions.
  int grid_divisions = 160;
  /// Refinement stops once the step falls below this (in budget fractions).
  double refine_tolerance = 1e-6;
  /// Upper bound on grid points per recipient subset; the resolution is
  /// coarsened until the grid fits.
  std::size_t max_grid_points = 2'000'000;
};

struct StepAllocationResult {
  AllocationMatrix allocation;
  double value = 0.0;
  /// objective at x = 0
  double no_attack_value = 0.0;
  /// best grid value minus final value
  double refinement_gain = 0.0;
  std::size_t evaluations = 0;
  std::size_t refinement_iterations = 0;
};

/// Minimizes the within-step objective subject to per-attacker budgets.
///
/// The objective depends on x only through the clamped efforts
/// p_i = min(sum_j x_ij / C_ij, 1) and is affine in each p_i, so some optimum
/// leaves every recipient either unattacked or pushed as far as the budgets
/// allow. The solver therefore visits every subset of recipients, splits each
/// attacker's full budget among that subset on a grid, and refines the best
/// split by pattern search. x = 0 is the starting incumbent, so a flat
/// objective returns zero spend.
StepAllocationResult solve_step_allocation(std::span<const int> actual,
                                           std::span<const double> next_values,
                                           std::span<const double> budget,
                                           const EffortCostModel& model,
                                           const StepSolverOptions& options = {});

struct InstantTables {
  /// DP states without a budget coordinate
  DPSIndex index;
  /// value[t][k], t = 0..T
  std::vector<std::vector<double>> value;
  /// half_value[t-1][k] for index t - 0.5
  std::vector<std::vector<double>> half_value;
  /// allocation[t][actual code], t = 0..T-1
  std::vector<std::vector<AllocationMatrix>> allocation;
  std::vector<std::vector<StepAllocationResult>> diagnostics;

  int horizon() const noexcept { return static_cast<int>(allocation.size()); }
  double value_at(int t, std::span<const int> actual) const;
  const AllocationMatrix& allocation_at(int t, std::span<const int> actual) const;
};

/// Backward recursion alternating the move-phase backup and the within-step
/// allocation problem. Budgets refill every step.
InstantTables plan_instant(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                           std::span<const double> budget, const EffortCostModel& model,
                           const StepSolverOptions& options = {});

}  // namespace agentattack
