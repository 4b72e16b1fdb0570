#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "agentattack/matrix.hpp"

namespace agentattack {

/// D(i, j): cost for attacker j to take part in attacking recipient i.
using CostMatrix = Matrix<double>;
using BudgetVector = std::vector<double>;
/// x(i, j): amount attacker j spends on recipient i within one step.
using AllocationMatrix = Matrix<double>;
/// beta(i, j) in {0, 1}.
using ParticipationMatrix = Matrix<std::uint8_t>;

/// Slack allowed when comparing spend against budget.
inline constexpr double kBudgetTolerance = 1e-12;

/// Joint attack for the all-time case. A recipient whose participation row is
/// all zero is unattacked and its target equals its true state.
struct JointAttackAction {
  JointState targets;
  ParticipationMatrix participation;

  bool attacked(std::size_t recipient) const;

  static JointAttackAction none(std::span<const int> actual, std::size_t attackers);

  friend bool operator==(const JointAttackAction&, const JointAttackAction&) = default;
};

/// spend_j = sum_i beta(i,j) D(i,j)
std::vector<double> attack_spend(const ParticipationMatrix& participation, const CostMatrix& costs);

/// Budget check plus the canonical-encoding check against the true states.
bool is_feasible(const JointAttackAction& action, std::span<const int> actual,
                 const CostMatrix& costs, std::span<const double> budget);

/// C = d^3 + epsilon
double effort_coeff(double distance, double epsilon);

/// min(sum_j x_j / C_j, 1). Throws std::invalid_argument on negative spend.
double success_probability(std::span<const double> spend_row, std::span<const double> coeff_row);

std::vector<double> success_probabilities(const AllocationMatrix& x, const Matrix<double>& coeffs);

/// Shortest hop count between two positions on a ring of `num_states` states.
double ring_distance(int a, int b, int num_states);

using DistanceFn = std::function<double(int attacker_location, int recipient_location, int num_states)>;

/// Proportional-effort cost model. Attackers sit at fixed states; the effort
/// coefficient for a pair depends on the recipient's current true state.
struct EffortCostModel {
  std::vector<int> attacker_locations;
  double epsilon = 1e-4;
  int num_states = 0;
  DistanceFn distance = ring_distance;

  std::size_t attackers() const noexcept { return attacker_locations.size(); }

  /// C(i, j) for recipients at `actual`.
  Matrix<double> coefficients(std::span<const int> actual) const;
};

/// Product distribution over joint delusional states. Recipient i keeps its
/// true state w.p. 1 - p[i] and is shown each other state w.p. p[i]/(S-1).
class DelusionDistribution {
 public:
  DelusionDistribution(std::vector<double> p, JointState base, int num_states);

  const std::vector<double>& success() const noexcept { return p_; }
  const JointState& base() const noexcept { return base_; }
  int num_states() const noexcept { return num_states_; }

  /// Marginal probability that recipient i observes `state`.
  double marginal(std::size_t i, int state) const;
  double probability(std::span<const int> delusion) const;

  /// Calls fn(joint_delusion, probability) for every outcome with nonzero mass,
  /// in lexicographic order of the joint delusion.
  void for_each(const std::function<void(const JointState&, double)>& fn) const;

  std::vector<std::pair<JointState, double>> outcomes() const;

 private:
  std::vector<double> p_;
  JointState base_;
  int num_states_;
};

DelusionDistribution delusion_distribution(std::span<const double> p, std::span<const int> actual,
                                           int num_states);

}  // namespace agentattack
