#include "agentattack/attack_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "agentattack/errors.hpp"

namespace agentattack {

bool JointAttackAction::attacked(std::size_t recipient) const {
  const auto row = participation.row(recipient);
  return std::any_of(row.begin(), row.end(), [](std::uint8_t b) { return b != 0; });
}

JointAttackAction JointAttackAction::none(std::span<const int> actual, std::size_t attackers) {
  return {JointState(actual.begin(), actual.end()),
          ParticipationMatrix(actual.size(), attackers, 0)};
}

std::vector<double> attack_spend(const ParticipationMatrix& participation,
                                 const CostMatrix& costs) {
  if (participation.rows() != costs.rows() || participation.cols() != costs.cols()) {
    throw DimensionError("attack_spend: participation and cost shapes differ");
  }
  std::vector<double> spend(costs.cols(), 0.0);
  for (std::size_t i = 0; i < costs.rows(); ++i) {
    for (std::size_t j = 0; j < costs.cols(); ++j) {
      const auto b = participation(i, j);
      if (b > 1) throw std::invalid_argument("attack_spend: participation entries must be 0 or 1");
      if (b) spend[j] += costs(i, j);
    }
  }
  return spend;
}

bool is_feasible(const JointAttackAction& action, std::span<const int> actual,
                 const CostMatrix& costs, std::span<const double> budget) {
  if (action.targets.size() != actual.size() || action.participation.rows() != actual.size() ||
      budget.size() != costs.cols()) {
    throw DimensionError("is_feasible: shape mismatch");
  }
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool hit = action.attacked(i);
    if (hit == (action.targets[i] == actual[i])) return false;
  }
  const auto spend = attack_spend(action.participation, costs);
  for (std::size_t j = 0; j < spend.size(); ++j) {
    if (spend[j] > budget[j] + kBudgetTolerance) return false;
  }
  return true;
}

double effort_coeff(double distance, double epsilon) {
  return distance * distance * distance + epsilon;
}

double success_probability(std::span<const double> spend_row, std::span<const double> coeff_row) {
  if (spend_row.size() != coeff_row.size()) {
    throw DimensionError("success_probability: row lengths differ");
  }
  double effort = 0.0;
  for (std::size_t j = 0; j < spend_row.size(); ++j) {
    if (spend_row[j] < 0.0) throw std::invalid_argument("success_probability: negative spend");
    effort += spend_row[j] / coeff_row[j];
  }
  return std::min(effort, 1.0);
}

std::vector<double> success_probabilities(const AllocationMatrix& x, const Matrix<double>& coeffs) {
  if (x.rows() != coeffs.rows() || x.cols() != coeffs.cols()) {
    throw DimensionError("success_probabilities: allocation and coefficient shapes differ");
  }
  std::vector<double> p(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) p[i] = success_probability(x.row(i), coeffs.row(i));
  return p;
}

double ring_distance(int a, int b, int num_states) {
  const int diff = std::abs(a - b);
  return static_cast<double>(std::min(diff, num_states - diff));
}

Matrix<double> EffortCostModel::coefficients(std::span<const int> actual) const {
  Matrix<double> c(actual.size(), attacker_locations.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    for (std::size_t j = 0; j < attacker_locations.size(); ++j) {
      c(i, j) = effort_coeff(distance(attacker_locations[j], actual[i], num_states), epsilon);
    }
  }
  return c;
}

DelusionDistribution::DelusionDistribution(std::vector<double> p, JointState base, int num_states)
    : p_(std::move(p)), base_(std::move(base)), num_states_(num_states) {
  if (p_.size() != base_.size()) throw DimensionError("delusion_distribution: p and states differ in length");
  for (double pi : p_) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("delusion_distribution: probability outside [0,1]");
    }
    if (num_states_ < 2 && pi > 0.0) {
      throw std::invalid_argument("delusion_distribution: need at least 2 states to delude");
    }
  }
}

double DelusionDistribution::marginal(std::size_t i, int state) const {
  if (state == base_[i]) return 1.0 - p_[i];
  return p_[i] / static_cast<double>(num_states_ - 1);
}

double DelusionDistribution::probability(std::span<const int> delusion) const {
  double prob = 1.0;
  for (std::size_t i = 0; i < base_.size(); ++i) prob *= marginal(i, delusion[i]);
  return prob;
}

void DelusionDistribution::for_each(
    const std::function<void(const JointState&, double)>& fn) const {
  const std::size_t n = base_.size();
  JointState joint(n, 0);
  std::vector<double> partial(n + 1, 1.0);
  // depth-first product; partial[k] is the mass of the first k coordinates
  std::size_t depth = 0;
  std::vector<int> cursor(n, -1);
  while (true) {
    if (depth == n) {
      if (partial[n] > 0.0) fn(joint, partial[n]);
      if (n == 0) return;
      --depth;
      continue;
    }
    if (++cursor[depth] >= num_states_) {
      cursor[depth] = -1;
      if (depth == 0) return;
      --depth;
      continue;
    }
    joint[depth] = cursor[depth];
    const double m = marginal(depth, cursor[depth]);
    if (m == 0.0) continue;
    partial[depth + 1] = partial[depth] * m;
    ++depth;
  }
}

std::vector<std::pair<JointState, double>> DelusionDistribution::outcomes() const {
  std::vector<std::pair<JointState, double>> out;
  for_each([&](const JointState& j, double p) { out.emplace_back(j, p); });
  return out;
}

DelusionDistribution delusion_distribution(std::span<const double> p, std::span<const int> actual,
                                           int num_states) {
  return {std::vector<double>(p.begin(), p.end()), JointState(actual.begin(), actual.end()),
          num_states};
}

}  // namespace agentattack
