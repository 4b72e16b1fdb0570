#include "agentattack/dps_space.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "agentattack/errors.hpp"

namespace agentattack {

namespace {

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

}  // namespace

long BudgetGrid::units_of(double amount) const {
  const double ratio = amount / step;
  if (ratio < -kMultipleTolerance || !near_integer(ratio, kMultipleTolerance)) {
    throw GridError("value " + std::to_string(amount) + " is not a nonnegative multiple of step " +
                    std::to_string(step));
  }
  return std::lround(ratio);
}

BudgetGrid BudgetGrid::make(double step, std::span<const double> initial, const CostMatrix& costs) {
  if (!(step > 0.0)) throw GridError("budget step must be positive");
  BudgetGrid grid;
  grid.step = step;
  for (double b : initial) grid.max_units.push_back(grid.units_of(b));
  (void)grid.cost_units(costs);
  return grid;
}

double BudgetGrid::default_step(std::span<const double> initial, const CostMatrix& costs) {
  std::vector<double> values(initial.begin(), initial.end());
  values.insert(values.end(), costs.data().begin(), costs.data().end());
  double scale = 1.0;
  for (int digits = 0; digits <= 9; ++digits, scale *= 10.0) {
    bool integral = true;
    for (double v : values) {
      if (!near_integer(v * scale, kMultipleTolerance * scale)) {
        integral = false;
        break;
      }
    }
    if (!integral) continue;
    long g = 0;
    for (double v : values) g = std::gcd(g, std::lround(v * scale));
    return g == 0 ? 1.0 : static_cast<double>(g) / scale;
  }
  throw GridError("no decimal budget step divides all costs and budgets");
}

Matrix<long> BudgetGrid::cost_units(const CostMatrix& costs) const {
  Matrix<long> units(costs.rows(), costs.cols());
  for (std::size_t i = 0; i < costs.rows(); ++i)
    for (std::size_t j = 0; j < costs.cols(); ++j) units(i, j) = units_of(costs(i, j));
  return units;
}

DPSIndex::DPSIndex(int num_states, int n_recipients, std::optional<BudgetGrid> grid)
    : num_states_(num_states), n_(n_recipients), grid_(std::move(grid)) {
  if (num_states < 1 || n_recipients < 1) throw DimensionError("DPSIndex: empty state space");
  joint_count_ = int_pow(static_cast<std::size_t>(num_states), n_recipients);
  budget_count_ = 1;
  if (grid_) {
    for (long u : grid_->max_units) {
      if (u < 0) throw GridError("DPSIndex: negative budget");
      budget_count_ *= static_cast<std::size_t>(u + 1);
    }
  }
  size_ = joint_count_ * joint_count_ * budget_count_;
}

std::size_t DPSIndex::budget_code(std::span<const long> budget) const {
  if (!grid_) {
    if (!budget.empty()) throw GridError("DPSIndex: budget given for a budget-free space");
    return 0;
  }
  if (budget.size() != grid_->max_units.size()) throw DimensionError("DPSIndex: budget length");
  std::size_t code = 0;
  for (std::size_t j = 0; j < budget.size(); ++j) {
    if (budget[j] < 0 || budget[j] > grid_->max_units[j]) {
      throw GridError("DPSIndex: budget entry " + std::to_string(j) + " outside the grid");
    }
    code = code * static_cast<std::size_t>(grid_->max_units[j] + 1) + static_cast<std::size_t>(budget[j]);
  }
  return code;
}

std::vector<long> DPSIndex::budget_of(std::size_t code) const {
  if (!grid_) return {};
  std::vector<long> budget(grid_->max_units.size());
  for (std::size_t j = budget.size(); j-- > 0;) {
    const auto radix = static_cast<std::size_t>(grid_->max_units[j] + 1);
    budget[j] = static_cast<long>(code % radix);
    code /= radix;
  }
  return budget;
}

std::size_t DPSIndex::index_of(const DPState& state) const {
  if (state.actual.size() != static_cast<std::size_t>(n_) ||
      state.delusion.size() != static_cast<std::size_t>(n_)) {
    throw DimensionError("DPSIndex: wrong number of recipients");
  }
  for (std::size_t i = 0; i < state.actual.size(); ++i) {
    if (state.actual[i] < 0 || state.actual[i] >= num_states_ || state.delusion[i] < 0 ||
        state.delusion[i] >= num_states_) {
      throw DimensionError("DPSIndex: state out of range");
    }
  }
  return compose(encode_joint(state.actual, num_states_), encode_joint(state.delusion, num_states_),
                 budget_code(state.budget));
}

DPState DPSIndex::state_of(std::size_t index) const {
  if (index >= size_) throw DimensionError("DPSIndex: index out of range");
  const std::size_t b = index % budget_count_;
  index /= budget_count_;
  const std::size_t d = index % joint_count_;
  const std::size_t a = index / joint_count_;
  return {decode_joint(a, num_states_, n_), decode_joint(d, num_states_, n_), budget_of(b)};
}

std::vector<DPState> enumerate_dps(int num_states, int n_recipients,
                                   const std::optional<BudgetGrid>& grid) {
  const DPSIndex index(num_states, n_recipients, grid);
  std::vector<DPState> states;
  states.reserve(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) states.push_back(index.state_of(k));
  return states;
}

}  // namespace agentattack
