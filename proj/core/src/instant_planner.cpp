#include "agentattack/instant_planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "agentattack/alltime_planner.hpp"
#include "agentattack/errors.hpp"

namespace agentattack {

double expected_delusion_value(std::span<const double> p, std::span<const int> actual,
                               std::span<const double> next_values, int num_states) {
  const std::size_t n = actual.size();
  const std::size_t S = static_cast<std::size_t>(num_states);
  if (p.size() != n) throw DimensionError("expected_delusion_value: p length");
  if (next_values.size() != int_pow(S, static_cast<int>(n))) {
    throw DimensionError("expected_delusion_value: need S^n next values");
  }
  // marginal[i][s]
  std::vector<double> marginal(n * S);
  for (std::size_t i = 0; i < n; ++i) {
    const double other = S > 1 ? p[i] / static_cast<double>(S - 1) : 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      marginal[i * S + s] = static_cast<int>(s) == actual[i] ? 1.0 - p[i] : other;
    }
  }
  double total = 0.0;
  for (std::size_t code = 0; code < next_values.size(); ++code) {
    double prob = 1.0;
    std::size_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      prob *= marginal[i * S + rest % S];
      rest /= S;
    }
    if (prob != 0.0) total += prob * next_values[code];
  }
  return total;
}

double step_objective(const AllocationMatrix& x, std::span<const int> actual,
                      std::span<const double> next_values, const Matrix<double>& coeffs,
                      int num_states) {
  const auto p = success_probabilities(x, coeffs);
  return expected_delusion_value(p, actual, next_values, num_states);
}

double step_objective(const AllocationMatrix& x, std::span<const int> actual,
                      std::span<const double> next_values, const EffortCostModel& model) {
  return step_objective(x, actual, next_values, model.coefficients(actual), model.num_states);
}

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == parts - 1) {
      cur[idx] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

/// Allocation search restricted to one subset of recipients that receive
/// each attacker's full budget, split by fractions weights[j][r].
class SubsetSearch {
 public:
  SubsetSearch(std::vector<std::size_t> members, std::span<const int> actual,
               std::span<const double> next_values, std::span<const double> budget,
               const Matrix<double>& coeffs, int num_states, std::size_t& evaluations)
      : members_(std::move(members)),
        actual_(actual),
        next_values_(next_values),
        budget_(budget),
        coeffs_(coeffs),
        num_states_(num_states),
        evaluations_(evaluations),
        p_(actual.size(), 0.0) {}

  std::size_t k() const { return members_.size(); }
  std::size_t m() const { return budget_.size(); }

  double evaluate(const std::vector<double>& w) {
    std::fill(p_.begin(), p_.end(), 0.0);
    for (std::size_t r = 0; r < k(); ++r) {
      const std::size_t i = members_[r];
      double effort = 0.0;
      for (std::size_t j = 0; j < m(); ++j) effort += w[j * k() + r] * budget_[j] / coeffs_(i, j);
      p_[i] = std::min(effort, 1.0);
    }
    ++evaluations_;
    return expected_delusion_value(p_, actual_, next_values_, num_states_);
  }

  AllocationMatrix allocation(const std::vector<double>& w) const {
    AllocationMatrix x(actual_.size(), m(), 0.0);
    for (std::size_t r = 0; r < k(); ++r)
      for (std::size_t j = 0; j < m(); ++j) x(members_[r], j) = w[j * k() + r] * budget_[j];
    return x;
  }

  /// Exhaustive grid over per-attacker splits; returns the best weights.
  std::pair<std::vector<double>, double> grid(int divisions, std::size_t max_points) {
    int K = std::max(divisions, 1);
    auto per_attacker = [&](int kk) { return binomial(static_cast<std::size_t>(kk) + k() - 1, k() - 1); };
    auto total_points = [&](int kk) {
      std::size_t t = 1;
      for (std::size_t j = 0; j < m(); ++j) {
        t *= per_attacker(kk);
        if (t > max_points) return t;
      }
      return t;
    };
    while (K > 1 && total_points(K) > max_points) --K;
    const auto comps = compositions(K, static_cast<int>(k()));

    std::vector<double> w(m() * k(), 0.0);
    std::vector<double> best_w;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pos(m(), 0);
    while (true) {
      for (std::size_t j = 0; j < m(); ++j)
        for (std::size_t r = 0; r < k(); ++r)
          w[j * k() + r] = static_cast<double>(comps[pos[j]][r]) / K;
      const double v = evaluate(w);
      if (v < best) {
        best = v;
        best_w = w;
      }
      std::size_t j = m();
      bool done = true;
      while (j > 0) {
        --j;
        if (++pos[j] < comps.size()) {
          done = false;
          break;
        }
        pos[j] = 0;
      }
      if (done) break;
    }
    step_ = 1.0 / K;
    return {best_w, best};
  }

  /// Pattern search moving mass between two recipients of one attacker.
  double refine(std::vector<double>& w, double value, double tolerance, std::size_t& iterations) {
    double h = step_;
    while (h >= tolerance && iterations < 1'000'000) {
      bool improved = false;
      for (std::size_t j = 0; j < m(); ++j) {
        for (std::size_t u = 0; u < k(); ++u) {
          for (std::size_t v = 0; v < k(); ++v) {
            if (u == v) continue;
            const double amount = std::min(h, w[j * k() + u]);
            if (amount <= 0.0) continue;
            auto trial = w;
            trial[j * k() + u] -= amount;
            trial[j * k() + v] += amount;
            ++iterations;
            const double t = evaluate(trial);
            if (t < value - 1e-15) {
              value = t;
              w = std::move(trial);
              improved = true;
            }
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    return value;
  }

 private:
  std::vector<std::size_t> members_;
  std::span<const int> actual_;
  std::span<const double> next_values_;
  std::span<const double> budget_;
  const Matrix<double>& coeffs_;
  int num_states_;
  std::size_t& evaluations_;
  std::vector<double> p_;
  double step_ = 1.0;
};

}  // namespace

StepAllocationResult solve_step_allocation(std::span<const int> actual,
                                           std::span<const double> next_values,
                                           std::span<const double> budget,
                                           const EffortCostModel& model,
                                           const StepSolverOptions& options) {
  const std::size_t n = actual.size();
  const std::size_t m = budget.size();
  if (model.attackers() != m) throw DimensionError("solve_step_allocation: budget length != attackers");
  if (n == 0 || n > 20) throw DimensionError("solve_step_allocation: recipient count");
  for (double b : budget) {
    if (!(b >= 0.0)) throw std::invalid_argument("solve_step_allocation: negative budget");
  }
  const Matrix<double> coeffs = model.coefficients(actual);

  StepAllocationResult result;
  result.allocation = AllocationMatrix(n, m, 0.0);
  result.no_attack_value = step_objective(result.allocation, actual, next_values, coeffs, model.num_states);
  result.value = result.no_attack_value;
  result.evaluations = 1;

  const bool any_budget = std::any_of(budget.begin(), budget.end(), [](double b) { return b > 0.0; });
  if (!any_budget) return result;

  // Canonical choice: a candidate must beat the incumbent by more than this.
  constexpr double kImprovement = 1e-12;
  double best_grid = result.value;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(i);
    SubsetSearch search(members, actual, next_values, budget, coeffs, model.num_states,
                        result.evaluations);
    auto [w, v] = search.grid(options.grid_divisions, options.max_grid_points);
    best_grid = std::min(best_grid, v);
    if (members.size() > 1) {
      v = search.refine(w, v, options.refine_tolerance, result.refinement_iterations);
    }
    if (v < result.value - kImprovement) {
      result.value = v;
      result.allocation = search.allocation(w);
    }
  }
  result.refinement_gain = best_grid - result.value;
  return result;
}

double InstantTables::value_at(int t, std::span<const int> actual) const {
  const auto code = encode_joint(actual, index.num_states());
  return value.at(t).at(index.compose(code, code, 0));
}

const AllocationMatrix& InstantTables::allocation_at(int t, std::span<const int> actual) const {
  return allocation.at(t).at(encode_joint(actual, index.num_states()));
}

InstantTables plan_instant(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                           std::span<const double> budget, const EffortCostModel& model,
                           const StepSolverOptions& options) {
  if (auto report = validate_mdp(mdp); !report.ok()) {
    throw ValidationError("invalid_mdp", report.violations);
  }
  const int S = mdp.num_states();
  const int n = mdp.n_recipients;
  const int T = mdp.horizon;
  if (policy.horizon() < T) throw DimensionError("policy shorter than horizon");
  if (model.attackers() != budget.size()) throw DimensionError("budget length != attackers");
  if (model.num_states != S) throw DimensionError("effort model state count differs from the MDP");
  for (int loc : model.attacker_locations) {
    if (loc < 0 || loc >= S) throw DimensionError("attacker location out of range");
  }
  if (!(model.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  InstantTables tables{DPSIndex(S, n), {}, {}, {}, {}};
  const auto& index = tables.index;
  const std::size_t N = index.size();
  const std::size_t J = index.joint_count();
  tables.value.assign(T + 1, std::vector<double>(N, 0.0));
  tables.half_value.assign(T, std::vector<double>(N, 0.0));
  tables.allocation.assign(T, std::vector<AllocationMatrix>(J));
  tables.diagnostics.assign(T, std::vector<StepAllocationResult>(J));

  std::vector<double> next_values(J);
  for (int t = T; t >= 1; --t) {
    auto& half = tables.half_value[t - 1];
    const auto& next_row = tables.value[t];
    for (std::size_t a = 0; a < J; ++a) {
      const JointState actual = decode_joint(a, S, n);
      for (std::size_t d = 0; d < J; ++d) {
        const JointState delusion = decode_joint(d, S, n);
        half[index.compose(a, d, 0)] =
            move_backup(index, next_row, DPState{actual, delusion, {}}, policy, t - 1, mdp);
      }
    }
    for (std::size_t a = 0; a < J; ++a) {
      const JointState actual = decode_joint(a, S, n);
      for (std::size_t d = 0; d < J; ++d) next_values[d] = half[index.compose(a, d, 0)];
      auto res = solve_step_allocation(actual, next_values, budget, model, options);
      for (std::size_t d = 0; d < J; ++d) tables.value[t - 1][index.compose(a, d, 0)] = res.value;
      tables.allocation[t - 1][a] = res.allocation;
      tables.diagnostics[t - 1][a] = std::move(res);
    }
  }
  return tables;
}

}  // namespace agentattack
