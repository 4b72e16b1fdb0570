#include "agentattack/alltime_planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "agentattack/errors.hpp"
#include "agentattack/two_phase.hpp"

namespace agentattack {

namespace {

struct RecipientOption {
  int target;
  unsigned mask;  // attacker subset; 0 = not attacked
};

std::vector<RecipientOption> recipient_options(int actual, int num_states, std::size_t attackers,
                                               AttackEnumeration mode) {
  std::vector<RecipientOption> out{{actual, 0u}};
  for (int target = 0; target < num_states; ++target) {
    if (target == actual) continue;
    for (unsigned mask = 1; mask < (1u << attackers); ++mask) {
      if (mode == AttackEnumeration::single_attacker && (mask & (mask - 1)) != 0) continue;
      out.push_back({target, mask});
    }
  }
  return out;
}

/// Odometer over per-recipient option lists, recipient 0 slowest.
template <typename Fn>
void for_each_joint_option(const std::vector<std::vector<RecipientOption>>& options, Fn&& fn) {
  const std::size_t n = options.size();
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    fn(pos);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++pos[k] < options[k].size()) break;
      pos[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

JointAttackAction build_action(const std::vector<std::vector<RecipientOption>>& options,
                               const std::vector<std::size_t>& pos, std::size_t attackers) {
  JointAttackAction a;
  a.targets.resize(options.size());
  a.participation = ParticipationMatrix(options.size(), attackers, 0);
  for (std::size_t i = 0; i < options.size(); ++i) {
    const auto& opt = options[i][pos[i]];
    a.targets[i] = opt.target;
    for (std::size_t j = 0; j < attackers; ++j) {
      if (opt.mask & (1u << j)) a.participation(i, j) = 1;
    }
  }
  return a;
}

void check_costs(const CostMatrix& costs, std::size_t n) {
  if (costs.rows() != n) throw DimensionError("cost matrix must have one row per recipient");
  if (costs.cols() == 0 || costs.cols() > 16) throw DimensionError("need 1..16 attackers");
  for (double c : costs.data()) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("costs must be finite and >= 0");
  }
}

}  // namespace

std::vector<JointAttackAction> enumerate_feasible_attacks(std::span<const int> actual,
                                                          int num_states, const CostMatrix& costs,
                                                          std::span<const double> budget,
                                                          AttackEnumeration mode) {
  check_costs(costs, actual.size());
  if (budget.size() != costs.cols()) throw DimensionError("budget length must equal attacker count");
  std::vector<std::vector<RecipientOption>> options;
  for (int s : actual) options.push_back(recipient_options(s, num_states, costs.cols(), mode));

  std::vector<JointAttackAction> out;
  for_each_joint_option(options, [&](const std::vector<std::size_t>& pos) {
    auto action = build_action(options, pos, costs.cols());
    const auto spend = attack_spend(action.participation, costs);
    for (std::size_t j = 0; j < spend.size(); ++j) {
      if (spend[j] > budget[j] + kBudgetTolerance) return;
    }
    out.push_back(std::move(action));
  });
  return out;
}

std::vector<JointAttackAction> enumerate_feasible_attacks(const DPState& state, int num_states,
                                                          const CostMatrix& costs,
                                                          const BudgetGrid& grid,
                                                          AttackEnumeration mode) {
  std::vector<double> budget;
  for (long u : state.budget) budget.push_back(grid.amount_of(u));
  return enumerate_feasible_attacks(state.actual, num_states, costs, budget, mode);
}

DPState attack_transition(const DPState& state, const JointAttackAction& action,
                          const Matrix<long>& cost_units) {
  const std::size_t n = state.actual.size();
  if (action.targets.size() != n || action.participation.rows() != n ||
      action.participation.cols() != cost_units.cols() || cost_units.rows() != n ||
      state.budget.size() != cost_units.cols()) {
    throw DimensionError("attack_transition: shape mismatch");
  }
  DPState next{state.actual, state.actual, state.budget};
  for (std::size_t i = 0; i < n; ++i) {
    const bool hit = action.attacked(i);
    if (hit == (action.targets[i] == state.actual[i])) {
      throw InfeasibleAttackError("attack on recipient " + std::to_string(i) +
                                  " is not canonically encoded");
    }
    if (hit) next.delusion[i] = action.targets[i];
    for (std::size_t j = 0; j < cost_units.cols(); ++j) {
      if (action.participation(i, j)) next.budget[j] -= cost_units(i, j);
    }
  }
  for (std::size_t j = 0; j < next.budget.size(); ++j) {
    if (next.budget[j] < 0) {
      throw InfeasibleAttackError("attacker " + std::to_string(j) + " exceeds its leftover budget");
    }
  }
  return next;
}

std::vector<std::pair<DPState, double>> DeterministicAttackOutcome::outcomes(
    const DPState& state, const JointAttackAction& action, const Matrix<long>& cost_units) const {
  return {{attack_transition(state, action, cost_units), 1.0}};
}

double move_backup(const DPSIndex& index, std::span<const double> next_row, const DPState& half,
                   const TimeIndexedPolicy& policy, int policy_t, const RecipientMDP& mdp) {
  if (next_row.size() != index.size()) throw DimensionError("move_backup: value row size");
  const int S = mdp.num_states();
  const std::size_t d_code = encode_joint(half.delusion, S);
  const std::size_t b_code = index.budget_code(half.budget);
  double total = 0.0;
  for_each_move_outcome(mdp, policy, policy_t, half.actual, half.delusion,
                        [&](const JointState& next, double p, double reward) {
                          const auto k = index.compose(encode_joint(next, S), d_code, b_code);
                          total += p * (next_row[k] + reward);
                        });
  return total;
}

DPState AllTimeTables::initial_state(std::span<const int> actual) const {
  return {JointState(actual.begin(), actual.end()), JointState(actual.begin(), actual.end()),
          grid().max_units};
}

namespace {

struct CatalogEntry {
  JointAttackAction action;
  std::vector<long> spend;
  std::size_t delusion_code;
};

}  // namespace

AllTimeTables plan_alltime(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                           const CostMatrix& costs, std::span<const double> initial_budget,
                           const AllTimeOptions& options) {
  if (auto report = validate_mdp(mdp); !report.ok()) {
    throw ValidationError("invalid_mdp", report.violations);
  }
  const int S = mdp.num_states();
  const int n = mdp.n_recipients;
  const int T = mdp.horizon;
  check_costs(costs, static_cast<std::size_t>(n));
  if (initial_budget.size() != costs.cols()) throw DimensionError("budget length must equal attacker count");
  if (policy.horizon() < T) throw DimensionError("policy shorter than horizon");

  const double step = options.budget_step.value_or(BudgetGrid::default_step(initial_budget, costs));
  const BudgetGrid grid = BudgetGrid::make(step, initial_budget, costs);
  const Matrix<long> cost_units = grid.cost_units(costs);
  const std::size_t m = costs.cols();

  AllTimeTables tables{DPSIndex(S, n, grid), costs, {}, {}, {}};
  const DPSIndex& index = tables.index;
  const std::size_t N = index.size();
  const std::size_t J = index.joint_count();
  const std::size_t B = index.budget_count();

  tables.value.assign(T + 1, std::vector<double>(N, 0.0));
  tables.half_value.assign(T, std::vector<double>(N, 0.0));
  tables.best_attack.assign(T, std::vector<JointAttackAction>(N));

  // All attacks per true joint state, ignoring budget; filtered per DP state.
  std::vector<std::vector<CatalogEntry>> catalog(J);
  const std::vector<double> unlimited(m, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < J; ++a) {
    const JointState actual = decode_joint(a, S, n);
    for (auto& action : enumerate_feasible_attacks(actual, S, costs, unlimited, options.enumeration)) {
      std::vector<long> spend(m, 0);
      for (int i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (action.participation(i, j)) spend[j] += cost_units(i, j);
      const auto d_code = encode_joint(action.targets, S);
      catalog[a].push_back({std::move(action), std::move(spend), d_code});
    }
  }
  std::vector<std::vector<long>> budgets(B);
  for (std::size_t b = 0; b < B; ++b) budgets[b] = index.budget_of(b);

  const AttackOutcomeModel* model = options.outcome_model.get();
  std::vector<long> left(m);

  for (int t = T; t >= 1; --t) {
    auto& half = tables.half_value[t - 1];
    const auto& next_row = tables.value[t];
    for (std::size_t k = 0; k < N; ++k) {
      half[k] = move_backup(index, next_row, index.state_of(k), policy, t - 1, mdp);
    }

    auto& row = tables.value[t - 1];
    auto& best = tables.best_attack[t - 1];
    for (std::size_t a = 0; a < J; ++a) {
      for (std::size_t d = 0; d < J; ++d) {
        for (std::size_t b = 0; b < B; ++b) {
          const std::size_t k = index.compose(a, d, b);
          const auto& budget = budgets[b];
          double best_value = std::numeric_limits<double>::infinity();
          const CatalogEntry* best_entry = nullptr;
          for (const auto& entry : catalog[a]) {
            bool affordable = true;
            for (std::size_t j = 0; j < m; ++j) {
              left[j] = budget[j] - entry.spend[j];
              if (left[j] < 0) affordable = false;
            }
            if (!affordable) continue;
            double v = 0.0;
            if (model == nullptr) {
              v = half[index.compose(a, entry.delusion_code, index.budget_code(left))];
            } else {
              DPState state{decode_joint(a, S, n), decode_joint(d, S, n), budget};
              for (const auto& [outcome, p] : model->outcomes(state, entry.action, cost_units)) {
                v += p * half[index.index_of(outcome)];
              }
            }
            if (v < best_value) {
              best_value = v;
              best_entry = &entry;
            }
          }
          row[k] = best_value;
          best[k] = best_entry->action;
        }
      }
    }
  }
  return tables;
}

}  // namespace agentattack
