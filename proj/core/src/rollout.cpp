#include "agentattack/rollout.hpp"

#include <cmath>
#include <stdexcept>

#include "agentattack/errors.hpp"
#include "agentattack/two_phase.hpp"

namespace agentattack {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::optimal: return "optimal";
    case PolicyKind::random: return "random";
    case PolicyKind::none: return "none";
  }
  return "?";
}

JointAttackAction random_alltime_baseline(const DPState& state, int num_states,
                                          const CostMatrix& costs, const BudgetGrid& grid, Rng& rng,
                                          AttackEnumeration mode) {
  auto actions = enumerate_feasible_attacks(state, num_states, costs, grid, mode);
  return std::move(actions[rng.below(actions.size())]);
}

AllocationMatrix random_instant_baseline(std::size_t n_recipients, std::span<const double> budget,
                                         Rng& rng) {
  if (n_recipients != 2 || budget.size() != 2) {
    throw DimensionError("random instant baseline needs exactly 2 recipients and 2 attackers");
  }
  AllocationMatrix x(2, 2, 0.0);
  if (rng.coin()) {
    x(0, 0) = budget[0];
    x(1, 1) = budget[1];
  } else {
    x(1, 0) = budget[0];
    x(0, 1) = budget[1];
  }
  return x;
}

// ---------------------------------------------------------------------------
// policies

AllTimeAttackPolicy AllTimeAttackPolicy::optimal(const AllTimeTables& tables) {
  AllTimeAttackPolicy p(PolicyKind::optimal, tables.costs, tables.grid(), tables.index.num_states());
  p.tables_ = &tables;
  return p;
}

AllTimeAttackPolicy AllTimeAttackPolicy::random(const CostMatrix& costs, const BudgetGrid& grid,
                                                int num_states, AttackEnumeration mode) {
  AllTimeAttackPolicy p(PolicyKind::random, costs, grid, num_states);
  p.mode_ = mode;
  return p;
}

AllTimeAttackPolicy AllTimeAttackPolicy::none(const CostMatrix& costs, const BudgetGrid& grid) {
  return {PolicyKind::none, costs, grid, 0};
}

std::vector<std::pair<JointAttackAction, double>> AllTimeAttackPolicy::distribution(
    int t, const DPState& state) const {
  switch (kind_) {
    case PolicyKind::optimal:
      return {{tables_->attack_at(t, state), 1.0}};
    case PolicyKind::random: {
      auto actions = enumerate_feasible_attacks(state, num_states_, costs_, grid_, mode_);
      const double q = 1.0 / static_cast<double>(actions.size());
      std::vector<std::pair<JointAttackAction, double>> out;
      for (auto& a : actions) out.emplace_back(std::move(a), q);
      return out;
    }
    case PolicyKind::none:
      break;
  }
  return {{JointAttackAction::none(state.actual, costs_.cols()), 1.0}};
}

JointAttackAction AllTimeAttackPolicy::sample(int t, const DPState& state, Rng& rng) const {
  switch (kind_) {
    case PolicyKind::optimal:
      return tables_->attack_at(t, state);
    case PolicyKind::random:
      return random_alltime_baseline(state, num_states_, costs_, grid_, rng, mode_);
    case PolicyKind::none:
      break;
  }
  return JointAttackAction::none(state.actual, costs_.cols());
}

InstantAttackPolicy InstantAttackPolicy::optimal(const InstantTables& tables, std::vector<double> budget) {
  InstantAttackPolicy p(PolicyKind::optimal, std::move(budget));
  p.tables_ = &tables;
  return p;
}

InstantAttackPolicy InstantAttackPolicy::random(std::vector<double> budget) {
  return {PolicyKind::random, std::move(budget)};
}

InstantAttackPolicy InstantAttackPolicy::none(std::vector<double> budget) {
  return {PolicyKind::none, std::move(budget)};
}

std::vector<std::pair<AllocationMatrix, double>> InstantAttackPolicy::distribution(
    int t, std::span<const int> actual) const {
  switch (kind_) {
    case PolicyKind::optimal:
      return {{tables_->allocation_at(t, actual), 1.0}};
    case PolicyKind::random: {
      if (actual.size() != 2 || budget_.size() != 2) {
        throw DimensionError("random instant baseline needs exactly 2 recipients and 2 attackers");
      }
      AllocationMatrix first(2, 2, 0.0), second(2, 2, 0.0);
      first(0, 0) = budget_[0];
      first(1, 1) = budget_[1];
      second(1, 0) = budget_[0];
      second(0, 1) = budget_[1];
      return {{first, 0.5}, {second, 0.5}};
    }
    case PolicyKind::none:
      break;
  }
  return {{AllocationMatrix(actual.size(), budget_.size(), 0.0), 1.0}};
}

AllocationMatrix InstantAttackPolicy::sample(int t, std::span<const int> actual, Rng& rng) const {
  switch (kind_) {
    case PolicyKind::optimal:
      return tables_->allocation_at(t, actual);
    case PolicyKind::random:
      return random_instant_baseline(actual.size(), budget_, rng);
    case PolicyKind::none:
      break;
  }
  return AllocationMatrix(actual.size(), budget_.size(), 0.0);
}

// ---------------------------------------------------------------------------
// episodes

namespace {

int sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    acc += probs[k];
    last = static_cast<int>(k);
    if (u < acc) return last;
  }
  return last;
}

/// Move phase: samples next true states and returns the group reward.
double sample_move(const RecipientMDP& mdp, const TimeIndexedPolicy& policy, int policy_t,
                   JointState& actual, const JointState& delusion, Rng& rng) {
  double reward = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const int a = policy.action(policy_t, delusion[i]);
    const int next = sample_index(mdp.transition.row(actual[i], a), rng);
    reward += mdp.reward(actual[i], next);
    actual[i] = next;
  }
  return reward;
}

void check_initial(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                   std::span<const int> initial) {
  if (static_cast<int>(initial.size()) != mdp.n_recipients) {
    throw DimensionError("initial state count differs from recipient count");
  }
  for (int s : initial) {
    if (s < 0 || s >= mdp.num_states()) throw DimensionError("initial state out of range");
  }
  if (policy.horizon() < mdp.horizon) throw DimensionError("policy does not cover the horizon");
}

std::vector<double> to_amounts(const BudgetGrid& grid, const std::vector<long>& units) {
  std::vector<double> out;
  for (long u : units) out.push_back(grid.amount_of(u));
  return out;
}

}  // namespace

EpisodeTrace simulate_episode(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              const AllTimeAttackPolicy& attacker, std::span<const int> initial,
                              Rng& rng) {
  check_initial(mdp, policy, initial);
  const auto& grid = attacker.grid();
  const Matrix<long> cost_units = grid.cost_units(attacker.costs());

  EpisodeTrace trace;
  DPState state{JointState(initial.begin(), initial.end()), JointState(initial.begin(), initial.end()),
                grid.max_units};
  trace.actual.push_back(state.actual);
  trace.budget.push_back(to_amounts(grid, state.budget));
  for (int t = 1; t <= mdp.horizon; ++t) {
    auto action = attacker.sample(t - 1, state, rng);
    DPState half = attack_transition(state, action, cost_units);
    JointState next = half.actual;
    const double r = sample_move(mdp, policy, t - 1, next, half.delusion, rng);
    trace.delusion.push_back(half.delusion);
    trace.attacks.emplace_back(std::move(action));
    trace.step_reward.push_back(r);
    trace.total_reward += r;
    state = DPState{std::move(next), std::move(half.delusion), std::move(half.budget)};
    trace.actual.push_back(state.actual);
    trace.budget.push_back(to_amounts(grid, state.budget));
  }
  return trace;
}

EpisodeTrace simulate_episode(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              const InstantAttackPolicy& attacker, const EffortCostModel& model,
                              std::span<const int> initial, Rng& rng) {
  check_initial(mdp, policy, initial);
  const int S = mdp.num_states();
  const auto& budget = attacker.budget();

  EpisodeTrace trace;
  JointState actual(initial.begin(), initial.end());
  trace.actual.push_back(actual);
  trace.budget.push_back(budget);
  for (int t = 1; t <= mdp.horizon; ++t) {
    auto x = attacker.sample(t - 1, actual, rng);
    for (std::size_t j = 0; j < budget.size(); ++j) {
      double spent = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) spent += x(i, j);
      if (spent > budget[j] + 1e-9) throw InfeasibleAttackError("allocation exceeds the step budget");
    }
    const auto p = success_probabilities(x, model.coefficients(actual));
    JointState delusion = actual;
    for (std::size_t i = 0; i < actual.size(); ++i) {
      if (rng.uniform() < p[i]) {
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(S - 1)));
        delusion[i] = k < actual[i] ? k : k + 1;
      }
    }
    const double r = sample_move(mdp, policy, t - 1, actual, delusion, rng);
    trace.delusion.push_back(std::move(delusion));
    trace.attacks.emplace_back(std::move(x));
    trace.step_reward.push_back(r);
    trace.total_reward += r;
    trace.actual.push_back(actual);
    trace.budget.push_back(budget);
  }
  return trace;
}

namespace {

template <typename Run>
MonteCarloEstimate accumulate(int horizon, std::size_t episodes, std::uint64_t seed, Run&& run) {
  if (episodes == 0) throw std::invalid_argument("monte_carlo_value: need at least one episode");
  const std::size_t len = static_cast<std::size_t>(horizon) + 1;
  // Welford per time index, in episode order
  std::vector<double> mean(len, 0.0), m2(len, 0.0);
  const Rng root(seed);
  for (std::size_t e = 0; e < episodes; ++e) {
    Rng rng = root.split(e);
    const EpisodeTrace trace = run(rng);
    double cum = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      if (t > 0) cum += trace.step_reward[t - 1];
      const double delta = cum - mean[t];
      mean[t] += delta / static_cast<double>(e + 1);
      m2[t] += delta * (cum - mean[t]);
    }
  }
  MonteCarloEstimate est;
  est.episodes = episodes;
  est.seed = seed;
  est.cumulative_mean = mean;
  est.cumulative_standard_error.resize(len, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    if (episodes > 1) {
      const double var = m2[t] / static_cast<double>(episodes - 1);
      est.cumulative_standard_error[t] = std::sqrt(std::max(var, 0.0) / static_cast<double>(episodes));
    }
  }
  est.mean = mean.back();
  est.standard_error = est.cumulative_standard_error.back();
  return est;
}

}  // namespace

MonteCarloEstimate monte_carlo_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                     const AllTimeAttackPolicy& attacker,
                                     std::span<const int> initial, std::size_t episodes,
                                     std::uint64_t seed) {
  return accumulate(mdp.horizon, episodes, seed, [&](Rng& rng) {
    return simulate_episode(mdp, policy, attacker, initial, rng);
  });
}

MonteCarloEstimate monte_carlo_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                     const InstantAttackPolicy& attacker,
                                     const EffortCostModel& model, std::span<const int> initial,
                                     std::size_t episodes, std::uint64_t seed) {
  return accumulate(mdp.horizon, episodes, seed, [&](Rng& rng) {
    return simulate_episode(mdp, policy, attacker, model, initial, rng);
  });
}

// ---------------------------------------------------------------------------
// exact forward curves

std::vector<double> exact_curve(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                const AllTimeAttackPolicy& attacker, std::span<const int> initial) {
  check_initial(mdp, policy, initial);
  const int S = mdp.num_states();
  const auto& grid = attacker.grid();
  const Matrix<long> cost_units = grid.cost_units(attacker.costs());
  const DPSIndex index(S, mdp.n_recipients, grid);

  std::vector<double> curve(static_cast<std::size_t>(mdp.horizon) + 1, 0.0);
  std::vector<double> dist(index.size(), 0.0);
  const JointState s0(initial.begin(), initial.end());
  dist[index.index_of({s0, s0, grid.max_units})] = 1.0;

  for (int t = 1; t <= mdp.horizon; ++t) {
    std::vector<double> next(index.size(), 0.0);
    double step_reward = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (dist[k] == 0.0) continue;
      const DPState state = index.state_of(k);
      for (const auto& [action, q] : attacker.distribution(t - 1, state)) {
        const DPState half = attack_transition(state, action, cost_units);
        const double mass = dist[k] * q;
        const auto d_code = encode_joint(half.delusion, S);
        const auto b_code = index.budget_code(half.budget);
        for_each_move_outcome(mdp, policy, t - 1, half.actual, half.delusion,
                              [&](const JointState& s2, double p, double r) {
                                next[index.compose(encode_joint(s2, S), d_code, b_code)] += mass * p;
                                step_reward += mass * p * r;
                              });
      }
    }
    curve[t] = curve[t - 1] + step_reward;
    dist = std::move(next);
  }
  return curve;
}

std::vector<double> exact_curve(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                                const InstantAttackPolicy& attacker, const EffortCostModel& model,
                                std::span<const int> initial) {
  check_initial(mdp, policy, initial);
  const int S = mdp.num_states();
  const int n = mdp.n_recipients;
  const std::size_t J = int_pow(static_cast<std::size_t>(S), n);

  std::vector<double> curve(static_cast<std::size_t>(mdp.horizon) + 1, 0.0);
  std::vector<double> dist(J, 0.0);
  dist[encode_joint(initial, S)] = 1.0;

  for (int t = 1; t <= mdp.horizon; ++t) {
    std::vector<double> next(J, 0.0);
    double step_reward = 0.0;
    for (std::size_t a = 0; a < J; ++a) {
      if (dist[a] == 0.0) continue;
      const JointState actual = decode_joint(a, S, n);
      const auto coeffs = model.coefficients(actual);
      for (const auto& [x, q] : attacker.distribution(t - 1, actual)) {
        const auto p = success_probabilities(x, coeffs);
        delusion_distribution(p, actual, S).for_each([&](const JointState& delusion, double pd) {
          const double mass = dist[a] * q * pd;
          for_each_move_outcome(mdp, policy, t - 1, actual, delusion,
                                [&](const JointState& s2, double pm, double r) {
                                  next[encode_joint(s2, S)] += mass * pm;
                                  step_reward += mass * pm * r;
                                });
        });
      }
    }
    curve[t] = curve[t - 1] + step_reward;
    dist = std::move(next);
  }
  return curve;
}

}  // namespace agentattack
