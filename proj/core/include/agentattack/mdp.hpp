#pragma once

#include <span>
#include <string>
#include <vector>

#include "agentattack/matrix.hpp"

namespace agentattack {

struct StateSpace {
  std::vector<std::string> labels;
  int size() const noexcept { return static_cast<int>(labels.size()); }
};

struct ActionSpace {
  std::vector<std::string> labels;
  int size() const noexcept { return static_cast<int>(labels.size()); }
};

/// P(s' | s, a), stored flat as [s][a][s'].
class TransitionModel {
 public:
  TransitionModel() = default;
  TransitionModel(int num_states, int num_actions);

  /// rows[s][a] is the distribution over next states.
  static TransitionModel from_rows(const std::vector<std::vector<std::vector<double>>>& rows);

  int num_states() const noexcept { return num_states_; }
  int num_actions() const noexcept { return num_actions_; }

  double& operator()(int s, int a, int next) { return probs_[offset(s, a) + next]; }
  double operator()(int s, int a, int next) const { return probs_[offset(s, a) + next]; }

  std::span<const double> row(int s, int a) const {
    return {probs_.data() + offset(s, a), static_cast<std::size_t>(num_states_)};
  }

  friend bool operator==(const TransitionModel&, const TransitionModel&) = default;

 private:
  std::size_t offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_;
  }
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> probs_;
};

/// R(s, s'), earned on the true-state transition.
using RewardTable = Matrix<double>;

struct RecipientMDP {
  StateSpace states;
  ActionSpace actions;
  TransitionModel transition;
  RewardTable reward;
  int horizon = 0;
  int n_recipients = 1;

  int num_states() const noexcept { return states.size(); }
  int num_actions() const noexcept { return actions.size(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Row-sum tolerance for transition distributions.
inline constexpr double kRowSumTolerance = 1e-9;

ValidationReport validate_mdp(const RecipientMDP& mdp);

/// action_of[t][s], t in [0, T).
struct TimeIndexedPolicy {
  std::vector<std::vector<int>> action_of;

  int horizon() const noexcept { return static_cast<int>(action_of.size()); }
  int action(int t, int s) const { return action_of.at(t).at(s); }
};

/// v[t][s], t in [0, T]; v[T] is identically zero.
struct RecipientValueTable {
  std::vector<std::vector<double>> v;
};

struct RecipientSolution {
  TimeIndexedPolicy policy;
  RecipientValueTable values;
};

/// Backward induction for the recipients' own (unattacked) problem:
///   v[t][s] = max_a sum_{s'} P(s'|s,a) (R(s,s') + v[t+1][s'])
/// with ties broken toward the lowest action index.
/// Throws ValidationError when the MDP is invalid.
RecipientSolution solve_recipient_policy(const RecipientMDP& mdp);

/// One-step expected return of taking `action` in true state `s` and then
/// continuing with `next_values`.
double action_value(const RecipientMDP& mdp, int s, int action,
                    std::span<const double> next_values);

/// Expected total group reward without attacks, by propagating each
/// recipient's state distribution forward under `policy`.
double unattacked_group_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              std::span<const int> initial_states);

/// The three-state ring used by the bundled scenarios: actions left, right,
/// stay; 0.8 intended move, 0.2 opposite for left/right; stay keeps the state
/// w.p. 0.8 and slips either way w.p. 0.1. Reward 1 on entering `goal_state`.
RecipientMDP circle_world(int horizon, int n_recipients, int goal_state = 2);

}  // namespace agentattack
