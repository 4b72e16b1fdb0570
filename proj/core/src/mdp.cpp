#include "agentattack/mdp.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "agentattack/errors.hpp"

namespace agentattack {

TransitionModel::TransitionModel(int num_states, int num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      probs_(static_cast<std::size_t>(num_states) * num_actions * num_states, 0.0) {}

TransitionModel TransitionModel::from_rows(
    const std::vector<std::vector<std::vector<double>>>& rows) {
  const int s_count = static_cast<int>(rows.size());
  const int a_count = s_count == 0 ? 0 : static_cast<int>(rows.front().size());
  TransitionModel model(s_count, a_count);
  for (int s = 0; s < s_count; ++s) {
    if (static_cast<int>(rows[s].size()) != a_count) {
      throw DimensionError("transition rows: state " + std::to_string(s) +
                           " has a different number of actions");
    }
    for (int a = 0; a < a_count; ++a) {
      if (static_cast<int>(rows[s][a].size()) != s_count) {
        throw DimensionError("transition row (" + std::to_string(s) + "," +
                             std::to_string(a) + ") has wrong length");
      }
      for (int next = 0; next < s_count; ++next) model(s, a, next) = rows[s][a][next];
    }
  }
  return model;
}

namespace {

bool unique_labels(const std::vector<std::string>& labels) {
  return std::set<std::string>(labels.begin(), labels.end()).size() == labels.size();
}

}  // namespace

ValidationReport validate_mdp(const RecipientMDP& mdp) {
  ValidationReport report;
  auto& out = report.violations;
  const int S = mdp.num_states();
  const int A = mdp.num_actions();

  if (S < 2) out.push_back("states: need at least 2 states, got " + std::to_string(S));
  if (!unique_labels(mdp.states.labels)) out.push_back("states: labels must be unique");
  if (A < 1) out.push_back("actions: need at least 1 action");
  if (!unique_labels(mdp.actions.labels)) out.push_back("actions: labels must be unique");
  if (mdp.horizon < 0) out.push_back("horizon: must be nonnegative");
  if (mdp.n_recipients < 1) out.push_back("recipients: need at least 1 recipient");

  if (mdp.transition.num_states() != S || mdp.transition.num_actions() != A) {
    out.push_back("transition: shape does not match state/action spaces");
  } else {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double sum = 0.0;
        bool bad_entry = false;
        for (double p : mdp.transition.row(s, a)) {
          if (!std::isfinite(p) || p < 0.0) bad_entry = true;
          sum += p;
        }
        if (bad_entry) {
          out.push_back("transition(" + std::to_string(s) + "," + std::to_string(a) +
                        "): negative or non-finite probability");
        } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
          std::ostringstream msg;
          msg.precision(12);
          msg << "transition(" << s << "," << a << "): row sums to " << sum;
          out.push_back(msg.str());
        }
      }
    }
  }

  if (mdp.reward.rows() != static_cast<std::size_t>(S) ||
      mdp.reward.cols() != static_cast<std::size_t>(S)) {
    out.push_back("reward: table must be S x S");
  } else {
    for (int s = 0; s < S; ++s) {
      for (int next = 0; next < S; ++next) {
        if (!std::isfinite(mdp.reward(s, next))) {
          out.push_back("reward(" + std::to_string(s) + "," + std::to_string(next) +
                        "): not finite");
        }
      }
    }
  }
  return report;
}

double action_value(const RecipientMDP& mdp, int s, int action,
                    std::span<const double> next_values) {
  const auto row = mdp.transition.row(s, action);
  double value = 0.0;
  for (int next = 0; next < mdp.num_states(); ++next) {
    if (row[next] == 0.0) continue;
    value += row[next] * (mdp.reward(s, next) + next_values[next]);
  }
  return value;
}

RecipientSolution solve_recipient_policy(const RecipientMDP& mdp) {
  if (auto report = validate_mdp(mdp); !report.ok()) {
    throw ValidationError("invalid_mdp", report.violations);
  }
  const int S = mdp.num_states();
  const int T = mdp.horizon;

  RecipientSolution sol;
  sol.values.v.assign(T + 1, std::vector<double>(S, 0.0));
  sol.policy.action_of.assign(T, std::vector<int>(S, 0));

  for (int t = T - 1; t >= 0; --t) {
    const auto& next = sol.values.v[t + 1];
    for (int s = 0; s < S; ++s) {
      int best_action = 0;
      double best = action_value(mdp, s, 0, next);
      for (int a = 1; a < mdp.num_actions(); ++a) {
        const double q = action_value(mdp, s, a, next);
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      sol.values.v[t][s] = best;
      sol.policy.action_of[t][s] = best_action;
    }
  }
  return sol;
}

double unattacked_group_value(const RecipientMDP& mdp, const TimeIndexedPolicy& policy,
                              std::span<const int> initial_states) {
  if (static_cast<int>(initial_states.size()) != mdp.n_recipients) {
    throw DimensionError("unattacked_group_value: expected " +
                         std::to_string(mdp.n_recipients) + " initial states");
  }
  if (policy.horizon() < mdp.horizon) {
    throw DimensionError("unattacked_group_value: policy shorter than horizon");
  }
  const int S = mdp.num_states();
  double total = 0.0;
  for (int s0 : initial_states) {
    if (s0 < 0 || s0 >= S) throw DimensionError("unattacked_group_value: state out of range");
    std::vector<double> dist(S, 0.0);
    dist[s0] = 1.0;
    for (int t = 0; t < mdp.horizon; ++t) {
      std::vector<double> next(S, 0.0);
      for (int s = 0; s < S; ++s) {
        if (dist[s] == 0.0) continue;
        const auto row = mdp.transition.row(s, policy.action(t, s));
        for (int s2 = 0; s2 < S; ++s2) {
          const double mass = dist[s] * row[s2];
          total += mass * mdp.reward(s, s2);
          next[s2] += mass;
        }
      }
      dist = std::move(next);
    }
  }
  return total;
}

RecipientMDP circle_world(int horizon, int n_recipients, int goal_state) {
  RecipientMDP mdp;
  mdp.states.labels = {"0", "1", "2"};
  mdp.actions.labels = {"left", "right", "stay"};
  mdp.horizon = horizon;
  mdp.n_recipients = n_recipients;
  mdp.transition = TransitionModel(3, 3);
  for (int s = 0; s < 3; ++s) {
    const int left = (s + 2) % 3;
    const int right = (s + 1) % 3;
    mdp.transition(s, 0, left) += 0.8;
    mdp.transition(s, 0, right) += 0.2;
    mdp.transition(s, 1, right) += 0.8;
    mdp.transition(s, 1, left) += 0.2;
    mdp.transition(s, 2, s) += 0.8;
    mdp.transition(s, 2, left) += 0.1;
    mdp.transition(s, 2, right) += 0.1;
  }
  mdp.reward = RewardTable(3, 3, 0.0);
  for (int s = 0; s < 3; ++s) mdp.reward(s, goal_state) = 1.0;
  return mdp;
}

}  // namespace agentattack
