#pragma once

#include <span>

#include "agentattack/matrix.hpp"
#include "agentattack/mdp.hpp"

namespace agentattack {

/// Move phase of one time step. Each recipient acts on its delusional state
/// with the step's policy row and moves from its true state. Calls
/// fn(next_actual, probability, group_reward) for every joint successor with
/// nonzero mass, in lexicographic order.
template <typename Fn>
void for_each_move_outcome(const RecipientMDP& mdp, const TimeIndexedPolicy& policy, int policy_t,
                           std::span<const int> actual, std::span<const int> delusion, Fn&& fn) {
  const std::size_t n = actual.size();
  const int S = mdp.num_states();
  std::vector<std::span<const double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = mdp.transition.row(actual[i], policy.action(policy_t, delusion[i]));
  }
  JointState next(n, 0);
  std::vector<double> mass(n + 1, 1.0);
  std::vector<double> reward(n + 1, 0.0);
  std::vector<int> cursor(n, -1);
  std::size_t depth = 0;
  if (n == 0) {
    fn(static_cast<const JointState&>(next), 1.0, 0.0);
    return;
  }
  while (true) {
    if (depth == n) {
      fn(static_cast<const JointState&>(next), mass[n], reward[n]);
      --depth;
      continue;
    }
    if (++cursor[depth] >= S) {
      cursor[depth] = -1;
      if (depth == 0) return;
      --depth;
      continue;
    }
    const int s2 = cursor[depth];
    const double p = rows[depth][s2];
    if (p == 0.0) continue;
    next[depth] = s2;
    mass[depth + 1] = mass[depth] * p;
    reward[depth + 1] = reward[depth] + mdp.reward(actual[depth], s2);
    ++depth;
  }
}

}  // namespace agentattack
