#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "agentattack/mdp.hpp"
#include "agentattack/rng.hpp"
#include "oracles/alltime_oracle.hpp"

namespace testsupport {

using agentattack::RecipientMDP;
using agentattack::Rng;

/// Random row-stochastic transitions; roughly a third of the entries are
/// zeroed to exercise sparse rows.
inline RecipientMDP random_mdp(Rng& rng, int S, int A, int T, int n) {
  RecipientMDP mdp;
  for (int s = 0; s < S; ++s) mdp.states.labels.push_back("s" + std::to_string(s));
  for (int a = 0; a < A; ++a) mdp.actions.labels.push_back("a" + std::to_string(a));
  mdp.horizon = T;
  mdp.n_recipients = n;
  mdp.transition = agentattack::TransitionModel(S, A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      std::vector<double> w(S);
      double sum = 0.0;
      for (int s2 = 0; s2 < S; ++s2) {
        w[s2] = rng.uniform() < 0.33 ? 0.0 : rng.uniform() + 0.05;
        sum += w[s2];
      }
      if (sum == 0.0) {
        w[rng.below(S)] = 1.0;
        sum = 1.0;
      }
      for (int s2 = 0; s2 < S; ++s2) mdp.transition(s, a, s2) = w[s2] / sum;
    }
  }
  mdp.reward = agentattack::RewardTable(S, S);
  for (int s = 0; s < S; ++s)
    for (int s2 = 0; s2 < S; ++s2) mdp.reward(s, s2) = rng.uniform() * 2.0 - 0.5;
  return mdp;
}

inline oracle::SmallMdp to_oracle(const RecipientMDP& mdp) {
  oracle::SmallMdp o;
  o.S = mdp.num_states();
  o.A = mdp.num_actions();
  o.T = mdp.horizon;
  o.n = mdp.n_recipients;
  o.P.assign(o.S, std::vector<std::vector<double>>(o.A, std::vector<double>(o.S)));
  o.R.assign(o.S, std::vector<double>(o.S));
  for (int s = 0; s < o.S; ++s) {
    for (int a = 0; a < o.A; ++a)
      for (int s2 = 0; s2 < o.S; ++s2) o.P[s][a][s2] = mdp.transition(s, a, s2);
    for (int s2 = 0; s2 < o.S; ++s2) o.R[s][s2] = mdp.reward(s, s2);
  }
  return o;
}

}  // namespace testsupport
