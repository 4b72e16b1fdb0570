#pragma once

// Exhaustive attack-decision-tree oracle for the all-time game. It shares no
// code with the planner: the recipients' policy, the attack set, the budget
// bookkeeping and the expectations are all recomputed here by plain
// recursion over every feasible attack at every reachable node. Integer costs
// and budgets only.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

struct SmallMdp {
  int S = 2;
  int A = 1;
  int T = 1;
  int n = 1;
  // P[s][a][s2]
  std::vector<std::vector<std::vector<double>>> P;
  // R[s][s2]
  std::vector<std::vector<double>> R;
};

/// pi[t][s] by backward induction, lowest action index on ties.
inline std::vector<std::vector<int>> recipient_policy(const SmallMdp& mdp) {
  std::vector<double> v(mdp.S, 0.0);
  std::vector<std::vector<int>> pi(mdp.T, std::vector<int>(mdp.S, 0));
  for (int t = mdp.T - 1; t >= 0; --t) {
    std::vector<double> nv(mdp.S, 0.0);
    for (int s = 0; s < mdp.S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.A; ++a) {
        double q = 0.0;
        for (int s2 = 0; s2 < mdp.S; ++s2) q += mdp.P[s][a][s2] * (mdp.R[s][s2] + v[s2]);
        if (q > best) {
          best = q;
          pi[t][s] = a;
        }
      }
      nv[s] = best;
    }
    v = nv;
  }
  return pi;
}

class AllTimeOracle {
 public:
  /// costs[i][j] and budgets[j] are nonnegative integers.
  AllTimeOracle(SmallMdp mdp, std::vector<std::vector<int>> costs, std::vector<int> budgets)
      : mdp_(std::move(mdp)), costs_(std::move(costs)), m_(static_cast<int>(budgets.size())),
        budgets_(std::move(budgets)), pi_(recipient_policy(mdp_)) {}

  /// Minimal expected group reward from time 0.
  double value(const std::vector<int>& start) const { return node(0, start, budgets_); }
  double value(const std::vector<int>& start, const std::vector<int>& budget) const {
    return node(0, start, budget);
  }

  /// Expected group reward when no attack is ever made.
  double unattacked(const std::vector<int>& start) const { return passive(0, start); }

  /// Number of feasible attacks at a node (for enumeration checks).
  std::size_t attack_count(const std::vector<int>& actual, const std::vector<int>& budget) const {
    std::size_t count = 0;
    for_each_attack(actual, budget, [&](const std::vector<int>&, const std::vector<int>&) { ++count; });
    return count;
  }

 private:
  template <typename Fn>
  void for_each_attack(const std::vector<int>& actual, const std::vector<int>& budget, Fn&& fn) const {
    const int n = mdp_.n;
    const int bits = n * m_;
    int target_combos = 1;
    for (int i = 0; i < n; ++i) target_combos *= mdp_.S;
    for (long beta = 0; beta < (1L << bits); ++beta) {
      std::vector<int> spend(m_, 0);
      std::vector<bool> hit(n, false);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m_; ++j)
          if (beta & (1L << (i * m_ + j))) {
            spend[j] += costs_[i][j];
            hit[i] = true;
          }
      bool ok = true;
      for (int j = 0; j < m_; ++j) ok = ok && spend[j] <= budget[j];
      if (!ok) continue;
      for (int code = 0; code < target_combos; ++code) {
        std::vector<int> target(n);
        int c = code;
        for (int i = 0; i < n; ++i) {
          target[i] = c % mdp_.S;
          c /= mdp_.S;
        }
        bool canonical = true;
        for (int i = 0; i < n; ++i) {
          if (hit[i] && target[i] == actual[i]) canonical = false;
          if (!hit[i] && target[i] != actual[i]) canonical = false;
        }
        if (!canonical) continue;
        std::vector<int> left(m_);
        for (int j = 0; j < m_; ++j) left[j] = budget[j] - spend[j];
        fn(target, left);
      }
    }
  }

  /// E[reward + continuation] over every joint move of the recipients.
  template <typename Cont>
  double expect_move(int t, const std::vector<int>& actual, const std::vector<int>& observed,
                     Cont&& cont) const {
    const int n = mdp_.n;
    int combos = 1;
    for (int i = 0; i < n; ++i) combos *= mdp_.S;
    double total = 0.0;
    for (int code = 0; code < combos; ++code) {
      std::vector<int> next(n);
      int c = code;
      double p = 1.0, r = 0.0;
      for (int i = 0; i < n; ++i) {
        next[i] = c % mdp_.S;
        c /= mdp_.S;
        const int a = pi_[t][observed[i]];
        p *= mdp_.P[actual[i]][a][next[i]];
        r += mdp_.R[actual[i]][next[i]];
      }
      if (p == 0.0) continue;
      total += p * (r + cont(next));
    }
    return total;
  }

  double node(int t, const std::vector<int>& actual, const std::vector<int>& budget) const {
    if (t == mdp_.T) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for_each_attack(actual, budget, [&](const std::vector<int>& observed, const std::vector<int>& left) {
      const double v = expect_move(t, actual, observed,
                                   [&](const std::vector<int>& next) { return node(t + 1, next, left); });
      best = std::min(best, v);
    });
    return best;
  }

  double passive(int t, const std::vector<int>& actual) const {
    if (t == mdp_.T) return 0.0;
    return expect_move(t, actual, actual, [&](const std::vector<int>& next) { return passive(t + 1, next); });
  }

  SmallMdp mdp_;
  std::vector<std::vector<int>> costs_;
  int m_;
  std::vector<int> budgets_;
  std::vector<std::vector<int>> pi_;
};

}  // namespace oracle
