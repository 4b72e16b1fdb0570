#include "doctest.h"

#include <cmath>
#include <map>

#include "agentattack/errors.hpp"
#include "agentattack/rollout.hpp"
#include "support.hpp"

using namespace agentattack;

namespace {

CostMatrix paper_costs() { return CostMatrix::from_rows({{3, 1}, {2, 1}}); }

// Pearson statistic against a uniform distribution over k cells.
double chi_square(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

std::string key(const JointAttackAction& a) {
  std::string k;
  for (int t : a.targets) k += std::to_string(t) + ",";
  for (std::size_t i = 0; i < a.participation.rows(); ++i)
    for (std::size_t j = 0; j < a.participation.cols(); ++j) k += a.participation(i, j) ? '1' : '0';
  return k;
}

}  // namespace

TEST_CASE("Rng is reproducible and splits into distinct streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng s0 = Rng(42).split(0), s1 = Rng(42).split(1);
  CHECK(s0.next() != s1.next());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.below(7) < 7u);
  }
}

TEST_CASE("no-attack rollouts keep observations truthful") {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const auto D = paper_costs();
  const auto grid = BudgetGrid::make(1.0, std::vector<double>{10, 10}, D);
  const auto none = AllTimeAttackPolicy::none(D, grid);
  Rng rng(9);
  const auto trace = simulate_episode(mdp, sol.policy, none, std::vector<int>{0, 0}, rng);
  REQUIRE(trace.actual.size() == 6);
  REQUIRE(trace.delusion.size() == 5);
  for (int t = 0; t < 5; ++t) CHECK(trace.delusion[t] == trace.actual[t]);
  for (const auto& b : trace.budget) CHECK(b == std::vector<double>{10, 10});
}

TEST_CASE("zero-budget optimal rollout equals the no-attack rollout") {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const auto D = paper_costs();
  const std::vector<double> b{0, 0};
  const auto tables = plan_alltime(mdp, sol.policy, D, b);
  const auto opt = AllTimeAttackPolicy::optimal(tables);
  const auto none = AllTimeAttackPolicy::none(D, tables.grid());
  Rng r1(12), r2(12);
  const auto t1 = simulate_episode(mdp, sol.policy, opt, std::vector<int>{0, 0}, r1);
  const auto t2 = simulate_episode(mdp, sol.policy, none, std::vector<int>{0, 0}, r2);
  CHECK(t1.actual == t2.actual);
  CHECK(t1.step_reward == t2.step_reward);
}

TEST_CASE("all-time budgets are nonincreasing and nonnegative along rollouts") {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const auto D = paper_costs();
  const auto tables = plan_alltime(mdp, sol.policy, D, std::vector<double>{10, 10});
  const auto grid = tables.grid();
  for (const auto& attacker :
       {AllTimeAttackPolicy::optimal(tables), AllTimeAttackPolicy::random(D, grid, 3)}) {
    for (std::uint64_t e = 0; e < 50; ++e) {
      Rng rng = Rng(77).split(e);
      const auto trace = simulate_episode(mdp, sol.policy, attacker, std::vector<int>{0, 0}, rng);
      for (std::size_t t = 0; t + 1 < trace.budget.size(); ++t)
        for (int j = 0; j < 2; ++j) {
          CHECK(trace.budget[t + 1][j] <= trace.budget[t][j]);
          CHECK(trace.budget[t + 1][j] >= 0.0);
        }
    }
  }
}

TEST_CASE("deterministic dynamics give zero standard error") {
  RecipientMDP mdp;
  mdp.states.labels = {"0", "1"};
  mdp.actions.labels = {"flip"};
  mdp.horizon = 4;
  mdp.n_recipients = 2;
  mdp.transition = TransitionModel(2, 1);
  mdp.transition(0, 0, 1) = 1.0;
  mdp.transition(1, 0, 0) = 1.0;
  mdp.reward = RewardTable(2, 2, 0.0);
  mdp.reward(0, 1) = 1.0;
  const auto sol = solve_recipient_policy(mdp);
  const auto D = CostMatrix::from_rows({{1}, {1}});
  const auto grid = BudgetGrid::make(1.0, std::vector<double>{2}, D);
  const auto est = monte_carlo_value(mdp, sol.policy, AllTimeAttackPolicy::none(D, grid), std::vector<int>{0, 1},
                                     200, 5);
  CHECK(est.mean == 4.0);
  CHECK(est.standard_error == 0.0);
}

TEST_CASE("random all-time baseline is uniform over feasible attacks") {
  // chi-square critical values at alpha = 0.01
  const auto D = paper_costs();
  const auto grid = BudgetGrid::make(1.0, std::vector<double>{10, 10}, D);
  struct Case {
    DPState state;
    std::size_t cells;
    double critical;
  };
  const std::vector<Case> cases{{{{0, 1}, {0, 1}, {2, 0}}, 3, 9.210}, {{{0, 1}, {0, 1}, {10, 10}}, 49, 73.683}};
  for (const auto& c : cases) {
    const auto feasible = enumerate_feasible_attacks(c.state, 3, D, grid);
    REQUIRE(feasible.size() == c.cells);
    std::map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < feasible.size(); ++k) slot[key(feasible[k])] = k;
    // Five independent seeds; under uniformity two or more rejections at
    // alpha = 0.01 happen with probability about 1e-3.
    int rejections = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::vector<std::size_t> counts(c.cells, 0);
      Rng rng(seed);
      const std::size_t draws = 200 * c.cells;
      for (std::size_t k = 0; k < draws; ++k) {
        const auto a = random_alltime_baseline(c.state, 3, D, grid, rng);
        REQUIRE(slot.count(key(a)) == 1);
        ++counts[slot[key(a)]];
      }
      rejections += chi_square(counts) >= c.critical;
    }
    CHECK(rejections <= 1);
  }
}

TEST_CASE("random instant baseline") {
  Rng rng(31);
  const std::vector<double> b{0.8, 0.5};
  std::size_t first = 0;
  const std::size_t draws = 10000;
  for (std::size_t k = 0; k < draws; ++k) {
    const auto x = random_instant_baseline(2, b, rng);
    const bool a = x(0, 0) == 0.8 && x(1, 1) == 0.5 && x(1, 0) == 0.0 && x(0, 1) == 0.0;
    const bool c = x(1, 0) == 0.8 && x(0, 1) == 0.5 && x(0, 0) == 0.0 && x(1, 1) == 0.0;
    CHECK((a || c));
    first += a;
  }
  // two-sided 99% band for a fair coin
  CHECK(std::abs(static_cast<double>(first) - draws / 2.0) < 2.576 * std::sqrt(draws * 0.25));
  CHECK_THROWS_AS(random_instant_baseline(3, b, rng), DimensionError);
  CHECK_THROWS_AS(random_instant_baseline(2, std::vector<double>{1.0}, rng), DimensionError);
}

TEST_CASE("Monte-Carlo is seed-deterministic and agrees with the exact curve") {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const std::vector<int> start{0, 0};
  const EffortCostModel model{{0, 2}, 1e-4, 3};
  const std::vector<double> b{0.8, 0.5};
  const auto tables = plan_instant(mdp, sol.policy, b, model);
  for (const auto& attacker : {InstantAttackPolicy::optimal(tables, b), InstantAttackPolicy::random(b),
                               InstantAttackPolicy::none(b)}) {
    const auto e1 = monte_carlo_value(mdp, sol.policy, attacker, model, start, 4000, 99);
    const auto e2 = monte_carlo_value(mdp, sol.policy, attacker, model, start, 4000, 99);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.cumulative_mean == e2.cumulative_mean);
    const auto exact = exact_curve(mdp, sol.policy, attacker, model, start);
    REQUIRE(exact.size() == 6);
    CHECK(exact[0] == 0.0);
    for (std::size_t t = 1; t < exact.size(); ++t) CHECK(exact[t] >= exact[t - 1]);
    CHECK(std::abs(e1.mean - exact.back()) <= 4 * e1.standard_error + 1e-12);
  }
  CHECK(exact_curve(mdp, sol.policy, InstantAttackPolicy::optimal(tables, b), model, start).back() ==
        doctest::Approx(tables.value_at(0, start)).epsilon(1e-9));
}

TEST_CASE("all-time exact curve of the optimal attack reproduces the planned value") {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const auto tables = plan_alltime(mdp, sol.policy, paper_costs(), std::vector<double>{10, 10});
  const std::vector<int> start{0, 0};
  const auto curve = exact_curve(mdp, sol.policy, AllTimeAttackPolicy::optimal(tables), start);
  CHECK(curve.back() == doctest::Approx(tables.value_at(0, tables.initial_state(start))).epsilon(1e-12));
  const auto none = exact_curve(mdp, sol.policy, AllTimeAttackPolicy::none(paper_costs(), tables.grid()), start);
  CHECK(none.back() == doctest::Approx(8.0).epsilon(1e-12));
}
