#include <benchmark/benchmark.h>

#include "agentattack/alltime_planner.hpp"
#include "agentattack/instant_planner.hpp"
#include "agentattack/rollout.hpp"

using namespace agentattack;

namespace {

const CostMatrix kCosts = CostMatrix::from_rows({{3, 1}, {2, 1}});
const EffortCostModel kModel{{0, 2}, 1e-4, 3};

void BM_PlanAllTime(benchmark::State& state) {
  const auto mdp = circle_world(static_cast<int>(state.range(0)), 2);
  const auto sol = solve_recipient_policy(mdp);
  const std::vector<double> budget{10, 10};
  for (auto _ : state) benchmark::DoNotOptimize(plan_alltime(mdp, sol.policy, kCosts, budget));
}
BENCHMARK(BM_PlanAllTime)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_StepAllocation(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> V(9);
  for (double& v : V) v = rng.uniform() * 4;
  const std::vector<int> actual{0, 1};
  const std::vector<double> budget{0.8, 0.5};
  StepSolverOptions opts;
  opts.grid_divisions = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_step_allocation(actual, V, budget, kModel, opts));
}
BENCHMARK(BM_StepAllocation)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_PlanInstant(benchmark::State& state) {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const std::vector<double> budget{0.8, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(plan_instant(mdp, sol.policy, budget, kModel));
}
BENCHMARK(BM_PlanInstant)->Unit(benchmark::kMillisecond);

void BM_AllTimeRollouts(benchmark::State& state) {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const auto tables = plan_alltime(mdp, sol.policy, kCosts, std::vector<double>{10, 10});
  const auto attacker = AllTimeAttackPolicy::optimal(tables);
  const std::vector<int> start{0, 0};
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo_value(mdp, sol.policy, attacker, start, 10000, 7));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_AllTimeRollouts)->Unit(benchmark::kMillisecond);

void BM_InstantRollouts(benchmark::State& state) {
  const auto mdp = circle_world(5, 2);
  const auto sol = solve_recipient_policy(mdp);
  const std::vector<double> budget{0.8, 0.5};
  const auto tables = plan_instant(mdp, sol.policy, budget, kModel);
  const auto attacker = InstantAttackPolicy::optimal(tables, budget);
  const std::vector<int> start{0, 0};
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo_value(mdp, sol.policy, attacker, kModel, start, 10000, 7));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_InstantRollouts)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
