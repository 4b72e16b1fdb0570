#include "doctest.h"

#include <cmath>

#include "agentattack/attack_model.hpp"
#include "agentattack/errors.hpp"
#include "agentattack/rng.hpp"

using namespace agentattack;

namespace {

// D(1,1)=3, D(2,1)=2, D(1,2)=1, D(2,2)=1 with rows = recipients.
CostMatrix paper_costs() { return CostMatrix::from_rows({{3, 1}, {2, 1}}); }

ParticipationMatrix beta(std::vector<std::vector<std::uint8_t>> rows) {
  return ParticipationMatrix::from_rows(rows);
}

}  // namespace

TEST_CASE("attack_spend sums participating costs per attacker") {
  const auto D = paper_costs();
  CHECK(attack_spend(beta({{1, 0}, {0, 0}}), D) == std::vector<double>{3, 0});
  CHECK(attack_spend(beta({{0, 0}, {0, 0}}), D) == std::vector<double>{0, 0});
  CHECK(attack_spend(beta({{1, 1}, {1, 1}}), D) == std::vector<double>{5, 2});
  CHECK_THROWS_AS(attack_spend(ParticipationMatrix(3, 2), D), DimensionError);
}

TEST_CASE("attack_spend is additive over disjoint participation") {
  const auto D = paper_costs();
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      if (a & b) continue;
      auto make = [](unsigned bits) {
        ParticipationMatrix m(2, 2);
        for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = (bits >> k) & 1u;
        return m;
      };
      const auto sa = attack_spend(make(a), D);
      const auto sb = attack_spend(make(b), D);
      const auto sab = attack_spend(make(a | b), D);
      for (int j = 0; j < 2; ++j) CHECK(sab[j] == sa[j] + sb[j]);
    }
  }
}

TEST_CASE("is_feasible") {
  const auto D = paper_costs();
  const std::vector<int> actual{0, 1};
  const auto none = JointAttackAction::none(actual, 2);
  CHECK(is_feasible(none, actual, D, std::vector<double>{0, 0}));

  JointAttackAction both{{1, 2}, beta({{1, 0}, {1, 0}})};
  CHECK_FALSE(is_feasible(both, actual, D, std::vector<double>{4, 10}));
  CHECK(is_feasible(both, actual, D, std::vector<double>{10, 10}));
  CHECK(is_feasible(both, actual, D, std::vector<double>{5, 0}));

  // attacked recipient must be pushed off its true state
  JointAttackAction self{{0, 1}, beta({{1, 0}, {0, 0}})};
  CHECK_FALSE(is_feasible(self, actual, D, std::vector<double>{10, 10}));
  // unattacked recipient must keep its true state
  JointAttackAction stale{{2, 1}, beta({{0, 0}, {0, 0}})};
  CHECK_FALSE(is_feasible(stale, actual, D, std::vector<double>{10, 10}));
}

TEST_CASE("is_feasible is monotone in the budget") {
  Rng rng(17);
  const auto D = paper_costs();
  const std::vector<int> actual{2, 0};
  for (int trial = 0; trial < 200; ++trial) {
    JointAttackAction a{{2, 0}, ParticipationMatrix(2, 2)};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) a.participation(i, j) = static_cast<std::uint8_t>(rng.below(2));
      if (a.attacked(i)) a.targets[i] = (actual[i] + 1 + static_cast<int>(rng.below(2))) % 3;
    }
    std::vector<double> b{rng.uniform() * 6, rng.uniform() * 3};
    const bool before = is_feasible(a, actual, D, b);
    b[rng.below(2)] += rng.uniform() * 3;
    if (before) CHECK(is_feasible(a, actual, D, b));
  }
}

TEST_CASE("effort_coeff") {
  CHECK(effort_coeff(0, 1e-4) == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(effort_coeff(1, 1e-4) == doctest::Approx(1.0001).epsilon(1e-15));
  CHECK(effort_coeff(2, 1e-4) == doctest::Approx(8.0001).epsilon(1e-15));
}

TEST_CASE("success_probability clamps at one") {
  CHECK(success_probability(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 0.0);
  CHECK(success_probability(std::vector<double>{0.8, 0}, std::vector<double>{1e-4, 5}) == 1.0);
  CHECK(success_probability(std::vector<double>{0.5, 0.25}, std::vector<double>{2, 1}) == 0.5);
  CHECK_THROWS_AS(success_probability(std::vector<double>{-0.1, 0}, std::vector<double>{1, 1}),
                  std::invalid_argument);
}

TEST_CASE("success_probability is nondecreasing and concave in spend") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<double> c{0.1 + rng.uniform() * 3, 0.1 + rng.uniform() * 3};
    const std::vector<double> x{rng.uniform(), rng.uniform()};
    std::vector<double> y{rng.uniform(), rng.uniform()};
    const double px = success_probability(x, c);
    const int j = static_cast<int>(rng.below(2));
    auto bigger = x;
    bigger[j] += rng.uniform();
    CHECK(success_probability(bigger, c) >= px);
    // concavity along the segment x -> y
    const double lambda = rng.uniform();
    const std::vector<double> mid{lambda * x[0] + (1 - lambda) * y[0], lambda * x[1] + (1 - lambda) * y[1]};
    CHECK(success_probability(mid, c) >= lambda * px + (1 - lambda) * success_probability(y, c) - 1e-12);
  }
}

TEST_CASE("ring_distance") {
  CHECK(ring_distance(1, 1, 3) == 0);
  CHECK(ring_distance(0, 1, 3) == 1);
  CHECK(ring_distance(0, 2, 3) == 1);
  CHECK(ring_distance(0, 3, 6) == 3);
  CHECK(ring_distance(5, 1, 6) == 2);
}

TEST_CASE("EffortCostModel uses hop distance to the recipient's true state") {
  EffortCostModel model{{0, 2}, 1e-4, 3};
  const auto c = model.coefficients(std::vector<int>{0, 1});
  CHECK(c(0, 0) == doctest::Approx(1e-4));
  CHECK(c(0, 1) == doctest::Approx(1.0001));
  CHECK(c(1, 0) == doctest::Approx(1.0001));
  CHECK(c(1, 1) == doctest::Approx(1.0001));
}

TEST_CASE("delusion_distribution examples") {
  const auto point = delusion_distribution(std::vector<double>{0, 0}, std::vector<int>{1, 2}, 3).outcomes();
  REQUIRE(point.size() == 1);
  CHECK(point[0].first == JointState{1, 2});
  CHECK(point[0].second == 1.0);

  const auto single = delusion_distribution(std::vector<double>{1}, std::vector<int>{0}, 3).outcomes();
  REQUIRE(single.size() == 2);
  CHECK(single[0].first == JointState{1});
  CHECK(single[0].second == doctest::Approx(0.5));
  CHECK(single[1].first == JointState{2});
  CHECK(single[1].second == doctest::Approx(0.5));

  const auto pair = delusion_distribution(std::vector<double>{1, 0}, std::vector<int>{0, 2}, 3).outcomes();
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].first == JointState{1, 2});
  CHECK(pair[1].first == JointState{2, 2});
  CHECK(pair[0].second == doctest::Approx(0.5));

  CHECK_THROWS(delusion_distribution(std::vector<double>{0.5}, std::vector<int>{0}, 1));
  CHECK_THROWS(delusion_distribution(std::vector<double>{1.5}, std::vector<int>{0}, 3));
}

TEST_CASE("delusion_distribution masses are nonnegative and normalized") {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const int S = 2 + static_cast<int>(rng.below(4));
    std::vector<double> p(n);
    JointState actual(n);
    for (int i = 0; i < n; ++i) {
      p[i] = rng.below(5) == 0 ? static_cast<double>(rng.below(2)) : rng.uniform();
      actual[i] = static_cast<int>(rng.below(S));
    }
    const auto dist = delusion_distribution(p, actual, S);
    double total = 0.0;
    dist.for_each([&](const JointState& d, double prob) {
      CHECK(prob >= 0.0);
      CHECK(prob == doctest::Approx(dist.probability(d)).epsilon(1e-14));
      total += prob;
    });
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}
