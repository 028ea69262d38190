#include <gtest/gtest.h>

#include "podfb/dynamics.hpp"
#include "podfb/generator.hpp"
#include "podfb/instance_json.hpp"

using namespace podfb;

namespace {

AuctionInstance zvcg() {
  return parse_instance(R"({"pod":{"positions":2,"max_ads":2,"max_duration_s":30},"agents":[
    {"id":"a1","duration_s":30,"value_micro":10000000},
    {"id":"a2","duration_s":15,"value_micro":10000000},
    {"id":"a3","duration_s":15,"value_micro":10000000}]})");
}

constexpr std::int64_t kTen = 10'000'000;

DynamicsConfig unit_epsilon() {
  DynamicsConfig cfg;
  cfg.epsilon.assign(3, Money{1});
  return cfg;
}

std::vector<std::vector<std::int64_t>> top_bids(const DynamicsTrace& t) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& r : t.rounds) {
    out.emplace_back();
    for (const auto& row : r.bids) out.back().push_back(std::max_element(row.begin(), row.end())->micros());
  }
  return out;
}

} // namespace

TEST(Dynamics, VcgCyclesOnZvcg) {
  const auto t = run(zvcg(), Policy::Vcg, unit_epsilon());
  using V = std::vector<std::vector<std::int64_t>>;
  EXPECT_EQ(top_bids(t), (V{{kTen, kTen, kTen}, {kTen, 1, 1}, {3, kTen, kTen}, {kTen, 1, 1}}));
  EXPECT_EQ(t.outcome, Termination::Cycled);
  EXPECT_EQ(t.matched_round, 2);
  EXPECT_EQ(t.efficiency, 50);
}

TEST(Dynamics, CoreConvergesOnZvcg) {
  const auto t = run(zvcg(), Policy::Core, unit_epsilon());
  using V = std::vector<std::vector<std::int64_t>>;
  EXPECT_EQ(top_bids(t), (V{{kTen, kTen, kTen}, {kTen, kTen / 2 + 1, kTen / 2 + 1}, {kTen, kTen / 2 + 1, kTen / 2 + 1}}));
  EXPECT_EQ(t.outcome, Termination::Converged);
  EXPECT_EQ(t.efficiency, 100);
}

TEST(Dynamics, BicoreConvergesByRoundTwo) {
  const auto t = run(zvcg(), Policy::Bicore, unit_epsilon());
  using V = std::vector<std::vector<std::int64_t>>;
  EXPECT_EQ(top_bids(t), (V{{kTen, kTen, kTen}, {kTen, kTen, kTen}}));
  EXPECT_EQ(t.outcome, Termination::Converged);
  EXPECT_EQ(t.efficiency, 100);
}

TEST(Dynamics, TraceRecordsFeedbackForEveryRoundButTheLast) {
  const auto t = run(zvcg(), Policy::Core, unit_epsilon());
  for (int r = 0; r + 1 < t.num_rounds(); ++r) EXPECT_TRUE(t.rounds[static_cast<std::size_t>(r)].feedback.has_value());
  EXPECT_FALSE(t.rounds.back().feedback.has_value());
  EXPECT_EQ(t.rounds[0].feedback->discounts[1], Rational(kTen / 2));
}

TEST(Dynamics, UpdateRuleClampsAndFloors) {
  auto fv = FeedbackVector::zeros(1);
  fv.discounts[0] = Rational(7, 2);
  EXPECT_EQ(updated_target(Money{10}, Money{100}, AgentStatus::StrictWinner, fv, 0, Money{1}), Money{12});
  EXPECT_EQ(updated_target(Money{99}, Money{100}, AgentStatus::StrictWinner, fv, 0, Money{1}), Money{100});
  EXPECT_EQ(updated_target(Money{10}, Money{100}, AgentStatus::Tied, fv, 0, Money{1}), Money{9});
  fv.raises[0] = 20;
  EXPECT_EQ(updated_target(Money{10}, Money{100}, AgentStatus::StrictLoser, fv, 0, Money{1}), Money{0});
  EXPECT_EQ(updated_target(Money{30}, Money{100}, AgentStatus::StrictLoser, fv, 0, Money{1}), Money{9});
}

TEST(Dynamics, RelativeChangeEdgeCases) {
  EXPECT_EQ(detail::relative_change(Money{0}, Money{0}), std::optional<Rational>{0});
  EXPECT_FALSE(detail::relative_change(Money{0}, Money{5}).has_value());
  EXPECT_EQ(detail::relative_change(Money{10}, Money{9}), std::optional<Rational>(Rational(1, 10)));
}

TEST(Dynamics, ConfigValidation) {
  DynamicsConfig cfg;
  cfg.max_rounds = 0;
  EXPECT_THROW(run(zvcg(), Policy::Vcg, cfg), std::invalid_argument);
  cfg = DynamicsConfig{};
  cfg.epsilon = {Money{1}};
  EXPECT_THROW(run(zvcg(), Policy::Vcg, cfg), std::invalid_argument);
  cfg.epsilon = {Money{1}, Money{0}, Money{1}};
  EXPECT_THROW(run(zvcg(), Policy::Vcg, cfg), std::invalid_argument);
  EXPECT_EQ(resolve_epsilon(zvcg(), DynamicsConfig{}), std::vector<Money>(3, Money{kTen / 10}));
}

TEST(Dynamics, RunsRespectBoundsAndTerminationRules) {
  GeneratorParams params;
  for (std::uint64_t k = 0; k < 40; ++k) {
    const auto inst = generate_instance(params, k);
    for (Policy p : {Policy::Vcg, Policy::Core, Policy::Bicore}) {
      for (bool simultaneous : {true, false}) {
        DynamicsConfig cfg;
        cfg.simultaneous = simultaneous;
        const auto t = run(inst, p, cfg, InitialTargets::random(k));
        ASSERT_GE(t.num_rounds(), 1);
        ASSERT_LE(t.num_rounds(), cfg.max_rounds);
        for (const auto& r : t.rounds)
          for (std::size_t i = 0; i < inst.size(); ++i)
            for (std::size_t x = 0; x < inst.positions(); ++x) {
              EXPECT_GE(r.bids[i][x], Money::zero());
              EXPECT_LE(r.bids[i][x], inst.agent(i).value[x]);
            }
        EXPECT_GT(t.efficiency, 0);
        EXPECT_LE(t.efficiency, 100);
        if (t.outcome == Termination::Cycled) {
          EXPECT_GE(t.matched_round, 1);
          EXPECT_LT(t.matched_round, t.num_rounds() - 1);
          EXPECT_EQ(t.rounds[static_cast<std::size_t>(t.matched_round - 1)].bids, t.rounds.back().bids);
        }
        if (t.outcome == Termination::MaxRounds) {
          EXPECT_EQ(t.num_rounds(), cfg.max_rounds);
        }
      }
    }
  }
}

TEST(Dynamics, DeterministicForFixedSeed) {
  const auto inst = generate_instance(GeneratorParams{}, 3);
  const auto a = run(inst, Policy::Bicore, DynamicsConfig{}, InitialTargets::random(7));
  const auto b = run(inst, Policy::Bicore, DynamicsConfig{}, InitialTargets::random(7));
  EXPECT_EQ(top_bids(a), top_bids(b));
  EXPECT_EQ(a.outcome, b.outcome);
  const auto c = run(inst, Policy::Bicore, DynamicsConfig{}, InitialTargets::random(8));
  EXPECT_NE(top_bids(a)[0], top_bids(c)[0]);
}

TEST(Dynamics, ExplicitTargetsAreValidated) {
  InitialTargets init{InitialTargets::Kind::Explicit, 0, {Money{1}}};
  EXPECT_THROW(run(zvcg(), Policy::Core, DynamicsConfig{}, init), std::invalid_argument);
  init.targets = {Money{1}, Money{kTen + 1}, Money{0}};
  EXPECT_THROW(run(zvcg(), Policy::Core, DynamicsConfig{}, init), std::invalid_argument);
  const auto t = run(zvcg(), Policy::Core, DynamicsConfig{}, InitialTargets::zero_bids(zvcg()));
  for (const auto& row : t.rounds.front().bids)
    for (Money b : row) EXPECT_EQ(b, Money::zero());
}

TEST(Dynamics, EfficiencyUsesTrueValues) {
  const auto inst = zvcg();
  Allocation long_ad = Allocation::empty(2);
  long_ad.slots[0] = 0;
  EXPECT_EQ(efficiency_percent(inst, long_ad), 50);
}
