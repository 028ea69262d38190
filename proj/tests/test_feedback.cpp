#include <gtest/gtest.h>

#include "oracles.hpp"
#include "podfb/feedback.hpp"
#include "podfb/instance_json.hpp"
#include "podfb/verify.hpp"

using namespace podfb;

namespace {

AuctionInstance zvcg() {
  return parse_instance(R"({"pod":{"positions":2,"max_ads":2,"max_duration_s":30},"agents":[
    {"id":"a1","duration_s":30,"value_micro":10000000},
    {"id":"a2","duration_s":15,"value_micro":10000000},
    {"id":"a3","duration_s":15,"value_micro":10000000}]})");
}

const Rational kTen = 10'000'000;

std::vector<Rational> Q(std::initializer_list<Rational> xs) { return std::vector<Rational>(xs); }

AgentSet set_of(std::initializer_list<std::size_t> xs) {
  AgentSet s;
  for (auto x : xs) s = s.with(x);
  return s;
}

} // namespace

TEST(Coalitional, ZvcgValues) {
  const Coalitions co{zvcg()};
  EXPECT_EQ(co.optimum(), Money::from_units(20));
  EXPECT_EQ(co.value(co.everyone(), set_of({0})).value(), Money::from_units(10));
  EXPECT_EQ(co.winners_value(set_of({0, 1})).value(), Money::from_units(10));
  EXPECT_FALSE(co.value(co.everyone(), set_of({0, 1})).is_finite());
  EXPECT_EQ(co.strict_winners(), set_of({1, 2}));
  EXPECT_EQ(co.strict_losers(), set_of({0}));
}

TEST(Coalitional, ValuesMatchIndependentEnumeration) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    CounterRng rng{41, k};
    const auto inst = random_oracle_instance(rng);
    const Coalitions co{inst};
    const AgentSet all = co.everyone();
    for_each_subset(all, [&](AgentSet S) {
      for_each_subset(all - S, [&](AgentSet T) {
        const auto ref = oracle::coalition_value(inst, inst.bids(), S, T);
        const auto v = co.value(S, T);
        ASSERT_EQ(v.is_finite(), ref.has_value());
        if (ref) {
          EXPECT_EQ(v.value().micros(), *ref);
        }
      });
    });
  }
}

TEST(Coalitional, NegativeInfinityOrdersBelowEverything) {
  EXPECT_LT(CoalitionalValue::neg_infinity(), CoalitionalValue::finite(Money::zero()));
  EXPECT_THROW((void)CoalitionalValue::neg_infinity().value(), std::logic_error);
}

TEST(Feedback, VcgOnZvcg) {
  const Coalitions co{zvcg()};
  const auto fv = vcg_feedback(co);
  EXPECT_EQ(fv.discounts, Q({0, kTen, kTen}));
  EXPECT_EQ(fv.raises, Q({kTen, 0, 0}));
  EXPECT_EQ(fv.seller_payoff, 0);
  EXPECT_TRUE(is_valid_feedback(co, fv));
  // Together the VCG discounts ask for more than the optimum can give.
  EXPECT_FALSE(in_core(co, Side::Winners, fv.discounts));
}

TEST(Feedback, CoreOnZvcg) {
  const Coalitions co{zvcg()};
  const auto fv = core_policy_feedback(co);
  EXPECT_EQ(fv.discounts, Q({0, kTen / 2, kTen / 2}));
  EXPECT_EQ(fv.raises, Q({kTen, 0, 0}));
  EXPECT_EQ(fv.seller_payoff, kTen);
}

TEST(Feedback, BicoreOnZvcg) {
  const Coalitions co{zvcg()};
  const auto lex = bicore_feedback(co, BicoreSelection::Leximin);
  EXPECT_EQ(lex.discounts, Q({0, kTen / 3, kTen / 3}));
  EXPECT_EQ(lex.raises, Q({kTen / 3, 0, 0}));
  const auto first = bicore_feedback(co, BicoreSelection::RaiseFirst);
  EXPECT_EQ(first.discounts, Q({0, 0, 0}));
  EXPECT_EQ(first.raises, Q({kTen, 0, 0}));
  EXPECT_TRUE(in_bicore(co, lex.discounts, lex.raises));
  EXPECT_TRUE(in_bicore(co, first.discounts, first.raises));
  EXPECT_FALSE(in_bicore(co, Q({0, kTen / 2, kTen / 2}), Q({kTen, 0, 0})));
}

TEST(Feedback, BicoreConstraintsOnZvcg) {
  const Coalitions co{zvcg()};
  const auto cs = bicore_constraints(co);
  for (const auto& c : cs) {
    EXPECT_TRUE(c.discounters.subset_of(co.strict_winners()));
    EXPECT_TRUE(c.raisers.subset_of(co.strict_losers()));
    EXPECT_EQ(c.rhs, Money::from_units(10));
  }
  EXPECT_EQ(cs.size(), 7u);
}

TEST(Feedback, TiedAgentsGetNothing) {
  const auto inst = parse_instance(R"({"pod":{"positions":1,"max_ads":1,"max_duration_s":30},"agents":[
    {"id":"a","duration_s":15,"value_micro":5},{"id":"b","duration_s":15,"value_micro":5},
    {"id":"c","duration_s":15,"value_micro":3}]})");
  const Coalitions co{inst};
  for (const auto& fv : {vcg_feedback(co), core_policy_feedback(co), bicore_feedback(co)}) {
    EXPECT_EQ(fv.discounts, Q({0, 0, 0}));
    EXPECT_EQ(fv.raises, Q({0, 0, 2}));
  }
}

TEST(Feedback, OraclePropertiesOnRandomPods) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    CounterRng rng{43, k};
    const auto inst = random_oracle_instance(rng);
    const Coalitions co{inst};
    auto a = check_bicore_oracle(co, rng, 3, 3);
    a.merge(check_relationships(co, rng));
    a.merge(check_policy_validity(co));
    EXPECT_TRUE(a.ok()) << serialize(inst) << "\n" << (a.ok() ? "" : a.failures.front());
  }
}

TEST(Feedback, CoreDiscountsAreBoundedByVcgAndMaximal) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    CounterRng rng{44, k};
    const Coalitions co{random_oracle_instance(rng)};
    const auto vcg = vcg_feedback(co);
    const auto core = core_policy_feedback(co);
    const auto bi = bicore_feedback(co);
    for (std::size_t i = 0; i < co.size(); ++i) {
      EXPECT_LE(core.discounts[i], vcg.discounts[i]);
      EXPECT_LE(core.raises[i], vcg.raises[i]);
      EXPECT_LE(bi.discounts[i], vcg.discounts[i]);
      EXPECT_LE(bi.raises[i], vcg.raises[i]);
    }
    EXPECT_TRUE(in_core(co, Side::Winners, core.discounts));
    EXPECT_TRUE(in_core(co, Side::Losers, core.raises));
    // No single coordinate of the bicore point can grow.
    const auto& members = (co.strict_winners() | co.strict_losers()).members();
    for (std::size_t i : members) {
      auto pi = bi.discounts;
      auto mu = bi.raises;
      (co.status(i) == AgentStatus::StrictWinner ? pi : mu)[i] += Rational(1, 7);
      EXPECT_FALSE(in_bicore(co, pi, mu));
    }
  }
}

TEST(Feedback, OracleRejectsInvalidVectors) {
  const auto inst = zvcg();
  EXPECT_FALSE(bicore_membership_oracle(inst, inst.bids(), Q({1, 0, 0}), Q({0, 0, 0})));
  EXPECT_FALSE(bicore_membership_oracle(inst, inst.bids(), Q({0, 0, 0}), Q({0, 1, 0})));
  EXPECT_TRUE(bicore_membership_oracle(inst, inst.bids(), Q({0, kTen / 3, kTen / 3}), Q({kTen / 3, 0, 0})));
  EXPECT_FALSE(bicore_membership_oracle(inst, inst.bids(), Q({0, kTen / 3, kTen / 3}), Q({kTen / 3 + 1, 0, 0})));
}
