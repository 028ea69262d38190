#include <gtest/gtest.h>

#include "oracles.hpp"
#include "podfb/lp.hpp"
#include "podfb/rng.hpp"

using namespace podfb;

namespace {

std::vector<Rational> R(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Random box-bounded program with d variables and k extra rows.
LinearProgram random_program(CounterRng& rng, std::size_t d, std::size_t k) {
  LinearProgram lp{d};
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> e(d, 0);
    e[j] = 1;
    lp.add_constraint(e, rng.uniform(0, 9));
  }
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<Rational> a(d);
    for (auto& x : a) x = make_rational(static_cast<long>(rng.uniform(-4, 6)), static_cast<long>(rng.uniform(1, 3)));
    lp.add_constraint(a, rng.uniform(-3, 12));
  }
  std::vector<Rational> c(d);
  for (auto& x : c) x = rng.uniform(-5, 5);
  lp.set_objective(c);
  return lp;
}

} // namespace

TEST(Lp, SimpleMaximum) {
  LinearProgram lp{2};
  lp.add_constraint(R({1, 1}), 4);
  lp.add_constraint(R({1, 3}), 6);
  lp.set_objective(R({1, 2}));
  const auto out = solve_lp(lp);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.value, 5);
  EXPECT_EQ(out.point, (std::vector<Rational>{3, 1}));
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  LinearProgram bad{1};
  bad.add_ge(R({1}), 3);
  bad.add_constraint(R({1}), 2);
  bad.set_objective(R({1}));
  EXPECT_EQ(solve_lp(bad).status, LpStatus::Infeasible);

  LinearProgram open{2};
  open.add_constraint(R({1, -1}), 1);
  open.set_objective(R({0, 1}));
  EXPECT_EQ(solve_lp(open).status, LpStatus::Unbounded);
  EXPECT_THROW(pin_optimum(open), std::domain_error);
}

TEST(Lp, NegativeRightHandSideNeedsPhaseOne) {
  LinearProgram lp{2};
  lp.add_ge(R({1, 1}), 2);
  lp.add_constraint(R({1, 0}), 3);
  lp.add_constraint(R({0, 1}), 3);
  lp.set_objective(R({-1, -2}));
  const auto out = solve_lp(lp);
  ASSERT_TRUE(out.optimal());
  EXPECT_EQ(out.value, -2);
}

TEST(Lp, AgreesWithVertexEnumeration) {
  int feasible = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    CounterRng rng{77, k};
    const std::size_t d = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto lp = random_program(rng, d, static_cast<std::size_t>(rng.uniform(0, 4)));
    const auto out = solve_lp(lp);
    const auto ref = oracle::vertex_optimum(lp);
    ASSERT_EQ(out.optimal(), ref.has_value()) << "program " << k;
    if (!ref) continue;
    ++feasible;
    EXPECT_EQ(out.value, *ref) << "program " << k;
    EXPECT_TRUE(lp.satisfies(out.point));
    EXPECT_EQ(lp.evaluate(out.point), out.value);
  }
  EXPECT_GT(feasible, 100);
}

TEST(Lp, LeximinSplitsASharedBudgetEvenly) {
  LinearProgram lp{2};
  lp.add_constraint(R({1, 1}), 10);
  lp.set_objective(R({1, 1}));
  EXPECT_EQ(leximin_max(lp), (std::vector<Rational>{5, 5}));
}

TEST(Lp, LeximinRaisesTheRestAfterACappedCoordinate) {
  LinearProgram lp{3};
  lp.add_constraint(R({1, 0, 0}), 2);
  lp.add_constraint(R({1, 1, 1}), 10);
  lp.add_constraint(R({0, 1, 0}), 7);
  lp.set_objective(R({1, 1, 1}));
  EXPECT_EQ(leximin_max(lp), (std::vector<Rational>{2, 4, 4}));
}

TEST(Lp, LeximinOnlyChoosesAmongOptima) {
  LinearProgram lp{2};
  lp.add_constraint(R({1, 1}), 6);
  lp.set_objective(R({1, 0}));
  EXPECT_EQ(leximin_max(lp), (std::vector<Rational>{6, 0}));
}

TEST(Lp, LeximinIsInvariantUnderVariablePermutation) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    CounterRng rng{78, k};
    const auto lp = random_program(rng, 3, 3);
    if (!solve_lp(lp).optimal()) continue;
    LinearProgram swapped{3};
    for (const auto& c : lp.constraints()) swapped.add_constraint({c.coeffs[2], c.coeffs[0], c.coeffs[1]}, c.rhs);
    const auto& o = lp.objective();
    swapped.set_objective({o[2], o[0], o[1]});
    const auto a = leximin_max(lp);
    const auto b = leximin_max(swapped);
    EXPECT_EQ(a, (std::vector<Rational>{b[1], b[2], b[0]}));
    EXPECT_TRUE(lp.satisfies(a));
    EXPECT_EQ(lp.evaluate(a), solve_lp(lp).value);
  }
}

TEST(Lp, PinnedProgramKeepsTheOptimum) {
  LinearProgram lp{2};
  lp.add_constraint(R({1, 1}), 4);
  lp.set_objective(R({1, 1}));
  auto pinned = pin_optimum(lp);
  pinned.set_objective(R({1, 0}));
  EXPECT_EQ(solve_lp(pinned).value, 4);
  pinned.set_objective(R({-1, 0}));
  EXPECT_EQ(solve_lp(pinned).value, 0);
  EXPECT_TRUE(pinned.satisfies({1, 3}));
  EXPECT_FALSE(pinned.satisfies({1, 2}));
}
