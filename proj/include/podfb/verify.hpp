#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "podfb/assignment.hpp"
#include "podfb/coalitional.hpp"
#include "podfb/feedback.hpp"
#include "podfb/rng.hpp"
#include "podfb/solver.hpp"

namespace podfb {

/// Small random pod with per-position values, zero-value positions, exclusions and frequent bid
/// ties; sized for the exhaustive oracles.
inline AuctionInstance random_oracle_instance(CounterRng& rng, int max_agents = 5, int max_positions = 3) {
  PodSpec pod;
  pod.num_positions = static_cast<int>(rng.uniform(1, max_positions));
  pod.max_ads = static_cast<int>(rng.uniform(1, pod.num_positions));
  const int n = static_cast<int>(rng.uniform(1, max_agents));
  std::vector<AgentProfile> agents;
  int longest = 0;
  for (int i = 0; i < n; ++i) {
    AgentProfile a;
    a.id = "a" + std::to_string(i + 1);
    a.duration_s = 10 * static_cast<int>(rng.uniform(1, 3));
    longest = std::max(longest, a.duration_s);
    const bool uniform = rng.uniform(0, 1) == 0;
    const Money base = Money::from_units(rng.uniform(1, 12));
    for (int x = 0; x < pod.num_positions; ++x) {
      Money v = uniform ? base : Money::from_units(rng.uniform(0, 12));
      a.value.push_back(v);
      a.bid.push_back(v == Money::zero() ? v : Money::from_units(rng.uniform(0, v.micros() / 1'000'000)));
    }
    if (std::all_of(a.value.begin(), a.value.end(), [](Money v) { return v == Money::zero(); })) {
      a.value[0] = Money::from_units(5);
      a.bid[0] = Money::from_units(rng.uniform(0, 5));
    }
    agents.push_back(std::move(a));
  }
  pod.max_duration_s = longest + 10 * static_cast<int>(rng.uniform(0, 3));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.uniform(0, 9) == 0) pod.exclusions.emplace_back(a, b);
  return AuctionInstance{std::move(pod), std::move(agents)};
}

/// n <= max_agents agents, m <= n items, bids in whole units 1..10. Bids stay positive because a
/// pod agent cannot win at a zero-value position while an assignment bidder can win a zero-bid item.
inline AssignmentInstance random_assignment_instance(CounterRng& rng, int max_agents = 5) {
  const auto n = static_cast<std::size_t>(rng.uniform(1, max_agents));
  const auto m = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(n)));
  std::vector<std::vector<Money>> b(n, std::vector<Money>(m));
  for (auto& row : b)
    for (auto& x : row) x = Money::from_units(rng.uniform(1, 10));
  return AssignmentInstance{std::move(b)};
}

struct CheckReport {
  std::size_t points = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void merge(CheckReport other) {
    points += other.points;
    for (auto& f : other.failures) failures.push_back(std::move(f));
  }
};

namespace detail {

inline std::string point_string(const std::vector<Rational>& pi, const std::vector<Rational>& mu) {
  std::ostringstream os;
  os << "pi=(";
  for (std::size_t i = 0; i < pi.size(); ++i) os << (i ? "," : "") << pi[i].get_str();
  os << ") mu=(";
  for (std::size_t i = 0; i < mu.size(); ++i) os << (i ? "," : "") << mu[i].get_str();
  os << ")";
  return os.str();
}

// Each coordinate multiplied by an independent factor k/16, k in [0, 16].
inline std::vector<Rational> scaled_down(const std::vector<Rational>& v, CounterRng& rng) {
  std::vector<Rational> out = v;
  for (auto& x : out) x *= make_rational(static_cast<long>(rng.uniform(0, 16)), 16);
  return out;
}

} // namespace detail

/// Compares LP membership in the bicore with the exhaustive oracle at the policy vertices, at
/// random points scaled down from the leximin vertex, and at points pushed just past a facet that
/// binds at the leximin vertex (these must be rejected by both).
inline CheckReport check_bicore_oracle(const Coalitions& co, CounterRng& rng, int interior = 5, int outside = 5) {
  CheckReport rep;
  const auto& inst = co.instance();
  const auto constraints = bicore_constraints(co);
  auto compare = [&](const std::vector<Rational>& pi, const std::vector<Rational>& mu, const char* kind,
                     bool expect_outside) {
    ++rep.points;
    const bool lp = in_bicore(co, constraints, pi, mu);
    const bool oracle = bicore_membership_oracle(inst, co.bids(), pi, mu);
    if (lp != oracle)
      rep.failures.push_back(std::string(kind) + ": lp=" + (lp ? "in" : "out") + " oracle=" + (oracle ? "in" : "out") +
                             " at " + detail::point_string(pi, mu));
    else if (expect_outside && lp)
      rep.failures.push_back(std::string(kind) + ": perturbed point still inside at " + detail::point_string(pi, mu));
  };

  const auto lex = bicore_feedback(co, BicoreSelection::Leximin);
  const auto first = bicore_feedback(co, BicoreSelection::RaiseFirst);
  compare(lex.discounts, lex.raises, "leximin vertex", false);
  compare(first.discounts, first.raises, "raise-first vertex", false);
  for (int k = 0; k < interior; ++k)
    compare(detail::scaled_down(lex.discounts, rng), detail::scaled_down(lex.raises, rng), "scaled point", false);

  std::vector<const BicoreConstraint*> binding;
  for (const auto& c : constraints) {
    Rational lhs = 0;
    for (std::size_t i : c.discounters.members()) lhs += lex.discounts[i];
    for (std::size_t i : c.raisers.members()) lhs += lex.raises[i];
    if (lhs == to_rational(c.rhs)) binding.push_back(&c);
  }
  for (int k = 0; k < outside && !binding.empty(); ++k) {
    const auto& c = *binding[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(binding.size()) - 1))];
    auto pi = detail::scaled_down(lex.discounts, rng);
    auto mu = detail::scaled_down(lex.raises, rng);
    for (std::size_t i : c.discounters.members()) pi[i] = lex.discounts[i];
    for (std::size_t i : c.raisers.members()) mu[i] = lex.raises[i];
    const auto members = (c.discounters | c.raisers).members();
    const std::size_t pick = members[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(members.size()) - 1))];
    const Rational delta(1, static_cast<long>(rng.uniform(1, 1000)));
    (c.discounters.contains(pick) ? pi : mu)[pick] += delta;
    compare(pi, mu, "past binding facet", true);
  }
  return rep;
}

/// The four bicore/core relationships, checked at policy points, scaled and perturbed points, and
/// at single-agent vectors around the VCG bounds.
inline CheckReport check_relationships(const Coalitions& co, CounterRng& rng) {
  CheckReport rep;
  const std::size_t n = co.size();
  const std::vector<Rational> zero(n, 0);
  auto expect = [&](bool lhs, bool rhs, const std::string& what) {
    ++rep.points;
    if (lhs != rhs) rep.failures.push_back(what);
  };

  for (Side side : {Side::Winners, Side::Losers}) {
    const auto fv = core_feedback(co, side);
    const auto& base = side == Side::Winners ? fv.discounts : fv.raises;
    std::vector<std::vector<Rational>> points{base, detail::scaled_down(base, rng)};
    auto bumped = base;
    bumped[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1))] += Rational(1, 2);
    points.push_back(bumped);
    for (const auto& x : points) {
      const bool two = side == Side::Winners ? in_bicore_full(co, x, zero) : in_bicore_full(co, zero, x);
      expect(two, in_core(co, side, x),
             std::string(side == Side::Winners ? "(pi,0)" : "(0,mu)") + " relationship at " +
                 (side == Side::Winners ? detail::point_string(x, zero) : detail::point_string(zero, x)));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Rational disc = to_rational(co.vcg_discount(i));
    const Rational raise = to_rational(co.vcg_raise(i));
    for (const Rational& d : {Rational(0), disc, Rational(disc / 2), Rational(disc + Rational(1, 3))}) {
      auto x = zero;
      x[i] = d;
      expect(in_core(co, Side::Winners, x), d >= 0 && d <= disc, "single discount " + std::to_string(i) + "=" + d.get_str());
    }
    for (const Rational& r : {Rational(0), raise, Rational(raise / 2), Rational(raise + Rational(1, 3))}) {
      auto x = zero;
      x[i] = r;
      expect(in_core(co, Side::Losers, x), r >= 0 && r <= raise, "single raise " + std::to_string(i) + "=" + r.get_str());
    }
  }
  return rep;
}

/// solve_constrained against exhaustive enumeration under random disjoint (forced_in, excluded)
/// pairs; the unconstrained solve is always the first pair.
inline CheckReport check_solver_oracle(const AuctionInstance& inst, CounterRng& rng, int pairs = 50) {
  CheckReport rep;
  const BidMatrix bids = inst.bids();
  for (int k = 0; k < pairs; ++k) {
    SolveConstraints c;
    if (k > 0)
      for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto r = rng.uniform(0, 19);
        if (r < 3) c.forced_in = c.forced_in.with(i);
        else if (r < 9) c.excluded = c.excluded.with(i);
      }
    ++rep.points;
    const auto fast = solve_constrained(inst, bids, c);
    const auto slow = brute_force_solve(inst, bids, c);
    std::ostringstream what;
    what << "forced=" << c.forced_in.bits() << " excluded=" << c.excluded.bits() << ": ";
    if (fast.optimal() != slow.optimal()) {
      rep.failures.push_back(what.str() + "feasibility differs");
      continue;
    }
    if (!fast.optimal()) continue;
    if (fast.value != slow.value)
      rep.failures.push_back(what.str() + "value " + std::to_string(fast.value.micros()) + " vs " +
                             std::to_string(slow.value.micros()));
    const AgentSet w = winners_in(inst, fast.witness);
    if (!is_feasible(inst, fast.witness) || !c.forced_in.subset_of(w) || !(w & c.excluded).empty() ||
        allocation_value(inst, bids, fast.witness) != fast.value)
      rep.failures.push_back(what.str() + "witness does not certify the value");
  }
  return rep;
}

/// Every policy output is valid feedback.
inline CheckReport check_policy_validity(const Coalitions& co) {
  CheckReport rep;
  auto expect = [&](const FeedbackVector& fv, const char* what) {
    ++rep.points;
    if (!is_valid_feedback(co, fv)) rep.failures.push_back(std::string(what) + " output is not valid feedback");
  };
  expect(vcg_feedback(co), "vcg");
  expect(core_policy_feedback(co), "core");
  expect(bicore_feedback(co, BicoreSelection::RaiseFirst), "bicore raise-first");
  expect(bicore_feedback(co, BicoreSelection::Leximin), "bicore leximin");
  return rep;
}

} // namespace podfb
