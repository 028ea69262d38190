#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "podfb/coalitional.hpp"
#include "podfb/lp.hpp"
#include "podfb/solver.hpp"

namespace podfb {

enum class Side { Winners, Losers };

/// How a maximal bicore point is selected once the total feedback is maximized.
enum class BicoreSelection {
  /// Maximize the total raise next, then take the leximin point.
  RaiseFirst,
  /// Take the leximin point of the maximal face directly.
  Leximin,
};

/// One bicore inequality: sum of discounts over `discounters` plus raises over `raisers`
/// is at most `rhs` = V(N, {}) - V(N \ discounters, raisers).
struct BicoreConstraint {
  AgentSet discounters;
  AgentSet raisers;
  Money rhs;
};

using BicoreConstraintSet = std::vector<BicoreConstraint>;

/// Inequalities over strict winners (discounts) and strict losers (raises). Pairs whose
/// constrained value is -infinity, and the trivial empty pair, are left out.
inline BicoreConstraintSet bicore_constraints(const Coalitions& co) {
  BicoreConstraintSet out;
  const AgentSet all = co.everyone();
  for_each_subset(co.strict_winners(), [&](AgentSet S) {
    for_each_subset(co.strict_losers(), [&](AgentSet T) {
      if (S.empty() && T.empty()) return;
      const auto v = co.value(all - S, T);
      if (!v.is_finite()) return;
      out.push_back({S, T, co.optimum() - v.value()});
    });
  });
  return out;
}

namespace detail {

struct PackedRow {
  AgentSet vars;
  Money rhs;
};

// Drops rows implied by another row over a superset of variables with no larger bound.
inline std::vector<PackedRow> drop_dominated(std::vector<PackedRow> rows) {
  std::vector<PackedRow> kept;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < rows.size() && !dominated; ++b) {
      if (a == b || !rows[a].vars.subset_of(rows[b].vars) || rows[b].rhs > rows[a].rhs) continue;
      // Identical rows: keep the first copy only.
      dominated = !(rows[a].vars == rows[b].vars && rows[a].rhs == rows[b].rhs) || b < a;
    }
    if (!dominated) kept.push_back(rows[a]);
  }
  return kept;
}

// LP whose variables are the members of `vars` (in index order), maximizing their sum.
inline LinearProgram packing_lp(AgentSet vars, const std::vector<PackedRow>& rows) {
  const auto members = vars.members();
  LinearProgram lp(members.size());
  for (const auto& r : drop_dominated(rows)) {
    std::vector<Rational> a(members.size(), 0);
    for (std::size_t k = 0; k < members.size(); ++k)
      if (r.vars.contains(members[k])) a[k] = 1;
    lp.add_constraint(std::move(a), to_rational(r.rhs));
  }
  lp.set_objective(std::vector<Rational>(members.size(), 1));
  return lp;
}

inline void finish(const Coalitions& co, FeedbackVector& fv) {
  fv.seller_payoff = to_rational(co.optimum());
  for (const auto& d : fv.discounts) fv.seller_payoff -= d;
}

} // namespace detail

/// Leximin-maximal core point for one side: discounts over C(N, V_w) for strict winners, or
/// raises over C(N, V_l) for strict losers. The other side is zero.
inline FeedbackVector core_feedback(const Coalitions& co, Side side) {
  auto fv = FeedbackVector::zeros(co.size());
  const AgentSet vars = side == Side::Winners ? co.strict_winners() : co.strict_losers();
  std::vector<detail::PackedRow> rows;
  for_each_subset(vars, [&](AgentSet S) {
    if (S.empty()) return;
    const auto v = side == Side::Winners ? co.winners_value(co.everyone() - S) : co.losers_value(co.everyone() - S);
    if (v.is_finite()) rows.push_back({S, co.optimum() - v.value()});
  });
  if (!vars.empty()) {
    const auto point = leximin_max(detail::packing_lp(vars, rows));
    const auto members = vars.members();
    auto& target = side == Side::Winners ? fv.discounts : fv.raises;
    for (std::size_t k = 0; k < members.size(); ++k) target[members[k]] = point[k];
  }
  detail::finish(co, fv);
  return fv;
}

/// Core policy: winners' discounts from C(N, V_w) and losers' raises from C(N, V_l).
inline FeedbackVector core_policy_feedback(const Coalitions& co) {
  auto fv = core_feedback(co, Side::Winners);
  fv.raises = core_feedback(co, Side::Losers).raises;
  return fv;
}

/// Maximal bicore point: total discount plus raise is maximized, then `selection` picks the point.
inline FeedbackVector bicore_feedback(const Coalitions& co, BicoreSelection selection = BicoreSelection::RaiseFirst) {
  auto fv = FeedbackVector::zeros(co.size());
  const AgentSet winners = co.strict_winners();
  const AgentSet vars = winners | co.strict_losers();
  if (!vars.empty()) {
    std::vector<detail::PackedRow> rows;
    for (const auto& c : bicore_constraints(co)) rows.push_back({c.discounters | c.raisers, c.rhs});
    LinearProgram lp = detail::packing_lp(vars, rows);
    const auto members = vars.members();
    if (selection == BicoreSelection::RaiseFirst) {
      LinearProgram face = pin_optimum(lp);
      std::vector<Rational> raise_total(members.size(), 0);
      for (std::size_t k = 0; k < members.size(); ++k)
        if (!winners.contains(members[k])) raise_total[k] = 1;
      face.set_objective(raise_total);
      lp = pin_optimum(face);
      lp.set_objective(std::vector<Rational>(members.size(), 1));
    }
    const auto point = leximin_max(lp);
    for (std::size_t k = 0; k < members.size(); ++k)
      (winners.contains(members[k]) ? fv.discounts : fv.raises)[members[k]] = point[k];
  }
  detail::finish(co, fv);
  return fv;
}

inline FeedbackVector bicore_feedback(const AuctionInstance& inst, const BidMatrix& bids,
                                      BicoreSelection selection = BicoreSelection::RaiseFirst) {
  return bicore_feedback(Coalitions{inst, bids}, selection);
}

inline FeedbackVector core_feedback(const AuctionInstance& inst, const BidMatrix& bids, Side side) {
  return core_feedback(Coalitions{inst, bids}, side);
}

/// Membership in the bicore through its inequality description: non-negativity, discounts only
/// on strict winners, raises only on strict losers, and every constraint of `set`.
inline bool in_bicore(const Coalitions& co, const BicoreConstraintSet& set, const std::vector<Rational>& pi,
                      const std::vector<Rational>& mu) {
  for (std::size_t i = 0; i < co.size(); ++i) {
    if (pi[i] < 0 || mu[i] < 0) return false;
    if (pi[i] != 0 && co.status(i) != AgentStatus::StrictWinner) return false;
    if (mu[i] != 0 && co.status(i) != AgentStatus::StrictLoser) return false;
  }
  for (const auto& c : set) {
    Rational lhs = 0;
    for (std::size_t i : c.discounters.members()) lhs += pi[i];
    for (std::size_t i : c.raisers.members()) lhs += mu[i];
    if (lhs > to_rational(c.rhs)) return false;
  }
  return true;
}

inline bool in_bicore(const Coalitions& co, const std::vector<Rational>& pi, const std::vector<Rational>& mu) {
  return in_bicore(co, bicore_constraints(co), pi, mu);
}

/// Membership checked against every disjoint pair (S, T) of agents, without the status filter.
inline bool in_bicore_full(const Coalitions& co, const std::vector<Rational>& pi, const std::vector<Rational>& mu) {
  for (std::size_t i = 0; i < co.size(); ++i)
    if (pi[i] < 0 || mu[i] < 0) return false;
  const AgentSet all = co.everyone();
  bool ok = true;
  for_each_subset(all, [&](AgentSet S) {
    if (!ok) return;
    for_each_subset(all - S, [&](AgentSet T) {
      if (!ok) return;
      const auto v = co.value(all - S, T);
      if (!v.is_finite()) return;
      Rational lhs = 0;
      for (std::size_t i : S.members()) lhs += pi[i];
      for (std::size_t i : T.members()) lhs += mu[i];
      if (lhs > to_rational(co.optimum() - v.value())) ok = false;
    });
  });
  return ok;
}

/// Membership in C(N, V_w) (winners) or C(N, V_l) (losers), checked over every coalition.
inline bool in_core(const Coalitions& co, Side side, const std::vector<Rational>& x) {
  for (const auto& v : x)
    if (v < 0) return false;
  bool ok = true;
  for_each_subset(co.everyone(), [&](AgentSet S) {
    if (!ok || S.empty()) return;
    const auto v = side == Side::Winners ? co.winners_value(co.everyone() - S) : co.losers_value(co.everyone() - S);
    if (!v.is_finite()) return;
    Rational lhs = 0;
    for (std::size_t i : S.members()) lhs += x[i];
    if (lhs > to_rational(co.optimum() - v.value())) ok = false;
  });
  return ok;
}

inline constexpr std::size_t kOracleMaxAgents = 6;

/// Exhaustive check that (pi, mu) are valid and that every optimal allocation stays optimal when
/// any coalition S discounts and any coalition T raises. A raise is realized by adding mu_i at
/// every position where the agent's value is positive.
inline bool bicore_membership_oracle(const AuctionInstance& inst, const BidMatrix& bids, const std::vector<Rational>& pi,
                                     const std::vector<Rational>& mu) {
  const std::size_t n = inst.size();
  if (n > kOracleMaxAgents) throw std::length_error("oracle supports at most 6 agents");
  if (pi.size() != n || mu.size() != n) throw std::invalid_argument("feedback vector size mismatch");

  std::vector<Allocation> allocs;
  for_each_feasible_allocation(inst, [&](const Allocation& a) { allocs.push_back(a); });

  auto value_under = [&](const Allocation& a, AgentSet S, AgentSet T) {
    Rational total = 0;
    for (std::size_t x = 0; x < a.slots.size(); ++x) {
      if (!a.slots[x]) continue;
      const std::size_t i = *a.slots[x];
      const Rational b = to_rational(bids[i][x]);
      if (S.contains(i)) {
        if (b > pi[i]) total += b - pi[i];
      } else if (T.contains(i)) {
        if (inst.agent(i).value[x] > Money::zero()) total += b + mu[i];
      } else {
        total += b;
      }
    }
    return total;
  };

  Rational best = -1;
  for (const auto& a : allocs) best = std::max(best, value_under(a, {}, {}));
  std::vector<const Allocation*> optimal;
  for (const auto& a : allocs)
    if (value_under(a, {}, {}) == best) optimal.push_back(&a);

  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] < 0 || mu[i] < 0) return false;
    bool winning = false;
    bool losing = false;
    for (const auto* a : optimal) {
      const bool wins = winners_in(inst, *a).contains(i);
      winning = winning || wins;
      losing = losing || !wins;
      if (wins) {
        Money own;
        for (std::size_t x = 0; x < a->slots.size(); ++x)
          if (a->slots[x] == i) own = bids[i][x];
        if (pi[i] > to_rational(own)) return false;
      }
    }
    if (winning && mu[i] != 0) return false;
    if (losing && pi[i] != 0) return false;
  }

  AgentSet discounting, raising;
  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] > 0) discounting = discounting.with(i);
    if (mu[i] > 0) raising = raising.with(i);
  }
  bool ok = true;
  for_each_subset(discounting, [&](AgentSet S) {
    for_each_subset(raising, [&](AgentSet T) {
      if (!ok) return;
      Rational updated_best = -1;
      for (const auto& a : allocs) updated_best = std::max(updated_best, value_under(a, S, T));
      for (const auto* a : optimal)
        if (value_under(*a, S, T) != updated_best) ok = false;
    });
  });
  return ok;
}

} // namespace podfb
