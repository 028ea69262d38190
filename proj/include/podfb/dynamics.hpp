#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "podfb/coalitional.hpp"
#include "podfb/feedback.hpp"
#include "podfb/rng.hpp"
#include "podfb/solver.hpp"

namespace podfb {

enum class Policy { Vcg, Core, Bicore };

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::Vcg: return "vcg";
    case Policy::Core: return "core";
    case Policy::Bicore: return "bicore";
  }
  return "?";
}

inline Policy parse_policy(const std::string& s) {
  if (s == "vcg") return Policy::Vcg;
  if (s == "core") return Policy::Core;
  if (s == "bicore") return Policy::Bicore;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

inline FeedbackVector policy_feedback(const Coalitions& co, Policy policy,
                                      BicoreSelection selection = BicoreSelection::RaiseFirst) {
  switch (policy) {
    case Policy::Vcg: return vcg_feedback(co);
    case Policy::Core: return core_policy_feedback(co);
    case Policy::Bicore: return bicore_feedback(co, selection);
  }
  throw std::logic_error("unreachable");
}

struct DynamicsConfig {
  int max_rounds = 20;
  Rational convergence_threshold{1, 100};
  Rational cycle_change_threshold{1, 10};
  /// One increment per agent; empty means v_i / 10 (at least one micro-unit).
  std::vector<Money> epsilon;
  bool simultaneous = true;
  BicoreSelection bicore_selection = BicoreSelection::RaiseFirst;
};

inline std::vector<Money> resolve_epsilon(const AuctionInstance& inst, const DynamicsConfig& cfg) {
  if (!cfg.epsilon.empty()) {
    if (cfg.epsilon.size() != inst.size()) throw std::invalid_argument("epsilon needs one entry per agent");
    return cfg.epsilon;
  }
  std::vector<Money> out;
  for (std::size_t i = 0; i < inst.size(); ++i)
    out.push_back(std::max(Money{inst.max_value(i).micros() / 10}, Money{1}));
  return out;
}

inline void validate(const AuctionInstance& inst, const DynamicsConfig& cfg) {
  if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  for (const auto* t : {&cfg.convergence_threshold, &cfg.cycle_change_threshold})
    if (*t <= 0 || *t >= 1) throw std::invalid_argument("thresholds must lie in (0, 1)");
  for (Money e : resolve_epsilon(inst, cfg))
    if (e <= Money::zero()) throw std::invalid_argument("epsilon must be positive");
}

/// Profit targets, one per agent, each in [0, max value].
struct DynamicsState {
  std::vector<Money> targets;
};

/// Profit-target strategy: bid max(v_i(x) - rho_i, 0) at every position.
inline BidMatrix bids_for(const AuctionInstance& inst, const DynamicsState& s) {
  BidMatrix out(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (Money v : inst.agent(i).value) out[i].push_back(std::max(v - s.targets[i], Money::zero()));
  return out;
}

/// Sum over agents of each agent's highest position bid.
inline Money total_bid(const BidMatrix& bids) {
  Money s;
  for (const auto& row : bids) s += *std::max_element(row.begin(), row.end());
  return s;
}

/// Target update for one agent. Strict winners apply the winner rule, strict losers the loser rule,
/// tied agents the winner rule with no discount. Results are clamped to [0, max value]; rational
/// feedback is rounded down to whole micro-units.
inline Money updated_target(Money target, Money max_value, AgentStatus status, const FeedbackVector& fv,
                            std::size_t i, Money eps) {
  Money next;
  if (status == AgentStatus::StrictLoser)
    next = target - floor_money(fv.raises[i]) - eps;
  else
    next = target + (status == AgentStatus::StrictWinner ? floor_money(fv.discounts[i]) : Money::zero()) - eps;
  return std::clamp(next, Money::zero(), max_value);
}

/// One simultaneous round: every agent updates from feedback on the current bids.
inline DynamicsState step(const AuctionInstance& inst, const DynamicsState& state, Policy policy,
                          const std::vector<Money>& eps, BicoreSelection selection = BicoreSelection::RaiseFirst) {
  const Coalitions co{inst, bids_for(inst, state)};
  const auto fv = policy_feedback(co, policy, selection);
  DynamicsState next = state;
  for (std::size_t i = 0; i < inst.size(); ++i)
    next.targets[i] = updated_target(state.targets[i], inst.max_value(i), co.status(i), fv, i, eps[i]);
  return next;
}

enum class Termination { Converged, Cycled, MaxRounds };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Cycled: return "cycled";
    case Termination::MaxRounds: return "max_rounds";
  }
  return "?";
}

struct RoundRecord {
  BidMatrix bids;
  Money total;
  std::vector<AgentStatus> statuses;
  /// Feedback sent after this round; absent for the final round.
  std::optional<FeedbackVector> feedback;
};

struct DynamicsTrace {
  Policy policy = Policy::Vcg;
  std::vector<RoundRecord> rounds;
  Termination outcome = Termination::MaxRounds;
  int matched_round = 0; // earlier round repeated when cycled (1-based)
  Allocation final_allocation;
  Rational efficiency; // percent, exact

  int num_rounds() const { return static_cast<int>(rounds.size()); }
};

struct InitialTargets {
  enum class Kind { FromValues, Random, Explicit };
  Kind kind = Kind::FromValues;
  std::uint64_t seed = 0;
  std::vector<Money> targets;

  static InitialTargets from_values() { return {}; }
  static InitialTargets random(std::uint64_t seed) { return {Kind::Random, seed, {}}; }
  /// Every agent starts at bid zero.
  static InitialTargets zero_bids(const AuctionInstance& inst) {
    InitialTargets t{Kind::Explicit, 0, {}};
    for (std::size_t i = 0; i < inst.size(); ++i) t.targets.push_back(inst.max_value(i));
    return t;
  }
};

inline DynamicsState initial_state(const AuctionInstance& inst, const InitialTargets& init) {
  DynamicsState s;
  switch (init.kind) {
    case InitialTargets::Kind::FromValues:
      s.targets.assign(inst.size(), Money::zero());
      break;
    case InitialTargets::Kind::Random: {
      CounterRng rng{init.seed, 0x7461726765747321ULL};
      for (std::size_t i = 0; i < inst.size(); ++i) s.targets.emplace_back(rng.uniform(0, inst.max_value(i).micros()));
      break;
    }
    case InitialTargets::Kind::Explicit:
      if (init.targets.size() != inst.size()) throw std::invalid_argument("need one initial target per agent");
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (init.targets[i] < Money::zero() || init.targets[i] > inst.max_value(i))
          throw std::invalid_argument("initial target outside [0, value]");
      s.targets = init.targets;
      break;
  }
  return s;
}

/// 100 x (true value of the allocation chosen under `bids`) / (best achievable true value).
inline Rational efficiency_percent(const AuctionInstance& inst, const Allocation& alloc) {
  const Money best = solve_constrained(inst, inst.values()).value;
  return Rational(100) * to_rational(allocation_value(inst, inst.values(), alloc)) / to_rational(best);
}

inline Rational efficiency_of(const DynamicsTrace& trace, const AuctionInstance& inst) {
  return efficiency_percent(inst, trace.final_allocation);
}

namespace detail {

// |total - prev| / prev, with 0/0 = 0 and x/0 = infinity (represented by nullopt).
inline std::optional<Rational> relative_change(Money prev, Money total) {
  const Money diff = total > prev ? total - prev : prev - total;
  if (prev == Money::zero()) return diff == Money::zero() ? std::optional<Rational>{0} : std::nullopt;
  return to_rational(diff) / to_rational(prev);
}

inline std::vector<std::vector<std::int64_t>> key_of(const BidMatrix& bids) {
  std::vector<std::vector<std::int64_t>> k;
  for (const auto& row : bids) {
    k.emplace_back();
    for (Money b : row) k.back().push_back(b.micros());
  }
  return k;
}

} // namespace detail

/// Runs the dynamics until convergence, a cycle, or the round cap. Round 1 holds the initial bids.
inline DynamicsTrace run(const AuctionInstance& inst, Policy policy, const DynamicsConfig& cfg,
                         const InitialTargets& init = InitialTargets::from_values()) {
  validate(inst, cfg);
  const auto eps = resolve_epsilon(inst, cfg);
  DynamicsTrace trace;
  trace.policy = policy;

  DynamicsState state = initial_state(inst, init);
  std::map<std::vector<std::vector<std::int64_t>>, int> seen;
  auto record = [&](const BidMatrix& bids, const Coalitions& co) {
    trace.rounds.push_back({bids, total_bid(bids), co.statuses(), std::nullopt});
    seen.emplace(detail::key_of(bids), trace.num_rounds());
  };

  BidMatrix bids = bids_for(inst, state);
  auto co = std::make_unique<Coalitions>(inst, bids);
  record(bids, *co);

  while (true) {
    if (trace.num_rounds() >= cfg.max_rounds) {
      trace.outcome = Termination::MaxRounds;
      break;
    }
    auto fv = policy_feedback(*co, policy, cfg.bicore_selection);
    if (cfg.simultaneous) {
      for (std::size_t i = 0; i < inst.size(); ++i)
        state.targets[i] = updated_target(state.targets[i], inst.max_value(i), co->status(i), fv, i, eps[i]);
    } else {
      // Agents move one at a time, each seeing feedback on the bids left by the previous mover.
      const Coalitions* current = co.get();
      std::unique_ptr<Coalitions> scratch;
      FeedbackVector local = fv;
      for (std::size_t i = 0; i < inst.size(); ++i) {
        if (i > 0) {
          scratch = std::make_unique<Coalitions>(inst, bids_for(inst, state));
          current = scratch.get();
          local = policy_feedback(*current, policy, cfg.bicore_selection);
        }
        state.targets[i] = updated_target(state.targets[i], inst.max_value(i), current->status(i), local, i, eps[i]);
      }
    }
    trace.rounds.back().feedback = std::move(fv);

    const Money prev_total = trace.rounds.back().total;
    bids = bids_for(inst, state);
    co = std::make_unique<Coalitions>(inst, bids);
    const auto key = detail::key_of(bids);
    const auto earlier = seen.find(key);
    const int earlier_round = earlier == seen.end() ? 0 : earlier->second;
    record(bids, *co);

    const auto change = detail::relative_change(prev_total, trace.rounds.back().total);
    if (change && *change < cfg.convergence_threshold) {
      trace.outcome = Termination::Converged;
      break;
    }
    if ((!change || *change >= cfg.cycle_change_threshold) && earlier_round > 0 &&
        earlier_round < trace.num_rounds() - 1) {
      trace.outcome = Termination::Cycled;
      trace.matched_round = earlier_round;
      break;
    }
  }

  trace.final_allocation = solve_constrained(inst, trace.rounds.back().bids).witness;
  trace.efficiency = efficiency_percent(inst, trace.final_allocation);
  return trace;
}

} // namespace podfb
