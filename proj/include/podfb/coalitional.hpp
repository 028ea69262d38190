#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "podfb/model.hpp"
#include "podfb/rational.hpp"
#include "podfb/solver.hpp"

namespace podfb {

/// Value of a (bi)coalition: a finite amount, or minus infinity when the constrained
/// maximization has no feasible allocation.
class CoalitionalValue {
public:
  static CoalitionalValue finite(Money m) { return CoalitionalValue{m}; }
  static CoalitionalValue neg_infinity() { return CoalitionalValue{}; }

  bool is_finite() const { return value_.has_value(); }
  Money value() const {
    if (!value_) throw std::logic_error("coalitional value is -infinity");
    return *value_;
  }

  friend bool operator==(const CoalitionalValue&, const CoalitionalValue&) = default;
  friend std::strong_ordering operator<=>(const CoalitionalValue& a, const CoalitionalValue& b) {
    if (!a.value_ || !b.value_) return a.value_.has_value() <=> b.value_.has_value();
    return *a.value_ <=> *b.value_;
  }

private:
  CoalitionalValue() = default;
  explicit CoalitionalValue(Money m) : value_(m) {}
  std::optional<Money> value_;
};

/// Discounts and raises for every agent, in micro-units.
struct FeedbackVector {
  std::vector<Rational> discounts;
  std::vector<Rational> raises;
  Rational seller_payoff; // V(N, {}) minus the total discount

  static FeedbackVector zeros(std::size_t n) {
    return FeedbackVector{std::vector<Rational>(n, 0), std::vector<Rational>(n, 0), 0};
  }
};

/// Coalitional value functions of one (instance, bid profile) pair. V(S,T) is memoized per
/// (excluded, forced) pair; concurrent readers are safe.
class Coalitions {
public:
  Coalitions(AuctionInstance inst, BidMatrix bids) : inst_(std::move(inst)), bids_(std::move(bids)) {
    check_bids(inst_, bids_);
    optimum_ = value(everyone(), {}).value();
    for (std::size_t i = 0; i < inst_.size(); ++i) {
      const auto in = value(everyone(), AgentSet::single(i));
      const auto out = value(everyone().without(i), {});
      const bool winning = in.is_finite() && in.value() == optimum_;
      const bool losing = out.value() == optimum_;
      statuses_.push_back(winning && losing ? AgentStatus::Tied
                          : winning         ? AgentStatus::StrictWinner
                                            : AgentStatus::StrictLoser);
    }
  }

  explicit Coalitions(const AuctionInstance& inst) : Coalitions(inst, inst.bids()) {}

  const AuctionInstance& instance() const { return inst_; }
  const BidMatrix& bids() const { return bids_; }
  std::size_t size() const { return inst_.size(); }
  AgentSet everyone() const { return inst_.everyone(); }

  /// Best total bid of S ∪ T with every member of T winning.
  CoalitionalValue value(AgentSet S, AgentSet T) const {
    const SolveConstraints c{T, everyone() - (S | T)};
    const std::uint64_t key = (std::uint64_t{c.excluded.bits()} << 32) | c.forced_in.bits();
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const auto r = solve_constrained(inst_, bids_, c);
    const auto v = r.optimal() ? CoalitionalValue::finite(r.value) : CoalitionalValue::neg_infinity();
    std::unique_lock lock(mutex_);
    memo_.emplace(key, v);
    return v;
  }

  CoalitionalValue winners_value(AgentSet S) const { return value(S, {}); }
  CoalitionalValue losers_value(AgentSet S) const { return value(everyone(), everyone() - S); }

  /// V(N, {}): value of the optimal allocation.
  Money optimum() const { return optimum_; }

  const std::vector<AgentStatus>& statuses() const { return statuses_; }
  AgentStatus status(std::size_t i) const { return statuses_.at(i); }

  AgentSet with_status(AgentStatus s) const {
    AgentSet out;
    for (std::size_t i = 0; i < statuses_.size(); ++i)
      if (statuses_[i] == s) out = out.with(i);
    return out;
  }
  AgentSet strict_winners() const { return with_status(AgentStatus::StrictWinner); }
  AgentSet strict_losers() const { return with_status(AgentStatus::StrictLoser); }

  /// V_w(N) - V_w(N - i).
  Money vcg_discount(std::size_t i) const { return optimum_ - winners_value(everyone().without(i)).value(); }

  /// V_l(N) - V_l(N - i); every agent can win somewhere, so V_l(N - i) is finite.
  Money vcg_raise(std::size_t i) const { return optimum_ - losers_value(everyone().without(i)).value(); }

private:
  AuctionInstance inst_;
  BidMatrix bids_;
  Money optimum_;
  std::vector<AgentStatus> statuses_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, CoalitionalValue> memo_;
};

/// VCG discounts for strict winners and VCG raises for strict losers; tied agents get nothing.
inline FeedbackVector vcg_feedback(const Coalitions& co) {
  auto fv = FeedbackVector::zeros(co.size());
  for (std::size_t i = 0; i < co.size(); ++i) {
    if (co.status(i) == AgentStatus::StrictWinner) fv.discounts[i] = to_rational(co.vcg_discount(i));
    if (co.status(i) == AgentStatus::StrictLoser) fv.raises[i] = to_rational(co.vcg_raise(i));
  }
  fv.seller_payoff = to_rational(co.optimum());
  for (const auto& d : fv.discounts) fv.seller_payoff -= d;
  return fv;
}

inline FeedbackVector vcg_feedback(const AuctionInstance& inst, const BidMatrix& bids) {
  return vcg_feedback(Coalitions{inst, bids});
}

/// Validity: winners never raise, losers never discount, tied agents do neither, and no
/// discount exceeds the agent's VCG discount.
inline bool is_valid_feedback(const Coalitions& co, const FeedbackVector& fv) {
  if (fv.discounts.size() != co.size() || fv.raises.size() != co.size()) return false;
  for (std::size_t i = 0; i < co.size(); ++i) {
    if (fv.discounts[i] < 0 || fv.raises[i] < 0) return false;
    switch (co.status(i)) {
      case AgentStatus::StrictWinner:
        if (fv.raises[i] != 0 || fv.discounts[i] > to_rational(co.vcg_discount(i))) return false;
        break;
      case AgentStatus::StrictLoser:
        if (fv.discounts[i] != 0) return false;
        break;
      case AgentStatus::Tied:
        if (fv.discounts[i] != 0 || fv.raises[i] != 0) return false;
        break;
    }
  }
  return true;
}

} // namespace podfb
