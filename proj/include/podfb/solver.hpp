#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "podfb/agent_set.hpp"
#include "podfb/hungarian.hpp"
#include "podfb/model.hpp"

namespace podfb {

/// Coalition constraints for winner determination: agents in `forced_in` must win, agents in
/// `excluded` must not.
struct SolveConstraints {
  AgentSet forced_in;
  AgentSet excluded;
};

enum class SolveStatus { Optimal, Infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Money value;       // meaningful iff optimal()
  Allocation witness; // meaningful iff optimal()

  bool optimal() const { return status == SolveStatus::Optimal; }
};

namespace detail {

inline void check_constraints(const AuctionInstance& inst, const SolveConstraints& c) {
  const AgentSet all = inst.everyone();
  if (!c.forced_in.subset_of(all) || !c.excluded.subset_of(all))
    throw std::invalid_argument("constraint references unknown agent");
  if (!(c.forced_in & c.excluded).empty()) throw std::invalid_argument("forced_in and excluded overlap");
}

inline bool uniform(const std::vector<Money>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>{}) == v.end();
}

inline bool positive_everywhere(const std::vector<Money>& v) {
  return std::all_of(v.begin(), v.end(), [](Money m) { return m > Money::zero(); });
}

// Branch over ads in decreasing max-bid order; leaves are ad subsets that respect the
// count, duration, and exclusion limits. Each subset is then placed into positions.
class PodSearch {
public:
  PodSearch(const AuctionInstance& inst, const BidMatrix& bids, const SolveConstraints& c)
    : inst_(inst), bids_(bids), c_(c) {
    cap_ = static_cast<std::size_t>(std::min(inst.pod().max_ads, inst.pod().num_positions));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (c.excluded.contains(i)) continue;
      order_.push_back(i);
      best_bid_.push_back(*std::max_element(bids[i].begin(), bids[i].end()));
    }
    std::vector<std::size_t> idx(order_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return best_bid_[a] > best_bid_[b]; });
    std::vector<std::size_t> order;
    std::vector<Money> best;
    for (auto k : idx) {
      order.push_back(order_[k]);
      best.push_back(best_bid_[k]);
    }
    order_ = std::move(order);
    best_bid_ = std::move(best);

    forced_count_suffix_.assign(order_.size() + 1, 0);
    forced_duration_suffix_.assign(order_.size() + 1, 0);
    for (std::size_t k = order_.size(); k-- > 0;) {
      const bool forced = c.forced_in.contains(order_[k]);
      forced_count_suffix_[k] = forced_count_suffix_[k + 1] + (forced ? 1 : 0);
      forced_duration_suffix_[k] = forced_duration_suffix_[k + 1] + (forced ? inst.agent(order_[k]).duration_s : 0);
    }
  }

  SolveResult run() {
    for (std::size_t i : c_.forced_in.members())
      if (!std::any_of(inst_.agent(i).value.begin(), inst_.agent(i).value.end(), [](Money m) { return m > Money::zero(); }))
        return {};
    dfs(0, AgentSet{}, 0, 0, Money::zero());
    return best_;
  }

private:
  void dfs(std::size_t k, AgentSet chosen, std::size_t count, int duration, Money bound_so_far) {
    if (count + forced_count_suffix_[k] > cap_) return;
    if (duration + forced_duration_suffix_[k] > inst_.pod().max_duration_s) return;
    if (best_.optimal()) {
      Money ub = bound_so_far;
      for (std::size_t j = k, taken = count; j < order_.size() && taken < cap_; ++j, ++taken) ub += best_bid_[j];
      if (ub <= best_.value) return;
    }
    if (k == order_.size()) {
      evaluate(chosen);
      return;
    }
    const std::size_t a = order_[k];
    const int d = inst_.agent(a).duration_s;
    if (count < cap_ && duration + d <= inst_.pod().max_duration_s && (inst_.conflicts(a) & chosen).empty())
      dfs(k + 1, chosen.with(a), count + 1, duration + d, bound_so_far + best_bid_[k]);
    if (!c_.forced_in.contains(a)) dfs(k + 1, chosen, count, duration, bound_so_far);
  }

  void evaluate(AgentSet chosen) {
    const auto members = chosen.members();
    Allocation alloc = Allocation::empty(inst_.positions());
    Money value;
    const bool simple = std::all_of(members.begin(), members.end(), [&](std::size_t i) {
      return uniform(bids_[i]) && (!c_.forced_in.contains(i) || positive_everywhere(inst_.agent(i).value));
    });
    if (simple) {
      for (std::size_t k = 0; k < members.size(); ++k) {
        alloc.slots[k] = members[k];
        value += bids_[members[k]][k];
      }
    } else {
      std::vector<std::vector<std::optional<std::int64_t>>> w(members.size());
      for (std::size_t r = 0; r < members.size(); ++r) {
        const std::size_t i = members[r];
        for (std::size_t x = 0; x < inst_.positions(); ++x) {
          const bool forbidden = c_.forced_in.contains(i) && inst_.agent(i).value[x] == Money::zero();
          w[r].push_back(forbidden ? std::nullopt : std::optional<std::int64_t>{bids_[i][x].micros()});
        }
      }
      const auto cols = max_weight_assignment(w, inst_.positions());
      if (!cols) return;
      for (std::size_t r = 0; r < members.size(); ++r) {
        alloc.slots[(*cols)[r]] = members[r];
        value += bids_[members[r]][(*cols)[r]];
      }
    }
    if (!best_.optimal() || value > best_.value) best_ = {SolveStatus::Optimal, value, std::move(alloc)};
  }

  const AuctionInstance& inst_;
  const BidMatrix& bids_;
  const SolveConstraints& c_;
  std::size_t cap_ = 0;
  std::vector<std::size_t> order_;
  std::vector<Money> best_bid_;
  std::vector<std::size_t> forced_count_suffix_;
  std::vector<int> forced_duration_suffix_;
  SolveResult best_;
};

} // namespace detail

/// Maximum-bid feasible allocation in which every forced_in agent wins and no excluded agent is
/// placed. Infeasible when the forced agents cannot all win together.
inline SolveResult solve_constrained(const AuctionInstance& inst, const BidMatrix& bids, const SolveConstraints& c = {}) {
  detail::check_constraints(inst, c);
  if (bids.size() != inst.size()) throw std::invalid_argument("bid matrix does not match instance");
  return detail::PodSearch{inst, bids, c}.run();
}

inline constexpr std::size_t kBruteForceMaxAgents = 8;
inline constexpr std::size_t kBruteForceMaxPositions = 6;

/// Calls fn(alloc) for every feasible allocation, in a fixed enumeration order. Exponential; guarded
/// to at most 8 agents and 6 positions.
template <typename Fn>
void for_each_feasible_allocation(const AuctionInstance& inst, Fn&& fn) {
  if (inst.size() > kBruteForceMaxAgents || inst.positions() > kBruteForceMaxPositions)
    throw std::length_error("instance too large for exhaustive enumeration");
  Allocation alloc = Allocation::empty(inst.positions());
  std::vector<char> used(inst.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == inst.positions()) {
      if (is_feasible(inst, alloc)) fn(static_cast<const Allocation&>(alloc));
      return;
    }
    alloc.slots[x].reset();
    rec(x + 1);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (used[i]) continue;
      used[i] = 1;
      alloc.slots[x] = i;
      rec(x + 1);
      used[i] = 0;
    }
    alloc.slots[x].reset();
  };
  rec(0);
}

/// Unpruned enumeration with the same contract as solve_constrained.
inline SolveResult brute_force_solve(const AuctionInstance& inst, const BidMatrix& bids, const SolveConstraints& c = {}) {
  detail::check_constraints(inst, c);
  SolveResult best;
  for_each_feasible_allocation(inst, [&](const Allocation& alloc) {
    const AgentSet wins = winners_in(inst, alloc);
    if (!c.forced_in.subset_of(wins)) return;
    if (!(alloc.placed() & c.excluded).empty()) return;
    const Money v = allocation_value(inst, bids, alloc);
    if (!best.optimal() || v > best.value) best = {SolveStatus::Optimal, v, alloc};
  });
  return best;
}

/// Winning: some optimal allocation has the agent win. Losing: some optimal allocation has it lose.
inline std::vector<AgentStatus> classify_agents(const AuctionInstance& inst, const BidMatrix& bids) {
  const Money best = solve_constrained(inst, bids).value;
  std::vector<AgentStatus> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto in = solve_constrained(inst, bids, {AgentSet::single(i), {}});
    const auto out_ = solve_constrained(inst, bids, {{}, AgentSet::single(i)});
    const bool winning = in.optimal() && in.value == best;
    const bool losing = out_.value == best;
    out.push_back(winning && losing ? AgentStatus::Tied : winning ? AgentStatus::StrictWinner : AgentStatus::StrictLoser);
  }
  return out;
}

} // namespace podfb
