#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "podfb/agent_set.hpp"
#include "podfb/money.hpp"

namespace podfb {

/// Raised when an instance (or a bid profile against it) breaks a model invariant.
/// `path()` names the offending field, e.g. "agents[2].duration_s".
class InstanceError : public std::invalid_argument {
public:
  InstanceError(std::string path, const std::string& what)
    : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

struct PodSpec {
  int num_positions = 1;
  int max_ads = 1;
  int max_duration_s = 1;
  /// Unordered pairs of agent indices that may not appear in the same pod.
  std::vector<std::pair<std::size_t, std::size_t>> exclusions;
};

struct AgentProfile {
  std::string id;
  int duration_s = 0;
  std::vector<Money> value; // one entry per position
  std::vector<Money> bid;   // one entry per position
};

enum class AgentStatus { StrictWinner, StrictLoser, Tied };

inline const char* to_string(AgentStatus s) {
  switch (s) {
    case AgentStatus::StrictWinner: return "winner";
    case AgentStatus::StrictLoser: return "loser";
    case AgentStatus::Tied: return "tied";
  }
  return "?";
}

/// Per-agent, per-position bids. Row i belongs to agents()[i].
using BidMatrix = std::vector<std::vector<Money>>;

/// A validated pod auction: pod constraints plus the ordered list of bidders.
class AuctionInstance {
public:
  AuctionInstance(PodSpec pod, std::vector<AgentProfile> agents)
    : pod_(std::move(pod)), agents_(std::move(agents)) {
    validate();
    conflicts_.assign(agents_.size(), AgentSet{});
    for (auto [a, b] : pod_.exclusions) {
      conflicts_[a] = conflicts_[a].with(b);
      conflicts_[b] = conflicts_[b].with(a);
    }
  }

  const PodSpec& pod() const { return pod_; }
  const std::vector<AgentProfile>& agents() const { return agents_; }
  const AgentProfile& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t size() const { return agents_.size(); }
  std::size_t positions() const { return static_cast<std::size_t>(pod_.num_positions); }
  AgentSet everyone() const { return AgentSet::all(agents_.size()); }

  /// Agents that may not share a pod with agent i.
  AgentSet conflicts(std::size_t i) const { return conflicts_[i]; }

  Money max_value(std::size_t i) const {
    return *std::max_element(agents_[i].value.begin(), agents_[i].value.end());
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < agents_.size(); ++i)
      if (agents_[i].id == id) return i;
    return std::nullopt;
  }

  BidMatrix bids() const {
    BidMatrix out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.bid);
    return out;
  }

  BidMatrix values() const {
    BidMatrix out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.value);
    return out;
  }

  /// Copy of this instance carrying a different bid profile.
  AuctionInstance with_bids(const BidMatrix& bids) const {
    std::vector<AgentProfile> agents = agents_;
    for (std::size_t i = 0; i < agents.size(); ++i) agents[i].bid = bids.at(i);
    return AuctionInstance{pod_, std::move(agents)};
  }

private:
  void validate() const {
    if (pod_.num_positions <= 0) throw InstanceError("pod.positions", "must be positive");
    if (pod_.max_ads <= 0) throw InstanceError("pod.max_ads", "must be positive");
    if (pod_.max_ads > pod_.num_positions) throw InstanceError("pod.max_ads", "exceeds number of positions");
    if (pod_.max_duration_s <= 0) throw InstanceError("pod.max_duration_s", "must be positive");
    if (agents_.empty()) throw InstanceError("agents", "at least one agent required");
    if (agents_.size() > kMaxAgents) throw InstanceError("agents", "at most 32 agents supported");

    std::unordered_set<std::string> ids;
    const auto p = positions();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const auto& a = agents_[i];
      const std::string path = "agents[" + std::to_string(i) + "]";
      if (!ids.insert(a.id).second) throw InstanceError(path + ".id", "duplicate agent id '" + a.id + "'");
      if (a.duration_s <= 0) throw InstanceError(path + ".duration_s", "nonpositive duration");
      if (a.duration_s > pod_.max_duration_s)
        throw InstanceError(path + ".duration_s", "longer than the pod; agent can never win");
      if (a.value.size() != p) throw InstanceError(path + ".value_micro", "expected one entry per position");
      if (a.bid.size() != p) throw InstanceError(path + ".bid_micro", "expected one entry per position");
      bool any_positive = false;
      for (std::size_t x = 0; x < p; ++x) {
        const std::string at = "[" + std::to_string(x) + "]";
        if (a.value[x] < Money::zero()) throw InstanceError(path + ".value_micro" + at, "negative value");
        if (a.bid[x] < Money::zero()) throw InstanceError(path + ".bid_micro" + at, "negative bid");
        if (a.bid[x] > a.value[x]) throw InstanceError(path + ".bid_micro" + at, "bid exceeds value");
        any_positive = any_positive || a.value[x] > Money::zero();
      }
      if (!any_positive) throw InstanceError(path + ".value_micro", "value must be positive at some position");
    }
    for (std::size_t k = 0; k < pod_.exclusions.size(); ++k) {
      auto [a, b] = pod_.exclusions[k];
      const std::string path = "pod.exclusions[" + std::to_string(k) + "]";
      if (a >= agents_.size() || b >= agents_.size()) throw InstanceError(path, "unknown agent");
      if (a == b) throw InstanceError(path, "agent excluded with itself");
    }
  }

  PodSpec pod_;
  std::vector<AgentProfile> agents_;
  std::vector<AgentSet> conflicts_;
};

/// Placement of agents into pod positions: slots[x] is the agent shown at position x.
struct Allocation {
  std::vector<std::optional<std::size_t>> slots;

  static Allocation empty(std::size_t positions) { return Allocation{std::vector<std::optional<std::size_t>>(positions)}; }

  AgentSet placed() const {
    AgentSet s;
    for (const auto& a : slots)
      if (a) s = s.with(*a);
    return s;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Checks that a bid profile is shaped for the instance, non-negative, and zero wherever the
/// agent's value is zero.
inline void check_bids(const AuctionInstance& inst, const BidMatrix& bids) {
  if (bids.size() != inst.size()) throw InstanceError("bids", "expected one row per agent");
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i].size() != inst.positions())
      throw InstanceError("bids[" + std::to_string(i) + "]", "expected one entry per position");
    for (std::size_t x = 0; x < bids[i].size(); ++x) {
      const std::string path = "bids[" + std::to_string(i) + "][" + std::to_string(x) + "]";
      if (bids[i][x] < Money::zero()) throw InstanceError(path, "negative bid");
      if (inst.agent(i).value[x] == Money::zero() && bids[i][x] != Money::zero())
        throw InstanceError(path, "bid on a zero-value position");
    }
  }
}

/// True iff every allocation invariant holds. Throws on references to unknown agents or positions.
inline bool is_feasible(const AuctionInstance& inst, const Allocation& alloc) {
  if (alloc.slots.size() != inst.positions())
    throw std::invalid_argument("allocation has " + std::to_string(alloc.slots.size()) +
                                " positions, pod has " + std::to_string(inst.positions()));
  AgentSet seen;
  int count = 0;
  int duration = 0;
  for (const auto& slot : alloc.slots) {
    if (!slot) continue;
    if (*slot >= inst.size()) throw std::invalid_argument("unknown agent index " + std::to_string(*slot));
    if (seen.contains(*slot)) return false;
    seen = seen.with(*slot);
    ++count;
    duration += inst.agent(*slot).duration_s;
  }
  if (count > inst.pod().max_ads || duration > inst.pod().max_duration_s) return false;
  for (std::size_t i : seen.members())
    if (!(inst.conflicts(i) & seen).empty()) return false;
  return true;
}

/// Agents that win in `alloc`: placed at a position where their value is positive.
inline AgentSet winners_in(const AuctionInstance& inst, const Allocation& alloc) {
  AgentSet s;
  for (std::size_t x = 0; x < alloc.slots.size(); ++x)
    if (alloc.slots[x] && inst.agent(*alloc.slots[x]).value[x] > Money::zero()) s = s.with(*alloc.slots[x]);
  return s;
}

/// Sum over placements of the placed agent's bid for its position.
inline Money allocation_value(const AuctionInstance& inst, const BidMatrix& bids, const Allocation& alloc) {
  if (!is_feasible(inst, alloc)) throw std::invalid_argument("allocation is infeasible");
  Money total;
  for (std::size_t x = 0; x < alloc.slots.size(); ++x)
    if (alloc.slots[x]) total += bids.at(*alloc.slots[x]).at(x);
  return total;
}

} // namespace podfb
