#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "podfb/coalitional.hpp"
#include "podfb/dynamics.hpp"

namespace podfb {

inline constexpr int kTraceVersion = 1;

inline nlohmann::json rationals_json(const std::vector<Rational>& v) {
  auto out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

inline nlohmann::json statuses_json(const std::vector<AgentStatus>& s) {
  auto out = nlohmann::json::array();
  for (auto x : s) out.push_back(to_string(x));
  return out;
}

/// Feedback document: exact rationals in micro-units as "a/b" strings.
inline nlohmann::json feedback_json(const AuctionInstance& inst, const Coalitions& co, const FeedbackVector& fv,
                                    const char* policy) {
  auto ids = nlohmann::json::array();
  for (const auto& a : inst.agents()) ids.push_back(a.id);
  return {{"version", kTraceVersion},
          {"policy", policy},
          {"agents", ids},
          {"statuses", statuses_json(co.statuses())},
          {"optimal_value_micro", co.optimum().micros()},
          {"discounts_micro", rationals_json(fv.discounts)},
          {"raises_micro", rationals_json(fv.raises)},
          {"seller_payoff_micro", fv.seller_payoff.get_str()}};
}

inline nlohmann::json trace_json(const AuctionInstance& inst, const DynamicsTrace& t) {
  auto rounds = nlohmann::json::array();
  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    const auto& rec = t.rounds[r];
    auto bids = nlohmann::json::array();
    for (const auto& row : rec.bids) {
      auto b = nlohmann::json::array();
      for (Money m : row) b.push_back(m.micros());
      bids.push_back(std::move(b));
    }
    nlohmann::json j{{"round", r + 1},
                     {"bids_micro", bids},
                     {"total_bid_micro", rec.total.micros()},
                     {"statuses", statuses_json(rec.statuses)}};
    if (rec.feedback)
      j["feedback"] = {{"discounts_micro", rationals_json(rec.feedback->discounts)},
                       {"raises_micro", rationals_json(rec.feedback->raises)}};
    rounds.push_back(std::move(j));
  }
  auto alloc = nlohmann::json::array();
  for (const auto& slot : t.final_allocation.slots)
    alloc.push_back(slot ? nlohmann::json(inst.agent(*slot).id) : nlohmann::json(nullptr));
  nlohmann::json out{{"version", kTraceVersion},
                     {"policy", to_string(t.policy)},
                     {"outcome", to_string(t.outcome)},
                     {"rounds", rounds},
                     {"final_allocation", alloc},
                     {"efficiency_pct", t.efficiency.get_d()},
                     {"efficiency_exact", t.efficiency.get_str()}};
  if (t.outcome == Termination::Cycled) out["matched_round"] = t.matched_round;
  return out;
}

/// Long-format bid table for plotting: one line per (round, agent), bid = highest position bid.
inline std::string trace_csv(const AuctionInstance& inst, const DynamicsTrace& t) {
  std::ostringstream os;
  os << "round,agent,bid_micro,status\n";
  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    const auto& rec = t.rounds[r];
    for (std::size_t i = 0; i < rec.bids.size(); ++i)
      os << r + 1 << ',' << inst.agent(i).id << ',' << std::max_element(rec.bids[i].begin(), rec.bids[i].end())->micros()
         << ',' << to_string(rec.statuses[i]) << '\n';
  }
  return os.str();
}

} // namespace podfb
