#pragma once

// Independent reference implementations used only by the tests.

#include <optional>
#include <vector>

#include "podfb/lp.hpp"
#include "podfb/model.hpp"
#include "podfb/rational.hpp"

namespace oracle {

using podfb::AgentSet;
using podfb::AuctionInstance;
using podfb::BidMatrix;
using podfb::Money;
using podfb::Rational;

/// Best total bid over placements where every agent in `must` wins (sits at a positive-value
/// position) and nobody outside `allowed` is placed. Enumerates every injective agent->position
/// map directly.
inline std::optional<std::int64_t> best_value(const AuctionInstance& inst, const BidMatrix& bids, AgentSet allowed,
                                              AgentSet must) {
  const std::size_t n = inst.size();
  const int m = inst.pod().num_positions;
  std::vector<int> pos(n, -1);
  std::optional<std::int64_t> best;
  auto feasible = [&] {
    int ads = 0, dur = 0;
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] < 0) {
        if (must.contains(i)) return false;
        continue;
      }
      if (!allowed.contains(i) || used[static_cast<std::size_t>(pos[i])]) return false;
      used[static_cast<std::size_t>(pos[i])] = true;
      ++ads;
      dur += inst.agent(i).duration_s;
      if (must.contains(i) && inst.agent(i).value[static_cast<std::size_t>(pos[i])] == Money::zero()) return false;
    }
    if (ads > inst.pod().max_ads || dur > inst.pod().max_duration_s) return false;
    for (auto [a, b] : inst.pod().exclusions)
      if (pos[a] >= 0 && pos[b] >= 0) return false;
    return true;
  };
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (i == n) {
      if (!feasible()) return;
      std::int64_t v = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (pos[k] >= 0) v += bids[k][static_cast<std::size_t>(pos[k])].micros();
      if (!best || v > *best) best = v;
      return;
    }
    for (int x = -1; x < m; ++x) {
      pos[i] = x;
      self(self, i + 1);
    }
    pos[i] = -1;
  };
  rec(rec, 0);
  return best;
}

/// V(S, T): agents outside S and T excluded, agents in T forced to win.
inline std::optional<std::int64_t> coalition_value(const AuctionInstance& inst, const BidMatrix& bids, AgentSet S,
                                                   AgentSet T) {
  return best_value(inst, bids, S | T, T);
}

// Solves a square system by Gauss-Jordan elimination; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t d = b.size();
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && a[p][c] == 0) ++p;
    if (p == d) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < d; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < d; ++r) b[r] /= a[r][r];
  return b;
}

/// max c.x over {x >= 0, constraints of lp}, assumed bounded; nullopt when infeasible.
/// Tries every choice of d tight rows among the constraints and the sign bounds.
inline std::optional<Rational> vertex_optimum(const podfb::LinearProgram& lp) {
  const std::size_t d = lp.num_variables();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& c : lp.constraints()) {
    rows.push_back(c.coeffs);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> r(d, 0);
    r[j] = -1;
    rows.push_back(r);
    rhs.push_back(0);
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick(d);
  auto rec = [&](auto& self, std::size_t k, std::size_t from) -> void {
    if (k == d) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (auto i : pick) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
      auto x = solve_square(a, b);
      if (!x) return;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (podfb::LinearProgram::dot(rows[i], *x) > rhs[i]) return;
      const Rational v = lp.evaluate(*x);
      if (!best || v > *best) best = v;
      return;
    }
    for (std::size_t i = from; i < rows.size(); ++i) {
      pick[k] = i;
      self(self, k + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

} // namespace oracle
