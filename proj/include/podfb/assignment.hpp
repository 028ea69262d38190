#pragma once

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "podfb/coalitional.hpp"
#include "podfb/feedback.hpp"
#include "podfb/hungarian.hpp"
#include "podfb/lp.hpp"

namespace podfb {

/// n agents bidding on m <= n items; each agent gets at most one item.
class AssignmentInstance {
public:
  explicit AssignmentInstance(std::vector<std::vector<Money>> bids) : bids_(std::move(bids)) {
    if (bids_.empty()) throw std::invalid_argument("assignment needs at least one agent");
    m_ = bids_.front().size();
    if (m_ == 0) throw std::invalid_argument("assignment needs at least one item");
    if (m_ > bids_.size()) throw std::invalid_argument("more items than agents");
    for (const auto& row : bids_) {
      if (row.size() != m_) throw std::invalid_argument("ragged bid matrix");
      for (Money b : row)
        if (b < Money::zero()) throw std::invalid_argument("negative bid");
    }
  }

  std::size_t agents() const { return bids_.size(); }
  std::size_t items() const { return m_; }
  Money bid(std::size_t i, std::size_t j) const { return bids_[i][j]; }
  const std::vector<std::vector<Money>>& bids() const { return bids_; }

private:
  std::vector<std::vector<Money>> bids_;
  std::size_t m_ = 0;
};

/// Dual solution (pi, mu, p) of D(S, T).
struct DualPoint {
  std::vector<Rational> pi;
  std::vector<Rational> mu;
  std::vector<Rational> p;

  friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

/// Optimal assignment: item_of[i] is the item given to agent i, if any.
struct Matching {
  Money value;
  std::vector<std::optional<std::size_t>> item_of;
};

inline Matching optimal_matching(const AssignmentInstance& inst) {
  std::vector<std::vector<std::optional<std::int64_t>>> w(inst.items());
  for (std::size_t j = 0; j < inst.items(); ++j)
    for (std::size_t i = 0; i < inst.agents(); ++i) w[j].emplace_back(inst.bid(i, j).micros());
  const auto agent_for = max_weight_assignment(w, inst.agents());
  Matching out{Money::zero(), std::vector<std::optional<std::size_t>>(inst.agents())};
  for (std::size_t j = 0; j < inst.items(); ++j) {
    out.item_of[(*agent_for)[j]] = j;
    out.value += inst.bid((*agent_for)[j], j);
  }
  return out;
}

inline bool dual_feasible(const AssignmentInstance& inst, const DualPoint& d) {
  const auto nonneg = [](const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x >= 0; });
  };
  if (d.pi.size() != inst.agents() || d.mu.size() != inst.agents() || d.p.size() != inst.items()) return false;
  if (!nonneg(d.pi) || !nonneg(d.mu) || !nonneg(d.p)) return false;
  for (std::size_t i = 0; i < inst.agents(); ++i)
    for (std::size_t j = 0; j < inst.items(); ++j)
      if (d.pi[i] - d.mu[i] + d.p[j] < to_rational(inst.bid(i, j))) return false;
  return true;
}

/// Objective of D(N, {}): sum of prices plus sum of discounts.
inline Rational dual_objective(const DualPoint& d) {
  Rational s = 0;
  for (const auto& x : d.p) s += x;
  for (const auto& x : d.pi) s += x;
  return s;
}

inline bool dual_optimal(const AssignmentInstance& inst, const DualPoint& d) {
  return dual_feasible(inst, d) && dual_objective(d) == to_rational(optimal_matching(inst).value);
}

inline bool normalized(const DualPoint& d) {
  for (std::size_t i = 0; i < d.pi.size(); ++i)
    if (d.pi[i] != 0 && d.mu[i] != 0) return false;
  return true;
}

/// Subtracts min(pi_i, mu_i) from both components of every agent.
inline DualPoint normalize(DualPoint d) {
  for (std::size_t i = 0; i < d.pi.size(); ++i) {
    const Rational delta = std::min(d.pi[i], d.mu[i]);
    d.pi[i] -= delta;
    d.mu[i] -= delta;
  }
  return d;
}

/// x_ij = 1 implies pi_i - mu_i = b_ij - p_j.
inline bool complementary_slackness(const AssignmentInstance& inst, const Matching& m, const DualPoint& d) {
  for (std::size_t i = 0; i < inst.agents(); ++i)
    if (auto j = m.item_of[i]; j && d.pi[i] - d.mu[i] != to_rational(inst.bid(i, *j)) - d.p[*j]) return false;
  return true;
}

namespace detail {

// Variables: pi_0..pi_{n-1}, mu_0..mu_{n-1}, p_0..p_{m-1}. Maximizes -(sum p + sum pi).
inline LinearProgram assignment_dual_lp(const AssignmentInstance& inst) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  LinearProgram lp;
  for (std::size_t i = 0; i < n; ++i) lp.add_variable("pi" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) lp.add_variable("mu" + std::to_string(i));
  for (std::size_t j = 0; j < m; ++j) lp.add_variable("p" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Rational> a(2 * n + m, 0);
      a[i] = 1;
      a[n + i] = -1;
      a[2 * n + j] = 1;
      lp.add_ge(std::move(a), to_rational(inst.bid(i, j)));
    }
  }
  std::vector<Rational> c(2 * n + m, 0);
  for (std::size_t i = 0; i < n; ++i) c[i] = -1;
  for (std::size_t j = 0; j < m; ++j) c[2 * n + j] = -1;
  lp.set_objective(std::move(c));
  return lp;
}

inline DualPoint unpack(const std::vector<Rational>& x, std::size_t n, std::size_t m) {
  DualPoint d;
  d.pi.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  d.mu.assign(x.begin() + static_cast<std::ptrdiff_t>(n), x.begin() + static_cast<std::ptrdiff_t>(2 * n));
  d.p.assign(x.begin() + static_cast<std::ptrdiff_t>(2 * n), x.begin() + static_cast<std::ptrdiff_t>(2 * n + m));
  return d;
}

inline std::vector<Rational> block_objective(std::size_t n, std::size_t m, bool prices, const Rational& sign) {
  std::vector<Rational> c(2 * n + m, 0);
  if (prices)
    for (std::size_t j = 0; j < m; ++j) c[2 * n + j] = sign;
  else
    for (std::size_t i = 0; i < n; ++i) c[n + i] = sign;
  return c;
}

} // namespace detail

enum class DualTarget {
  /// Lattice-smallest optimum: smallest prices, largest discounts, smallest raises.
  MinPoint,
  /// Lattice-largest optimum: largest prices, smallest discounts, largest raises.
  MaxPoint,
};

inline DualPoint solve_assignment_dual(const AssignmentInstance& inst, DualTarget target) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  const Rational sign = target == DualTarget::MinPoint ? -1 : 1;
  LinearProgram face = pin_optimum(detail::assignment_dual_lp(inst));
  face.set_objective(detail::block_objective(n, m, true, sign));
  face = pin_optimum(face);
  face.set_objective(detail::block_objective(n, m, false, sign));
  return detail::unpack(solve_lp(face).point, n, m);
}

/// Optimal dual maximizing weights·(pi, mu, p) over the optimal face; weights has 2n + m entries.
inline DualPoint solve_assignment_dual(const AssignmentInstance& inst, const std::vector<Rational>& weights) {
  LinearProgram face = pin_optimum(detail::assignment_dual_lp(inst));
  face.set_objective(weights);
  const auto out = solve_lp(face);
  if (!out.optimal()) throw std::logic_error("weighted dual program failed");
  return detail::unpack(out.point, inst.agents(), inst.items());
}

/// meet = (pi1 v pi2, mu1 ^ mu2, p1 ^ p2); join = (pi1 ^ pi2, mu1 v mu2, p1 v p2).
inline std::pair<DualPoint, DualPoint> lattice_meet_join(const DualPoint& a, const DualPoint& b) {
  auto zip = [](const std::vector<Rational>& x, const std::vector<Rational>& y, bool take_max) {
    std::vector<Rational> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = take_max ? std::max(x[k], y[k]) : std::min(x[k], y[k]);
    return out;
  };
  DualPoint meet{zip(a.pi, b.pi, true), zip(a.mu, b.mu, false), zip(a.p, b.p, false)};
  DualPoint join{zip(a.pi, b.pi, false), zip(a.mu, b.mu, true), zip(a.p, b.p, true)};
  return {std::move(meet), std::move(join)};
}

/// Pod with m positions and per-position values equal to the bids; durations never bind.
/// Bids must be positive: a pod agent cannot win a zero-value position, so a zero bid would
/// change which allocations count as winning.
inline AuctionInstance to_pod_instance(const AssignmentInstance& inst) {
  for (const auto& row : inst.bids())
    for (Money b : row)
      if (b <= Money::zero()) throw std::invalid_argument("pod equivalence needs positive bids");
  const int m = static_cast<int>(inst.items());
  PodSpec pod{m, m, m, {}};
  std::vector<AgentProfile> agents;
  for (std::size_t i = 0; i < inst.agents(); ++i)
    agents.push_back({"a" + std::to_string(i + 1), 1, inst.bids()[i], inst.bids()[i]});
  return AuctionInstance{pod, std::move(agents)};
}

/// Cheapest prices making (pi, mu, p) dual feasible; (pi, mu) extends to an optimal dual iff the
/// resulting objective equals the optimal matching value.
inline DualPoint extend_with_prices(const AssignmentInstance& inst, const std::vector<Rational>& pi,
                                    const std::vector<Rational>& mu) {
  DualPoint d{pi, mu, std::vector<Rational>(inst.items(), 0)};
  for (std::size_t j = 0; j < inst.items(); ++j)
    for (std::size_t i = 0; i < inst.agents(); ++i)
      d.p[j] = std::max(d.p[j], Rational(to_rational(inst.bid(i, j)) - pi[i] + mu[i]));
  return d;
}

/// Witnesses where V(S + i) - V(S) < V(S + j + i) - V(S + j). Comparisons touching -infinity are skipped.
inline std::vector<std::string> submodularity_violations(const Coalitions& co, Side side) {
  std::vector<std::string> out;
  const AgentSet all = co.everyone();
  auto v = [&](AgentSet S) { return side == Side::Winners ? co.winners_value(S) : co.losers_value(S); };
  for_each_subset(all, [&](AgentSet S) {
    for (std::size_t i : (all - S).members()) {
      for (std::size_t j : (all - S).without(i).members()) {
        const auto a = v(S), b = v(S.with(i)), c = v(S.with(j)), d = v(S.with(j).with(i));
        if (!a.is_finite() || !b.is_finite() || !c.is_finite() || !d.is_finite()) continue;
        if (b.value() - a.value() < d.value() - c.value()) {
          std::ostringstream msg;
          msg << (side == Side::Winners ? "V_w" : "V_l") << " not submodular at S=" << S.bits() << " i=" << i
              << " j=" << j;
          out.push_back(msg.str());
        }
      }
    }
  });
  return out;
}

struct LatticeReport {
  std::size_t samples = 0;
  std::size_t pairs_checked = 0;
  /// Violations of the lattice closure, the VCG extremes, the forward bicore projection,
  /// normalization or submodularity.
  std::vector<std::string> violations;
  /// Bicore points (policy outputs) that could not be extended to an optimal dual by any prices.
  std::vector<std::string> converse_extension_failures;

  bool ok() const { return violations.empty(); }
};

inline std::string describe(const DualPoint& d) {
  std::ostringstream os;
  auto put = [&](const char* name, const std::vector<Rational>& v) {
    os << name << "=(";
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k].get_str();
    os << ")";
  };
  put("pi", d.pi);
  os << " ";
  put("mu", d.mu);
  os << " ";
  put("p", d.p);
  return os.str();
}

/// Samples optimal duals with random-signed weights and checks the lattice and extreme-point claims
/// against the coalitional module on the equivalent pod instance.
template <typename Rng>
LatticeReport verify_lattice_and_extremes(const AssignmentInstance& inst, std::size_t samples, Rng& rng) {
  if (inst.agents() > kOracleMaxAgents) throw std::length_error("lattice verification supports at most 6 agents");
  LatticeReport report;
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  const Coalitions co{to_pod_instance(inst)};
  const auto vcg = vcg_feedback(co);
  if (to_rational(co.optimum()) != to_rational(optimal_matching(inst).value))
    report.violations.push_back("pod optimum differs from assignment optimum");

  auto check_optimal = [&](const DualPoint& d, const std::string& what) {
    if (!dual_optimal(inst, d)) report.violations.push_back(what + " is not an optimal dual: " + describe(d));
    else if (!normalized(d)) report.violations.push_back(what + " is not normalized: " + describe(d));
  };

  const auto lo = solve_assignment_dual(inst, DualTarget::MinPoint);
  const auto hi = solve_assignment_dual(inst, DualTarget::MaxPoint);
  check_optimal(lo, "min point");
  check_optimal(hi, "max point");
  if (lo.pi != vcg.discounts) report.violations.push_back("min point discounts differ from VCG: " + describe(lo));
  if (hi.mu != vcg.raises) report.violations.push_back("max point raises differ from VCG: " + describe(hi));

  std::vector<DualPoint> sampled;
  std::uniform_int_distribution<int> weight(1, 8);
  std::bernoulli_distribution negative(0.5);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Rational> w(2 * n + m);
    for (auto& x : w) x = negative(rng) ? -weight(rng) : weight(rng);
    sampled.push_back(solve_assignment_dual(inst, w));
    check_optimal(sampled.back(), "sample " + std::to_string(s));
  }
  report.samples = sampled.size();

  for (std::size_t a = 0; a < sampled.size(); ++a) {
    const auto& d = sampled[a];
    if (!in_bicore(co, d.pi, d.mu)) report.violations.push_back("projection outside bicore: " + describe(d));
    // The extremes bound every optimum in the lattice order.
    const auto [m1, j1] = lattice_meet_join(d, lo);
    const auto [m2, j2] = lattice_meet_join(d, hi);
    if (m1 != lo || j2 != hi) report.violations.push_back("sample not between extremes: " + describe(d));
    for (std::size_t b = a + 1; b < sampled.size(); ++b) {
      const auto [meet, join] = lattice_meet_join(d, sampled[b]);
      check_optimal(meet, "meet of samples " + std::to_string(a) + "," + std::to_string(b));
      check_optimal(join, "join of samples " + std::to_string(a) + "," + std::to_string(b));
      ++report.pairs_checked;
    }
  }

  for (auto side : {Side::Winners, Side::Losers})
    for (auto& v : submodularity_violations(co, side)) report.violations.push_back(std::move(v));

  for (auto sel : {BicoreSelection::RaiseFirst, BicoreSelection::Leximin}) {
    const auto fv = bicore_feedback(co, sel);
    const auto ext = extend_with_prices(inst, fv.discounts, fv.raises);
    if (!dual_optimal(inst, ext))
      report.converse_extension_failures.push_back("bicore point does not extend: " + describe(ext));
  }
  return report;
}

} // namespace podfb
