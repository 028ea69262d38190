#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "podfb/rational.hpp"

namespace podfb {

/// maximize c·x subject to a·x <= rhs for every row, x >= 0. All data exact.
class LinearProgram {
public:
  struct Constraint {
    std::vector<Rational> coeffs;
    Rational rhs;
  };

  LinearProgram() = default;
  explicit LinearProgram(std::size_t variables) {
    for (std::size_t j = 0; j < variables; ++j) add_variable("x" + std::to_string(j));
  }

  std::size_t add_variable(std::string name) {
    names_.push_back(std::move(name));
    objective_.emplace_back(0);
    for (auto& c : constraints_) c.coeffs.emplace_back(0);
    return names_.size() - 1;
  }

  std::size_t num_variables() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  void set_objective(std::vector<Rational> c) {
    check_width(c);
    objective_ = std::move(c);
  }

  /// a·x <= rhs
  void add_constraint(std::vector<Rational> a, Rational rhs) {
    check_width(a);
    constraints_.push_back({std::move(a), std::move(rhs)});
  }
  /// a·x >= rhs
  void add_ge(std::vector<Rational> a, Rational rhs) {
    for (auto& v : a) v = -v;
    add_constraint(std::move(a), -rhs);
  }
  void add_eq(const std::vector<Rational>& a, const Rational& rhs) {
    add_constraint(a, rhs);
    add_ge(a, rhs);
  }

  /// Exact check of every constraint and the sign bounds.
  bool satisfies(const std::vector<Rational>& x) const {
    if (x.size() != num_variables()) return false;
    for (const auto& v : x)
      if (v < 0) return false;
    for (const auto& c : constraints_)
      if (dot(c.coeffs, x) > c.rhs) return false;
    return true;
  }

  Rational evaluate(const std::vector<Rational>& x) const { return dot(objective_, x); }

  static Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& x) {
    Rational s = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (sgn(a[j]) != 0) s += a[j] * x[j];
    return s;
  }

private:
  void check_width(const std::vector<Rational>& a) const {
    if (a.size() != names_.size()) throw std::invalid_argument("coefficient vector does not match variable count");
  }

  std::vector<std::string> names_;
  std::vector<Rational> objective_;
  std::vector<Constraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;

  bool optimal() const { return status == LpStatus::Optimal; }
};

namespace detail {

// Slack form: x_B[i] = b[i] - sum_j A[i][j] x_N[j], z = v + sum_j c[j] x_N[j].
// Variable ids: originals 0..n-1, slacks n..n+m-1, auxiliary n+m.
class SlackForm {
public:
  explicit SlackForm(const LinearProgram& lp) : n_(lp.num_variables()), m_(lp.constraints().size()) {
    A_.resize(m_);
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      A_[i] = lp.constraints()[i].coeffs;
      b_[i] = lp.constraints()[i].rhs;
      basic_.push_back(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) nonbasic_.push_back(j);
    c_ = lp.objective();
    v_ = 0;
  }

  LpOutcome solve(const LinearProgram& lp) {
    if (!make_feasible()) return {LpStatus::Infeasible, 0, {}};
    // Restore the real objective over the current nonbasic variables.
    c_.assign(nonbasic_.size(), 0);
    v_ = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      const Rational& ck = lp.objective()[k];
      if (sgn(ck) == 0) continue;
      if (auto j = nonbasic_pos(k)) {
        c_[*j] += ck;
      } else {
        const std::size_t i = *basic_pos(k);
        v_ += ck * b_[i];
        for (std::size_t j = 0; j < nonbasic_.size(); ++j)
          if (sgn(A_[i][j]) != 0) c_[j] -= ck * A_[i][j];
      }
    }
    if (!run()) return {LpStatus::Unbounded, 0, {}};
    LpOutcome out{LpStatus::Optimal, v_, std::vector<Rational>(n_, 0)};
    for (std::size_t i = 0; i < m_; ++i)
      if (basic_[i] < n_) out.point[basic_[i]] = b_[i];
    return out;
  }

private:
  std::optional<std::size_t> nonbasic_pos(std::size_t id) const {
    for (std::size_t j = 0; j < nonbasic_.size(); ++j)
      if (nonbasic_[j] == id) return j;
    return std::nullopt;
  }
  std::optional<std::size_t> basic_pos(std::size_t id) const {
    for (std::size_t i = 0; i < basic_.size(); ++i)
      if (basic_[i] == id) return i;
    return std::nullopt;
  }

  void pivot(std::size_t l, std::size_t e) {
    const Rational inv = 1 / A_[l][e];
    b_[l] *= inv;
    for (std::size_t j = 0; j < nonbasic_.size(); ++j)
      if (j != e && sgn(A_[l][j]) != 0) A_[l][j] *= inv;
    A_[l][e] = inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == l || sgn(A_[i][e]) == 0) continue;
      const Rational coef = A_[i][e];
      b_[i] -= coef * b_[l];
      for (std::size_t j = 0; j < nonbasic_.size(); ++j)
        if (j != e && sgn(A_[l][j]) != 0) A_[i][j] -= coef * A_[l][j];
      A_[i][e] = -coef * inv;
    }
    if (sgn(c_[e]) != 0) {
      const Rational coef = c_[e];
      v_ += coef * b_[l];
      for (std::size_t j = 0; j < nonbasic_.size(); ++j)
        if (j != e && sgn(A_[l][j]) != 0) c_[j] -= coef * A_[l][j];
      c_[e] = -coef * inv;
    }
    std::swap(basic_[l], nonbasic_[e]);
  }

  // Bland's rule: lowest-id improving variable enters; ratio ties leave by lowest id.
  bool run() {
    while (true) {
      std::optional<std::size_t> e;
      for (std::size_t j = 0; j < nonbasic_.size(); ++j)
        if (sgn(c_[j]) > 0 && (!e || nonbasic_[j] < nonbasic_[*e])) e = j;
      if (!e) return true;
      std::optional<std::size_t> l;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(A_[i][*e]) <= 0) continue;
        Rational ratio = b_[i] / A_[i][*e];
        if (!l || ratio < best || (ratio == best && basic_[i] < basic_[*l])) {
          l = i;
          best = std::move(ratio);
        }
      }
      if (!l) return false;
      pivot(*l, *e);
    }
  }

  bool make_feasible() {
    std::optional<std::size_t> worst;
    for (std::size_t i = 0; i < m_; ++i)
      if (sgn(b_[i]) < 0 && (!worst || b_[i] < b_[*worst])) worst = i;
    if (!worst) return true;

    const std::size_t aux = n_ + m_;
    nonbasic_.push_back(aux);
    for (auto& row : A_) row.emplace_back(-1);
    c_.assign(nonbasic_.size(), 0);
    c_.back() = -1;
    v_ = 0;
    pivot(*worst, nonbasic_.size() - 1);
    run(); // bounded: the objective is -x_aux <= 0
    if (sgn(v_) < 0) return false;

    if (auto l = basic_pos(aux)) {
      std::optional<std::size_t> e;
      for (std::size_t j = 0; j < nonbasic_.size(); ++j)
        if (sgn(A_[*l][j]) != 0 && (!e || nonbasic_[j] < nonbasic_[*e])) e = j;
      if (!e) {
        // Row reads x_aux = 0 identically; it carries no constraint.
        A_.erase(A_.begin() + static_cast<std::ptrdiff_t>(*l));
        b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(*l));
        basic_.erase(basic_.begin() + static_cast<std::ptrdiff_t>(*l));
        --m_;
      } else {
        pivot(*l, *e);
      }
    }
    if (auto j = nonbasic_pos(aux)) {
      for (auto& row : A_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(*j));
      nonbasic_.erase(nonbasic_.begin() + static_cast<std::ptrdiff_t>(*j));
      c_.erase(c_.begin() + static_cast<std::ptrdiff_t>(*j));
    }
    return true;
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<std::vector<Rational>> A_;
  std::vector<Rational> b_;
  std::vector<Rational> c_;
  Rational v_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> nonbasic_;
};

} // namespace detail

/// Exact simplex over rationals with Bland's anti-cycling rule.
inline LpOutcome solve_lp(const LinearProgram& lp) {
  detail::SlackForm form{lp};
  return form.solve(lp);
}

/// Copy of `lp` restricted to its optimal face (objective pinned at its optimum).
inline LinearProgram pin_optimum(const LinearProgram& lp) {
  const auto out = solve_lp(lp);
  if (out.status == LpStatus::Unbounded) throw std::domain_error("objective is unbounded");
  if (out.status == LpStatus::Infeasible) throw std::domain_error("program is infeasible");
  LinearProgram pinned = lp;
  pinned.add_ge(lp.objective(), out.value);
  return pinned;
}

/// Maximizes the objective, then returns the leximin-maximal point of the optimal face: the
/// smallest coordinate is as large as possible, then the next smallest, and so on.
inline std::vector<Rational> leximin_max(const LinearProgram& lp) {
  const LinearProgram base = pin_optimum(lp);
  const std::size_t n = base.num_variables();
  std::vector<std::optional<Rational>> fixed(n);
  auto unit = [n](std::size_t j) {
    std::vector<Rational> e(n, 0);
    e[j] = 1;
    return e;
  };
  auto with_fixes = [&] {
    LinearProgram p = base;
    for (std::size_t j = 0; j < n; ++j)
      if (fixed[j]) p.add_eq(unit(j), *fixed[j]);
    return p;
  };

  std::size_t remaining = n;
  while (remaining > 0) {
    // Raise the floor t under every free coordinate.
    LinearProgram floor_lp = with_fixes();
    const std::size_t t = floor_lp.add_variable("floor");
    for (std::size_t j = 0; j < n; ++j) {
      if (fixed[j]) continue;
      std::vector<Rational> row(n + 1, 0);
      row[t] = 1;
      row[j] = -1;
      floor_lp.add_constraint(std::move(row), 0);
    }
    std::vector<Rational> obj(n + 1, 0);
    obj[t] = 1;
    floor_lp.set_objective(obj);
    const auto floor_out = solve_lp(floor_lp);
    if (!floor_out.optimal()) throw std::logic_error("leximin floor program failed");
    const Rational level = floor_out.value;

    // Coordinates that cannot rise above the floor are fixed at it.
    LinearProgram probe = with_fixes();
    for (std::size_t j = 0; j < n; ++j)
      if (!fixed[j]) probe.add_ge(unit(j), level);
    std::vector<std::size_t> saturated;
    for (std::size_t j = 0; j < n; ++j) {
      if (fixed[j] || floor_out.point[j] > level) continue;
      probe.set_objective(unit(j));
      const auto o = solve_lp(probe);
      if (o.optimal() && o.value == level) saturated.push_back(j);
    }
    if (saturated.empty()) throw std::logic_error("leximin made no progress");
    for (std::size_t j : saturated) fixed[j] = level;
    remaining -= saturated.size();
  }
  std::vector<Rational> point(n);
  for (std::size_t j = 0; j < n; ++j) point[j] = *fixed[j];
  return point;
}

} // namespace podfb
