#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace podfb {

/// Maximum-weight assignment of every row to a distinct column (rows <= cols).
/// Entries set to std::nullopt are forbidden. Returns the column chosen for each row, or
/// std::nullopt when no assignment avoids the forbidden entries.
inline std::optional<std::vector<std::size_t>> max_weight_assignment(
    const std::vector<std::vector<std::optional<std::int64_t>>>& weight, std::size_t cols) {
  const std::size_t n = weight.size();
  if (n == 0) return std::vector<std::size_t>{};
  if (n > cols) return std::nullopt;

  // Forbidden entries cost more than any feasible assignment can save.
  std::int64_t span = 1;
  for (const auto& row : weight)
    for (const auto& w : row)
      if (w) span += (*w < 0 ? -*w : *w);
  const std::int64_t forbidden = span * static_cast<std::int64_t>(n + 1);

  auto cost = [&](std::size_t r, std::size_t c) -> std::int64_t {
    const auto& w = weight[r][c];
    return w ? -*w : forbidden;
  };

  // Shortest augmenting path formulation with potentials; 1-based helper arrays.
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(cols + 1, 0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    match[0] = r;
    std::size_t c0 = 0;
    std::vector<std::int64_t> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[c0] = 1;
      const std::size_t r0 = match[c0];
      std::int64_t delta = inf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= cols; ++c) {
        if (used[c]) continue;
        const std::int64_t cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= cols; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (match[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      match[c0] = match[c1];
      c0 = c1;
    } while (c0 != 0);
  }

  std::vector<std::size_t> col_of(n);
  for (std::size_t c = 1; c <= cols; ++c)
    if (match[c] != 0) col_of[match[c] - 1] = c - 1;
  for (std::size_t r = 0; r < n; ++r)
    if (!weight[r][col_of[r]]) return std::nullopt;
  return col_of;
}

} // namespace podfb
