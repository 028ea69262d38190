#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "podfb/model.hpp"
#include "podfb/rng.hpp"

namespace podfb {

struct GeneratorParams {
  int min_bidders = 3;
  int max_bidders = 5;
  /// Values are log-uniform over [min_value, max_value] micro-units.
  std::int64_t min_value_micro = 100'000;
  std::int64_t max_value_micro = 10'000'000;
  std::vector<int> durations_s{15, 30};
  int min_positions = 2;
  int max_positions = 3;
  std::vector<int> max_durations_s{30, 60};
  bool require_binding = true;
  /// Draws a separate value for every position instead of a uniform value.
  bool per_position_values = false;
  /// Probability that any given pair of agents is mutually exclusive.
  double exclusion_probability = 0.0;
  int max_attempts = 10'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (min_bidders < 1 || min_bidders > max_bidders || max_bidders > static_cast<int>(kMaxAgents))
      throw std::invalid_argument("bidder range must satisfy 1 <= min <= max <= 32");
    if (min_value_micro <= 0 || min_value_micro > max_value_micro)
      throw std::invalid_argument("value range must satisfy 0 < min <= max");
    if (durations_s.empty() || max_durations_s.empty()) throw std::invalid_argument("duration choices must be nonempty");
    if (min_positions < 1 || min_positions > max_positions) throw std::invalid_argument("bad positions range");
    for (int d : durations_s)
      if (d <= 0) throw std::invalid_argument("durations must be positive");
    int shortest_cap = max_durations_s.front();
    for (int d : max_durations_s) shortest_cap = std::min(shortest_cap, d);
    for (int d : durations_s)
      if (d > shortest_cap) throw std::invalid_argument("every ad duration must fit every pod");
    if (exclusion_probability < 0 || exclusion_probability > 1) throw std::invalid_argument("bad exclusion probability");
    if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
  }

  GeneratorParams with_bidders(int n) const {
    GeneratorParams p = *this;
    p.min_bidders = p.max_bidders = n;
    return p;
  }
};

inline nlohmann::json to_json(const GeneratorParams& p) {
  return {{"min_bidders", p.min_bidders},
          {"max_bidders", p.max_bidders},
          {"min_value_micro", p.min_value_micro},
          {"max_value_micro", p.max_value_micro},
          {"durations_s", p.durations_s},
          {"min_positions", p.min_positions},
          {"max_positions", p.max_positions},
          {"max_durations_s", p.max_durations_s},
          {"require_binding", p.require_binding},
          {"per_position_values", p.per_position_values},
          {"exclusion_probability", p.exclusion_probability},
          {"max_attempts", p.max_attempts},
          {"seed", p.seed}};
}

/// Reads params; absent keys keep their defaults, unknown keys are rejected.
inline GeneratorParams params_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("generator params must be a JSON object");
  GeneratorParams p;
  const auto defaults = to_json(p);
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!defaults.contains(it.key())) throw std::invalid_argument("unknown generator parameter '" + it.key() + "'");
  try {
    p.min_bidders = doc.value("min_bidders", p.min_bidders);
    p.max_bidders = doc.value("max_bidders", p.max_bidders);
    p.min_value_micro = doc.value("min_value_micro", p.min_value_micro);
    p.max_value_micro = doc.value("max_value_micro", p.max_value_micro);
    p.durations_s = doc.value("durations_s", p.durations_s);
    p.min_positions = doc.value("min_positions", p.min_positions);
    p.max_positions = doc.value("max_positions", p.max_positions);
    p.max_durations_s = doc.value("max_durations_s", p.max_durations_s);
    p.require_binding = doc.value("require_binding", p.require_binding);
    p.per_position_values = doc.value("per_position_values", p.per_position_values);
    p.exclusion_probability = doc.value("exclusion_probability", p.exclusion_probability);
    p.max_attempts = doc.value("max_attempts", p.max_attempts);
    p.seed = doc.value("seed", p.seed);
  } catch (const nlohmann::json::type_error& e) {
    throw std::invalid_argument(std::string("bad generator parameter type: ") + e.what());
  }
  p.validate();
  return p;
}

/// Placing every ad at once would break the ad-count or the duration limit.
inline bool constraints_bind(const AuctionInstance& inst) {
  if (static_cast<int>(inst.size()) > inst.pod().max_ads) return true;
  int total = 0;
  for (const auto& a : inst.agents()) total += a.duration_s;
  return total > inst.pod().max_duration_s;
}

namespace detail {

inline Money log_uniform(CounterRng& rng, std::int64_t lo, std::int64_t hi) {
  if (lo == hi) return Money{lo};
  const double x = std::exp(std::log(static_cast<double>(lo)) + rng.unit() * std::log(static_cast<double>(hi) / lo));
  return Money{std::clamp<std::int64_t>(std::llround(x), lo, hi)};
}

template <typename T>
const T& pick(CounterRng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
}

} // namespace detail

/// Instance `index` of the stream defined by params. Depends only on (params, index).
inline AuctionInstance generate_instance(const GeneratorParams& params, std::uint64_t index) {
  params.validate();
  CounterRng rng{params.seed, index};
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    PodSpec pod;
    pod.num_positions = static_cast<int>(rng.uniform(params.min_positions, params.max_positions));
    pod.max_ads = pod.num_positions;
    pod.max_duration_s = detail::pick(rng, params.max_durations_s);
    const auto n = static_cast<std::size_t>(rng.uniform(params.min_bidders, params.max_bidders));
    std::vector<AgentProfile> agents;
    for (std::size_t i = 0; i < n; ++i) {
      AgentProfile a;
      a.id = "a" + std::to_string(i + 1);
      a.duration_s = detail::pick(rng, params.durations_s);
      const Money v = detail::log_uniform(rng, params.min_value_micro, params.max_value_micro);
      for (int x = 0; x < pod.num_positions; ++x)
        a.value.push_back(params.per_position_values
                              ? detail::log_uniform(rng, params.min_value_micro, params.max_value_micro)
                              : v);
      a.bid = a.value;
      agents.push_back(std::move(a));
    }
    if (params.exclusion_probability > 0)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (rng.unit() < params.exclusion_probability) pod.exclusions.emplace_back(a, b);
    AuctionInstance inst{std::move(pod), std::move(agents)};
    if (!params.require_binding || constraints_bind(inst)) return inst;
  }
  throw std::runtime_error("no binding instance found for index " + std::to_string(index) + " within " +
                           std::to_string(params.max_attempts) + " attempts");
}

} // namespace podfb
