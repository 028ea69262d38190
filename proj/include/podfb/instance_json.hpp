#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "podfb/model.hpp"

namespace podfb {

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InstanceError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InstanceError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

inline long long as_int(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InstanceError(path, "expected integer");
  return v.get<long long>();
}

inline int as_small_int(const nlohmann::json& v, const std::string& path) {
  const long long x = as_int(v, path);
  if (x < -1'000'000'000LL || x > 1'000'000'000LL) throw InstanceError(path, "out of range");
  return static_cast<int>(x);
}

inline std::vector<Money> money_vector(const nlohmann::json& v, std::size_t positions, const std::string& path) {
  if (v.is_number_integer()) return std::vector<Money>(positions, Money{as_int(v, path)});
  if (!v.is_array()) throw InstanceError(path, "expected integer or array of integers");
  if (v.size() != positions) throw InstanceError(path, "expected one entry per position");
  std::vector<Money> out;
  for (std::size_t x = 0; x < v.size(); ++x) out.emplace_back(as_int(v[x], path + "[" + std::to_string(x) + "]"));
  return out;
}

inline nlohmann::json money_json(const std::vector<Money>& v) {
  if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>{}) == v.end()) return v.front().micros();
  auto arr = nlohmann::json::array();
  for (Money m : v) arr.push_back(m.micros());
  return arr;
}

} // namespace detail

/// Parses and validates an instance document. Scalar value/bid entries denote uniform vectors;
/// a missing bid defaults to the value.
inline AuctionInstance instance_from_json(const nlohmann::json& doc) {
  using detail::require;
  const auto& pod_doc = require(doc, "pod", "");
  PodSpec pod;
  pod.num_positions = detail::as_small_int(require(pod_doc, "positions", "pod"), "pod.positions");
  pod.max_ads = detail::as_small_int(require(pod_doc, "max_ads", "pod"), "pod.max_ads");
  pod.max_duration_s = detail::as_small_int(require(pod_doc, "max_duration_s", "pod"), "pod.max_duration_s");
  if (pod.num_positions <= 0) throw InstanceError("pod.positions", "must be positive");

  const auto& agents_doc = require(doc, "agents", "");
  if (!agents_doc.is_array()) throw InstanceError("agents", "expected array");
  std::vector<AgentProfile> agents;
  const auto positions = static_cast<std::size_t>(pod.num_positions);
  for (std::size_t i = 0; i < agents_doc.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const auto& a = agents_doc[i];
    AgentProfile p;
    const auto& id = require(a, "id", path);
    if (!id.is_string()) throw InstanceError(path + ".id", "expected string");
    p.id = id.get<std::string>();
    p.duration_s = detail::as_small_int(require(a, "duration_s", path), path + ".duration_s");
    p.value = detail::money_vector(require(a, "value_micro", path), positions, path + ".value_micro");
    p.bid = a.contains("bid_micro") ? detail::money_vector(a["bid_micro"], positions, path + ".bid_micro") : p.value;
    agents.push_back(std::move(p));
  }

  if (pod_doc.contains("exclusions")) {
    const auto& ex = pod_doc["exclusions"];
    if (!ex.is_array()) throw InstanceError("pod.exclusions", "expected array of id pairs");
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const std::string path = "pod.exclusions[" + std::to_string(k) + "]";
      if (!ex[k].is_array() || ex[k].size() != 2 || !ex[k][0].is_string() || !ex[k][1].is_string())
        throw InstanceError(path, "expected [id, id]");
      auto find = [&](const nlohmann::json& id) {
        const auto s = id.get<std::string>();
        for (std::size_t i = 0; i < agents.size(); ++i)
          if (agents[i].id == s) return i;
        throw InstanceError(path, "unknown agent id '" + s + "'");
      };
      auto a = find(ex[k][0]);
      auto b = find(ex[k][1]);
      if (a == b) throw InstanceError(path, "agent excluded with itself");
      pod.exclusions.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(pod.exclusions.begin(), pod.exclusions.end());
    pod.exclusions.erase(std::unique(pod.exclusions.begin(), pod.exclusions.end()), pod.exclusions.end());
  }
  return AuctionInstance{std::move(pod), std::move(agents)};
}

inline AuctionInstance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError("", std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

/// Canonical document: uniform vectors as scalars, exclusion pairs ordered by agent position.
inline nlohmann::json to_json(const AuctionInstance& inst) {
  auto ex = nlohmann::json::array();
  auto pairs = inst.pod().exclusions;
  for (auto& [a, b] : pairs)
    if (a > b) std::swap(a, b);
  std::sort(pairs.begin(), pairs.end());
  for (auto [a, b] : pairs) ex.push_back({inst.agent(a).id, inst.agent(b).id});
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : inst.agents())
    agents.push_back({{"id", a.id},
                      {"duration_s", a.duration_s},
                      {"value_micro", detail::money_json(a.value)},
                      {"bid_micro", detail::money_json(a.bid)}});
  return {{"pod",
           {{"positions", inst.pod().num_positions},
            {"max_ads", inst.pod().max_ads},
            {"max_duration_s", inst.pod().max_duration_s},
            {"exclusions", ex}}},
          {"agents", agents}};
}

inline std::string serialize(const AuctionInstance& inst) { return to_json(inst).dump(2); }

} // namespace podfb
