#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace podfb {

/// Maximum number of agents an instance may carry; sets are 32-bit masks.
inline constexpr std::size_t kMaxAgents = 32;

/// Set of agent indices (positions in AuctionInstance::agents).
class AgentSet {
public:
  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr AgentSet all(std::size_t n) {
    return AgentSet{n >= 32 ? 0xFFFFFFFFu : ((1u << n) - 1u)};
  }
  static constexpr AgentSet single(std::size_t i) { return AgentSet{1u << i}; }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }

  constexpr AgentSet with(std::size_t i) const { return AgentSet{bits_ | (1u << i)}; }
  constexpr AgentSet without(std::size_t i) const { return AgentSet{bits_ & ~(1u << i)}; }

  friend constexpr AgentSet operator|(AgentSet a, AgentSet b) { return AgentSet{a.bits_ | b.bits_}; }
  friend constexpr AgentSet operator&(AgentSet a, AgentSet b) { return AgentSet{a.bits_ & b.bits_}; }
  /// Set difference.
  friend constexpr AgentSet operator-(AgentSet a, AgentSet b) { return AgentSet{a.bits_ & ~b.bits_}; }
  friend constexpr bool operator==(AgentSet, AgentSet) = default;

  constexpr bool subset_of(AgentSet o) const { return (bits_ & ~o.bits_) == 0; }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

private:
  std::uint32_t bits_ = 0;
};

/// Calls fn(sub) for every subset of `of`, including the empty set and `of` itself.
template <typename Fn>
void for_each_subset(AgentSet of, Fn&& fn) {
  const std::uint32_t full = of.bits();
  std::uint32_t sub = 0;
  while (true) {
    fn(AgentSet{sub});
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

} // namespace podfb
