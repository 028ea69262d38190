#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>

namespace podfb {

/// Fixed-point currency amount in micro-units (1e-6 of one currency unit).
class Money {
public:
  constexpr Money() = default;
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}

  static constexpr Money zero() { return Money{0}; }
  static constexpr Money from_units(std::int64_t units) { return Money{units * 1'000'000}; }

  constexpr std::int64_t micros() const { return micros_; }

  constexpr Money& operator+=(Money o) { micros_ += o.micros_; return *this; }
  constexpr Money& operator-=(Money o) { micros_ -= o.micros_; return *this; }
  friend constexpr Money operator+(Money a, Money b) { return Money{a.micros_ + b.micros_}; }
  friend constexpr Money operator-(Money a, Money b) { return Money{a.micros_ - b.micros_}; }
  friend constexpr Money operator-(Money a) { return Money{-a.micros_}; }
  friend constexpr auto operator<=>(Money, Money) = default;

  /// Decimal rendering in currency units with six fractional digits.
  std::string to_units_string() const {
    const std::int64_t a = micros_ < 0 ? -micros_ : micros_;
    std::string frac = std::to_string(a % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    return (micros_ < 0 ? "-" : "") + std::to_string(a / 1'000'000) + "." + frac;
  }

private:
  std::int64_t micros_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Money m) { return os << m.micros() << "u"; }

constexpr Money max(Money a, Money b) { return a < b ? b : a; }
constexpr Money min(Money a, Money b) { return a < b ? a : b; }

} // namespace podfb
