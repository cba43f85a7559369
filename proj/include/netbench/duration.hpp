#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace netbench {

// Integer nanoseconds so simulated clocks never drift; T1/T2 may be infinite.
class Duration {
 public:
  constexpr Duration() = default;

  static constexpr Duration nanoseconds(std::int64_t n) { return Duration(n); }
  static constexpr Duration microseconds(std::int64_t n) { return Duration(n * 1000); }
  static constexpr Duration milliseconds(std::int64_t n) { return Duration(n * 1000000); }
  static constexpr Duration seconds_i(std::int64_t n) { return Duration(n * 1000000000); }
  static constexpr Duration infinite() { return Duration(kInfinite); }
  static constexpr Duration zero() { return Duration(0); }

  constexpr bool is_infinite() const { return ns_ == kInfinite; }
  constexpr std::int64_t count_ns() const { return ns_; }

  double seconds() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(ns_) * 1e-9;
  }

  friend constexpr bool operator==(Duration a, Duration b) { return a.ns_ == b.ns_; }
  friend constexpr bool operator<(Duration a, Duration b) { return a.ns_ < b.ns_; }
  friend constexpr bool operator<=(Duration a, Duration b) { return a.ns_ <= b.ns_; }

  Duration operator+(Duration other) const {
    if (is_infinite() || other.is_infinite()) return infinite();
    return Duration(ns_ + other.ns_);
  }

  // "2 * T1" style bound with infinity saturation.
  Duration scaled(std::int64_t k) const {
    if (is_infinite()) return infinite();
    return Duration(ns_ * k);
  }

 private:
  static constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();
  explicit constexpr Duration(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

// Accepts "inf" or a number with a unit suffix: "39us", "12ms", "1.5s", "250ns".
Duration parse_duration(const std::string& text);
std::string format_duration(Duration d);

// t / T with the conventions: T infinite -> 0, t infinite (finite T) -> inf.
double decay_ratio(Duration t, Duration T);

}  // namespace netbench
