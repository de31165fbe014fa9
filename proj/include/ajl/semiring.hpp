#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>

namespace ajl {

/// Commutative semiring used to annotate tuples. `lift` turns an integer attribute value into an
/// annotation for SUM/MIN style aggregates.
template <class S>
concept Semiring = requires(const typename S::value_type& a, const typename S::value_type& b, std::int64_t x) {
  typename S::value_type;
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::one() } -> std::convertible_to<typename S::value_type>;
  { S::plus(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::times(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::lift(x) } -> std::convertible_to<typename S::value_type>;
};

/// (N, +, x, 0, 1): COUNT.
struct CountingSemiring {
  using value_type = std::uint64_t;
  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static constexpr value_type plus(value_type a, value_type b) noexcept { return a + b; }
  static constexpr value_type times(value_type a, value_type b) noexcept { return a * b; }
  static constexpr value_type lift(std::int64_t x) noexcept { return static_cast<value_type>(x); }
};

/// (Z, +, x, 0, 1) over 64-bit integers: SUM of products.
struct SumProductSemiring {
  using value_type = std::int64_t;
  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static constexpr value_type plus(value_type a, value_type b) noexcept { return a + b; }
  static constexpr value_type times(value_type a, value_type b) noexcept { return a * b; }
  static constexpr value_type lift(std::int64_t x) noexcept { return x; }
};

/// Tropical (min, +) with +infinity as zero: MIN.
struct MinPlusSemiring {
  using value_type = std::int64_t;
  static constexpr value_type infinity() noexcept { return std::numeric_limits<value_type>::max(); }
  static constexpr value_type zero() noexcept { return infinity(); }
  static constexpr value_type one() noexcept { return 0; }
  static constexpr value_type plus(value_type a, value_type b) noexcept { return std::min(a, b); }
  static constexpr value_type times(value_type a, value_type b) noexcept {
    return (a == infinity() || b == infinity()) ? infinity() : a + b;
  }
  static constexpr value_type lift(std::int64_t x) noexcept { return x; }
};

static_assert(Semiring<CountingSemiring>);
static_assert(Semiring<SumProductSemiring>);
static_assert(Semiring<MinPlusSemiring>);

}  // namespace ajl
