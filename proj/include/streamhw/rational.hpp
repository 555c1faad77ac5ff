#ifndef STREAMHW_RATIONAL_HPP
#define STREAMHW_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace streamhw {

/// Exact rational used for frequencies, periods and durations (seconds / Hz).
using Rational = boost::rational<std::int64_t>;

inline constexpr std::uint64_t kNanosPerSecond = 1'000'000'000ULL;

/// Parses a non-negative decimal literal such as "10", "0.5" or "2.25" exactly.
/// Returns nullopt on malformed input or overflow.
std::optional<Rational> parse_decimal(std::string_view text);

/// lcm of two positive rationals: the smallest positive rational that is an
/// integer multiple of both.
Rational rational_lcm(const Rational& a, const Rational& b);

/// Whole nanoseconds represented by `seconds`, or nullopt if not integral.
std::optional<std::uint64_t> to_nanos(const Rational& seconds);

/// Shortest exact decimal rendering of a nanosecond timestamp in seconds,
/// always with at least one fractional digit ("1.0", "2.25", "0.000000001").
std::string format_seconds(std::uint64_t nanos);

std::string format_rational(const Rational& r);

}  // namespace streamhw

#endif
