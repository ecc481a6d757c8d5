#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace ocsp {

/// Exact values (instance values, expansion parameters, probabilities) are
/// kept as reduced 64-bit fractions so that bound checks compare exactly.
using Rational = boost::rational<std::int64_t>;

/// num/den with both operands counted in std::size_t; rejects den == 0 and
/// anything that does not fit in a signed 64-bit integer.
Rational make_ratio(std::uint64_t num, std::uint64_t den);

/// Accepts "3/10", "0.3", "2", "-1/4". Decimal input is converted exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r) noexcept;

/// floor(r * n) for n >= 0, computed without rounding error.
std::int64_t floor_times(const Rational& r, std::int64_t n);

}  // namespace ocsp
