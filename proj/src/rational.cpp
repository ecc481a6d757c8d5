#include "ocsp/rational.hpp"

#include <charconv>
#include <limits>

#include "ocsp/error.hpp"

namespace ocsp {
namespace {

constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(Errc::parse_error, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational make_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw Error(Errc::invalid_params, "zero denominator");
  if (num > kMax || den > kMax) throw Error(Errc::overflow, "ratio exceeds 2^63-1");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::parse_error, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::parse_error, "zero denominator");
    return {num, den};
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = text.front() == '-';
    auto int_part = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw Error(Errc::parse_error, "too many decimals");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part);
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part);
    if (whole < 0 || frac < 0) throw Error(Errc::parse_error, "malformed decimal");
    Rational r = Rational(whole) + Rational(frac, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) noexcept {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t floor_times(const Rational& r, std::int64_t n) {
  __int128 prod = static_cast<__int128>(r.numerator()) * n;
  __int128 den = r.denominator();
  __int128 q = prod / den;
  if (prod % den != 0 && prod < 0) --q;
  return static_cast<std::int64_t>(q);
}

}  // namespace ocsp
