#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fuzzylim/error.hpp"

namespace fuzzylim {

/// Exact rational number. GMP keeps it canonical (reduced, positive
/// denominator), so `==` is decidable structural equality.
using Scalar = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Scalar abs(const Scalar& v) { return v < 0 ? Scalar(-v) : v; }

inline Integer numerator_of(const Scalar& v) { return boost::multiprecision::numerator(v); }
inline Integer denominator_of(const Scalar& v) { return boost::multiprecision::denominator(v); }

inline Scalar floor(const Scalar& v) {
  Integer num = numerator_of(v);
  Integer den = denominator_of(v);
  Integer q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return Scalar(q);
}

inline Scalar make_scalar(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) fail(ErrorCode::invalid_parameter, "zero denominator");
  return Scalar(Integer(num), Integer(den));
}

/// Canonical "p/q" rendering; the denominator is always written.
inline std::string to_string(const Scalar& v) {
  return numerator_of(v).str() + "/" + denominator_of(v).str();
}

/// Fixed-precision decimal, rounded half away from zero in exact arithmetic.
inline std::string to_decimal(const Scalar& v, int digits = 6) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Scalar scaled = abs(v) * Scalar(scale) + Scalar(1, 2);
  Integer rounded = numerator_of(floor(scaled));
  Integer whole = rounded / scale;
  Integer frac = rounded % scale;
  std::string frac_text = frac.str();
  frac_text.insert(0, static_cast<std::size_t>(digits) - frac_text.size(), '0');
  std::string out = (v < 0 && rounded != 0) ? "-" : "";
  out += whole.str();
  if (digits > 0) out += "." + frac_text;
  return out;
}

inline double to_double(const Scalar& v) { return v.convert_to<double>(); }

namespace detail {
inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Base-10 digits to Integer; Boost would read a leading 0 as octal.
inline Integer decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer{std::string(digits)};
}
}  // namespace detail

/// Parses "p/q", integers, and decimals with optional exponent ("0.9",
/// "-1.5e-3"); decimals convert exactly.
inline std::optional<Scalar> try_parse_scalar(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Scalar value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
    Integer d = detail::decimal_integer(den);
    if (d == 0) return std::nullopt;
    value = Scalar(detail::decimal_integer(num), d);
  } else {
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = text.substr(0, e);
      auto exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!detail::all_digits(exp_text) || exp_text.size() > 6) return std::nullopt;
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    auto dot = mantissa.find('.');
    if (dot == std::string_view::npos) {
      if (!detail::all_digits(mantissa)) return std::nullopt;
      digits = std::string(mantissa);
    } else {
      auto int_part = mantissa.substr(0, dot);
      auto frac_part = mantissa.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) return std::nullopt;
      if ((!int_part.empty() && !detail::all_digits(int_part)) ||
          (!frac_part.empty() && !detail::all_digits(frac_part)))
        return std::nullopt;
      digits = std::string(int_part) + std::string(frac_part);
      exponent -= static_cast<long>(frac_part.size());
    }
    Integer pow10 = 1;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) pow10 *= 10;
    value = Scalar(detail::decimal_integer(digits));
    if (exponent >= 0)
      value *= Scalar(pow10);
    else
      value /= Scalar(pow10);
  }
  return negative ? Scalar(-value) : value;
}

inline Scalar parse_scalar(std::string_view text) {
  auto v = try_parse_scalar(text);
  if (!v) fail(ErrorCode::parse_error, "not a rational number: '" + std::string(text) + "'");
  return *v;
}

/// Extended scalar: a finite rational or one of the two infinities.
class XScalar {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  XScalar() = default;
  XScalar(Scalar v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  XScalar(int v) : kind_(Kind::finite), value_(v) {}                 // NOLINT(google-explicit-constructor)

  static XScalar pos_inf() { return XScalar(Kind::pos_inf); }
  static XScalar neg_inf() { return XScalar(Kind::neg_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  const Scalar& value() const {
    if (!is_finite()) fail(ErrorCode::invalid_parameter, "infinite value has no rational part");
    return value_;
  }

  friend bool operator==(const XScalar& x, const XScalar& y) {
    return x.kind_ == y.kind_ && (x.kind_ != Kind::finite || x.value_ == y.value_);
  }
  friend std::strong_ordering operator<=>(const XScalar& x, const XScalar& y) {
    if (x.kind_ != y.kind_) return static_cast<int>(x.kind_) <=> static_cast<int>(y.kind_);
    if (x.kind_ != Kind::finite) return std::strong_ordering::equal;
    if (x.value_ < y.value_) return std::strong_ordering::less;
    if (y.value_ < x.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit XScalar(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  Scalar value_{0};
};

inline std::string to_string(const XScalar& v) {
  if (v.is_pos_inf()) return "+inf";
  if (v.is_neg_inf()) return "-inf";
  return to_string(v.value());
}

inline XScalar parse_xscalar(std::string_view text) {
  if (text == "+inf" || text == "inf") return XScalar::pos_inf();
  if (text == "-inf") return XScalar::neg_inf();
  return parse_scalar(text);
}

/// Closed interval [lo, hi].
class Interval {
 public:
  Interval(Scalar lo, Scalar hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) fail(ErrorCode::invariant_violation, "interval with lo > hi");
  }
  static Interval point(const Scalar& c) { return Interval(c, c); }

  const Scalar& lo() const { return lo_; }
  const Scalar& hi() const { return hi_; }
  Scalar length() const { return hi_ - lo_; }
  Scalar center() const { return (lo_ + hi_) / 2; }
  bool degenerate() const { return lo_ == hi_; }
  bool contains(const Scalar& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

  Scalar distance_to(const Scalar& x) const {
    if (x < lo_) return lo_ - x;
    if (x > hi_) return x - hi_;
    return Scalar(0);
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Scalar lo_;
  Scalar hi_;
};

inline std::string to_string(const Interval& i) {
  return "[" + to_string(i.lo()) + ", " + to_string(i.hi()) + "]";
}

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Scalar lo = a.lo() < b.lo() ? b.lo() : a.lo();
  Scalar hi = a.hi() < b.hi() ? a.hi() : b.hi();
  if (hi < lo) return std::nullopt;
  return Interval(lo, hi);
}

}  // namespace fuzzylim
