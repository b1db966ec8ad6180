#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <optional>
#include <string>

namespace gibbs {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Accepts "p/q", integers and finite decimals such as "0.45"; throws
// ConfigError otherwise.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
bool is_integer(const Rational& r);

// Nonnegative rational or +infinity. Used for b(beta) and p(beta), where
// an empty constraint set or a non-positive denominator means "no bound".
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational v) : value_(std::move(v)) {}
  static ExtRational infinity() { ExtRational e; e.value_.reset(); return e; }

  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

 private:
  std::optional<Rational> value_ = Rational(0);
};

ExtRational max(const ExtRational& a, const ExtRational& b);
ExtRational min(const ExtRational& a, const ExtRational& b);

}  // namespace gibbs
