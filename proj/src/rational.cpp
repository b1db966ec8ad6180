#include "gibbs/rational.hpp"

#include "gibbs/errors.hpp"

#include <regex>

namespace gibbs {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

// mpz_int reads a leading 0 as an octal prefix.
Integer decimal_integer(const std::string& digits) {
  const auto nz = digits.find_first_not_of('0');
  return nz == std::string::npos ? Integer(0) : Integer(digits.substr(nz));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  static const std::regex frac(R"(^([+-]?\d+)(?:/(\d+))?$)");
  static const std::regex dec(R"(^([+-]?)(\d*)\.(\d+)$)");
  const std::string t = trim(text);
  std::smatch m;
  if (std::regex_match(t, m, frac)) {
    const std::string sn = m[1].str();
    const bool neg = sn.front() == '-';
    Integer num = decimal_integer(sn.front() == '+' || neg ? sn.substr(1) : sn);
    if (neg) num = -num;
    Integer den = m[2].matched ? decimal_integer(m[2].str()) : Integer(1);
    if (den == 0) throw ConfigError("zero denominator in rational '" + text + "'");
    return Rational(num, den);
  }
  if (std::regex_match(t, m, dec)) {
    const std::string digits = m[2].str() + m[3].str();
    Integer num = decimal_integer(digits);
    Integer den = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(m[3].length()));
    Rational r(num, den);
    return m[1].str() == "-" ? Rational(-r) : r;
  }
  throw ConfigError("malformed rational '" + text + "'");
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

const Rational& ExtRational::value() const {
  if (!value_) throw std::logic_error("value() on infinite ExtRational");
  return *value_;
}

double ExtRational::to_double() const {
  return value_ ? gibbs::to_double(*value_) : std::numeric_limits<double>::infinity();
}

std::string ExtRational::to_string() const { return value_ ? gibbs::to_string(*value_) : "inf"; }

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  if (*a.value_ < *b.value_) return std::strong_ordering::less;
  if (*a.value_ > *b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }
ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }

}  // namespace gibbs
