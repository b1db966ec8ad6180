#include "gibbs/polynomial.hpp"

#include "gibbs/errors.hpp"

#include <cctype>
#include <cmath>

namespace gibbs {

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw ConfigError("polynomial needs at least one variable");
}

void Polynomial::add_term(const MultiIndex& beta, const Rational& c) {
  if (static_cast<int>(beta.size()) != nvars_) throw ConfigError("exponent length mismatch");
  for (int v : beta)
    if (v < 0) throw ConfigError("negative exponent");
  Rational& slot = terms_[beta];
  slot += c;
  if (slot == 0) terms_.erase(beta);
}

int Polynomial::degree() const {
  int k = 0;
  for (const auto& [b, c] : terms_) k = std::max(k, gibbs::degree(b));
  return k;
}

Rational Polynomial::coefficient(const MultiIndex& beta) const {
  auto it = terms_.find(beta);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<MultiIndex> Polynomial::support() const {
  std::set<MultiIndex> A;
  for (const auto& [b, c] : terms_)
    if (gibbs::degree(b) > 0) A.insert(b);
  return A;
}

Polynomial Polynomial::scaled(const Rational& s) const {
  Polynomial out(nvars_);
  for (const auto& [b, c] : terms_) out.add_term(b, c * s);
  return out;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  double total = 0;
  for (const auto& [b, c] : terms_) {
    double m = to_double(c);
    for (int i = 0; i < nvars_; ++i) m *= std::pow(x[i], b[i]);
    total += m;
  }
  return total;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest degree first, then lexicographically descending.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [b, c] = *it;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    bool is_const = gibbs::degree(b) == 0;
    std::string vars;
    for (int i = 0; i < nvars_; ++i) {
      if (b[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += "x" + std::to_string(i + 1);
      if (b[i] > 1) vars += "^" + std::to_string(b[i]);
    }
    if (is_const || mag != 1) {
      out += gibbs::to_string(mag);
      if (!is_const) out += "*";
    }
    out += vars;
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& s, int n) : s_(s), n_(n) {}

  Polynomial parse() {
    Polynomial p(n_);
    skip();
    if (pos_ == s_.size()) throw ConfigError("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [beta, c] = term();
      p.add_term(beta, sign * c);
      skip();
    }
    return p;
  }

 private:
  std::pair<MultiIndex, Rational> term() {
    Rational c = 1;
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                  s_[pos_] == '/'))
        ++pos_;
      c = parse_rational(s_.substr(start, pos_ - start));
      have_coef = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
      }
    }
    MultiIndex beta(n_, 0);
    bool have_var = false;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(peek()))) {
      int var = variable();
      int e = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected exponent");
        e = std::stoi(s_.substr(start, pos_ - start));
      }
      beta[var] += e;
      have_var = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        skip();
      }
    }
    if (!have_coef && !have_var) fail("expected a term");
    return {beta, c};
  }

  int variable() {
    char ch = s_[pos_++];
    if (ch == 'x' && pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      int idx = std::stoi(s_.substr(start, pos_ - start));
      if (idx < 1 || idx > n_) fail("variable index out of range");
      return idx - 1;
    }
    int idx = ch == 'x' ? 0 : ch == 'y' ? 1 : ch == 'z' ? 2 : -1;
    if (idx < 0 || idx >= n_) fail(std::string("unknown variable '") + ch + "'");
    return idx;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("polynomial '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, int nvars) { return PolyParser(text, nvars).parse(); }

void check_regime(const Polynomial& F, const ModelParams& params) {
  if (params.d < 1) throw ConfigError("dimension d must be positive");
  if (params.n != F.nvars()) throw ConfigError("n does not match the polynomial");
  if (F.support().empty()) throw ConfigError("empty support: F has no non-constant monomial");
  const int k = F.degree();
  const Rational lower(Rational(k - 1) * params.d / (2 * k));
  const Rational upper(Rational(params.d) / 2);
  if (!(params.alpha > lower && params.alpha <= upper))
    throw ConfigError("regime violation: need " + to_string(lower) + " < alpha <= " + to_string(upper) +
                      ", got alpha = " + to_string(params.alpha));
}

}  // namespace gibbs
