#include "extremescore/rational.hpp"

#include <cctype>

#include "extremescore/common.hpp"

namespace extremescore {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ConfigError, "empty rational literal");

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    s.erase(s.begin());
  }

  Rational value;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw Error(ErrorCode::ConfigError, "bad rational literal: " + text);
    }
    mpz_class n(num), d(den);
    if (d == 0) throw Error(ErrorCode::ConfigError, "zero denominator: " + text);
    value = Rational(n, d);
  } else {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      if (!all_digits(s)) throw Error(ErrorCode::ConfigError, "bad rational literal: " + text);
      value = Rational(mpz_class(s));
    } else {
      std::string whole = s.substr(0, dot);
      std::string frac = s.substr(dot + 1);
      if (whole.empty()) whole = "0";
      if (frac.empty() || !all_digits(whole) || !all_digits(frac)) {
        throw Error(ErrorCode::ConfigError, "bad rational literal: " + text);
      }
      mpz_class num(whole + frac);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      value = Rational(num, den);
    }
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

std::string fraction_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

} // namespace extremescore
