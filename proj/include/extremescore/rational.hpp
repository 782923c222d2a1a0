#pragma once

#include <gmpxx.h>

#include <string>

namespace extremescore {

// Arbitrary-precision rational, the backbone of the exact oracle paths.
using Rational = mpq_class;

// Accepts "3/4", "2", "-1/8", or a finite decimal like "0.25" (decimals are
// converted exactly: 0.25 -> 1/4). Scientific notation is rejected.
Rational parse_rational(const std::string& text);

// Canonical "num/den" rendering; integers come out without the "/1".
std::string fraction_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

} // namespace extremescore
