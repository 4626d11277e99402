#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace toeplitz {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p", "p/q".  Throws std::invalid_argument on anything else,
// including decimal or exponent notation.
Rational parse_rational(std::string_view s);

std::string to_string(const Rational& q);

// p/q in lowest terms.  mpq_class(p, q) alone does not canonicalize.
inline Rational frac(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace toeplitz
