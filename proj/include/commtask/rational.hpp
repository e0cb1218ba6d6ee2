#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace commtask {

/// Arbitrary-precision rational. GMP keeps results of arithmetic in lowest
/// terms with a positive denominator; the helpers below canonicalize on input.
using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms. mpq_class(p, q) alone does not reduce.
Rational ratio(long p, long q);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational &q);

/// Exact value of a finite double (every double is a dyadic rational).
Rational exact_from_double(double x);

/// Best rational approximation of x with denominator at most max_denominator,
/// from the continued-fraction convergents and semiconvergents.
Rational approximate(double x, std::int64_t max_denominator);

/// Smallest integer >= q.
Integer ceil(const Rational &q);
/// Largest integer <= q.
Integer floor(const Rational &q);

/// ceil(sqrt(n)) for n >= 0.
long ceil_sqrt(long n);

} // namespace commtask
