#include "commtask/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace commtask {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty())
    return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  std::string_view num = trim(s.substr(0, slash));
  std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : trim(s.substr(slash + 1));
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' ||
      den[0] == '+')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  if (num[0] == '+')
    num.remove_prefix(1);
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational &q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("non-finite value has no rational form");
  return Rational(x);
}

Rational approximate(double x, std::int64_t max_denominator) {
  if (!std::isfinite(x))
    throw std::invalid_argument("non-finite value has no rational form");
  if (max_denominator < 1)
    max_denominator = 1;
  Rational target = exact_from_double(x);
  const bool negative = target < 0;
  if (negative)
    target = -target;
  const Integer cap(static_cast<long>(max_denominator));
  // p0/q0 and p1/q1 are the two most recent convergents.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = target;
  Rational best;
  for (;;) {
    Integer a = floor(rest);
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > cap) {
      Integer t = (cap - q0) / q1;
      Rational semi(p0 + t * p1, q0 + t * q1);
      semi.canonicalize();
      Rational conv(p1, q1);
      conv.canonicalize();
      best = abs(semi - target) < abs(conv - target) ? semi : conv;
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = rest - a;
    if (frac == 0) {
      best = Rational(p1, q1);
      best.canonicalize();
      break;
    }
    rest = 1 / frac;
  }
  return negative ? Rational(-best) : best;
}

Integer ceil(const Rational &q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer floor(const Rational &q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

long ceil_sqrt(long n) {
  if (n <= 0)
    return 0;
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r < n)
    ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n)
    --r;
  return r;
}

} // namespace commtask
