#include "commtask/families.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace commtask {

namespace {

void require(bool ok, const std::string &message) {
  if (!ok)
    throw std::invalid_argument(message);
}

void require_unit_interval(const Rational &x, const char *name) {
  require(x >= 0 && x <= 1, std::string(name) + " = " + to_string(x) + " outside [0,1]");
}

} // namespace

CommMatrix make_identity(int n) {
  require(n >= 1, "identity needs n >= 1");
  return CommMatrix(QMatrix::identity(static_cast<std::size_t>(n)));
}

CommMatrix make_uniform(int n) {
  require(n >= 1, "uniform needs n >= 1");
  auto sz = static_cast<std::size_t>(n);
  return CommMatrix(QMatrix(sz, sz, Rational(1, n)));
}

CommMatrix make_D(int n, const Rational &eps) {
  require(n >= 2, "D family needs n >= 2");
  require_unit_interval(eps, "eps");
  auto sz = static_cast<std::size_t>(n);
  QMatrix m(sz, sz, eps / (n - 1));
  for (std::size_t i = 0; i < sz; ++i)
    m(i, i) = 1 - eps;
  return CommMatrix(std::move(m));
}

CommMatrix make_G(int n, int t) {
  require(n >= 2, "G family needs n >= 2");
  require(t >= 1 && t <= n - 1, "G family needs 1 <= t <= n-1");
  // Patterns with n-t ones; enumerating ones-first in lexicographic order of
  // (1 > 0) gives the decreasing order directly.
  std::vector<std::vector<int>> patterns;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int pos, int ones_left) {
    if (pos == n) {
      if (ones_left == 0)
        patterns.push_back(current);
      return;
    }
    if (ones_left > 0) {
      current.push_back(1);
      rec(pos + 1, ones_left - 1);
      current.pop_back();
    }
    if (n - pos > ones_left) {
      current.push_back(0);
      rec(pos + 1, ones_left);
      current.pop_back();
    }
  };
  rec(0, n - t);
  Rational w(1, n - t);
  QMatrix m(patterns.size(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < patterns.size(); ++i)
    for (int j = 0; j < n; ++j)
      if (patterns[i][static_cast<std::size_t>(j)])
        m(i, static_cast<std::size_t>(j)) = w;
  return CommMatrix(std::move(m));
}

CommMatrix make_A(int n) {
  require(n >= 2, "A family needs n >= 2");
  return make_G(n, 1);
}

CommMatrix make_family(const FamilyParams &p) {
  switch (p.family) {
  case Family::Identity:
    return make_identity(p.n);
  case Family::Uniform:
    return make_uniform(p.n);
  case Family::D:
    return make_D(p.n, p.eps);
  case Family::G:
    return make_G(p.n, p.t);
  case Family::A:
    return make_A(p.n);
  }
  throw std::invalid_argument("unknown family");
}

Family parse_family(const std::string &name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "identity" || s == "id")
    return Family::Identity;
  if (s == "uniform" || s == "v")
    return Family::Uniform;
  if (s == "d")
    return Family::D;
  if (s == "g")
    return Family::G;
  if (s == "a")
    return Family::A;
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected identity, uniform, D, G or A)");
}

std::string family_name(Family f) {
  switch (f) {
  case Family::Identity:
    return "identity";
  case Family::Uniform:
    return "uniform";
  case Family::D:
    return "D";
  case Family::G:
    return "G";
  case Family::A:
    return "A";
  }
  return "?";
}

Rational d_compose(int n, const Rational &eps, const Rational &mu) {
  require(n >= 2, "D family needs n >= 2");
  require_unit_interval(eps, "eps");
  require_unit_interval(mu, "mu");
  return eps + mu - Rational(n, n - 1) * eps * mu;
}

std::optional<Rational> recover_D_parameter(const CommMatrix &m) {
  std::size_t n = m.rows();
  if (n < 2 || m.cols() != n)
    return std::nullopt;
  const Rational diag = m(0, 0);
  const Rational off = m(0, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(i, j) != (i == j ? diag : off))
        return std::nullopt;
  return Rational(1 - diag);
}

} // namespace commtask
