#pragma once

#include "commtask/matrix.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testing_support {

using commtask::CommMatrix;
using commtask::QMatrix;
using commtask::Rational;

/// Row-stochastic matrix with small denominators. Each row draws integer
/// weights in [0, max_weight] (at least one positive) and normalises them;
/// `zero_bias` is the chance an entry is forced to zero.
inline CommMatrix random_stochastic(std::mt19937_64 &rng, std::size_t rows, std::size_t cols,
                                    int max_weight = 4, double zero_bias = 0.3) {
  std::uniform_int_distribution<int> w(1, max_weight);
  std::uniform_int_distribution<std::size_t> pick(0, cols - 1);
  std::bernoulli_distribution zero(zero_bias);
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<int> ws(cols);
    int total = 0;
    for (auto &x : ws) {
      x = zero(rng) ? 0 : w(rng);
      total += x;
    }
    if (total == 0) {
      ws[pick(rng)] = 1;
      total = 1;
    }
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = commtask::ratio(ws[j], total);
  }
  return CommMatrix(std::move(m));
}

/// Plain Gauss-Jordan rank over the rationals (no fraction-free tricks).
inline int oracle_rank(QMatrix m) {
  int r = 0;
  for (std::size_t col = 0; col < m.cols() && r < static_cast<int>(m.rows()); ++col) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < m.rows() && m(piv, col) == 0)
      ++piv;
    if (piv == m.rows())
      continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      std::swap(m(piv, j), m(static_cast<std::size_t>(r), j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == static_cast<std::size_t>(r) || m(i, col) == 0)
        continue;
      Rational f = m(i, col) / m(static_cast<std::size_t>(r), col);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) -= f * m(static_cast<std::size_t>(r), j);
    }
    ++r;
  }
  return r;
}

inline bool rows_orthogonal(const CommMatrix &c, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (c(a, j) != 0 && c(b, j) != 0)
      return false;
  return true;
}

/// Largest pairwise-orthogonal row subset by enumerating all subsets.
inline int oracle_iota(const CommMatrix &c) {
  const std::size_t n = c.rows();
  int best = 0;
  for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1)
        s.push_back(i);
    bool ok = true;
    for (std::size_t x = 0; x < s.size() && ok; ++x)
      for (std::size_t y = x + 1; y < s.size() && ok; ++y)
        ok = rows_orthogonal(c, s[x], s[y]);
    if (ok)
      best = std::max(best, static_cast<int>(s.size()));
  }
  return best;
}

inline Rational oracle_lambda_max(const CommMatrix &c) {
  Rational s = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    Rational m = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i)
      if (c(i, j) > m)
        m = c(i, j);
    s += m;
  }
  return s;
}

inline Rational oracle_lambda_min(const CommMatrix &c) {
  Rational s = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    Rational m = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i)
      if (c(i, j) < m)
        m = c(i, j);
    s -= m;
  }
  return s;
}

/// Halves times a 0/1/2 integer pattern.
inline CommMatrix halves(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> rs(rows.begin(), rows.end());
  QMatrix m(rs.size(), rs.front().size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < rs[i].size(); ++j)
      m(i, j) = commtask::ratio(rs[i][j], 2);
  return CommMatrix(std::move(m));
}

inline Rational q(long p, long d = 1) { return commtask::ratio(p, d); }

} // namespace testing_support
