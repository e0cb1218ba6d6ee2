#include "commtask/matrix.hpp"

namespace commtask {

QMatrix::QMatrix(std::size_t rows, std::size_t cols, const Rational &fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw std::invalid_argument("ragged matrix literal");
    for (const auto &x : r)
      data_.push_back(x);
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::scaled(const Rational &s) const {
  QMatrix r = *this;
  for (auto &x : r.data_)
    x *= s;
  return r;
}

Eigen::MatrixXd QMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(i, j) = (*this)(i, j).get_d();
  return m;
}

QMatrix multiply(const QMatrix &a, const QMatrix &b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("shape mismatch: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " times " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational &aik = a(i, k);
      if (aik == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0)
          c(i, j) += aik * b(k, j);
    }
  return c;
}

QMatrix add(const QMatrix &a, const QMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("shape mismatch in matrix sum");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) += b(i, j);
  return c;
}

void check_row_stochastic(const QMatrix &m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw StochasticError("communication matrix must be nonempty", 0, 0, Rational(1));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0)
        throw StochasticError("row " + std::to_string(i) + " has negative entry " +
                                  to_string(m(i, j)) + " in column " + std::to_string(j),
                              i, j, Rational(0));
      sum += m(i, j);
    }
    if (sum != 1) {
      Rational deficit = 1 - sum;
      throw StochasticError("row " + std::to_string(i) + " sums to " + to_string(sum) +
                                " (deficit " + to_string(deficit) + ")",
                            i, static_cast<std::size_t>(-1), deficit);
    }
  }
}

CommMatrix::CommMatrix(QMatrix m) : m_(std::move(m)) { check_row_stochastic(m_); }

CommMatrix::CommMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : CommMatrix(QMatrix(rows)) {}

CommMatrix multiply(const CommMatrix &a, const CommMatrix &b) {
  return CommMatrix(multiply(a.matrix(), b.matrix()));
}

QMatrix apply(const StochasticPair &pair, const CommMatrix &target) {
  return multiply(multiply(pair.left.matrix(), target.matrix()), pair.right.matrix());
}

bool verifies(const StochasticPair &pair, const CommMatrix &source,
              const CommMatrix &target) {
  if (pair.left.rows() != source.rows() || pair.left.cols() != target.rows() ||
      pair.right.rows() != target.cols() || pair.right.cols() != source.cols())
    return false;
  return apply(pair, target) == source.matrix();
}

StochasticPair compose(const StochasticPair &a_from_b, const StochasticPair &b_from_c) {
  return {multiply(a_from_b.left, b_from_c.left), multiply(b_from_c.right, a_from_b.right)};
}

StochasticPair identity_pair(std::size_t rows, std::size_t cols) {
  return {CommMatrix(QMatrix::identity(rows)), CommMatrix(QMatrix::identity(cols))};
}

CommMatrix round_to_stochastic(const Eigen::MatrixXd &m, std::int64_t max_denominator,
                               double zero_threshold) {
  QMatrix q(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Rational sum = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (!(v > zero_threshold))
        continue;
      Rational r = approximate(v, max_denominator);
      q(i, j) = r;
      sum += r;
    }
    if (sum <= 0)
      throw std::invalid_argument("row " + std::to_string(i) + " has no positive mass");
    if (sum != 1)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        q(i, j) /= sum;
  }
  return CommMatrix(std::move(q));
}

} // namespace commtask
