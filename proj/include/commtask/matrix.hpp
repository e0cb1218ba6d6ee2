#pragma once

#include "commtask/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace commtask {

/// Dense row-major matrix of exact rationals with no structural invariant.
class QMatrix {
public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols, const Rational &fill = Rational(0));
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Rational> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  QMatrix transpose() const;
  QMatrix scaled(const Rational &s) const;
  Eigen::MatrixXd to_double() const;

  friend bool operator==(const QMatrix &, const QMatrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Throws std::invalid_argument on inner-dimension mismatch.
QMatrix multiply(const QMatrix &a, const QMatrix &b);
QMatrix add(const QMatrix &a, const QMatrix &b);

/// Raised when a matrix fails the row-stochastic invariant. Carries the first
/// offending row and, for a row-sum failure, the exact deficit 1 - sum.
class StochasticError : public std::invalid_argument {
public:
  StochasticError(const std::string &what, std::size_t row, std::size_t col,
                  Rational deficit)
      : std::invalid_argument(what), row_(row), col_(col), deficit_(std::move(deficit)) {}
  std::size_t row() const { return row_; }
  /// Column of a negative entry, or npos for a row-sum failure.
  std::size_t col() const { return col_; }
  const Rational &deficit() const { return deficit_; }

private:
  std::size_t row_;
  std::size_t col_;
  Rational deficit_;
};

/// Exact row-stochastic matrix: entries >= 0, every row sums to exactly 1.
/// Immutable after construction.
class CommMatrix {
public:
  /// Validates; throws StochasticError naming the offending row.
  explicit CommMatrix(QMatrix m);
  CommMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const Rational &operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  std::span<const Rational> row(std::size_t i) const { return m_.row(i); }
  const QMatrix &matrix() const { return m_; }
  Eigen::MatrixXd to_double() const { return m_.to_double(); }

  friend bool operator==(const CommMatrix &, const CommMatrix &) = default;

private:
  QMatrix m_;
};

/// Throws StochasticError describing the first violated row, if any.
void check_row_stochastic(const QMatrix &m);

CommMatrix multiply(const CommMatrix &a, const CommMatrix &b);

/// Witness of C = left * D * right.
struct StochasticPair {
  CommMatrix left;
  CommMatrix right;
};

/// left * target * right, exactly.
QMatrix apply(const StochasticPair &pair, const CommMatrix &target);

/// True iff pair.left * target * pair.right == source exactly.
bool verifies(const StochasticPair &pair, const CommMatrix &source,
              const CommMatrix &target);

/// Witness for (a->c) from witnesses (a->b) and (b->c): if A = L1 B R1 and
/// B = L2 C R2 then A = (L1 L2) C (R2 R1).
StochasticPair compose(const StochasticPair &a_from_b, const StochasticPair &b_from_c);

/// The pair (identity, identity) for a matrix of the given shape.
StochasticPair identity_pair(std::size_t rows, std::size_t cols);

/// Rounds a nonnegative double matrix to rationals with bounded denominators
/// and renormalizes each row exactly. Negative and tiny entries become zero.
/// Throws std::invalid_argument if a row has no positive mass.
CommMatrix round_to_stochastic(const Eigen::MatrixXd &m, std::int64_t max_denominator,
                               double zero_threshold = 1e-12);

} // namespace commtask
