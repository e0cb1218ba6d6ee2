#include "commtask/transforms.hpp"

#include "commtask/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace commtask {

namespace {

void check_weights(const std::vector<Rational> &w, const char *what) {
  if (w.empty())
    throw std::invalid_argument(std::string(what) + ": empty weight vector");
  Rational total = 0;
  for (const auto &x : w) {
    if (x < 0)
      throw std::invalid_argument(std::string(what) + ": negative weight " + to_string(x));
    total += x;
  }
  if (total != 1)
    throw std::invalid_argument(std::string(what) + ": weights sum to " + to_string(total));
}

// 0/1 matrix with a single one per row at column pick[i].
CommMatrix selection(std::size_t cols, const std::vector<std::size_t> &pick) {
  QMatrix m(pick.size(), cols);
  for (std::size_t i = 0; i < pick.size(); ++i)
    m(i, pick[i]) = 1;
  return CommMatrix(std::move(m));
}

CommMatrix eye(std::size_t n) { return CommMatrix(QMatrix::identity(n)); }

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i;
  return v;
}

Transformed checked(const CommMatrix &c, Transformed t) {
  if (!verifies(t.forward, t.matrix, c) || !verifies(t.backward, c, t.matrix))
    throw std::logic_error("transform witness failed exact verification");
  return t;
}

bool is_permutation(const std::vector<std::size_t> &p, std::size_t n) {
  if (p.size() != n)
    return false;
  std::vector<bool> seen(n, false);
  for (auto x : p) {
    if (x >= n || seen[x])
      return false;
    seen[x] = true;
  }
  return true;
}

} // namespace

Transformed transform_permute(const CommMatrix &c, const std::vector<std::size_t> &row_perm,
                              const std::vector<std::size_t> &col_perm) {
  if (!is_permutation(row_perm, c.rows()) || !is_permutation(col_perm, c.cols()))
    throw std::invalid_argument("transform_permute: not a permutation of the right size");
  QMatrix out(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      out(i, j) = c(row_perm[i], col_perm[j]);
  std::vector<std::size_t> row_inv(c.rows()), col_inv(c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    row_inv[row_perm[i]] = i;
  for (std::size_t j = 0; j < c.cols(); ++j)
    col_inv[col_perm[j]] = j;
  // (C R)_{:,j} = C_{:,col_perm[j]} needs R(col_perm[j], j) = 1, i.e. row q
  // of R has its one at col_inv[q].
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {selection(c.rows(), row_perm), selection(c.cols(), col_inv)},
                                {selection(c.rows(), row_inv), selection(c.cols(), col_perm)}});
}

Transformed transform_duplicate_row(const CommMatrix &c, std::size_t i) {
  if (i >= c.rows())
    throw std::invalid_argument("transform_duplicate_row: row index out of range");
  auto pick = iota_vec(c.rows());
  pick.push_back(i);
  QMatrix out(c.rows() + 1, c.cols());
  for (std::size_t r = 0; r < pick.size(); ++r)
    for (std::size_t j = 0; j < c.cols(); ++j)
      out(r, j) = c(pick[r], j);
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {selection(c.rows(), pick), eye(c.cols())},
                                {selection(c.rows() + 1, iota_vec(c.rows())), eye(c.cols())}});
}

Transformed transform_add_zero_column(const CommMatrix &c) {
  QMatrix out(c.rows(), c.cols() + 1);
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      out(i, j) = c(i, j);
  auto back = iota_vec(c.cols());
  back.push_back(0);
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {eye(c.rows()), selection(c.cols() + 1, iota_vec(c.cols()))},
                                {eye(c.rows()), selection(c.cols(), back)}});
}

Transformed transform_add_convex_row(const CommMatrix &c, const std::vector<Rational> &weights) {
  if (weights.size() != c.rows())
    throw std::invalid_argument("transform_add_convex_row: need one weight per row");
  check_weights(weights, "transform_add_convex_row");
  QMatrix out(c.rows() + 1, c.cols());
  QMatrix left(c.rows() + 1, c.rows());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    left(i, i) = 1;
    left(c.rows(), i) = weights[i];
    for (std::size_t j = 0; j < c.cols(); ++j) {
      out(i, j) = c(i, j);
      out(c.rows(), j) += weights[i] * c(i, j);
    }
  }
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {CommMatrix(std::move(left)), eye(c.cols())},
                                {selection(c.rows() + 1, iota_vec(c.rows())), eye(c.cols())}});
}

Transformed transform_split_column(const CommMatrix &c, std::size_t j,
                                   const std::vector<Rational> &weights) {
  if (j >= c.cols())
    throw std::invalid_argument("transform_split_column: column index out of range");
  check_weights(weights, "transform_split_column");
  const std::size_t k = weights.size();
  const std::size_t m = c.cols() + k - 1;
  // Old column q maps to new column q (q < j), j..j+k-1 (q == j), q+k-1 (q > j).
  QMatrix right(c.cols(), m);
  std::vector<std::size_t> back(m);
  for (std::size_t q = 0; q < c.cols(); ++q) {
    if (q < j) {
      right(q, q) = 1;
      back[q] = q;
    } else if (q == j) {
      for (std::size_t s = 0; s < k; ++s) {
        right(q, j + s) = weights[s];
        back[j + s] = j;
      }
    } else {
      right(q, q + k - 1) = 1;
      back[q + k - 1] = q;
    }
  }
  QMatrix out = multiply(c.matrix(), right);
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {eye(c.rows()), CommMatrix(std::move(right))},
                                {eye(c.rows()), selection(c.cols(), back)}});
}

Transformed chain(const Transformed &first, const Transformed &second) {
  return Transformed{second.matrix, compose(second.forward, first.forward),
                     compose(first.backward, second.backward)};
}

std::optional<std::vector<Rational>> convex_combination(const QMatrix &c,
                                                        const std::vector<std::size_t> &rows,
                                                        std::span<const Rational> target) {
  if (rows.empty())
    return std::nullopt;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (std::equal(target.begin(), target.end(), c.row(rows[k]).begin())) {
      std::vector<Rational> w(rows.size(), Rational(0));
      w[k] = 1;
      return w;
    }
  // A column where the target vanishes forces zero weight on every row with
  // support there.
  std::vector<bool> allowed(rows.size(), true);
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (target[j] == 0)
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (c(rows[k], j) != 0)
          allowed[k] = false;
  lp::LinearProgram<Rational> prog;
  std::vector<std::size_t> var(rows.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (allowed[k])
      var[k] = prog.add_var();
  if (prog.num_vars() == 0)
    return std::nullopt;
  std::vector<lp::LinearProgram<Rational>::Term> ones;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (allowed[k])
      ones.push_back({var[k], Rational(1)});
  prog.add_constraint(std::move(ones), lp::Sense::Equal, Rational(1));
  for (std::size_t j = 0; j < c.cols(); ++j) {
    if (target[j] == 0)
      continue;
    std::vector<lp::LinearProgram<Rational>::Term> terms;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (allowed[k] && c(rows[k], j) != 0)
        terms.push_back({var[k], c(rows[k], j)});
    if (terms.empty())
      return std::nullopt;
    prog.add_constraint(std::move(terms), lp::Sense::Equal, target[j]);
  }
  auto sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal)
    return std::nullopt;
  std::vector<Rational> w(rows.size(), Rational(0));
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (allowed[k])
      w[k] = sol.x[var[k]];
  return w;
}

namespace {

std::optional<Transformed> drop_zero_columns(const CommMatrix &c) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < c.rows(); ++i)
      if (c(i, j) != 0) {
        keep.push_back(j);
        break;
      }
  if (keep.size() == c.cols())
    return std::nullopt;
  QMatrix out(c.rows(), keep.size());
  QMatrix right(c.cols(), keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    right(keep[k], k) = 1;
    for (std::size_t i = 0; i < c.rows(); ++i)
      out(i, k) = c(i, keep[k]);
  }
  // Zero columns of C may receive any distribution; send them to column 0.
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (std::find(keep.begin(), keep.end(), j) == keep.end())
      right(j, 0) = 1;
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {eye(c.rows()), CommMatrix(std::move(right))},
                                {eye(c.rows()), selection(c.cols(), keep)}});
}

// Ratio alpha with col_k = alpha * col_j, if one exists. Assumes col_j != 0.
std::optional<Rational> proportion(const CommMatrix &c, std::size_t j, std::size_t k) {
  std::optional<Rational> alpha;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    const Rational &a = c(i, j);
    const Rational &b = c(i, k);
    if (a == 0) {
      if (b != 0)
        return std::nullopt;
      continue;
    }
    Rational r = b / a;
    if (!alpha)
      alpha = r;
    else if (*alpha != r)
      return std::nullopt;
  }
  return alpha;
}

std::optional<Transformed> merge_proportional_columns(const CommMatrix &c) {
  const std::size_t m = c.cols();
  std::vector<std::size_t> cls(m, m);
  std::vector<Rational> alpha(m, Rational(1));
  std::vector<std::size_t> leaders;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t g = 0; g < leaders.size(); ++g)
      if (auto a = proportion(c, leaders[g], k)) {
        cls[k] = g;
        alpha[k] = *a;
        break;
      }
    if (cls[k] == m) {
      cls[k] = leaders.size();
      leaders.push_back(k);
    }
  }
  if (leaders.size() == m)
    return std::nullopt;
  std::vector<Rational> total(leaders.size(), Rational(0));
  for (std::size_t k = 0; k < m; ++k)
    total[cls[k]] += alpha[k];
  QMatrix back(leaders.size(), m);
  for (std::size_t k = 0; k < m; ++k)
    back(cls[k], k) = alpha[k] / total[cls[k]];
  QMatrix out = multiply(c.matrix(), selection(leaders.size(), cls).matrix());
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {eye(c.rows()), selection(leaders.size(), cls)},
                                {eye(c.rows()), CommMatrix(std::move(back))}});
}

std::optional<Transformed> remove_hull_rows(const CommMatrix &c) {
  const std::size_t n = c.rows();
  std::vector<bool> kept(n, true);
  std::size_t removed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i && kept[k])
        others.push_back(k);
    if (convex_combination(c.matrix(), others, c.row(i))) {
      kept[i] = false;
      ++removed;
    }
  }
  if (removed == 0)
    return std::nullopt;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (kept[i])
      keep.push_back(i);
  QMatrix back(n, keep.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i]) {
      back(i, static_cast<std::size_t>(std::find(keep.begin(), keep.end(), i) - keep.begin())) = 1;
      continue;
    }
    // Removing hull points never shrinks the hull, so every removed row is a
    // combination of the final kept rows.
    auto w = convex_combination(c.matrix(), keep, c.row(i));
    if (!w)
      throw std::logic_error("reduce: removed row left the convex hull");
    for (std::size_t k = 0; k < keep.size(); ++k)
      back(i, k) = (*w)[k];
  }
  QMatrix out(keep.size(), c.cols());
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t j = 0; j < c.cols(); ++j)
      out(k, j) = c(keep[k], j);
  return checked(c, Transformed{CommMatrix(std::move(out)),
                                {selection(n, keep), eye(c.cols())},
                                {CommMatrix(std::move(back)), eye(c.cols())}});
}

} // namespace

Transformed reduce(const CommMatrix &c) {
  Transformed acc{c, identity_pair(c.rows(), c.cols()), identity_pair(c.rows(), c.cols())};
  for (bool changed = true; changed;) {
    changed = false;
    for (auto step : {drop_zero_columns, merge_proportional_columns, remove_hull_rows}) {
      if (auto t = step(acc.matrix)) {
        acc = chain(acc, *t);
        changed = true;
      }
    }
  }
  return checked(c, std::move(acc));
}

} // namespace commtask
