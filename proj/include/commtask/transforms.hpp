#pragma once

#include "commtask/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace commtask {

/// A matrix obtained from C together with witnesses in both directions:
///   forward.left  * C      * forward.right  == matrix
///   backward.left * matrix * backward.right == C
struct Transformed {
  CommMatrix matrix;
  StochasticPair forward;
  StochasticPair backward;
};

/// Row i of the result is row row_perm[i] of C; column j is column col_perm[j].
Transformed transform_permute(const CommMatrix &c, const std::vector<std::size_t> &row_perm,
                              const std::vector<std::size_t> &col_perm);

/// Appends a copy of row i.
Transformed transform_duplicate_row(const CommMatrix &c, std::size_t i);

/// Appends an all-zero column.
Transformed transform_add_zero_column(const CommMatrix &c);

/// Appends the row sum_k weights[k] * row_k. One weight per row of C.
Transformed transform_add_convex_row(const CommMatrix &c, const std::vector<Rational> &weights);

/// Replaces column j by weights.size() columns weights[k] * column_j, placed
/// where column j was.
Transformed transform_split_column(const CommMatrix &c, std::size_t j,
                                   const std::vector<Rational> &weights);

/// Normal form under the equivalence-preserving moves: drops zero columns,
/// merges proportional columns and removes rows lying in the convex hull of
/// the remaining rows, until nothing changes. No minimality is claimed.
Transformed reduce(const CommMatrix &c);

/// Witness for a -> c from a -> b and b -> c transformations.
Transformed chain(const Transformed &first, const Transformed &second);

/// Exact convex weights w over `rows` (indices into c) with sum_k w_k row_k ==
/// target, if any exist.
std::optional<std::vector<Rational>> convex_combination(const QMatrix &c,
                                                        const std::vector<std::size_t> &rows,
                                                        std::span<const Rational> target);

} // namespace commtask
