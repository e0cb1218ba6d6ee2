#pragma once

#include "commtask/budget.hpp"
#include "commtask/matrix.hpp"
#include "commtask/quantum_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace commtask {

struct PsdLower {
  int value = 1;
  /// Rules reaching the value: "sqrt-rank", "lambda-max", "kernel",
  /// "trace-rigidity".
  std::vector<std::string> rules;
};

/// Lower bound on the psd rank: max of ceil(sqrt(rank)), ceil(lambda_max),
/// and 3 when a column has two zeros and a nonzero entry (rows deduplicated)
/// or when a 3x3 matrix has 2/3 on a permuted diagonal without being
/// D_{3,1/3} up to that permutation.
PsdLower psd_lower(const CommMatrix &c);

struct NumericWitness {
  QuantumModel model;
  double residual = 0;
};

struct PsdUpper {
  int value = 0;
  /// Sources reaching the value: "nneg-rank", "library:<name>", "heuristic".
  std::vector<std::string> methods;
  /// Present when the value comes from the numeric factorization.
  std::optional<NumericWitness> witness;
  /// False when the value rests on the numeric factorization alone.
  bool certified = true;
};

/// Upper bound on the psd rank: min of nneg_rank_hi, library witness
/// dimensions for library matrices containing a scaled copy of C, and the
/// smallest size at which the heuristic factorization succeeds (searched
/// below the other bounds, down to `lower`).
PsdUpper psd_upper(const CommMatrix &c, int nneg_rank_hi, int lower, const Budget &budget = {});

struct PsdBounds {
  int lower = 1;
  int upper = 1;
  Rational lambda_max_bound;
  std::vector<std::string> methods;
  std::optional<NumericWitness> numeric_witness;
  bool certified_upper = true;
};

/// Two-sided bracket for the psd rank (the minimal quantum dimension).
PsdBounds quantum_dim_bounds(const CommMatrix &c, const Budget &budget = {});
/// Same with a known nonnegative-rank upper bound.
PsdBounds quantum_dim_bounds(const CommMatrix &c, int nneg_rank_hi, const Budget &budget);

/// Minimal classical dimension, i.e. the nonnegative rank, as [lo, hi].
struct NnegRank;
NnegRank classical_dim(const CommMatrix &c, const Budget &budget = {});

/// Reason C has no qubit implementation: "lambda-max", "trace", or
/// "psd-lower:<rule>". Empty means no rule applies, not that C is qubit.
std::optional<std::string> qubit_screen(const CommMatrix &c);

/// t * D equals the submatrix of C on `rows` x `cols` (an injective
/// selection, in this order).
struct ScaledEmbedding {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  Rational t;
};

std::optional<ScaledEmbedding> find_scaled_submatrix(const CommMatrix &d, const CommMatrix &c);

/// If a scaled copy of D sits inside C, the psd upper bound of C also bounds
/// the psd rank of D.
std::optional<int> scaled_submatrix_bound(const CommMatrix &d, const CommMatrix &c,
                                          const Budget &budget = {});

} // namespace commtask
