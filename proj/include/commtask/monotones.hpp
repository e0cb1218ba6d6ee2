#pragma once

#include "commtask/budget.hpp"
#include "commtask/matrix.hpp"
#include "commtask/quantum.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace commtask {

/// Exact rank over the rationals (fraction-free elimination).
int rank(const QMatrix &m);
int rank(const CommMatrix &c);

/// sum_j max_i C_ij.
Rational lambda_max(const CommMatrix &c);
/// -sum_j min_i C_ij, in [-1, 0].
Rational lambda_min(const CommMatrix &c);

/// Rows of a maximum set of pairwise orthogonal rows (lexicographically
/// smallest among maximum sets).
std::vector<std::size_t> orthogonal_rows(const CommMatrix &c);
/// Size of a maximum set of pairwise orthogonal rows: the largest k with
/// identity_k below C.
int iota(const CommMatrix &c);

/// (L, R) with L C R = identity_k for the given pairwise orthogonal rows.
/// Throws std::invalid_argument if the rows are not pairwise orthogonal.
StochasticPair iota_witness(const CommMatrix &c, const std::vector<std::size_t> &rows);
/// Witness for a maximum orthogonal row set.
StochasticPair iota_witness(const CommMatrix &c);

/// Nonnegative rank as a closed interval; lo == hi when exact.
struct NnegRank {
  int lo = 0;
  int hi = 0;
  /// How the bounds were obtained, e.g. "rank<=2", "min-dim<=3",
  /// "full-rank", "decided", "timeout".
  std::string provenance;
  bool exact() const { return lo == hi; }
};

/// Exact value from the rank shortcuts when one applies.
std::optional<NnegRank> nneg_rank_shortcut(const CommMatrix &c);
/// Shortcuts first; otherwise ascending k from the lower bound, deciding
/// C below identity_k with the majorization engine.
NnegRank nneg_rank(const CommMatrix &c, const Budget &budget = {});

struct MonotoneReport {
  int rank = 0;
  NnegRank nneg_rank;
  PsdBounds psd;
  Rational lambda_max;
  Rational lambda_min;
  int iota = 0;
};

MonotoneReport report(const CommMatrix &c, const Budget &budget = {});

nlohmann::json to_json(const NnegRank &r);
nlohmann::json to_json(const MonotoneReport &r);

} // namespace commtask
