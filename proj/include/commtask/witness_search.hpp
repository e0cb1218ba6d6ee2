#pragma once

#include "commtask/budget.hpp"
#include "commtask/matrix.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <optional>

namespace commtask {

struct WitnessSearchResult {
  /// Exactly verified: witness->left * D * witness->right == C.
  std::optional<StochasticPair> witness;
  /// Smallest max-norm residual |C - L D R| reached in floating point.
  double best_residual = 1.0;
  std::size_t starts = 0;
};

/// Multi-start alternating minimisation of |C - L D R|_max: with R fixed each
/// row of L solves a small LP, with L fixed R solves one LP. Candidates with
/// small residual are turned into exact pairs by rounding and exact LP
/// completion; only pairs that verify exactly are returned.
WitnessSearchResult search_witness(const CommMatrix &c, const CommMatrix &d,
                                   const Budget &budget = {},
                                   std::optional<std::chrono::steady_clock::time_point> deadline = {});

/// A few alternating LP steps from (l, r), updating both in place. Returns
/// the final max-norm residual.
double polish(const Eigen::MatrixXd &c, const Eigen::MatrixXd &d, Eigen::MatrixXd &l,
              Eigen::MatrixXd &r, std::size_t rounds);

/// Tries to turn approximate factors into an exact witness for C = L D R.
std::optional<StochasticPair> exactify(const CommMatrix &c, const CommMatrix &d,
                                       const Eigen::MatrixXd &l, const Eigen::MatrixXd &r);

} // namespace commtask
