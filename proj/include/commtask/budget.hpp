#pragma once

#include "commtask/rational.hpp"

#include <cstddef>
#include <cstdint>

namespace commtask {

/// Resource limits and numerical knobs shared by the decision engine and the
/// rank searches.
struct Budget {
  /// Wall-clock limit for one decision, covering witness search and
  /// branch and bound.
  std::int64_t time_ms = 60000;
  std::size_t max_nodes = 1000000;
  std::size_t witness_starts = 32;
  std::size_t alternations = 200;
  std::uint64_t seed = 1;
  /// Upper limit on worker threads. The current engine is sequential.
  unsigned threads = 1;
  /// Residual below which a floating-point witness is handed to exactification.
  double tol = 1e-9;
  /// Branch and bound stops with a refutation once every open node has a
  /// certified lower bound above this value.
  Rational margin = Rational(1, 1000);
  /// Branch and bound is skipped above this many free dimensions.
  std::size_t max_free_dims = 40;
  bool use_closed_form = true;
  bool use_branch_bound = true;
  std::size_t psd_starts = 64;
  double psd_tol = 1e-9;
  /// Run the heuristic PSD factorization when computing upper bounds.
  bool psd_heuristic = true;
};

} // namespace commtask
