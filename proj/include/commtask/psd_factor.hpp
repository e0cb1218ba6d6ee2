#pragma once

#include "commtask/matrix.hpp"
#include "commtask/quantum_model.hpp"

#include <cstdint>
#include <optional>

namespace commtask {

struct PsdFactorOptions {
  std::size_t starts = 64;
  std::size_t iterations = 400;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct PsdFactorization {
  /// Quantum model reproducing the matrix numerically; its dimension may be
  /// below the requested size when the factors do not span it.
  QuantumModel model;
  /// Max-norm distance between the model's matrix and the target.
  double residual = 0;
};

/// Heuristic search for C_ij = tr(A_i B_j) with k x k PSD factors written as
/// Gram matrices A_i = U_i U_i^*, B_j = V_j V_j^*. Alternates damped
/// Gauss-Newton steps on the U and V blocks from seeded random starts and
/// returns the first factorization with residual below tol. Not a proof.
std::optional<PsdFactorization> psd_factorize(const CommMatrix &c, std::size_t k,
                                              const PsdFactorOptions &opts = {});

} // namespace commtask
