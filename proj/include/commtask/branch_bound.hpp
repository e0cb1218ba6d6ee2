#pragma once

#include "commtask/budget.hpp"
#include "commtask/matrix.hpp"

#include <chrono>
#include <optional>
#include <vector>

namespace commtask {

/// Which factorisation of L D R is relaxed. Left: X = L, Y = D R.
/// Right: X = L D, Y = R. Products X_ik Y_kj carry McCormick envelopes.
enum class BilinearForm { Left, Right };

/// One node of a branch-and-bound tree. Internal nodes record the factor
/// variable they split and where; leaves record exact Lagrange multipliers
/// for their relaxation.
struct BBNode {
  std::optional<std::size_t> parent;
  // Internal nodes.
  std::optional<std::size_t> branch_var;
  Rational split;
  std::size_t child_low = 0;  // branch_var <= split
  std::size_t child_high = 0; // branch_var >= split
  // Leaves.
  bool infeasible = false;
  std::vector<Rational> multipliers;
  /// Certified lower bound on max_ij |C - L D R|_ij over the node's box
  /// (unused for infeasible leaves).
  Rational bound;
};

/// Refutation of C = L D R: every point of the product of simplices lies in
/// some leaf box, and every leaf relaxation is bounded below by `bound` > 0.
struct BBCertificate {
  BilinearForm form = BilinearForm::Left;
  std::vector<BBNode> nodes;
  Rational bound;
};

enum class BBStatus { Refuted, Witness, Exhausted };

struct BBResult {
  BBStatus status = BBStatus::Exhausted;
  std::optional<StochasticPair> witness;
  std::optional<BBCertificate> certificate;
  /// Smallest certified bound over open and closed leaves (Exhausted).
  std::optional<Rational> lower_bound;
  /// Smallest true residual among relaxation points.
  double best_residual = 1.0;
  std::size_t nodes = 0;
};

/// Free parameters of (L, R): a(c-1) + d(b-1) for C a x b and D c x d.
std::size_t free_dims(const CommMatrix &c, const CommMatrix &d);

/// Minimises |C - L D R|_max over row-stochastic L, R by spatial branch and
/// bound on the factor variables. LPs are solved in floating point; node
/// bounds are re-derived exactly from rationalised multipliers (or by an
/// exact solve when those fail), so a Refuted result is a proof.
BBResult branch_and_bound(const CommMatrix &c, const CommMatrix &d, const Budget &budget = {},
                          std::optional<std::chrono::steady_clock::time_point> deadline = {});

/// Independent check of a certificate: rebuilds every leaf box from the
/// branching log, recomputes each leaf bound from its multipliers and checks
/// that the tree is complete. Returns the minimum leaf bound when every leaf
/// is positive, nullopt otherwise.
std::optional<Rational> verify_branch_bound(const CommMatrix &c, const CommMatrix &d,
                                            const BBCertificate &cert);

} // namespace commtask
