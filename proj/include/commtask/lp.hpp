#pragma once

#include "commtask/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace commtask::lp {

enum class Sense { LessEq, GreaterEq, Equal };

/// min cost.x  s.t.  constraints, lower <= x <= upper.
template <class T> struct LinearProgram {
  struct Term {
    std::size_t var;
    T coeff;
  };
  struct Constraint {
    std::vector<Term> terms;
    Sense sense;
    T rhs;
  };

  std::vector<T> cost;
  std::vector<T> lower;
  std::vector<std::optional<T>> upper;
  std::vector<Constraint> constraints;

  std::size_t num_vars() const { return cost.size(); }

  std::size_t add_var(T lo = T(0), std::optional<T> hi = std::nullopt, T c = T(0)) {
    cost.push_back(std::move(c));
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    return cost.size() - 1;
  }

  std::size_t add_constraint(std::vector<Term> terms, Sense sense, T rhs) {
    constraints.push_back({std::move(terms), sense, std::move(rhs)});
    return constraints.size() - 1;
  }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class T> struct Solution {
  Status status = Status::IterationLimit;
  T objective{};
  std::vector<T> x;
  /// One multiplier per constraint, in the Lagrangian convention
  /// cost.x - sum_i y_i (a_i.x - b_i): y <= 0 on <= rows, y >= 0 on >= rows.
  /// Optimal: the dual solution. Infeasible: phase-one Farkas multipliers.
  std::vector<T> duals;
  std::size_t iterations = 0;
};

struct Options {
  /// Bland's smallest-index rule. When false (floating point only), the most
  /// negative reduced cost is used with a fallback to Bland on stalling.
  bool bland = true;
  std::size_t max_iterations = 200000;
  double tolerance = 1e-9;
};

template <class T> Solution<T> solve(const LinearProgram<T> &lp, const Options &opts = {});

extern template Solution<double> solve(const LinearProgram<double> &, const Options &);
extern template Solution<Rational> solve(const LinearProgram<Rational> &, const Options &);

LinearProgram<double> to_double(const LinearProgram<Rational> &lp);

/// Valid lower bound on the optimum (or, with use_cost = false, a value whose
/// positivity proves infeasibility) from arbitrary multipliers y, evaluated
/// exactly over the box [box_lo, box_hi]:
///   y.b + sum_j min_{x_j in box} (c - A^T y)_j x_j
/// Multipliers of the wrong sign are clamped to zero. Returns nullopt if the
/// box is unbounded in a direction the bound depends on.
std::optional<Rational> lagrangian_bound(const LinearProgram<Rational> &lp,
                                         std::span<const Rational> y, bool use_cost,
                                         std::span<const Rational> box_lo,
                                         std::span<const std::optional<Rational>> box_hi);

/// Same with the program's own bounds as the box.
std::optional<Rational> lagrangian_bound(const LinearProgram<Rational> &lp,
                                         std::span<const Rational> y, bool use_cost);

/// Exact rational vector from floating-point multipliers.
std::vector<Rational> exact_multipliers(std::span<const double> y);

} // namespace commtask::lp
