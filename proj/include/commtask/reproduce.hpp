#pragma once

#include "commtask/budget.hpp"
#include "commtask/monotones.hpp"

#include <string>
#include <vector>

namespace commtask {

/// A reference matrix together with its expected monotone values.
struct ReferenceMatrix {
  std::string name;
  CommMatrix matrix;
  int rank;
  int nneg_rank;
  int psd_rank;
  Rational lambda_min;
  int iota;
  Rational lambda_max;
};

/// K+, K, K-, D_{3,1/3}, A, B, C, D in table order.
std::vector<ReferenceMatrix> reference_matrices();

struct ReferenceRow {
  ReferenceMatrix reference;
  MonotoneReport computed;
  /// Names of monotones whose computed value disagrees with the reference.
  std::vector<std::string> mismatches;
  /// True when the nonnegative rank is only an interval containing the
  /// reference value (decider ran out of budget).
  bool nneg_flagged = false;
};

/// A pair whose inequivalence only one monotone detects.
struct DetectionCheck {
  std::string first;
  std::string second;
  std::string monotone;
  /// Monotones whose computed values certify a difference.
  std::vector<std::string> separating;
  bool ok = false;
};

struct ReferenceTable {
  std::vector<ReferenceRow> rows;
  std::vector<DetectionCheck> detections;
  bool ok() const;
};

ReferenceTable reproduce_reference_table(const Budget &budget = {});

/// One grid point (eps, mu): does D_{n,eps} majorize D_{n,mu}?
struct DFamilyPoint {
  Rational eps;
  Rational mu;
  bool predicted = false;
  /// "witness", "lambda_max", "lambda_min", or empty when unconfirmed.
  std::string confirmation;
};

struct DFamilyGrid {
  int n = 0;
  Rational step;
  std::vector<DFamilyPoint> points;
  std::size_t agreeing() const;
};

/// Checks the closed-form ordering of D_{n,eps} on the grid eps, mu in
/// {0, step, 2 step, ..., 1}: every predicted pair must have an exactly
/// verified L_lambda witness, every other pair a lambda_max or lambda_min
/// separation. `step` must divide 1.
DFamilyGrid check_d_family(int n, const Rational &step);

} // namespace commtask
