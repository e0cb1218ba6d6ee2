#pragma once

#include "commtask/matrix.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace commtask {

struct QComplex {
  Rational re;
  Rational im;
  friend bool operator==(const QComplex &, const QComplex &) = default;
};

/// Square matrix of exact complex rationals.
class QCMatrix {
public:
  QCMatrix() = default;
  explicit QCMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  static QCMatrix identity(std::size_t dim);
  /// Real matrix, imaginary part zero.
  static QCMatrix from_real(const QMatrix &m);

  std::size_t dim() const { return dim_; }
  QComplex &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const QComplex &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  QCMatrix scaled(const Rational &s) const;
  Eigen::MatrixXcd to_complex() const;

  friend bool operator==(const QCMatrix &, const QCMatrix &) = default;

private:
  std::size_t dim_ = 0;
  std::vector<QComplex> data_;
};

QCMatrix add(const QCMatrix &a, const QCMatrix &b);

/// tr(a b), exactly.
QComplex trace_product(const QCMatrix &a, const QCMatrix &b);

/// Exact test of Hermitian positive semidefiniteness (LDL* elimination).
bool is_psd(const QCMatrix &m);
bool is_hermitian(const QCMatrix &m);

/// A state or effect. `numeric` is always populated; `exact` is present when
/// every entry is rational.
struct Operator {
  std::optional<QCMatrix> exact;
  Eigen::MatrixXcd numeric;

  static Operator from_exact(QCMatrix m);
  static Operator from_numeric(Eigen::MatrixXcd m);
};

/// Preparations and a measurement on a d-dimensional system.
struct QuantumModel {
  std::string name;
  std::size_t dim = 0;
  std::vector<Operator> states;
  std::vector<Operator> effects;

  bool exact() const;
};

/// Violation of a model invariant: which operator, which property, by how much.
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Checks Hermiticity, positivity, unit trace of states and that the effects
/// sum to the identity: exactly for exact models, within tol otherwise.
/// Throws ModelError on the first violation.
void validate_model(const QuantumModel &m, double tol = 1e-12);

struct ModelMatrix {
  /// tr(rho_a E_b) exactly, for exact models.
  std::optional<QMatrix> exact;
  Eigen::MatrixXd numeric;
  /// max_a |sum_b C_ab - 1| of the numeric matrix.
  double max_row_deviation = 0;
};

ModelMatrix eval_model(const QuantumModel &m);

struct ModelCheck {
  bool ok = false;
  double max_deviation = 0;
};

/// Compares the model's matrix with c: exact equality for exact models,
/// entrywise within tol otherwise. Throws std::invalid_argument on shape
/// mismatch.
ModelCheck verify_model(const QuantumModel &m, const CommMatrix &c, double tol = 1e-12);

/// Entries are {"re": x, "im": y} objects or bare reals; x, y are "p/q"
/// strings, integers or floats.
QuantumModel parse_model(const nlohmann::json &j);
nlohmann::json to_json(const QuantumModel &m);

struct LibraryEntry {
  QuantumModel model;
  CommMatrix target;
};

/// Explicit qubit models: trine -> D_{3,1/3}, the two models of the
/// non-convexity construction, sigma_x/sigma_y -> the 4x4 antipodal matrix,
/// trine complement -> A_3, tetrahedral SIC -> A_4, tetrahedron -> D_{4,1/2}.
const std::vector<LibraryEntry> &witness_library();

} // namespace commtask
