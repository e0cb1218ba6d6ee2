#include "commtask/quantum_model.hpp"

#include "commtask/families.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace commtask {

using nlohmann::json;

namespace {

QComplex mul(const QComplex &a, const QComplex &b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
QComplex sub(const QComplex &a, const QComplex &b) { return {a.re - b.re, a.im - b.im}; }
QComplex conj(const QComplex &a) { return {a.re, -a.im}; }
bool is_zero(const QComplex &a) { return a.re == 0 && a.im == 0; }

std::string describe(const QComplex &z) {
  if (z.im == 0)
    return to_string(z.re);
  return to_string(z.re) + (z.im > 0 ? "+" : "") + to_string(z.im) + "i";
}

} // namespace

QCMatrix QCMatrix::identity(std::size_t dim) {
  QCMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    m(i, i).re = 1;
  return m;
}

QCMatrix QCMatrix::from_real(const QMatrix &r) {
  if (r.rows() != r.cols())
    throw std::invalid_argument("operator must be square");
  QCMatrix m(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      m(i, j).re = r(i, j);
  return m;
}

QCMatrix QCMatrix::scaled(const Rational &s) const {
  QCMatrix m = *this;
  for (auto &z : m.data_) {
    z.re *= s;
    z.im *= s;
  }
  return m;
}

Eigen::MatrixXcd QCMatrix::to_complex() const {
  Eigen::MatrixXcd m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      m(i, j) = {(*this)(i, j).re.get_d(), (*this)(i, j).im.get_d()};
  return m;
}

QCMatrix add(const QCMatrix &a, const QCMatrix &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("operator dimension mismatch");
  QCMatrix c = a;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      c(i, j).re += b(i, j).re;
      c(i, j).im += b(i, j).im;
    }
  return c;
}

QComplex trace_product(const QCMatrix &a, const QCMatrix &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("operator dimension mismatch");
  QComplex t{0, 0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      QComplex p = mul(a(i, j), b(j, i));
      t.re += p.re;
      t.im += p.im;
    }
  return t;
}

bool is_hermitian(const QCMatrix &m) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (m(i, j) != conj(m(j, i)))
        return false;
  return true;
}

bool is_psd(const QCMatrix &input) {
  if (!is_hermitian(input))
    return false;
  QCMatrix a = input;
  const std::size_t d = a.dim();
  for (std::size_t k = 0; k < d; ++k) {
    const Rational pivot = a(k, k).re;
    if (pivot < 0)
      return false;
    if (pivot == 0) {
      // A zero diagonal entry of a PSD matrix forces its row to vanish.
      for (std::size_t j = k + 1; j < d; ++j)
        if (!is_zero(a(k, j)))
          return false;
      continue;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      if (is_zero(a(i, k)))
        continue;
      QComplex f = a(i, k);
      f.re /= pivot;
      f.im /= pivot;
      for (std::size_t j = k + 1; j < d; ++j)
        a(i, j) = sub(a(i, j), mul(f, a(k, j)));
    }
  }
  return true;
}

Operator Operator::from_exact(QCMatrix m) {
  Operator op;
  op.numeric = m.to_complex();
  op.exact = std::move(m);
  return op;
}

Operator Operator::from_numeric(Eigen::MatrixXcd m) {
  Operator op;
  op.numeric = std::move(m);
  return op;
}

bool QuantumModel::exact() const {
  for (const auto &s : states)
    if (!s.exact)
      return false;
  for (const auto &e : effects)
    if (!e.exact)
      return false;
  return true;
}

void validate_model(const QuantumModel &m, double tol) {
  if (m.dim == 0)
    throw ModelError("model dimension must be positive");
  if (m.states.empty() || m.effects.empty())
    throw ModelError("model needs at least one state and one effect");
  auto check_dim = [&](const Operator &op, const std::string &who) {
    if (static_cast<std::size_t>(op.numeric.rows()) != m.dim ||
        static_cast<std::size_t>(op.numeric.cols()) != m.dim)
      throw ModelError(who + ": not " + std::to_string(m.dim) + "x" + std::to_string(m.dim));
  };
  if (m.exact()) {
    auto check = [&](const Operator &op, const std::string &who) {
      check_dim(op, who);
      if (!is_hermitian(*op.exact))
        throw ModelError(who + ": not Hermitian");
      if (!is_psd(*op.exact))
        throw ModelError(who + ": not positive semidefinite");
    };
    for (std::size_t a = 0; a < m.states.size(); ++a) {
      std::string who = "state " + std::to_string(a);
      check(m.states[a], who);
      Rational tr = 0;
      for (std::size_t i = 0; i < m.dim; ++i)
        tr += (*m.states[a].exact)(i, i).re;
      if (tr != 1)
        throw ModelError(who + ": trace " + to_string(tr) + ", deficit " + to_string(1 - tr));
    }
    QCMatrix sum(m.dim);
    for (std::size_t b = 0; b < m.effects.size(); ++b) {
      check(m.effects[b], "effect " + std::to_string(b));
      sum = add(sum, *m.effects[b].exact);
    }
    QCMatrix id = QCMatrix::identity(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i)
      for (std::size_t j = 0; j < m.dim; ++j)
        if (sum(i, j) != id(i, j))
          throw ModelError("effects do not sum to the identity: entry (" + std::to_string(i) +
                           "," + std::to_string(j) + ") is " + describe(sum(i, j)));
    return;
  }
  auto check = [&](const Operator &op, const std::string &who) {
    check_dim(op, who);
    double herm = (op.numeric - op.numeric.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol)
      throw ModelError(who + ": not Hermitian (deviation " + std::to_string(herm) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.numeric, Eigen::EigenvaluesOnly);
    double low = es.eigenvalues().minCoeff();
    if (low < -tol)
      throw ModelError(who + ": negative eigenvalue " + std::to_string(low));
  };
  for (std::size_t a = 0; a < m.states.size(); ++a) {
    std::string who = "state " + std::to_string(a);
    check(m.states[a], who);
    double tr = m.states[a].numeric.trace().real();
    if (std::abs(tr - 1) > tol)
      throw ModelError(who + ": trace " + std::to_string(tr) + ", deficit " +
                       std::to_string(1 - tr));
  }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(m.dim, m.dim);
  for (std::size_t b = 0; b < m.effects.size(); ++b) {
    check(m.effects[b], "effect " + std::to_string(b));
    sum += m.effects[b].numeric;
  }
  double dev = (sum - Eigen::MatrixXcd::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw ModelError("effects do not sum to the identity (deviation " + std::to_string(dev) +
                     ")");
}

ModelMatrix eval_model(const QuantumModel &m) {
  ModelMatrix out;
  const std::size_t a = m.states.size(), b = m.effects.size();
  out.numeric.resize(a, b);
  if (m.exact()) {
    QMatrix q(a, b);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j) {
        QComplex t = trace_product(*m.states[i].exact, *m.effects[j].exact);
        if (t.im != 0)
          throw ModelError("tr(state " + std::to_string(i) + " effect " + std::to_string(j) +
                           ") is not real");
        q(i, j) = t.re;
      }
    out.numeric = q.to_double();
    out.exact = std::move(q);
  } else {
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j)
        out.numeric(i, j) = (m.states[i].numeric * m.effects[j].numeric).trace().real();
  }
  for (std::size_t i = 0; i < a; ++i)
    out.max_row_deviation = std::max(out.max_row_deviation, std::abs(out.numeric.row(i).sum() - 1));
  return out;
}

ModelCheck verify_model(const QuantumModel &m, const CommMatrix &c, double tol) {
  if (m.states.size() != c.rows() || m.effects.size() != c.cols())
    throw std::invalid_argument("model has " + std::to_string(m.states.size()) + " states and " +
                                std::to_string(m.effects.size()) + " effects, matrix is " +
                                std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  ModelMatrix e = eval_model(m);
  ModelCheck r;
  r.max_deviation = (e.numeric - c.to_double()).cwiseAbs().maxCoeff();
  r.ok = e.exact ? *e.exact == c.matrix() : r.max_deviation <= tol;
  return r;
}

namespace {

struct EntryValue {
  std::optional<Rational> exact;
  double numeric = 0;
};

EntryValue parse_value(const json &v) {
  EntryValue e;
  if (v.is_null())
    e.exact = Rational(0);
  else if (v.is_string())
    e.exact = parse_rational(v.get<std::string>());
  else if (v.is_number_integer())
    e.exact = Rational(Integer(v.dump(), 10));
  else if (v.is_number_float())
    e.numeric = v.get<double>();
  else
    throw std::invalid_argument("operator entry " + v.dump() + " is not a number");
  if (e.exact)
    e.numeric = e.exact->get_d();
  return e;
}

Operator parse_operator(const json &j, std::size_t dim, const std::string &who) {
  if (!j.is_array() || j.size() != dim)
    throw std::invalid_argument(who + ": expected " + std::to_string(dim) + " rows");
  QCMatrix q(dim);
  Eigen::MatrixXcd z(dim, dim);
  bool exact = true;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!j[i].is_array() || j[i].size() != dim)
      throw std::invalid_argument(who + ": row " + std::to_string(i) + " has wrong length");
    for (std::size_t k = 0; k < dim; ++k) {
      const json &e = j[i][k];
      EntryValue re, im;
      if (e.is_object()) {
        re = parse_value(e.contains("re") ? e["re"] : json());
        im = parse_value(e.contains("im") ? e["im"] : json());
      } else {
        re = parse_value(e);
        im.exact = Rational(0);
      }
      if (re.exact && im.exact)
        q(i, k) = {*re.exact, *im.exact};
      else
        exact = false;
      z(i, k) = {re.numeric, im.numeric};
    }
  }
  return exact ? Operator::from_exact(std::move(q)) : Operator::from_numeric(std::move(z));
}

json entry_json(const Operator &op, std::size_t i, std::size_t k) {
  if (op.exact)
    return json{{"re", to_string((*op.exact)(i, k).re)}, {"im", to_string((*op.exact)(i, k).im)}};
  return json{{"re", op.numeric(i, k).real()}, {"im", op.numeric(i, k).imag()}};
}

} // namespace

QuantumModel parse_model(const json &j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("states") || !j.contains("effects"))
    throw std::invalid_argument("quantum model needs \"dim\", \"states\" and \"effects\"");
  QuantumModel m;
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() <= 0)
    throw std::invalid_argument("\"dim\" must be a positive integer");
  m.dim = j["dim"].get<std::size_t>();
  if (j.contains("name") && j["name"].is_string())
    m.name = j["name"].get<std::string>();
  for (std::size_t a = 0; a < j["states"].size(); ++a)
    m.states.push_back(parse_operator(j["states"][a], m.dim, "state " + std::to_string(a)));
  for (std::size_t b = 0; b < j["effects"].size(); ++b)
    m.effects.push_back(parse_operator(j["effects"][b], m.dim, "effect " + std::to_string(b)));
  return m;
}

json to_json(const QuantumModel &m) {
  auto ops = [&](const std::vector<Operator> &list) {
    json arr = json::array();
    for (const auto &op : list) {
      json rows = json::array();
      for (std::size_t i = 0; i < m.dim; ++i) {
        json r = json::array();
        for (std::size_t k = 0; k < m.dim; ++k)
          r.push_back(entry_json(op, i, k));
        rows.push_back(std::move(r));
      }
      arr.push_back(std::move(rows));
    }
    return arr;
  };
  json j{{"dim", m.dim}, {"states", ops(m.states)}, {"effects", ops(m.effects)}};
  if (!m.name.empty())
    j["name"] = m.name;
  return j;
}

namespace {

QCMatrix qc(std::initializer_list<std::initializer_list<QComplex>> rows) {
  QCMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto &r : rows) {
    std::size_t k = 0;
    for (const auto &z : r)
      m(i, k++) = z;
    ++i;
  }
  return m;
}

QComplex r(long p, long q = 1) { return {ratio(p, q), 0}; }
QComplex c(Rational re, Rational im) { return {std::move(re), std::move(im)}; }

Eigen::MatrixXcd bloch_state(double x, double y, double z) {
  Eigen::MatrixXcd m(2, 2);
  m << std::complex<double>(1 + z, 0), std::complex<double>(x, -y),
      std::complex<double>(x, y), std::complex<double>(1 - z, 0);
  return m / 2.0;
}

std::vector<LibraryEntry> build_library() {
  std::vector<LibraryEntry> lib;
  const double s3 = std::sqrt(3.0);

  // Trine states with M(b) = (2/3) rho_b.
  std::vector<Eigen::MatrixXcd> trine = {bloch_state(0, 0, 1), bloch_state(s3 / 2, 0, -0.5),
                                         bloch_state(-s3 / 2, 0, -0.5)};
  {
    QuantumModel m{"trine", 2, {}, {}};
    for (const auto &t : trine) {
      m.states.push_back(Operator::from_numeric(t));
      m.effects.push_back(Operator::from_numeric(t * (2.0 / 3.0)));
    }
    lib.push_back({std::move(m), make_D(3, Rational(1, 3))});
  }

  // rho1 = |+><+| and rho2 = |+i><+i|: the eigenvectors of sigma_x and
  // sigma_y that M(1) and M(2) are proportional to.
  QCMatrix rho1 = qc({{r(1, 2), r(1, 2)}, {r(1, 2), r(1, 2)}});
  QCMatrix rho2 = qc({{r(1, 2), c(0, ratio(-1, 2))}, {c(0, ratio(1, 2)), r(1, 2)}});
  QCMatrix rho3 = qc({{r(1, 2), c(Rational(-3, 10), Rational(2, 5))},
                      {c(Rational(-3, 10), Rational(-2, 5)), r(1, 2)}});
  QCMatrix m1 = qc({{r(1, 4), r(1, 4)}, {r(1, 4), r(1, 4)}});
  QCMatrix m2 = qc({{r(1, 3), c(0, Rational(-1, 3))}, {c(0, Rational(1, 3)), r(1, 3)}});
  QCMatrix m3 = qc({{r(5, 12), c(Rational(-1, 4), Rational(1, 3))},
                    {c(Rational(-1, 4), Rational(-1, 3)), r(5, 12)}});
  {
    QuantumModel m{"nonconvex-C", 2, {}, {}};
    for (const auto &s : {rho1, rho2, rho3})
      m.states.push_back(Operator::from_exact(s));
    for (const auto &e : {m1, m2, m3})
      m.effects.push_back(Operator::from_exact(e));
    lib.push_back({std::move(m), CommMatrix{{Rational(1, 2), Rational(1, 3), Rational(1, 6)},
                                            {Rational(1, 4), Rational(2, 3), Rational(1, 12)},
                                            {Rational(1, 10), Rational(1, 15), Rational(5, 6)}}});
  }
  {
    QuantumModel m{"nonconvex-C'", 2, {}, {}};
    for (const auto &s : {rho3, rho2, rho1})
      m.states.push_back(Operator::from_exact(s));
    for (const auto &e : {m3, m2, m1})
      m.effects.push_back(Operator::from_exact(e));
    lib.push_back({std::move(m), CommMatrix{{Rational(5, 6), Rational(1, 15), Rational(1, 10)},
                                            {Rational(1, 12), Rational(2, 3), Rational(1, 4)},
                                            {Rational(1, 6), Rational(1, 3), Rational(1, 2)}}});
  }
  {
    // Two antipodal pairs: M = (I +- sigma_x)/4, (I +- sigma_y)/4, rho_i = 2 M(i).
    QuantumModel m{"sigma-xy", 2, {}, {}};
    std::vector<QCMatrix> eff = {
        qc({{r(1, 4), r(1, 4)}, {r(1, 4), r(1, 4)}}),
        qc({{r(1, 4), r(-1, 4)}, {r(-1, 4), r(1, 4)}}),
        qc({{r(1, 4), c(0, Rational(-1, 4))}, {c(0, Rational(1, 4)), r(1, 4)}}),
        qc({{r(1, 4), c(0, Rational(1, 4))}, {c(0, Rational(-1, 4)), r(1, 4)}})};
    for (const auto &e : eff) {
      m.states.push_back(Operator::from_exact(e.scaled(2)));
      m.effects.push_back(Operator::from_exact(e));
    }
    Rational h(1, 2), q(1, 4), z(0);
    lib.push_back({std::move(m), CommMatrix{{h, z, q, q}, {z, h, q, q}, {q, q, h, z}, {q, q, z, h}}});
  }
  {
    // M(j) = (2/3)(I - rho_j); states in reverse order put the zeros of A_3
    // in place.
    QuantumModel m{"trine-complement", 2, {}, {}};
    for (std::size_t k = 0; k < 3; ++k)
      m.states.push_back(Operator::from_numeric(trine[2 - k]));
    for (const auto &t : trine)
      m.effects.push_back(
          Operator::from_numeric((Eigen::MatrixXcd::Identity(2, 2) - t) * (2.0 / 3.0)));
    lib.push_back({std::move(m), make_A(3)});
  }
  const double r2 = std::sqrt(2.0);
  std::vector<Eigen::MatrixXcd> tetra = {
      bloch_state(0, 0, 1), bloch_state(2 * r2 / 3, 0, -1.0 / 3),
      bloch_state(-r2 / 3, std::sqrt(2.0 / 3.0), -1.0 / 3),
      bloch_state(-r2 / 3, -std::sqrt(2.0 / 3.0), -1.0 / 3)};
  {
    QuantumModel m{"sic-complement", 2, {}, {}};
    for (std::size_t k = 0; k < 4; ++k)
      m.states.push_back(Operator::from_numeric(tetra[3 - k]));
    for (const auto &t : tetra)
      m.effects.push_back(Operator::from_numeric((Eigen::MatrixXcd::Identity(2, 2) - t) * 0.5));
    lib.push_back({std::move(m), make_A(4)});
  }
  {
    QuantumModel m{"sic", 2, {}, {}};
    for (const auto &t : tetra) {
      m.states.push_back(Operator::from_numeric(t));
      m.effects.push_back(Operator::from_numeric(t * 0.5));
    }
    lib.push_back({std::move(m), make_D(4, Rational(1, 2))});
  }
  return lib;
}

} // namespace

const std::vector<LibraryEntry> &witness_library() {
  static const std::vector<LibraryEntry> lib = build_library();
  return lib;
}

} // namespace commtask
