#include "commtask/psd_factor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace commtask {

namespace {

using CMat = Eigen::MatrixXcd;

struct Factors {
  std::vector<CMat> u; // rows of C
  std::vector<CMat> v; // columns of C
};

// f_ij = tr(U_i^* V_j V_j^* U_i) - C_ij for all i, j.
Eigen::MatrixXd residuals(const Factors &f, const Eigen::MatrixXd &c) {
  Eigen::MatrixXd r(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      r(i, j) = (f.u[i].adjoint() * f.v[j]).squaredNorm() - c(i, j);
  return r;
}

// One damped Gauss-Newton step on X for the residuals
//   r_l(X) = tr(X^* G_l X) - target_l,  l = 0..n-1,
// with the Hermitian PSD matrices G_l fixed. Returns the new sum of squares.
double refine_block(CMat &x, const std::vector<CMat> &g, const Eigen::VectorXd &target,
                    double &damping) {
  const Eigen::Index k = x.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  const Eigen::Index p = 2 * k * k;
  auto eval = [&](const CMat &y, Eigen::VectorXd &r) {
    r.resize(n);
    for (Eigen::Index l = 0; l < n; ++l)
      r(l) = (y.adjoint() * g[l] * y).trace().real() - target(l);
  };
  Eigen::VectorXd r;
  eval(x, r);
  const double base = r.squaredNorm();
  Eigen::MatrixXd jac(n, p);
  for (Eigen::Index l = 0; l < n; ++l) {
    CMat grad = 2.0 * g[l] * x;
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        jac(l, 2 * (a * k + b)) = grad(a, b).real();
        jac(l, 2 * (a * k + b) + 1) = grad(a, b).imag();
      }
  }
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::VectorXd jtr = jac.transpose() * r;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd sys = jtj;
    sys.diagonal().array() += damping * (1.0 + jtj.diagonal().array());
    Eigen::VectorXd step = sys.ldlt().solve(-jtr);
    CMat y = x;
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b)
        y(a, b) += std::complex<double>(step(2 * (a * k + b)), step(2 * (a * k + b) + 1));
    Eigen::VectorXd ry;
    eval(y, ry);
    double val = ry.squaredNorm();
    if (std::isfinite(val) && val < base) {
      x = std::move(y);
      damping = std::max(damping / 3.0, 1e-12);
      return val;
    }
    damping *= 4.0;
  }
  return base;
}

QuantumModel to_model(const Factors &f, std::size_t k) {
  CMat s = CMat::Zero(k, k);
  std::vector<CMat> b(f.v.size()), a(f.u.size());
  for (std::size_t j = 0; j < f.v.size(); ++j) {
    b[j] = f.v[j] * f.v[j].adjoint();
    s += b[j];
  }
  for (std::size_t i = 0; i < f.u.size(); ++i)
    a[i] = f.u[i] * f.u[i].adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
    if (es.eigenvalues()(t) > 1e-12 * std::max(top, 1.0))
      keep.push_back(t);
  const Eigen::Index d = static_cast<Eigen::Index>(keep.size());
  CMat w(k, d), w_inv(d, k);
  for (Eigen::Index t = 0; t < d; ++t) {
    double lam = es.eigenvalues()(keep[t]);
    w.col(t) = es.eigenvectors().col(keep[t]) / std::sqrt(lam);
    w_inv.row(t) = es.eigenvectors().col(keep[t]).adjoint() * std::sqrt(lam);
  }
  QuantumModel m;
  m.name = "numeric-factorization";
  m.dim = static_cast<std::size_t>(d);
  for (const auto &ai : a) {
    CMat rho = w_inv * ai * w_inv.adjoint();
    rho = (rho + rho.adjoint()) / 2.0;
    std::complex<double> tr = rho.trace();
    if (std::abs(tr) > 0)
      rho /= tr.real();
    m.states.push_back(Operator::from_numeric(std::move(rho)));
  }
  for (const auto &bj : b) {
    CMat e = w.adjoint() * bj * w;
    m.effects.push_back(Operator::from_numeric((e + e.adjoint()) / 2.0));
  }
  return m;
}

} // namespace

std::optional<PsdFactorization> psd_factorize(const CommMatrix &cm, std::size_t k,
                                              const PsdFactorOptions &opts) {
  if (k == 0)
    return std::nullopt;
  const Eigen::MatrixXd c = cm.to_double();
  const std::size_t rows = cm.rows(), cols = cm.cols();
  const auto kk = static_cast<Eigen::Index>(k);
  for (std::size_t start = 0; start < opts.starts; ++start) {
    std::mt19937_64 rng(opts.seed * 1000003ULL + start);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_block = [&](double scale) {
      CMat x(kk, kk);
      for (Eigen::Index a = 0; a < kk; ++a)
        for (Eigen::Index b = 0; b < kk; ++b)
          x(a, b) = std::complex<double>(gauss(rng), gauss(rng)) * scale;
      return x;
    };
    Factors f;
    for (std::size_t i = 0; i < rows; ++i)
      f.u.push_back(random_block(1.0 / std::sqrt(2.0 * static_cast<double>(k))));
    for (std::size_t j = 0; j < cols; ++j)
      f.v.push_back(random_block(1.0 / std::sqrt(2.0 * static_cast<double>(k * cols))));
    std::vector<double> damp_u(rows, 1e-3), damp_v(cols, 1e-3);
    double prev = std::numeric_limits<double>::infinity();
    std::size_t flat = 0;
    for (std::size_t it = 0; it < opts.iterations; ++it) {
      std::vector<CMat> g(cols);
      for (std::size_t j = 0; j < cols; ++j)
        g[j] = f.v[j] * f.v[j].adjoint();
      for (std::size_t i = 0; i < rows; ++i)
        refine_block(f.u[i], g, c.row(static_cast<Eigen::Index>(i)).transpose(), damp_u[i]);
      std::vector<CMat> h(rows);
      for (std::size_t i = 0; i < rows; ++i)
        h[i] = f.u[i] * f.u[i].adjoint();
      for (std::size_t j = 0; j < cols; ++j)
        refine_block(f.v[j], h, c.col(static_cast<Eigen::Index>(j)), damp_v[j]);
      double worst = residuals(f, c).cwiseAbs().maxCoeff();
      if (worst < opts.tol * 1e-2)
        break;
      if (it >= 60 && worst > 1e-2)
        break;
      if (worst > prev * (1 - 1e-6)) {
        if (++flat > 25)
          break;
      } else {
        flat = 0;
      }
      prev = std::min(prev, worst);
    }
    if (residuals(f, c).cwiseAbs().maxCoeff() > opts.tol)
      continue;
    QuantumModel m = to_model(f, k);
    double res = (eval_model(m).numeric - c).cwiseAbs().maxCoeff();
    if (res <= opts.tol)
      return PsdFactorization{std::move(m), res};
  }
  return std::nullopt;
}

} // namespace commtask
