#include "commtask/witness_search.hpp"

#include "commtask/lp.hpp"
#include "commtask/transforms.hpp"

#include <limits>
#include <random>

namespace commtask {

namespace {

using Clock = std::chrono::steady_clock;
using LpD = lp::LinearProgram<double>;

lp::Options fast_options() {
  lp::Options o;
  o.bland = false;
  o.tolerance = 1e-11;
  return o;
}

// Best row-stochastic L for fixed M = D R, row by row. Returns max residual.
double l_step(const Eigen::MatrixXd &c, const Eigen::MatrixXd &m, Eigen::MatrixXd &l) {
  const Eigen::Index a = c.rows(), b = c.cols(), k = m.rows();
  double worst = 0;
  for (Eigen::Index i = 0; i < a; ++i) {
    LpD prog;
    for (Eigen::Index q = 0; q < k; ++q)
      prog.add_var();
    std::size_t t = prog.add_var(0.0, std::nullopt, 1.0);
    std::vector<LpD::Term> ones;
    for (Eigen::Index q = 0; q < k; ++q)
      ones.push_back({static_cast<std::size_t>(q), 1.0});
    prog.add_constraint(ones, lp::Sense::Equal, 1.0);
    for (Eigen::Index j = 0; j < b; ++j) {
      std::vector<LpD::Term> terms;
      for (Eigen::Index q = 0; q < k; ++q)
        if (m(q, j) != 0)
          terms.push_back({static_cast<std::size_t>(q), m(q, j)});
      auto lo = terms, hi = terms;
      lo.push_back({t, 1.0});
      hi.push_back({t, -1.0});
      prog.add_constraint(std::move(lo), lp::Sense::GreaterEq, c(i, j));
      prog.add_constraint(std::move(hi), lp::Sense::LessEq, c(i, j));
    }
    auto sol = lp::solve(prog, fast_options());
    if (sol.status != lp::Status::Optimal)
      return 1.0;
    for (Eigen::Index q = 0; q < k; ++q)
      l(i, q) = std::max(0.0, sol.x[static_cast<std::size_t>(q)]);
    worst = std::max(worst, sol.objective);
  }
  return worst;
}

// Best row-stochastic R for fixed N = L D. Returns max residual.
double r_step(const Eigen::MatrixXd &c, const Eigen::MatrixXd &n, Eigen::MatrixXd &r) {
  const Eigen::Index a = c.rows(), b = c.cols(), d = n.cols();
  LpD prog;
  auto var = [&](Eigen::Index l, Eigen::Index j) { return static_cast<std::size_t>(l * b + j); };
  for (Eigen::Index v = 0; v < d * b; ++v)
    prog.add_var();
  std::size_t t = prog.add_var(0.0, std::nullopt, 1.0);
  for (Eigen::Index l = 0; l < d; ++l) {
    std::vector<LpD::Term> ones;
    for (Eigen::Index j = 0; j < b; ++j)
      ones.push_back({var(l, j), 1.0});
    prog.add_constraint(std::move(ones), lp::Sense::Equal, 1.0);
  }
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < b; ++j) {
      std::vector<LpD::Term> terms;
      for (Eigen::Index l = 0; l < d; ++l)
        if (n(i, l) != 0)
          terms.push_back({var(l, j), n(i, l)});
      auto lo = terms, hi = terms;
      lo.push_back({t, 1.0});
      hi.push_back({t, -1.0});
      prog.add_constraint(std::move(lo), lp::Sense::GreaterEq, c(i, j));
      prog.add_constraint(std::move(hi), lp::Sense::LessEq, c(i, j));
    }
  auto sol = lp::solve(prog, fast_options());
  if (sol.status != lp::Status::Optimal)
    return 1.0;
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index j = 0; j < b; ++j)
      r(l, j) = std::max(0.0, sol.x[var(l, j)]);
  return sol.objective;
}

// Exact R with N R == C, R row-stochastic, for exact N.
std::optional<CommMatrix> solve_right(const CommMatrix &c, const QMatrix &n) {
  const std::size_t a = c.rows(), b = c.cols(), d = n.cols();
  lp::LinearProgram<Rational> prog;
  for (std::size_t v = 0; v < d * b; ++v)
    prog.add_var();
  for (std::size_t l = 0; l < d; ++l) {
    std::vector<lp::LinearProgram<Rational>::Term> ones;
    for (std::size_t j = 0; j < b; ++j)
      ones.push_back({l * b + j, Rational(1)});
    prog.add_constraint(std::move(ones), lp::Sense::Equal, Rational(1));
  }
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      std::vector<lp::LinearProgram<Rational>::Term> terms;
      for (std::size_t l = 0; l < d; ++l)
        if (n(i, l) != 0)
          terms.push_back({l * b + j, n(i, l)});
      if (terms.empty()) {
        if (c(i, j) != 0)
          return std::nullopt;
        continue;
      }
      prog.add_constraint(std::move(terms), lp::Sense::Equal, c(i, j));
    }
  auto sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal)
    return std::nullopt;
  QMatrix r(d, b);
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t j = 0; j < b; ++j)
      r(l, j) = sol.x[l * b + j];
  return CommMatrix(std::move(r));
}

// Exact L with L M == C, rows of L convex weights over the rows of M.
std::optional<CommMatrix> solve_left(const CommMatrix &c, const QMatrix &m) {
  std::vector<std::size_t> all(m.rows());
  for (std::size_t q = 0; q < m.rows(); ++q)
    all[q] = q;
  QMatrix l(c.rows(), m.rows());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto w = convex_combination(m, all, c.row(i));
    if (!w)
      return std::nullopt;
    for (std::size_t q = 0; q < m.rows(); ++q)
      l(i, q) = (*w)[q];
  }
  return CommMatrix(std::move(l));
}

} // namespace

double polish(const Eigen::MatrixXd &c, const Eigen::MatrixXd &d, Eigen::MatrixXd &l,
              Eigen::MatrixXd &r, std::size_t rounds) {
  double resid = (c - l * d * r).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < rounds && resid > 0; ++k) {
    Eigen::MatrixXd l2 = l, r2 = r;
    r_step(c, l2 * d, r2);
    double next = l_step(c, d * r2, l2);
    if (!(next < resid))
      break;
    l = std::move(l2);
    r = std::move(r2);
    resid = next;
  }
  return resid;
}

std::optional<StochasticPair> exactify(const CommMatrix &c, const CommMatrix &d,
                                       const Eigen::MatrixXd &l, const Eigen::MatrixXd &r) {
  const std::int64_t caps[] = {10, 100, 1000, 1000000};
  for (auto cap : caps) {
    try {
      StochasticPair p{round_to_stochastic(l, cap, 1e-9), round_to_stochastic(r, cap, 1e-9)};
      if (verifies(p, c, d))
        return p;
    } catch (const std::invalid_argument &) {
    }
  }
  for (auto cap : caps) {
    try {
      CommMatrix rr = round_to_stochastic(r, cap, 1e-9);
      if (auto ll = solve_left(c, multiply(d.matrix(), rr.matrix()))) {
        StochasticPair p{*ll, rr};
        if (verifies(p, c, d))
          return p;
      }
    } catch (const std::invalid_argument &) {
    }
  }
  for (auto cap : caps) {
    try {
      CommMatrix ll = round_to_stochastic(l, cap, 1e-9);
      if (auto rr = solve_right(c, multiply(ll.matrix(), d.matrix()))) {
        StochasticPair p{ll, *rr};
        if (verifies(p, c, d))
          return p;
      }
    } catch (const std::invalid_argument &) {
    }
  }
  return std::nullopt;
}

WitnessSearchResult search_witness(const CommMatrix &cm, const CommMatrix &dm,
                                   const Budget &budget,
                                   std::optional<Clock::time_point> deadline) {
  WitnessSearchResult res;
  if (cm == dm) {
    res.witness = identity_pair(cm.rows(), cm.cols());
    res.best_residual = 0;
    return res;
  }
  const Eigen::MatrixXd c = cm.to_double(), d = dm.to_double();
  const Eigen::Index a = c.rows(), b = c.cols(), rc = d.rows(), dc = d.cols();
  auto expired = [&] { return deadline && Clock::now() > *deadline; };

  for (std::size_t s = 0; s < budget.witness_starts && !expired(); ++s) {
    std::mt19937_64 rng(budget.seed * 7919ULL + s);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(a, rc), r = Eigen::MatrixXd::Zero(dc, b);
    // Start 0 maps the columns of D onto those of C in order; afterwards
    // random vertices, alternating between starting from R and from L.
    const bool from_left = s % 2 == 1;
    if (s == 0) {
      for (Eigen::Index q = 0; q < dc; ++q)
        r(q, std::min(q, b - 1)) = 1;
    } else if (from_left) {
      std::uniform_int_distribution<Eigen::Index> pick(0, rc - 1);
      for (Eigen::Index i = 0; i < a; ++i)
        l(i, pick(rng)) = 1;
    } else {
      std::uniform_int_distribution<Eigen::Index> pick(0, b - 1);
      for (Eigen::Index q = 0; q < dc; ++q)
        r(q, pick(rng)) = 1;
    }
    ++res.starts;
    double prev = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    for (std::size_t it = 0; it < budget.alternations && !expired(); ++it) {
      if (!(from_left && it == 0))
        l_step(c, d * r, l);
      double resid = r_step(c, l * d, r);
      res.best_residual = std::min(res.best_residual, resid);
      if (resid < budget.tol) {
        if (auto p = exactify(cm, dm, l, r)) {
          res.witness = std::move(p);
          res.best_residual = 0;
          return res;
        }
        break;
      }
      if (resid > prev - 1e-12) {
        if (++stalled >= 3)
          break;
      } else {
        stalled = 0;
      }
      prev = std::min(prev, resid);
    }
    if (prev < 1e-6)
      if (auto p = exactify(cm, dm, l, r)) {
        res.witness = std::move(p);
        res.best_residual = 0;
        return res;
      }
  }
  return res;
}

} // namespace commtask
