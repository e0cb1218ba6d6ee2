#include "commtask/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace commtask::lp {

namespace {

template <class T> struct Arith;

template <> struct Arith<double> {
  double tol;
  bool is_zero(double v) const { return std::abs(v) <= tol; }
  bool is_neg(double v) const { return v < -tol; }
  bool is_pos(double v) const { return v > tol; }
};

template <> struct Arith<Rational> {
  explicit Arith(double) {}
  bool is_zero(const Rational &v) const { return sgn(v) == 0; }
  bool is_neg(const Rational &v) const { return sgn(v) < 0; }
  bool is_pos(const Rational &v) const { return sgn(v) > 0; }
};

// Dense tableau over the standardized problem
//   A' z = b' (b' >= 0),  z >= 0,
// where z = structural (shifted by the lower bounds), slacks, surpluses and
// artificials. Upper bounds become extra <= rows.
template <class T> class Tableau {
public:
  Tableau(const LinearProgram<T> &lp, const Options &opts)
      : lp_(lp), opts_(opts), ar_(make_arith(opts.tolerance)) {
    build();
  }

  Solution<T> run() {
    Solution<T> sol;
    // Phase one.
    if (num_artificial_ > 0) {
      std::vector<T> c1(width_, T(0));
      for (std::size_t j = art_begin_; j < width_; ++j)
        c1[j] = T(1);
      set_costs(c1);
      Status st = iterate(/*allow_artificial=*/true, sol.iterations);
      if (st == Status::IterationLimit) {
        sol.status = st;
        return sol;
      }
      if (ar_.is_pos(objective_value())) {
        sol.status = Status::Infeasible;
        sol.duals = duals();
        return sol;
      }
      drive_out_artificials();
    }
    // Phase two.
    std::vector<T> c2(width_, T(0));
    for (std::size_t j = 0; j < n_; ++j)
      c2[j] = lp_.cost[j];
    set_costs(c2);
    Status st = iterate(/*allow_artificial=*/false, sol.iterations);
    sol.status = st;
    if (st != Status::Optimal)
      return sol;
    sol.x.assign(n_, T(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_)
        sol.x[basis_[r]] = rhs_[r];
    T obj(0);
    for (std::size_t j = 0; j < n_; ++j) {
      sol.x[j] += lp_.lower[j];
      obj += lp_.cost[j] * sol.x[j];
    }
    sol.objective = obj;
    sol.duals = duals();
    return sol;
  }

private:
  static Arith<T> make_arith(double tol) {
    if constexpr (std::is_same_v<T, double>)
      return Arith<double>{tol};
    else
      return Arith<T>(tol);
  }

  T &at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }

  void build() {
    n_ = lp_.num_vars();
    if (lp_.lower.size() != n_ || lp_.upper.size() != n_)
      throw std::invalid_argument("bound vectors do not match variable count");
    struct Row {
      std::vector<T> a;
      Sense sense;
      T rhs;
    };
    std::vector<Row> rows;
    rows.reserve(lp_.constraints.size() + n_);
    for (const auto &c : lp_.constraints) {
      Row r{std::vector<T>(n_, T(0)), c.sense, c.rhs};
      for (const auto &t : c.terms) {
        if (t.var >= n_)
          throw std::invalid_argument("constraint references unknown variable");
        r.a[t.var] += t.coeff;
      }
      for (std::size_t j = 0; j < n_; ++j)
        if (!ar_.is_zero(lp_.lower[j]) && !ar_.is_zero(r.a[j]))
          r.rhs -= r.a[j] * lp_.lower[j];
      rows.push_back(std::move(r));
    }
    num_genuine_ = rows.size();
    for (std::size_t j = 0; j < n_; ++j)
      if (lp_.upper[j]) {
        Row r{std::vector<T>(n_, T(0)), Sense::LessEq, *lp_.upper[j] - lp_.lower[j]};
        r.a[j] = T(1);
        rows.push_back(std::move(r));
      }
    m_ = rows.size();
    sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i)
      if (ar_.is_neg(rows[i].rhs)) {
        sign_[i] = -1;
        for (auto &v : rows[i].a)
          v = -v;
        rows[i].rhs = -rows[i].rhs;
        if (rows[i].sense == Sense::LessEq)
          rows[i].sense = Sense::GreaterEq;
        else if (rows[i].sense == Sense::GreaterEq)
          rows[i].sense = Sense::LessEq;
      }
    // Column layout: structural | slack/surplus | artificial.
    std::size_t num_aux = 0;
    num_artificial_ = 0;
    for (const auto &r : rows) {
      if (r.sense != Sense::Equal)
        ++num_aux;
      if (r.sense != Sense::LessEq)
        ++num_artificial_;
    }
    art_begin_ = n_ + num_aux;
    width_ = art_begin_ + num_artificial_;
    tab_.assign(m_ * width_, T(0));
    rhs_.assign(m_, T(0));
    basis_.assign(m_, 0);
    origin_.assign(m_, 0);
    std::size_t aux = n_, art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j)
        at(i, j) = rows[i].a[j];
      rhs_[i] = rows[i].rhs;
      switch (rows[i].sense) {
      case Sense::LessEq:
        at(i, aux) = T(1);
        basis_[i] = origin_[i] = aux++;
        break;
      case Sense::GreaterEq:
        at(i, aux++) = T(-1);
        at(i, art) = T(1);
        basis_[i] = origin_[i] = art++;
        break;
      case Sense::Equal:
        at(i, art) = T(1);
        basis_[i] = origin_[i] = art++;
        break;
      }
    }
  }

  void set_costs(const std::vector<T> &c) {
    cost_ = c;
    reduced_ = c;
    for (std::size_t r = 0; r < m_; ++r) {
      const T &cb = cost_[basis_[r]];
      if (ar_.is_zero(cb))
        continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (!ar_.is_zero(at(r, j)))
          reduced_[j] -= cb * at(r, j);
    }
  }

  T objective_value() const {
    T v(0);
    for (std::size_t r = 0; r < m_; ++r)
      v += cost_[basis_[r]] * rhs_[r];
    return v;
  }

  std::vector<T> duals() {
    std::vector<T> y(num_genuine_, T(0));
    for (std::size_t i = 0; i < num_genuine_; ++i) {
      T v(0);
      std::size_t col = origin_[i];
      for (std::size_t r = 0; r < m_; ++r) {
        const T &cb = cost_[basis_[r]];
        if (!ar_.is_zero(cb) && !ar_.is_zero(at(r, col)))
          v += cb * at(r, col);
      }
      y[i] = sign_[i] < 0 ? T(-v) : v;
    }
    return y;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    T inv = T(1) / at(pr, pc);
    for (std::size_t j = 0; j < width_; ++j)
      if (!ar_.is_zero(at(pr, j)))
        at(pr, j) *= inv;
    rhs_[pr] *= inv;
    at(pr, pc) = T(1);
    // Nonzero pattern of the pivot row, reused for every elimination.
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j)
      if (!ar_.is_zero(at(pr, j)))
        nz_.push_back(j);
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr)
        continue;
      T f = at(r, pc);
      if (ar_.is_zero(f))
        continue;
      for (std::size_t j : nz_)
        at(r, j) -= f * at(pr, j);
      at(r, pc) = T(0);
      rhs_[r] -= f * rhs_[pr];
      if constexpr (std::is_same_v<T, double>)
        if (rhs_[r] < 0 && rhs_[r] > -opts_.tolerance)
          rhs_[r] = 0;
    }
    T f = reduced_[pc];
    if (!ar_.is_zero(f)) {
      for (std::size_t j : nz_)
        reduced_[j] -= f * at(pr, j);
      reduced_[pc] = T(0);
    }
    basis_[pr] = pc;
  }

  Status iterate(bool allow_artificial, std::size_t &iterations) {
    const std::size_t limit = allow_artificial ? width_ : art_begin_;
    bool use_bland = opts_.bland || !std::is_same_v<T, double>;
    std::size_t stall = 0;
    T last_obj = objective_value();
    for (;;) {
      if (iterations >= opts_.max_iterations)
        return Status::IterationLimit;
      std::size_t enter = width_;
      if (use_bland) {
        for (std::size_t j = 0; j < limit; ++j)
          if (ar_.is_neg(reduced_[j])) {
            enter = j;
            break;
          }
      } else {
        T best(0);
        for (std::size_t j = 0; j < limit; ++j)
          if (ar_.is_neg(reduced_[j]) && (enter == width_ || reduced_[j] < best)) {
            best = reduced_[j];
            enter = j;
          }
      }
      if (enter == width_)
        return Status::Optimal;
      std::size_t leave = m_;
      T best_ratio(0);
      for (std::size_t r = 0; r < m_; ++r) {
        const T &a = at(r, enter);
        if (!ar_.is_pos(a))
          continue;
        T ratio = rhs_[r] / a;
        if (leave == m_ || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == m_)
        return Status::Unbounded;
      pivot(leave, enter);
      ++iterations;
      if constexpr (std::is_same_v<T, double>) {
        if (!opts_.bland) {
          T obj = objective_value();
          if (obj < last_obj - opts_.tolerance) {
            stall = 0;
            last_obj = obj;
            use_bland = false;
          } else if (++stall > 50) {
            use_bland = true;
          }
        }
      }
    }
  }

  // Pivots zero-level artificials out of the basis; rows where that is
  // impossible are redundant and keep their artificial at zero.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_)
        continue;
      for (std::size_t j = 0; j < art_begin_; ++j)
        if (!ar_.is_zero(at(r, j))) {
          pivot(r, j);
          break;
        }
    }
  }

  const LinearProgram<T> &lp_;
  Options opts_;
  Arith<T> ar_;
  std::size_t n_ = 0, m_ = 0, width_ = 0, art_begin_ = 0, num_artificial_ = 0;
  std::size_t num_genuine_ = 0;
  std::vector<T> tab_, rhs_, cost_, reduced_;
  std::vector<std::size_t> basis_, origin_, nz_;
  std::vector<int> sign_;
};

} // namespace

template <class T> Solution<T> solve(const LinearProgram<T> &lp, const Options &opts) {
  Tableau<T> tab(lp, opts);
  return tab.run();
}

template Solution<double> solve(const LinearProgram<double> &, const Options &);
template Solution<Rational> solve(const LinearProgram<Rational> &, const Options &);

LinearProgram<double> to_double(const LinearProgram<Rational> &lp) {
  LinearProgram<double> d;
  d.cost.reserve(lp.num_vars());
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    std::optional<double> hi;
    if (lp.upper[j])
      hi = lp.upper[j]->get_d();
    d.add_var(lp.lower[j].get_d(), hi, lp.cost[j].get_d());
  }
  d.constraints.reserve(lp.constraints.size());
  for (const auto &c : lp.constraints) {
    std::vector<LinearProgram<double>::Term> terms;
    terms.reserve(c.terms.size());
    for (const auto &t : c.terms)
      terms.push_back({t.var, t.coeff.get_d()});
    d.add_constraint(std::move(terms), c.sense, c.rhs.get_d());
  }
  return d;
}

std::optional<Rational> lagrangian_bound(const LinearProgram<Rational> &lp,
                                         std::span<const Rational> y, bool use_cost,
                                         std::span<const Rational> box_lo,
                                         std::span<const std::optional<Rational>> box_hi) {
  const std::size_t n = lp.num_vars();
  if (y.size() != lp.constraints.size() || box_lo.size() != n || box_hi.size() != n)
    throw std::invalid_argument("lagrangian_bound: size mismatch");
  std::vector<Rational> reduced(n);
  if (use_cost)
    reduced = lp.cost;
  Rational bound = 0;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto &c = lp.constraints[i];
    Rational yi = y[i];
    if (c.sense == Sense::LessEq && yi > 0)
      yi = 0;
    if (c.sense == Sense::GreaterEq && yi < 0)
      yi = 0;
    if (yi == 0)
      continue;
    bound += yi * c.rhs;
    for (const auto &t : c.terms)
      reduced[t.var] -= yi * t.coeff;
  }
  for (std::size_t j = 0; j < n; ++j) {
    int s = sgn(reduced[j]);
    if (s > 0) {
      bound += reduced[j] * box_lo[j];
    } else if (s < 0) {
      if (!box_hi[j])
        return std::nullopt;
      bound += reduced[j] * *box_hi[j];
    }
  }
  return bound;
}

std::optional<Rational> lagrangian_bound(const LinearProgram<Rational> &lp,
                                         std::span<const Rational> y, bool use_cost) {
  return lagrangian_bound(lp, y, use_cost, lp.lower, lp.upper);
}

std::vector<Rational> exact_multipliers(std::span<const double> y) {
  std::vector<Rational> r;
  r.reserve(y.size());
  for (double v : y)
    r.push_back(std::isfinite(v) ? exact_from_double(v) : Rational(0));
  return r;
}

} // namespace commtask::lp
