#include "commtask/branch_bound.hpp"

#include "commtask/lp.hpp"
#include "commtask/witness_search.hpp"

#include <cmath>
#include <queue>

namespace commtask {

namespace {

using Clock = std::chrono::steady_clock;
using LpQ = lp::LinearProgram<Rational>;
using TermQ = LpQ::Term;

struct Box {
  std::vector<Rational> lo, hi;
};

bool is_identity(const CommMatrix &d) {
  return d.rows() == d.cols() && d.matrix() == QMatrix::identity(d.rows());
}

// Builds the relaxation of one box. Factor variables are numbered X first
// (i*K + k), then Y (a*K + k*b + j).
class Relaxation {
public:
  Relaxation(const CommMatrix &c, const CommMatrix &d, BilinearForm form)
      : c_(c), d_(d), form_(form), a_(c.rows()), b_(c.cols()), rc_(d.rows()), dc_(d.cols()) {
    k_ = form == BilinearForm::Left ? rc_ : dc_;
    const bool plain = is_identity(d);
    std::size_t next = 0;
    l_base_ = next;
    next += a_ * rc_;
    r_base_ = next;
    next += dc_ * b_;
    x_var_.resize(a_ * k_);
    y_var_.resize(k_ * b_);
    if (form == BilinearForm::Left) {
      for (std::size_t v = 0; v < a_ * k_; ++v)
        x_var_[v] = l_base_ + v;
      for (std::size_t v = 0; v < k_ * b_; ++v)
        y_var_[v] = plain ? r_base_ + v : next++;
      y_extra_ = !plain;
    } else {
      for (std::size_t v = 0; v < a_ * k_; ++v)
        x_var_[v] = plain ? l_base_ + v : next++;
      x_extra_ = !plain;
      for (std::size_t v = 0; v < k_ * b_; ++v)
        y_var_[v] = r_base_ + v;
    }
    w_base_ = next;
    next += a_ * k_ * b_;
    t_var_ = next++;
    num_vars_ = next;
  }

  std::size_t num_factors() const { return a_ * k_ + k_ * b_; }
  std::size_t lp_var(std::size_t f) const {
    return f < a_ * k_ ? x_var_[f] : y_var_[f - a_ * k_];
  }

  Box root_box() const {
    Box box;
    box.lo.assign(num_factors(), Rational(0));
    box.hi.assign(num_factors(), Rational(1));
    if (form_ == BilinearForm::Right && x_extra_) {
      // X_ik = sum_l L_il D_lk lies between the extremes of column k of D.
      for (std::size_t i = 0; i < a_; ++i)
        for (std::size_t k = 0; k < k_; ++k) {
          Rational mn = d_(0, k), mx = d_(0, k);
          for (std::size_t l = 1; l < rc_; ++l) {
            if (d_(l, k) < mn)
              mn = d_(l, k);
            if (d_(l, k) > mx)
              mx = d_(l, k);
          }
          box.lo[i * k_ + k] = mn;
          box.hi[i * k_ + k] = mx;
        }
    }
    return box;
  }

  LpQ build(const Box &box) const {
    LpQ lp;
    for (std::size_t v = 0; v < num_vars_; ++v)
      lp.add_var(Rational(0), Rational(1), Rational(0));
    lp.cost[t_var_] = 1;
    for (std::size_t f = 0; f < num_factors(); ++f) {
      lp.lower[lp_var(f)] = box.lo[f];
      lp.upper[lp_var(f)] = box.hi[f];
    }
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < k_; ++k)
        for (std::size_t j = 0; j < b_; ++j) {
          const std::size_t w = w_index(i, k, j);
          lp.lower[w] = box.lo[i * k_ + k] * box.lo[a_ * k_ + k * b_ + j];
          lp.upper[w] = box.hi[i * k_ + k] * box.hi[a_ * k_ + k * b_ + j];
        }

    for (std::size_t i = 0; i < a_; ++i) {
      std::vector<TermQ> row;
      for (std::size_t k = 0; k < rc_; ++k)
        row.push_back({l_base_ + i * rc_ + k, Rational(1)});
      lp.add_constraint(std::move(row), lp::Sense::Equal, Rational(1));
    }
    for (std::size_t l = 0; l < dc_; ++l) {
      std::vector<TermQ> row;
      for (std::size_t j = 0; j < b_; ++j)
        row.push_back({r_base_ + l * b_ + j, Rational(1)});
      lp.add_constraint(std::move(row), lp::Sense::Equal, Rational(1));
    }
    if (x_extra_)
      for (std::size_t i = 0; i < a_; ++i)
        for (std::size_t k = 0; k < k_; ++k) {
          std::vector<TermQ> row{{x_var_[i * k_ + k], Rational(1)}};
          for (std::size_t l = 0; l < rc_; ++l)
            if (d_(l, k) != 0)
              row.push_back({l_base_ + i * rc_ + l, -d_(l, k)});
          lp.add_constraint(std::move(row), lp::Sense::Equal, Rational(0));
        }
    if (y_extra_)
      for (std::size_t k = 0; k < k_; ++k)
        for (std::size_t j = 0; j < b_; ++j) {
          std::vector<TermQ> row{{y_var_[k * b_ + j], Rational(1)}};
          for (std::size_t l = 0; l < dc_; ++l)
            if (d_(k, l) != 0)
              row.push_back({r_base_ + l * b_ + j, -d_(k, l)});
          lp.add_constraint(std::move(row), lp::Sense::Equal, Rational(0));
        }
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < k_; ++k)
        for (std::size_t j = 0; j < b_; ++j) {
          const std::size_t fx = i * k_ + k, fy = a_ * k_ + k * b_ + j;
          const Rational &xl = box.lo[fx], &xu = box.hi[fx];
          const Rational &yl = box.lo[fy], &yu = box.hi[fy];
          const std::size_t w = w_index(i, k, j), x = x_var_[fx], y = y_var_[fy - a_ * k_];
          // W >= yl X + xl Y - xl yl, W >= yu X + xu Y - xu yu,
          // W <= yl X + xu Y - xu yl, W <= yu X + xl Y - xl yu.
          auto envelope = [&](const Rational &cx, const Rational &cy, lp::Sense s) {
            std::vector<TermQ> row{{w, Rational(1)}};
            if (cx != 0)
              row.push_back({x, -cx});
            if (cy != 0)
              row.push_back({y, -cy});
            lp.add_constraint(std::move(row), s, -cx * cy);
          };
          envelope(yl, xl, lp::Sense::GreaterEq);
          envelope(yu, xu, lp::Sense::GreaterEq);
          envelope(yl, xu, lp::Sense::LessEq);
          envelope(yu, xl, lp::Sense::LessEq);
        }
    // Rows of Y sum to one, so sum_j W_ikj = X_ik.
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < k_; ++k) {
        std::vector<TermQ> row{{x_var_[i * k_ + k], Rational(-1)}};
        for (std::size_t j = 0; j < b_; ++j)
          row.push_back({w_index(i, k, j), Rational(1)});
        lp.add_constraint(std::move(row), lp::Sense::Equal, Rational(0));
      }
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t j = 0; j < b_; ++j) {
        std::vector<TermQ> row;
        for (std::size_t k = 0; k < k_; ++k)
          row.push_back({w_index(i, k, j), Rational(1)});
        auto up = row, down = row;
        up.push_back({t_var_, Rational(-1)});
        down.push_back({t_var_, Rational(1)});
        lp.add_constraint(std::move(up), lp::Sense::LessEq, c_(i, j));
        lp.add_constraint(std::move(down), lp::Sense::GreaterEq, c_(i, j));
      }
    return lp;
  }

  // L and R read off a relaxation point, clipped and renormalised.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> factors(const std::vector<double> &x) const {
    Eigen::MatrixXd l(a_, rc_), r(dc_, b_);
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < rc_; ++k)
        l(i, k) = std::max(0.0, x[l_base_ + i * rc_ + k]);
    for (std::size_t q = 0; q < dc_; ++q)
      for (std::size_t j = 0; j < b_; ++j)
        r(q, j) = std::max(0.0, x[r_base_ + q * b_ + j]);
    for (Eigen::Index i = 0; i < l.rows(); ++i)
      if (l.row(i).sum() > 0)
        l.row(i) /= l.row(i).sum();
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      if (r.row(i).sum() > 0)
        r.row(i) /= r.row(i).sum();
    return {l, r};
  }

  // Factor variable to branch on: the wider factor of the product with the
  // largest envelope gap, lowest index on ties.
  std::size_t choose_branch(const std::vector<double> &x, const Box &box) const {
    double best_gap = -1;
    std::size_t best_x = 0, best_y = 0;
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < k_; ++k)
        for (std::size_t j = 0; j < b_; ++j) {
          const std::size_t fx = i * k_ + k, fy = a_ * k_ + k * b_ + j;
          double gap = std::abs(x[w_index(i, k, j)] - x[x_var_[fx]] * x[y_var_[fy - a_ * k_]]);
          if (gap > best_gap) {
            best_gap = gap;
            best_x = fx;
            best_y = fy;
          }
        }
    if (best_gap < 1e-12) {
      // Relaxation exact at this point: refine the widest factor.
      std::size_t widest = 0;
      Rational width = -1;
      for (std::size_t f = 0; f < num_factors(); ++f)
        if (box.hi[f] - box.lo[f] > width) {
          width = box.hi[f] - box.lo[f];
          widest = f;
        }
      return widest;
    }
    Rational wx = box.hi[best_x] - box.lo[best_x];
    Rational wy = box.hi[best_y] - box.lo[best_y];
    return wy > wx ? best_y : best_x;
  }

private:
  std::size_t w_index(std::size_t i, std::size_t k, std::size_t j) const {
    return w_base_ + (i * k_ + k) * b_ + j;
  }

  const CommMatrix &c_;
  const CommMatrix &d_;
  BilinearForm form_;
  std::size_t a_, b_, rc_, dc_, k_;
  std::size_t l_base_ = 0, r_base_ = 0, w_base_ = 0, t_var_ = 0, num_vars_ = 0;
  bool x_extra_ = false, y_extra_ = false;
  std::vector<std::size_t> x_var_, y_var_;
};

BilinearForm pick_form(const CommMatrix &c, const CommMatrix &d) {
  // Fewer bilinear products wins; ties go to the left form.
  return c.rows() * d.rows() * c.cols() <= c.rows() * d.cols() * c.cols() ? BilinearForm::Left
                                                                         : BilinearForm::Right;
}

struct NodeSolve {
  bool infeasible = false;
  std::optional<Rational> bound; // nullopt: could not be certified
  std::vector<Rational> multipliers;
  std::vector<double> x;
};

NodeSolve solve_node(const LpQ &exact) {
  NodeSolve out;
  lp::Options opts;
  opts.bland = false;
  opts.tolerance = 1e-10;
  auto sol = lp::solve(lp::to_double(exact), opts);
  if (sol.status == lp::Status::Optimal) {
    out.multipliers = lp::exact_multipliers(sol.duals);
    out.bound = lp::lagrangian_bound(exact, out.multipliers, true);
    out.x = std::move(sol.x);
    // A weak safe bound would stall the search; fall back to exact pivoting.
    if (out.bound && out.bound->get_d() > sol.objective - 1e-7)
      return out;
  } else if (sol.status == lp::Status::Infeasible) {
    auto y = lp::exact_multipliers(sol.duals);
    auto b = lp::lagrangian_bound(exact, y, false);
    if (b && *b > 0) {
      out.infeasible = true;
      out.multipliers = std::move(y);
      return out;
    }
  }
  auto ex = lp::solve(exact);
  out = NodeSolve{};
  if (ex.status == lp::Status::Infeasible) {
    out.infeasible = true;
    out.multipliers = std::move(ex.duals);
  } else if (ex.status == lp::Status::Optimal) {
    out.bound = lp::lagrangian_bound(exact, ex.duals, true);
    out.multipliers = std::move(ex.duals);
    out.x.reserve(ex.x.size());
    for (const auto &v : ex.x)
      out.x.push_back(v.get_d());
  }
  return out;
}

Rational split_point(double at, const Rational &lo, const Rational &hi) {
  Rational width = hi - lo;
  Rational mid = (lo + hi) / 2;
  if (!std::isfinite(at))
    return mid;
  Rational s(static_cast<long>(std::floor(at * 1024.0 + 0.5)), 1024);
  if (s > lo + width / 10 && s < hi - width / 10)
    return s;
  return mid;
}

struct Open {
  Rational bound;
  std::size_t id;
  bool operator>(const Open &o) const {
    return bound != o.bound ? bound > o.bound : id > o.id;
  }
};

} // namespace

std::size_t free_dims(const CommMatrix &c, const CommMatrix &d) {
  return c.rows() * (d.rows() - 1) + d.cols() * (c.cols() - 1);
}

BBResult branch_and_bound(const CommMatrix &c, const CommMatrix &d, const Budget &budget,
                          std::optional<Clock::time_point> deadline) {
  if (budget.max_nodes == 0)
    throw std::invalid_argument("branch and bound needs a positive node budget");
  BBResult res;
  const Relaxation rel(c, d, pick_form(c, d));
  BBCertificate cert;
  cert.form = pick_form(c, d);
  std::vector<Box> boxes;
  std::vector<std::vector<double>> points;
  std::priority_queue<Open, std::vector<Open>, std::greater<Open>> open;
  const Eigen::MatrixXd cd = c.to_double(), dd = d.to_double();

  // Returns false when a witness was found.
  auto add_node = [&](Box box, std::optional<std::size_t> parent) -> bool {
    const std::size_t id = cert.nodes.size();
    cert.nodes.push_back(BBNode{});
    cert.nodes.back().parent = parent;
    NodeSolve s = solve_node(rel.build(box));
    ++res.nodes;
    BBNode &node = cert.nodes.back();
    node.multipliers = std::move(s.multipliers);
    boxes.push_back(std::move(box));
    points.emplace_back();
    if (s.infeasible) {
      node.infeasible = true;
      return true;
    }
    node.bound = s.bound ? *s.bound : Rational(-1);
    if (!s.x.empty()) {
      auto [l, r] = rel.factors(s.x);
      // Primal heuristic: a few alternating LP steps from the relaxation
      // point often land on the bilinear surface long before the boxes do.
      double resid = polish(cd, dd, l, r, 3);
      res.best_residual = std::min(res.best_residual, resid);
      if (resid < 1e-7)
        if (auto w = exactify(c, d, l, r)) {
          res.status = BBStatus::Witness;
          res.witness = std::move(w);
          res.best_residual = 0;
          return false;
        }
      points.back() = std::move(s.x);
    }
    if (node.bound <= budget.margin)
      open.push({node.bound, id});
    return true;
  };

  if (!add_node(rel.root_box(), std::nullopt))
    return res;
  auto finish_refuted = [&]() {
    Rational best = 1;
    for (const auto &n : cert.nodes)
      if (!n.branch_var && !n.infeasible && n.bound < best)
        best = n.bound;
    cert.bound = best;
    res.status = BBStatus::Refuted;
    res.certificate = std::move(cert);
  };
  while (!open.empty()) {
    if (res.nodes + 2 > budget.max_nodes || (deadline && Clock::now() > *deadline)) {
      res.status = BBStatus::Exhausted;
      res.lower_bound = open.top().bound;
      return res;
    }
    Open top = open.top();
    open.pop();
    const std::size_t id = top.id;
    const Box box = boxes[id];
    std::size_t f = points[id].empty() ? 0 : rel.choose_branch(points[id], box);
    if (points[id].empty()) {
      Rational width = -1;
      for (std::size_t g = 0; g < rel.num_factors(); ++g)
        if (box.hi[g] - box.lo[g] > width) {
          width = box.hi[g] - box.lo[g];
          f = g;
        }
    }
    double at = points[id].empty() ? std::nan("") : points[id][rel.lp_var(f)];
    Rational s = split_point(at, box.lo[f], box.hi[f]);
    cert.nodes[id].branch_var = f;
    cert.nodes[id].split = s;
    cert.nodes[id].multipliers.clear();
    points[id].clear();
    points[id].shrink_to_fit();
    Box low = box, high = box;
    low.hi[f] = s;
    high.lo[f] = s;
    cert.nodes[id].child_low = cert.nodes.size();
    if (!add_node(std::move(low), id))
      return res;
    cert.nodes[id].child_high = cert.nodes.size();
    if (!add_node(std::move(high), id))
      return res;
  }
  finish_refuted();
  return res;
}

std::optional<Rational> verify_branch_bound(const CommMatrix &c, const CommMatrix &d,
                                            const BBCertificate &cert) {
  if (cert.nodes.empty())
    return std::nullopt;
  const Relaxation rel(c, d, cert.form);
  std::vector<bool> seen(cert.nodes.size(), false);
  std::optional<Rational> least;
  std::vector<std::pair<std::size_t, Box>> stack{{0, rel.root_box()}};
  if (cert.nodes[0].parent)
    return std::nullopt;
  while (!stack.empty()) {
    auto [id, box] = std::move(stack.back());
    stack.pop_back();
    if (id >= cert.nodes.size() || seen[id])
      return std::nullopt;
    seen[id] = true;
    const BBNode &n = cert.nodes[id];
    if (n.branch_var) {
      const std::size_t f = *n.branch_var;
      if (f >= rel.num_factors() || !(n.split > box.lo[f] && n.split < box.hi[f]))
        return std::nullopt;
      for (std::size_t child : {n.child_low, n.child_high})
        if (child >= cert.nodes.size() || cert.nodes[child].parent != id)
          return std::nullopt;
      Box low = box, high = box;
      low.hi[f] = n.split;
      high.lo[f] = n.split;
      stack.emplace_back(n.child_low, std::move(low));
      stack.emplace_back(n.child_high, std::move(high));
      continue;
    }
    LpQ lp = rel.build(box);
    if (n.multipliers.size() != lp.constraints.size())
      return std::nullopt;
    auto b = lp::lagrangian_bound(lp, n.multipliers, !n.infeasible);
    if (!b || *b <= 0)
      return std::nullopt;
    if (!n.infeasible && (!least || *b < *least))
      least = *b;
  }
  for (bool s : seen)
    if (!s)
      return std::nullopt;
  return least ? *least : Rational(1);
}

} // namespace commtask
