#include "commtask/quantum.hpp"

#include "commtask/families.hpp"
#include "commtask/monotones.hpp"
#include "commtask/psd_factor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace commtask {

namespace {

bool kernel_rule(const CommMatrix &c) {
  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    bool dup = false;
    for (auto k : distinct)
      if (std::equal(c.row(i).begin(), c.row(i).end(), c.row(k).begin())) {
        dup = true;
        break;
      }
    if (!dup)
      distinct.push_back(i);
  }
  for (std::size_t j = 0; j < c.cols(); ++j) {
    std::size_t zeros = 0, nonzeros = 0;
    for (auto i : distinct)
      (c(i, j) == 0 ? zeros : nonzeros)++;
    if (zeros >= 2 && nonzeros >= 1)
      return true;
  }
  return false;
}

// A qubit 3x3 matrix with 2/3 on the diagonal is forced to be D_{3,1/3};
// columns may be permuted first.
bool trace_rigidity_rule(const CommMatrix &c) {
  if (c.rows() != 3 || c.cols() != 3)
    return false;
  const CommMatrix d = make_D(3, Rational(1, 3));
  std::vector<std::size_t> perm = {0, 1, 2};
  do {
    bool diag = true;
    for (std::size_t i = 0; i < 3; ++i)
      if (c(i, perm[i]) != Rational(2, 3))
        diag = false;
    if (!diag)
      continue;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (c(i, perm[j]) != d(i, j))
          return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

} // namespace

PsdLower psd_lower(const CommMatrix &c) {
  std::vector<std::pair<std::string, int>> fired;
  fired.emplace_back("sqrt-rank", static_cast<int>(ceil_sqrt(rank(c))));
  fired.emplace_back("lambda-max", static_cast<int>(ceil(lambda_max(c)).get_si()));
  if (kernel_rule(c))
    fired.emplace_back("kernel", 3);
  if (trace_rigidity_rule(c))
    fired.emplace_back("trace-rigidity", 3);
  PsdLower out;
  for (const auto &f : fired)
    out.value = std::max(out.value, f.second);
  for (const auto &f : fired)
    if (f.second == out.value)
      out.rules.push_back(f.first);
  return out;
}

std::optional<ScaledEmbedding> find_scaled_submatrix(const CommMatrix &d, const CommMatrix &c) {
  const std::size_t a = d.rows(), b = d.cols(), n = c.rows(), m = c.cols();
  if (a > n || b > m)
    return std::nullopt;
  std::vector<std::size_t> cols;
  std::vector<bool> used_col(m, false);
  std::optional<ScaledEmbedding> found;
  std::size_t leaves = 0;
  const std::size_t max_leaves = 200000;

  auto match_rows = [&]() -> bool {
    std::size_t j0 = 0;
    while (d(0, j0) == 0)
      ++j0;
    for (std::size_t r0 = 0; r0 < n; ++r0) {
      const Rational &cv = c(r0, cols[j0]);
      if (cv == 0)
        continue;
      Rational t = cv / d(0, j0);
      std::vector<std::size_t> rows;
      std::vector<bool> used_row(n, false);
      bool ok = true;
      for (std::size_t i = 0; i < a && ok; ++i) {
        ok = false;
        for (std::size_t r = 0; r < n; ++r) {
          if (used_row[r])
            continue;
          bool eq = true;
          for (std::size_t j = 0; j < b && eq; ++j)
            eq = c(r, cols[j]) == t * d(i, j);
          if (eq) {
            rows.push_back(r);
            used_row[r] = true;
            ok = true;
            break;
          }
        }
      }
      if (ok) {
        found = ScaledEmbedding{std::move(rows), cols, t};
        return true;
      }
    }
    return false;
  };

  std::function<bool()> rec = [&]() -> bool {
    if (cols.size() == b) {
      ++leaves;
      return match_rows();
    }
    for (std::size_t q = 0; q < m; ++q) {
      if (used_col[q])
        continue;
      if (leaves >= max_leaves)
        return false;
      used_col[q] = true;
      cols.push_back(q);
      bool done = rec();
      cols.pop_back();
      used_col[q] = false;
      if (done)
        return true;
    }
    return false;
  };
  rec();
  return found;
}

PsdUpper psd_upper(const CommMatrix &c, int nneg_rank_hi, int lower, const Budget &budget) {
  PsdUpper out;
  out.value = nneg_rank_hi;
  out.methods = {"nneg-rank"};
  for (const auto &entry : witness_library()) {
    if (!find_scaled_submatrix(c, entry.target))
      continue;
    int dim = static_cast<int>(entry.model.dim);
    std::string tag = "library:" + entry.model.name;
    if (dim < out.value) {
      out.value = dim;
      out.methods = {tag};
    } else if (dim == out.value) {
      out.methods.push_back(tag);
    }
  }
  if (budget.psd_heuristic) {
    PsdFactorOptions opts;
    opts.starts = budget.psd_starts;
    opts.tol = budget.psd_tol;
    opts.seed = budget.seed;
    for (int k = std::max(lower, 1); k < out.value; ++k) {
      if (auto f = psd_factorize(c, static_cast<std::size_t>(k), opts)) {
        out.value = static_cast<int>(f->model.dim);
        out.methods = {"heuristic"};
        out.witness = NumericWitness{std::move(f->model), f->residual};
        out.certified = false;
        break;
      }
    }
  }
  return out;
}

PsdBounds quantum_dim_bounds(const CommMatrix &c, int nneg_rank_hi, const Budget &budget) {
  PsdLower lo = psd_lower(c);
  PsdUpper hi = psd_upper(c, nneg_rank_hi, lo.value, budget);
  if (hi.value < lo.value)
    throw std::logic_error("psd rank bounds crossed: lower " + std::to_string(lo.value) +
                           " > upper " + std::to_string(hi.value));
  PsdBounds b;
  b.lower = lo.value;
  b.upper = hi.value;
  b.lambda_max_bound = lambda_max(c);
  for (auto &r : lo.rules)
    b.methods.push_back("lower:" + r);
  for (auto &m : hi.methods)
    b.methods.push_back("upper:" + m);
  b.numeric_witness = std::move(hi.witness);
  b.certified_upper = hi.certified;
  return b;
}

PsdBounds quantum_dim_bounds(const CommMatrix &c, const Budget &budget) {
  return quantum_dim_bounds(c, nneg_rank(c, budget).hi, budget);
}

NnegRank classical_dim(const CommMatrix &c, const Budget &budget) { return nneg_rank(c, budget); }

std::optional<std::string> qubit_screen(const CommMatrix &c) {
  if (lambda_max(c) > 2)
    return "lambda-max";
  if (c.rows() == c.cols()) {
    Rational tr = 0;
    for (std::size_t i = 0; i < c.rows(); ++i)
      tr += c(i, i);
    if (tr > 2)
      return "trace";
  }
  PsdLower lo = psd_lower(c);
  if (lo.value >= 3)
    return "psd-lower:" + lo.rules.front();
  return std::nullopt;
}

std::optional<int> scaled_submatrix_bound(const CommMatrix &d, const CommMatrix &c,
                                          const Budget &budget) {
  if (!find_scaled_submatrix(d, c))
    return std::nullopt;
  return quantum_dim_bounds(c, budget).upper;
}

} // namespace commtask
