#include "commtask/monotones.hpp"

#include "commtask/clique.hpp"
#include "commtask/families.hpp"
#include "commtask/majorization.hpp"

#include <algorithm>

namespace commtask {

using nlohmann::json;

int rank(const QMatrix &m) {
  // Clear denominators row by row, then Bareiss elimination over the integers.
  std::vector<std::vector<Integer>> a(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer den = 1;
    for (const auto &x : m.row(i))
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j)
      a[i][j] = m(i, j).get_num() * (den / m(i, j).get_den());
  }
  int r = 0;
  Integer prev = 1;
  const std::size_t rows = m.rows();
  for (std::size_t col = 0; col < m.cols() && static_cast<std::size_t>(r) < rows; ++col) {
    std::size_t piv = rows;
    for (std::size_t i = static_cast<std::size_t>(r); i < rows; ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv == rows)
      continue;
    std::swap(a[piv], a[static_cast<std::size_t>(r)]);
    const auto &p = a[static_cast<std::size_t>(r)];
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) {
        a[i][j] = a[i][j] * p[col] - a[i][col] * p[j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = p[col];
    ++r;
  }
  return r;
}

int rank(const CommMatrix &c) { return rank(c.matrix()); }

Rational lambda_max(const CommMatrix &c) {
  Rational s = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    Rational best = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i)
      if (c(i, j) > best)
        best = c(i, j);
    s += best;
  }
  return s;
}

Rational lambda_min(const CommMatrix &c) {
  Rational s = 0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    Rational low = c(0, j);
    for (std::size_t i = 1; i < c.rows(); ++i)
      if (c(i, j) < low)
        low = c(i, j);
    s -= low;
  }
  return s;
}

namespace {

bool orthogonal(const CommMatrix &c, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < c.cols(); ++j)
    if (c(a, j) != 0 && c(b, j) != 0)
      return false;
  return true;
}

} // namespace

std::vector<std::size_t> orthogonal_rows(const CommMatrix &c) {
  Adjacency adj(c.rows(), std::vector<bool>(c.rows(), false));
  for (std::size_t a = 0; a < c.rows(); ++a)
    for (std::size_t b = a + 1; b < c.rows(); ++b)
      adj[a][b] = adj[b][a] = orthogonal(c, a, b);
  return maximum_clique(adj);
}

int iota(const CommMatrix &c) { return static_cast<int>(orthogonal_rows(c).size()); }

StochasticPair iota_witness(const CommMatrix &c, const std::vector<std::size_t> &rows) {
  if (rows.empty())
    throw std::invalid_argument("iota_witness: empty row set");
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a] >= c.rows())
      throw std::invalid_argument("iota_witness: row index out of range");
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      if (rows[a] == rows[b] || !orthogonal(c, rows[a], rows[b]))
        throw std::invalid_argument("iota_witness: rows " + std::to_string(rows[a]) + " and " +
                                    std::to_string(rows[b]) + " are not orthogonal");
  }
  const std::size_t k = rows.size();
  QMatrix left(k, c.rows());
  QMatrix right(c.cols(), k);
  for (std::size_t i = 0; i < k; ++i)
    left(i, rows[i]) = 1;
  for (std::size_t q = 0; q < c.cols(); ++q) {
    std::size_t owner = k;
    for (std::size_t i = 0; i < k; ++i)
      if (c(rows[i], q) != 0)
        owner = i;
    if (owner < k) {
      right(q, owner) = 1;
    } else {
      for (std::size_t i = 0; i < k; ++i)
        right(q, i) = Rational(1, static_cast<long>(k));
    }
  }
  return {CommMatrix(std::move(left)), CommMatrix(std::move(right))};
}

StochasticPair iota_witness(const CommMatrix &c) { return iota_witness(c, orthogonal_rows(c)); }

std::optional<NnegRank> nneg_rank_shortcut(const CommMatrix &c) {
  const int r = rank(c);
  const int small = static_cast<int>(std::min(c.rows(), c.cols()));
  if (r <= 2)
    return NnegRank{r, r, "rank<=2"};
  if (small <= 3)
    return NnegRank{r, r, "min-dim<=3"};
  if (r == small)
    return NnegRank{r, r, "full-rank"};
  return std::nullopt;
}

NnegRank nneg_rank(const CommMatrix &c, const Budget &budget) {
  if (auto s = nneg_rank_shortcut(c))
    return *s;
  int lo = std::max(rank(c), static_cast<int>(ceil(lambda_max(c)).get_si()));
  int hi = static_cast<int>(std::min(c.rows(), c.cols()));
  for (int k = lo; k < hi; ++k) {
    Verdict v = decide(c, make_identity(k), budget);
    if (v.outcome == Outcome::Majorizes)
      return NnegRank{k, k, "decided"};
    if (v.outcome == Outcome::Unknown)
      return NnegRank{lo, hi, "timeout at k=" + std::to_string(k)};
    lo = k + 1;
  }
  return NnegRank{hi, hi, "decided"};
}

MonotoneReport report(const CommMatrix &c, const Budget &budget) {
  MonotoneReport r;
  r.rank = rank(c);
  r.nneg_rank = nneg_rank(c, budget);
  r.psd = quantum_dim_bounds(c, r.nneg_rank.hi, budget);
  r.lambda_max = lambda_max(c);
  r.lambda_min = lambda_min(c);
  r.iota = iota(c);
  return r;
}

json to_json(const NnegRank &r) {
  return json{{"lo", r.lo}, {"hi", r.hi}, {"provenance", r.provenance}};
}

json to_json(const MonotoneReport &r) {
  json psd{{"lo", r.psd.lower},
           {"hi", r.psd.upper},
           {"lambda_max_bound", to_string(r.psd.lambda_max_bound)},
           {"methods", r.psd.methods},
           {"certified_upper", r.psd.certified_upper}};
  if (r.psd.numeric_witness)
    psd["numeric_residual"] = r.psd.numeric_witness->residual;
  return json{{"rank", r.rank},
              {"nneg_rank", to_json(r.nneg_rank)},
              {"psd_rank", std::move(psd)},
              {"lambda_max", to_string(r.lambda_max)},
              {"lambda_min", to_string(r.lambda_min)},
              {"iota", r.iota}};
}

} // namespace commtask
