#include "commtask/majorization.hpp"

#include "commtask/families.hpp"
#include "commtask/monotones.hpp"
#include "commtask/quantum.hpp"

#include <algorithm>

namespace commtask {

namespace {

using Clock = std::chrono::steady_clock;

struct IntRange {
  int lo, hi;
};

IntRange cheap_nneg_rank(const CommMatrix &c) {
  if (auto s = nneg_rank_shortcut(c))
    return {s->lo, s->hi};
  return {std::max(rank(c), static_cast<int>(ceil(lambda_max(c)).get_si())),
          static_cast<int>(std::min(c.rows(), c.cols()))};
}

int cheap_psd_upper(const CommMatrix &c) {
  Budget b;
  b.psd_heuristic = false;
  return psd_upper(c, cheap_nneg_rank(c).hi, psd_lower(c).value, b).value;
}

Rational monotone_value(const std::string &name, const CommMatrix &c) {
  if (name == "rank")
    return rank(c);
  if (name == "lambda_max")
    return lambda_max(c);
  if (name == "lambda_min")
    return lambda_min(c);
  if (name == "iota")
    return iota(c);
  throw std::invalid_argument("unknown monotone " + name);
}

bool is_identity(const CommMatrix &d) {
  return d.rows() == d.cols() && d.matrix() == QMatrix::identity(d.rows());
}

// Row r followed by unit rows on the first column, as a k x m matrix.
CommMatrix stack_rows(const std::vector<std::vector<Rational>> &rows, std::size_t k,
                      std::size_t m) {
  QMatrix q(k, m);
  for (std::size_t i = 0; i < k; ++i) {
    if (i < rows.size())
      for (std::size_t j = 0; j < m; ++j)
        q(i, j) = rows[i][j];
    else
      q(i, 0) = 1;
  }
  return CommMatrix(std::move(q));
}

std::vector<Rational> row_vec(const CommMatrix &c, std::size_t i) {
  return {c.row(i).begin(), c.row(i).end()};
}

// Exact factorisation C = L I_k R when one of the nonnegative-rank shortcuts
// puts the nonnegative rank at most k.
std::optional<StochasticPair> identity_target_witness(const CommMatrix &c, std::size_t k) {
  const std::size_t n = c.rows(), m = c.cols();
  if (m <= k) {
    QMatrix l(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        l(i, j) = c(i, j);
    std::vector<std::vector<Rational>> units;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Rational> u(m, Rational(0));
      u[j] = 1;
      units.push_back(std::move(u));
    }
    return StochasticPair{CommMatrix(std::move(l)), stack_rows(units, k, m)};
  }
  if (n <= k) {
    QMatrix l(n, k);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      l(i, i) = 1;
      rows.push_back(row_vec(c, i));
    }
    return StochasticPair{CommMatrix(std::move(l)), stack_rows(rows, k, m)};
  }
  const int r = rank(c);
  if (r == 1 && k >= 1) {
    QMatrix l(n, k);
    for (std::size_t i = 0; i < n; ++i)
      l(i, 0) = 1;
    return StochasticPair{CommMatrix(std::move(l)), stack_rows({row_vec(c, 0)}, k, m)};
  }
  if (r == 2 && k >= 2) {
    // All rows lie on one segment: parametrise by a coordinate that varies.
    std::size_t other = 1;
    while (std::equal(c.row(other).begin(), c.row(other).end(), c.row(0).begin()))
      ++other;
    std::size_t col = 0;
    while (c(other, col) == c(0, col))
      ++col;
    const Rational span = c(other, col) - c(0, col);
    std::vector<Rational> s(n);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = (c(i, col) - c(0, col)) / span;
      if (s[i] < s[lo])
        lo = i;
      if (s[i] > s[hi])
        hi = i;
    }
    QMatrix l(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      Rational alpha = (s[hi] - s[i]) / (s[hi] - s[lo]);
      l(i, 0) = alpha;
      l(i, 1) = 1 - alpha;
    }
    return StochasticPair{CommMatrix(std::move(l)),
                          stack_rows({row_vec(c, lo), row_vec(c, hi)}, k, m)};
  }
  return std::nullopt;
}

Verdict majorizes(StochasticPair p, Certificate cert) {
  Verdict v;
  v.outcome = Outcome::Majorizes;
  v.certificate = std::move(cert);
  v.witness = std::move(p);
  v.residual = 0;
  return v;
}

Verdict separated(MonotoneSeparation s) {
  Verdict v;
  v.outcome = Outcome::NotMajorizes;
  v.certificate = std::move(s);
  return v;
}

Verdict from_branch_bound(BBResult r) {
  Verdict v;
  v.nodes = r.nodes;
  v.residual = r.best_residual;
  switch (r.status) {
  case BBStatus::Witness: {
    StochasticPair p = *r.witness;
    v = majorizes(p, ExactWitness{p});
    v.nodes = r.nodes;
    break;
  }
  case BBStatus::Refuted: {
    Rational bound = r.certificate->bound;
    v.outcome = Outcome::NotMajorizes;
    v.certificate = BranchBoundBound{
        bound, r.nodes, std::make_shared<const BBCertificate>(std::move(*r.certificate))};
    break;
  }
  case BBStatus::Exhausted:
    v.outcome = Outcome::Unknown;
    v.lower_bound = r.lower_bound;
    break;
  }
  return v;
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

} // namespace

std::string outcome_name(Outcome o) {
  switch (o) {
  case Outcome::Majorizes:
    return "Majorizes";
  case Outcome::NotMajorizes:
    return "NotMajorizes";
  case Outcome::Unknown:
    return "Unknown";
  }
  return "?";
}

std::optional<MonotoneSeparation> screen(const CommMatrix &c, const CommMatrix &d) {
  for (const char *name : {"rank", "lambda_max", "lambda_min", "iota"}) {
    Rational fc = monotone_value(name, c), fd = monotone_value(name, d);
    if (fc > fd)
      return MonotoneSeparation{name, fc, fd};
  }
  IntRange nc = cheap_nneg_rank(c), nd = cheap_nneg_rank(d);
  if (nc.lo > nd.hi)
    return MonotoneSeparation{"nneg_rank", nc.lo, nd.hi};
  int pc = psd_lower(c).value;
  int pd = cheap_psd_upper(d);
  if (pc > pd)
    return MonotoneSeparation{"psd_rank", pc, pd};
  return std::nullopt;
}

bool verify_separation(const CommMatrix &c, const CommMatrix &d, const MonotoneSeparation &s) {
  if (!(s.value_on_c > s.value_on_d))
    return false;
  if (s.name == "nneg_rank")
    return cheap_nneg_rank(c).lo >= s.value_on_c && cheap_nneg_rank(d).hi <= s.value_on_d;
  if (s.name == "psd_rank")
    return psd_lower(c).value >= s.value_on_c && cheap_psd_upper(d) <= s.value_on_d;
  try {
    return monotone_value(s.name, c) == s.value_on_c && monotone_value(s.name, d) == s.value_on_d;
  } catch (const std::invalid_argument &) {
    return false;
  }
}

Verdict decide_certified(const CommMatrix &c, const CommMatrix &d, const Budget &budget) {
  if (budget.time_ms <= 0 || budget.max_nodes == 0)
    throw std::invalid_argument("branch and bound needs a positive budget");
  auto t0 = Clock::now();
  Verdict v = from_branch_bound(
      branch_and_bound(c, d, budget, t0 + std::chrono::milliseconds(budget.time_ms)));
  v.elapsed_ms = ms_since(t0);
  return v;
}

Verdict decide(const CommMatrix &c, const CommMatrix &d, const Budget &budget) {
  auto t0 = Clock::now();
  auto deadline = t0 + std::chrono::milliseconds(std::max<std::int64_t>(budget.time_ms, 1));
  auto done = [&](Verdict v) {
    v.elapsed_ms = ms_since(t0);
    return v;
  };

  if (c == d)
    return done(majorizes(identity_pair(c.rows(), c.cols()),
                          ExactWitness{identity_pair(c.rows(), c.cols())}));

  if (is_identity(d)) {
    const std::size_t k = d.rows();
    if (auto p = identity_target_witness(c, k))
      return done(majorizes(*p, ExactWitness{*p}));
    if (auto s = nneg_rank_shortcut(c); s && static_cast<std::size_t>(s->lo) > k)
      return done(separated({"nneg_rank", s->lo, static_cast<long>(k)}));
  }

  if (budget.use_closed_form && c.rows() == d.rows() && c.cols() == d.cols()) {
    auto mu = recover_D_parameter(c);
    auto eps = recover_D_parameter(d);
    if (mu && eps) {
      const int n = static_cast<int>(c.rows());
      if (decide_D_family(n, *eps, *mu)) {
        auto p = d_family_witness(n, *eps, *mu);
        return done(majorizes(p, ClosedForm{"d-family-interval"}));
      }
      for (const char *name : {"lambda_max", "lambda_min"}) {
        Rational fc = monotone_value(name, c), fd = monotone_value(name, d);
        if (fc > fd)
          return done(separated({name, fc, fd}));
      }
    }
  }

  if (auto s = screen(c, d))
    return done(separated(*s));

  WitnessSearchResult ws = search_witness(c, d, budget, deadline);
  if (ws.witness)
    return done(majorizes(*ws.witness, ExactWitness{*ws.witness}));

  Verdict unknown;
  unknown.residual = ws.best_residual;
  if (budget.use_branch_bound && free_dims(c, d) <= budget.max_free_dims &&
      Clock::now() < deadline) {
    Verdict v = from_branch_bound(branch_and_bound(c, d, budget, deadline));
    v.residual = std::min(v.residual, ws.best_residual);
    if (v.outcome == Outcome::Majorizes)
      v.residual = 0;
    return done(std::move(v));
  }
  return done(std::move(unknown));
}

bool verify_verdict(const CommMatrix &c, const CommMatrix &d, const Verdict &v) {
  switch (v.outcome) {
  case Outcome::Majorizes:
    return v.witness && verifies(*v.witness, c, d);
  case Outcome::NotMajorizes:
    if (auto s = std::get_if<MonotoneSeparation>(&v.certificate))
      return verify_separation(c, d, *s);
    if (auto b = std::get_if<BranchBoundBound>(&v.certificate)) {
      if (!b->tree)
        return false;
      auto recomputed = verify_branch_bound(c, d, *b->tree);
      return recomputed && *recomputed == b->bound && b->bound > 0;
    }
    return false;
  case Outcome::Unknown:
    return !v.witness;
  }
  return false;
}

EquivalenceVerdict equivalent(const CommMatrix &c, const CommMatrix &d, const Budget &budget) {
  EquivalenceVerdict e;
  e.c_below_d = decide(c, d, budget);
  e.d_below_c = decide(d, c, budget);
  if (e.c_below_d.outcome == Outcome::NotMajorizes || e.d_below_c.outcome == Outcome::NotMajorizes)
    e.outcome = Equivalence::NotEquivalent;
  else if (e.c_below_d.outcome == Outcome::Majorizes && e.d_below_c.outcome == Outcome::Majorizes)
    e.outcome = Equivalence::Equivalent;
  else
    e.outcome = Equivalence::Unknown;
  return e;
}

namespace {

void check_d_params(int n, const Rational &eps, const Rational &mu) {
  if (n < 2)
    throw std::invalid_argument("D family needs n >= 2");
  if (eps < 0 || eps > 1 || mu < 0 || mu > 1)
    throw std::invalid_argument("D family parameters must lie in [0,1]");
}

} // namespace

bool decide_D_family(int n, const Rational &eps, const Rational &mu) {
  check_d_params(n, eps, mu);
  const Rational fixed = 1 - Rational(1, n);
  const Rational mirror = 1 - eps / (n - 1);
  if (eps <= fixed)
    return mu >= eps && mu <= mirror;
  return mu >= mirror && mu <= eps;
}

Rational d_family_lambda(int n, const Rational &eps, const Rational &mu) {
  check_d_params(n, eps, mu);
  // mu = 1 - eps/(n-1) - lambda (1 - n eps/(n-1)).
  const Rational slope = 1 - Rational(n, n - 1) * eps;
  if (slope == 0) {
    if (mu != eps)
      throw std::invalid_argument("D_{n,1-1/n} only reaches itself");
    return 1;
  }
  return (1 - eps / (n - 1) - mu) / slope;
}

StochasticPair d_family_witness(int n, const Rational &eps, const Rational &mu) {
  if (!decide_D_family(n, eps, mu))
    throw std::invalid_argument("D_{n," + to_string(eps) + "} does not majorize D_{n," +
                                to_string(mu) + "}");
  Rational lambda = d_family_lambda(n, eps, mu);
  // L_lambda = lambda I + (1 - lambda) D_{n,1} = D_{n, 1 - lambda}.
  StochasticPair p{make_D(n, 1 - lambda), make_identity(n)};
  if (!verifies(p, make_D(n, mu), make_D(n, eps)))
    throw std::logic_error("D-family witness failed exact verification");
  return p;
}

QuditInterval qudit_D_interval(int n, int d) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("qudit_D_interval needs n, d >= 1");
  if (n <= d)
    return {0, 1, true};
  if (n > d * d) {
    Rational v = 1 - Rational(1, n);
    return {v, v, true};
  }
  Rational lo = 1 - ratio(d, n);
  return {lo, 1, d == 2 && (n == 3 || n == 4)};
}

} // namespace commtask
