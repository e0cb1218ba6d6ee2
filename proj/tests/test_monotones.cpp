#include "commtask/clique.hpp"
#include "commtask/families.hpp"
#include "commtask/monotones.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace commtask;
using testing_support::halves;
using testing_support::q;

namespace {

const CommMatrix K = halves({{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}});
const CommMatrix K_minus = halves({{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}});
const CommMatrix B{{q(2, 3), q(1, 3), 0}, {0, q(2, 3), q(1, 3)}, {q(1, 3), 0, q(2, 3)}};
const CommMatrix D_table{{1, 0, 0}, {0, q(1, 2), q(1, 2)}, {0, 0, 1}};
const CommMatrix iota_example{{q(1, 2), q(1, 2), 0, 0, 0},
                              {q(1, 3), 0, q(1, 3), q(1, 3), 0},
                              {0, q(1, 2), 0, 0, q(1, 2)},
                              {0, 0, 0, q(1, 2), q(1, 2)}};

} // namespace

TEST_CASE("rank") {
  CHECK(rank(make_G(4, 2)) == 4);
  CHECK(rank(make_uniform(5)) == 1);
  CHECK(rank(K) == 3);
  CHECK(rank(make_A(3)) == 3);
  CHECK(rank(QMatrix(2, 3)) == 0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    // Few distinct weights make rank deficiency common.
    CommMatrix c = testing_support::random_stochastic(rng, 1 + trial % 6, 1 + trial / 6 % 6, 2, 0.5);
    CHECK(rank(c) == testing_support::oracle_rank(c.matrix()));
  }
}

TEST_CASE("lambda_max and lambda_min") {
  CommMatrix d = make_D(3, q(1, 3));
  CHECK(lambda_max(d) == 2);
  CHECK(lambda_min(d) == q(-1, 2));
  for (int n = 2; n <= 5; ++n) {
    CHECK(lambda_max(make_identity(n)) == n);
    CHECK(lambda_min(make_identity(n)) == 0);
  }
  // [[1]] is a trivial measurement.
  CHECK(lambda_min(make_identity(1)) == -1);
  CHECK(lambda_max(D_table) == q(5, 2));
  // Any matrix with all rows equal has lambda_min = -1.
  CHECK(lambda_min(CommMatrix{{q(1, 5), q(4, 5)}, {q(1, 5), q(4, 5)}}) == -1);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    CommMatrix c = testing_support::random_stochastic(rng, 1 + trial % 5, 1 + trial / 5 % 5);
    CHECK(lambda_max(c) == testing_support::oracle_lambda_max(c));
    CHECK(lambda_min(c) == testing_support::oracle_lambda_min(c));
    CHECK(lambda_min(c) >= -1);
    CHECK(lambda_min(c) <= 0);
  }
}

TEST_CASE("maximum clique") {
  // 5-cycle: maximum clique size 2, lexicographically first {0, 1}.
  Adjacency c5(5, std::vector<bool>(5, false));
  for (std::size_t i = 0; i < 5; ++i) {
    c5[i][(i + 1) % 5] = c5[(i + 1) % 5][i] = true;
  }
  CHECK(maximum_clique(c5) == std::vector<std::size_t>{0, 1});
  CHECK(maximum_clique(Adjacency{}).empty());

  std::mt19937_64 rng(4);
  std::bernoulli_distribution edge(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial % 10);
    Adjacency adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        adj[i][j] = adj[j][i] = edge(rng);
    std::size_t best = 0;
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if ((mask >> i & 1) && (mask >> j & 1) && !adj[i][j])
            ok = false;
      if (ok)
        best = std::max(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
    }
    auto clique = maximum_clique(adj);
    CHECK(clique.size() == best);
    for (std::size_t a = 0; a < clique.size(); ++a)
      for (std::size_t b = a + 1; b < clique.size(); ++b)
        CHECK(adj[clique[a]][clique[b]]);
  }
}

TEST_CASE("iota") {
  for (int n = 1; n <= 5; ++n)
    CHECK(iota(make_identity(n)) == n);
  CHECK(iota(B) == 1);
  CHECK(iota(make_G(4, 2)) == 2);
  CHECK(iota(iota_example) == 2);
  CHECK(orthogonal_rows(iota_example) == std::vector<std::size_t>{0, 3});
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    CommMatrix c = testing_support::random_stochastic(rng, 1 + trial % 7, 2 + trial / 7 % 5, 3, 0.6);
    CHECK(iota(c) == testing_support::oracle_iota(c));
  }
}

TEST_CASE("iota witness reproduces the two known decompositions") {
  StochasticPair first = iota_witness(iota_example, {0, 3});
  CHECK(first.left == CommMatrix{{1, 0, 0, 0}, {0, 0, 0, 1}});
  CHECK(first.right == CommMatrix{{1, 0}, {1, 0}, {q(1, 2), q(1, 2)}, {0, 1}, {0, 1}});
  CHECK(verifies(first, make_identity(2), iota_example));

  StochasticPair second = iota_witness(iota_example, {1, 2});
  CHECK(second.left == CommMatrix{{0, 1, 0, 0}, {0, 0, 1, 0}});
  CHECK(second.right == CommMatrix{{1, 0}, {0, 1}, {1, 0}, {1, 0}, {0, 1}});
  CHECK(verifies(second, make_identity(2), iota_example));

  StochasticPair id = iota_witness(make_identity(3));
  CHECK(id.left == make_identity(3));
  CHECK(id.right == make_identity(3));

  CHECK_THROWS_AS(iota_witness(iota_example, {0, 1}), std::invalid_argument);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    CommMatrix c = testing_support::random_stochastic(rng, 1 + trial % 6, 1 + trial / 6 % 6, 3, 0.6);
    StochasticPair w = iota_witness(c);
    CHECK(verifies(w, make_identity(iota(c)), c));
  }
}

TEST_CASE("nonnegative rank") {
  auto g = nneg_rank(make_G(4, 2));
  CHECK(g.lo == 4);
  CHECK(g.hi == 4);
  auto k = nneg_rank(K);
  CHECK(k.lo == 4);
  CHECK(k.hi == 4);
  CHECK(k.provenance == "decided");
  auto d = nneg_rank(make_D(3, q(1, 3)));
  CHECK(d.exact());
  CHECK(d.lo == 3);

  auto s = nneg_rank_shortcut(make_uniform(4));
  REQUIRE(s);
  CHECK(s->lo == 1);
  CHECK(s->provenance == "rank<=2");
  s = nneg_rank_shortcut(K_minus);
  REQUIRE(s);
  CHECK(s->lo == 3);
  CHECK(s->provenance == "min-dim<=3");
  s = nneg_rank_shortcut(make_identity(5));
  REQUIRE(s);
  CHECK(s->provenance == "full-rank");
  CHECK_FALSE(nneg_rank_shortcut(K));
}

TEST_CASE("nonnegative rank interval on a tiny budget") {
  Budget tiny;
  tiny.time_ms = 1;
  tiny.witness_starts = 1;
  tiny.alternations = 1;
  tiny.max_nodes = 1;
  auto k = nneg_rank(K, tiny);
  CHECK(k.lo >= 3);
  CHECK(k.hi == 4);
  CHECK(k.lo <= 4);
}

TEST_CASE("monotone reports") {
  auto r = report(K_minus);
  CHECK(r.rank == 3);
  CHECK(r.nneg_rank.lo == 3);
  CHECK(r.nneg_rank.hi == 3);
  CHECK(r.psd.lower == 3);
  CHECK(r.psd.upper == 3);
  CHECK(r.lambda_min == 0);
  CHECK(r.iota == 2);
  CHECK(r.lambda_max == 2);

  auto v = report(make_uniform(2));
  CHECK(v.rank == 1);
  CHECK(v.nneg_rank.hi == 1);
  CHECK(v.psd.lower == 1);
  CHECK(v.psd.upper == 1);
  CHECK(v.lambda_min == -1);
  CHECK(v.lambda_max == 1);
  CHECK(v.iota == 1);

  auto i4 = report(make_identity(4));
  CHECK(i4.rank == 4);
  CHECK(i4.nneg_rank.lo == 4);
  CHECK(i4.psd.upper == 4);
  CHECK(i4.psd.lower >= 2);
  CHECK(i4.iota == 4);
  CHECK(i4.lambda_max == 4);

  auto j = to_json(r);
  CHECK(j["rank"] == 3);
  CHECK(j["nneg_rank"]["lo"] == 3);
  CHECK(j["psd_rank"]["hi"] == 3);
  CHECK(j["lambda_max"] == "2");
  CHECK(j["lambda_min"] == "0");
}
