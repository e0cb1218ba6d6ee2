#include "commtask/branch_bound.hpp"
#include "commtask/families.hpp"
#include "commtask/majorization.hpp"
#include "commtask/monotones.hpp"
#include "commtask/transforms.hpp"
#include "commtask/verdict_json.hpp"
#include "commtask/witness_search.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace commtask;
using testing_support::halves;
using testing_support::q;

namespace {

const CommMatrix K_plus =
    halves({{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}});
const CommMatrix K = halves({{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}});
const CommMatrix K_minus = halves({{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}});
const CommMatrix A_table{{1, 0, 0}, {q(1, 2), q(1, 2), 0}, {q(1, 2), 0, q(1, 2)}};
const CommMatrix C_table{{1, 0, 0}, {0, q(1, 2), q(1, 2)}, {q(1, 2), 0, q(1, 2)}};

Budget quick() {
  Budget b;
  b.time_ms = 20000;
  return b;
}

} // namespace

TEST_CASE("screen") {
  auto s = screen(K_plus, K);
  REQUIRE(s);
  CHECK(s->name == "rank");
  CHECK(s->value_on_c == 4);
  CHECK(s->value_on_d == 3);
  CHECK(verify_separation(K_plus, K, *s));

  // psd rank 3 for A against 2 for D_{3,1/3}.
  auto p = screen(A_table, make_D(3, q(1, 3)));
  REQUIRE(p);
  CHECK(p->name == "psd_rank");
  CHECK(p->value_on_c == 3);
  CHECK(p->value_on_d == 2);
  CHECK(verify_separation(A_table, make_D(3, q(1, 3)), *p));
  CHECK_FALSE(screen(make_D(3, q(1, 3)), A_table));

  CHECK_FALSE(screen(K, K));
  CHECK_FALSE(screen(C_table, K_minus));
  CHECK_FALSE(screen(K_minus, C_table));

  auto i = screen(make_identity(3), make_A(3));
  REQUIRE(i);
  CHECK(i->value_on_c > i->value_on_d);

  // A forged separation is rejected.
  CHECK_FALSE(verify_separation(K, K_plus, MonotoneSeparation{"rank", 4, 3}));
  CHECK_FALSE(verify_separation(K_plus, K, MonotoneSeparation{"rank", 3, 4}));
}

TEST_CASE("iota separates the identity from A_3") {
  CHECK(iota(make_identity(3)) == 3);
  CHECK(iota(make_A(3)) == 1);
  Verdict v = decide(make_identity(3), make_A(3));
  CHECK(v.outcome == Outcome::NotMajorizes);
  CHECK(verify_verdict(make_identity(3), make_A(3), v));
}

TEST_CASE("witness search") {
  auto g = search_witness(make_G(3, 1), make_G(4, 2), quick());
  REQUIRE(g.witness);
  CHECK(verifies(*g.witness, make_G(3, 1), make_G(4, 2)));

  StochasticPair known{
      CommMatrix{{0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1}},
      CommMatrix{{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK(verifies(known, make_G(3, 1), make_G(4, 2)));

  auto d = search_witness(make_D(3, q(1, 2)), make_D(3, q(1, 3)), quick());
  REQUIRE(d.witness);
  CHECK(verifies(*d.witness, make_D(3, q(1, 2)), make_D(3, q(1, 3))));

  auto self = search_witness(K, K, quick());
  REQUIRE(self.witness);
  CHECK(self.witness->left == make_identity(4));

  // No witness can exist here; the search must come back empty.
  auto none = search_witness(make_identity(3), make_A(3), quick());
  CHECK_FALSE(none.witness);
  CHECK(none.best_residual > 0);
}

TEST_CASE("exactify repairs or rejects") {
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2, 2);
  // The exact L solve repairs a wrong L ...
  auto fixed = exactify(CommMatrix{{q(1, 2), q(1, 2)}, {0, 1}}, make_identity(2), l, r);
  REQUIRE(fixed);
  CHECK(verifies(*fixed, CommMatrix{{q(1, 2), q(1, 2)}, {0, 1}}, make_identity(2)));
  // ... but nothing turns the uniform matrix into the identity.
  CHECK_FALSE(exactify(make_identity(2), make_uniform(2), l, r));
  CHECK(exactify(make_identity(2), make_identity(2), l, r));
}

TEST_CASE("decide pipeline") {
  Verdict a = decide(make_D(3, q(1, 6)), make_identity(3));
  CHECK(a.outcome == Outcome::Majorizes);
  REQUIRE(a.witness);
  CHECK(verifies(*a.witness, make_D(3, q(1, 6)), make_identity(3)));

  Verdict b = decide(make_A(3), make_identity(3));
  CHECK(b.outcome == Outcome::Majorizes);
  CHECK(verify_verdict(make_A(3), make_identity(3), b));

  Verdict c = decide(make_uniform(3), make_D(3, q(1, 4)));
  CHECK(c.outcome == Outcome::Majorizes);
  CHECK(verify_verdict(make_uniform(3), make_D(3, q(1, 4)), c));

  Verdict g = decide(make_G(3, 1), make_G(4, 2), quick());
  CHECK(g.outcome == Outcome::Majorizes);
  CHECK(verify_verdict(make_G(3, 1), make_G(4, 2), g));

  Verdict self = decide(K, K);
  CHECK(self.outcome == Outcome::Majorizes);

  Verdict up = decide(C_table, K_minus, quick());
  CHECK(up.outcome == Outcome::Majorizes);
  REQUIRE(up.witness);
  CHECK(verifies(*up.witness, C_table, K_minus));

  // K needs four classical dimensions.
  Verdict k3 = decide(K, make_identity(3), quick());
  CHECK(k3.outcome == Outcome::NotMajorizes);
  CHECK(std::holds_alternative<BranchBoundBound>(k3.certificate));
  CHECK(verify_verdict(K, make_identity(3), k3));
  Verdict k4 = decide(K, make_identity(4));
  CHECK(k4.outcome == Outcome::Majorizes);
}

TEST_CASE("branch and bound refutes K- below C") {
  Budget b = quick();
  BBResult r = branch_and_bound(K_minus, C_table, b);
  REQUIRE(r.status == BBStatus::Refuted);
  REQUIRE(r.certificate);
  CHECK(r.certificate->bound > 0);
  auto check = verify_branch_bound(K_minus, C_table, *r.certificate);
  REQUIRE(check);
  CHECK(*check == r.certificate->bound);

  // A certificate for one pair proves nothing about another.
  CHECK_FALSE(verify_branch_bound(C_table, K_minus, *r.certificate));

  // Tampering: drop a leaf's multipliers, or prune a subtree.
  BBCertificate broken = *r.certificate;
  for (auto &n : broken.nodes)
    if (!n.branch_var && !n.infeasible) {
      for (auto &y : n.multipliers)
        y = 0;
      break;
    }
  CHECK_FALSE(verify_branch_bound(K_minus, C_table, broken));
  BBCertificate pruned = *r.certificate;
  if (pruned.nodes.size() > 1) {
    pruned.nodes[0].branch_var.reset();
    CHECK_FALSE(verify_branch_bound(K_minus, C_table, pruned));
  }
}

TEST_CASE("never a false positive on K- below C") {
  for (long ms : {1L, 50L, 500L}) {
    Budget b;
    b.time_ms = ms;
    b.witness_starts = 4;
    Verdict v = decide(K_minus, C_table, b);
    CHECK(v.outcome != Outcome::Majorizes);
    if (v.outcome == Outcome::NotMajorizes)
      CHECK(verify_verdict(K_minus, C_table, v));
  }
  Budget no_bb;
  no_bb.use_branch_bound = false;
  CHECK(decide(K_minus, C_table, no_bb).outcome == Outcome::Unknown);
}

TEST_CASE("branch and bound finds witnesses too") {
  BBResult r = branch_and_bound(make_D(3, q(1, 2)), make_D(3, q(1, 3)), quick());
  CHECK(r.status == BBStatus::Witness);
  REQUIRE(r.witness);
  CHECK(verifies(*r.witness, make_D(3, q(1, 2)), make_D(3, q(1, 3))));
  CHECK(free_dims(K_minus, C_table) == 3 * 2 + 3 * 3);
}

TEST_CASE("verdict verification catches forged certificates") {
  Verdict v = decide(make_A(3), make_identity(3));
  REQUIRE(v.witness);
  Verdict forged = v;
  forged.witness->left = make_uniform(3);
  forged.certificate = ExactWitness{*forged.witness};
  CHECK_FALSE(verify_verdict(make_A(3), make_identity(3), forged));
  Verdict sep;
  sep.outcome = Outcome::NotMajorizes;
  sep.certificate = MonotoneSeparation{"lambda_max", 3, 2};
  CHECK_FALSE(verify_verdict(make_A(3), make_identity(3), sep));
}

TEST_CASE("equivalence") {
  auto a = equivalent(make_A(3), make_D(3, q(1)));
  CHECK(a.outcome == Equivalence::Equivalent);
  auto k = equivalent(K, K_minus, quick());
  CHECK(k.outcome == Equivalence::NotEquivalent);
  CHECK(k.c_below_d.outcome == Outcome::NotMajorizes);
  CHECK(k.d_below_c.outcome == Outcome::Majorizes);
  CHECK(equivalent(K, K).outcome == Equivalence::Equivalent);
}

TEST_CASE("every equivalence-preserving transform is recognised") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    CommMatrix c = testing_support::random_stochastic(rng, 3, 3);
    std::vector<Transformed> ts = {transform_permute(c, {2, 0, 1}, {1, 2, 0}),
                                   transform_duplicate_row(c, 1), transform_add_zero_column(c),
                                   transform_add_convex_row(c, {q(1, 3), q(2, 3), 0}),
                                   transform_split_column(c, 2, {q(1, 4), q(3, 4)})};
    for (const auto &t : ts) {
      auto e = equivalent(c, t.matrix, quick());
      CHECK(e.outcome == Equivalence::Equivalent);
      CHECK(verify_verdict(c, t.matrix, e.c_below_d));
      CHECK(verify_verdict(t.matrix, c, e.d_below_c));
    }
  }
}

TEST_CASE("composed witnesses are witnesses") {
  CommMatrix a = make_D(3, q(2, 3)), b = make_D(3, q(1, 3)), c = make_D(3, 0);
  Verdict ab = decide(a, b), bc = decide(b, c);
  REQUIRE(ab.witness);
  REQUIRE(bc.witness);
  CHECK(verifies(compose(*ab.witness, *bc.witness), a, c));

  Verdict g1 = decide(make_G(3, 1), make_G(4, 2), quick());
  Verdict g2 = decide(make_G(4, 2), make_identity(4), quick());
  REQUIRE(g1.witness);
  REQUIRE(g2.witness);
  CHECK(verifies(compose(*g1.witness, *g2.witness), make_G(3, 1), make_identity(4)));
}

TEST_CASE("D family closed form") {
  CHECK(decide_D_family(3, 0, 1));
  CHECK_FALSE(decide_D_family(3, 1, q(1, 3)));
  CHECK(decide_D_family(3, q(2, 3), q(2, 3)));
  for (int k = 0; k <= 12; ++k)
    CHECK(decide_D_family(3, 1, q(k, 12)) == (q(k, 12) >= q(1, 2)));

  // Solving 1 - lambda (1 - eps) - (1 - lambda) eps / 2 = 1/2 at eps = 1/3
  // by hand gives lambda = 2/3.
  CHECK(d_family_lambda(3, q(1, 3), q(1, 2)) == q(2, 3));
  auto w = d_family_witness(3, q(1, 3), q(1, 2));
  CHECK(w.left == make_D(3, q(1, 3)));
  CHECK(multiply(w.left, make_D(3, q(1, 3))) == make_D(3, q(1, 2)));

  CHECK(d_family_lambda(4, q(1, 5), q(1, 5)) == 1);
  CHECK(d_family_witness(4, q(1, 5), q(1, 5)).left == make_identity(4));
  CHECK(d_family_lambda(3, 0, 1) == 0);
  CHECK(d_family_witness(3, 0, 1).left == make_D(3, 1));
  CHECK_THROWS_AS(d_family_witness(3, 1, q(1, 3)), std::invalid_argument);

  // decide never contradicts the closed form.
  for (int n = 3; n <= 4; ++n)
    for (int a = 0; a <= 6; ++a)
      for (int c = 0; c <= 6; ++c) {
        Rational eps = q(a, 6), mu = q(c, 6);
        Verdict v = decide(make_D(n, mu), make_D(n, eps));
        CHECK(v.outcome == (decide_D_family(n, eps, mu) ? Outcome::Majorizes
                                                         : Outcome::NotMajorizes));
        CHECK(verify_verdict(make_D(n, mu), make_D(n, eps), v));
      }
}

TEST_CASE("qudit D intervals") {
  auto a = qudit_D_interval(3, 2);
  CHECK(a.lo == q(1, 3));
  CHECK(a.hi == 1);
  CHECK(a.exact);
  auto b = qudit_D_interval(2, 2);
  CHECK(b.lo == 0);
  CHECK(b.hi == 1);
  auto c = qudit_D_interval(10, 2);
  CHECK(c.lo == q(9, 10));
  CHECK(c.hi == q(9, 10));
  auto d = qudit_D_interval(4, 2);
  CHECK(d.lo == q(1, 2));
  CHECK(d.exact);
  auto e = qudit_D_interval(7, 3);
  CHECK(e.lo == q(4, 7));
  CHECK_FALSE(e.exact);
}

TEST_CASE("verdict JSON") {
  Verdict v = decide(make_A(3), make_identity(3));
  auto j = to_json(v);
  CHECK(j["outcome"] == "Majorizes");
  CHECK(j["witness"]["L"].is_array());
  Verdict s = decide(K_plus, K);
  auto js = to_json(s);
  CHECK(js["outcome"] == "NotMajorizes");
  CHECK(js["certificate"]["type"] == "monotone");
  CHECK(js["certificate"]["name"] == "rank");
  CHECK(js["certificate"]["value_on_c"] == "4");
  CHECK(js["witness"].is_null());
}
