#pragma once

#include "commtask/branch_bound.hpp"
#include "commtask/budget.hpp"
#include "commtask/matrix.hpp"
#include "commtask/witness_search.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace commtask {

enum class Outcome { Majorizes, NotMajorizes, Unknown };

/// f(C) > f(D) for a monotone f. For the rank bounds, value_on_c is a lower
/// bound for C and value_on_d an upper bound for D.
struct MonotoneSeparation {
  std::string name; // rank, lambda_max, lambda_min, iota, nneg_rank, psd_rank
  Rational value_on_c;
  Rational value_on_d;
};

struct ExactWitness {
  StochasticPair pair;
};

struct BranchBoundBound {
  Rational bound;
  std::size_t nodes = 0;
  std::shared_ptr<const BBCertificate> tree;
};

struct ClosedForm {
  std::string rule;
};

using Certificate =
    std::variant<std::monostate, MonotoneSeparation, ExactWitness, BranchBoundBound, ClosedForm>;

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  Certificate certificate;
  /// Always present for Majorizes.
  std::optional<StochasticPair> witness;
  /// Best residual found (Unknown).
  double residual = 1.0;
  /// Certified global lower bound on the residual when branch and bound ran
  /// out of budget.
  std::optional<Rational> lower_bound;
  std::size_t nodes = 0;
  double elapsed_ms = 0;
};

/// First monotone with f(C) > f(D), in the order rank, lambda_max,
/// lambda_min, iota, nonnegative rank, psd rank. The two ranks use only
/// certified cheap bounds (shortcuts, library witnesses), never heuristics.
std::optional<MonotoneSeparation> screen(const CommMatrix &c, const CommMatrix &d);

/// Recomputes both monotone values and checks the strict inequality.
bool verify_separation(const CommMatrix &c, const CommMatrix &d, const MonotoneSeparation &s);

/// Branch and bound only; needs a positive budget.
Verdict decide_certified(const CommMatrix &c, const CommMatrix &d, const Budget &budget = {});

/// Full pipeline: trivial cases, identity targets, the closed-form D-family
/// rule, monotone screen, witness search, branch and bound.
Verdict decide(const CommMatrix &c, const CommMatrix &d, const Budget &budget = {});

/// Re-checks a verdict's certificate from scratch.
bool verify_verdict(const CommMatrix &c, const CommMatrix &d, const Verdict &v);

enum class Equivalence { Equivalent, NotEquivalent, Unknown };

struct EquivalenceVerdict {
  Equivalence outcome = Equivalence::Unknown;
  Verdict c_below_d;
  Verdict d_below_c;
};

EquivalenceVerdict equivalent(const CommMatrix &c, const CommMatrix &d, const Budget &budget = {});

/// Does D_{n,eps} majorize D_{n,mu}?
bool decide_D_family(int n, const Rational &eps, const Rational &mu);

/// The lambda with L_lambda D_{n,eps} = D_{n,mu}, L_lambda = lambda I + (1-lambda) D_{n,1}.
Rational d_family_lambda(int n, const Rational &eps, const Rational &mu);

/// (L_lambda, I) with L_lambda D_{n,eps} = D_{n,mu}. Throws
/// std::invalid_argument when D_{n,eps} does not majorize D_{n,mu}.
StochasticPair d_family_witness(int n, const Rational &eps, const Rational &mu);

/// Noise parameters eps for which D_{n,eps} has a d-dimensional quantum
/// implementation, as an interval [lo, hi]; `exact` is false when only an
/// outer bound is known.
struct QuditInterval {
  Rational lo;
  Rational hi;
  bool exact = true;
};

QuditInterval qudit_D_interval(int n, int d);

std::string outcome_name(Outcome o);

} // namespace commtask
