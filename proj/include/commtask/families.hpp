#pragma once

#include "commtask/matrix.hpp"

#include <optional>
#include <string>

namespace commtask {

enum class Family { Identity, Uniform, D, G, A };

/// Parameters of a named generator. `eps` is used by D only, `t` by G only.
struct FamilyParams {
  Family family = Family::Identity;
  int n = 1;
  Rational eps = 0;
  int t = 1;
};

/// n x n identity: n perfectly distinguishable states.
CommMatrix make_identity(int n);
/// n x n matrix with 1/n everywhere.
CommMatrix make_uniform(int n);
/// Diagonal 1 - eps, off-diagonal eps/(n-1). Requires n >= 2, eps in [0,1].
CommMatrix make_D(int n, const Rational &eps);
/// choose(n,t) x n matrix whose rows are the distinct arrangements of n-t
/// entries 1/(n-t) and t zeros, in decreasing lexicographic order of the
/// support pattern. Requires n >= 2 and 1 <= t <= n-1.
CommMatrix make_G(int n, int t);
/// Antidistinguishability matrix, make_G(n, 1).
CommMatrix make_A(int n);

CommMatrix make_family(const FamilyParams &p);
Family parse_family(const std::string &name);
std::string family_name(Family f);

/// Parameter of D_{n,eps} D_{n,mu}: eps + mu - n/(n-1) eps mu.
Rational d_compose(int n, const Rational &eps, const Rational &mu);

/// If m equals D_{n,eps} for some eps, returns eps.
std::optional<Rational> recover_D_parameter(const CommMatrix &m);

} // namespace commtask
