#pragma once
/*
One-dimensional exponential families parameterised by their mean.

  Bernoulli      Theta = (0, 1)    KL(m, m') = m log(m/m') + (1-m) log((1-m)/(1-m'))
  Gaussian(s2)   Theta = R         KL(m, m') = (m' - m)^2 / (2 s2)
  Exponential    Theta = (0, inf)  KL(m, m') = log(m'/m) + m/m' - 1

Empirical means may sit on the boundary of Theta (a Bernoulli arm that only
ever returned 0). kl() accepts the closure of Theta and extends the closed
forms by continuity, returning +inf where the divergence blows up.
*/

#include <string>
#include <string_view>

#include "imedub/random.hpp"

namespace imedub {

enum class FamilyKind { Bernoulli, Gaussian, Exponential };

/// A reward family. `variance` is only meaningful for Gaussian and is shared
/// by every arm (known variance).
struct Family {
    FamilyKind kind{FamilyKind::Bernoulli};
    double variance{1.0};

    static Family bernoulli() { return {FamilyKind::Bernoulli, 1.0}; }
    static Family gaussian(double variance);
    static Family exponential() { return {FamilyKind::Exponential, 1.0}; }

    bool operator==(const Family&) const = default;
};

std::string_view to_string(FamilyKind kind);
FamilyKind family_kind_from_string(std::string_view name);
std::string describe(const Family& family);

namespace expfam {

/// True iff `mean` lies in the open mean domain of the family.
bool in_domain(const Family& family, double mean);

/// True iff `mean` lies in the closure of the mean domain.
bool in_closure(const Family& family, double mean);

/// Largest attainable mean (the closure's upper end); +inf if unbounded.
double domain_max(const Family& family);

/// KL(p(mu) || p(mu_prime)). Throws ParameterError outside the closure of
/// the domain; never returns NaN.
double kl(const Family& family, double mu, double mu_prime);

/// One draw from p(mu).
double sample(const Family& family, double mu, RandomStream& rng);

/// Variance of p(mu).
double variance(const Family& family, double mu);

/// sup of the family variance for means in [lo, hi].
double variance_sup(const Family& family, double lo, double hi);

inline constexpr double kInverseTolerance = 1e-10;
inline constexpr int kInverseMaxIterations = 200;

/// sup{ m >= mu_hat : KL(mu_hat, m) <= budget }, by bisection, capped at
/// domain_max(). Used by KL-UCB style indexes.
double kl_upper_inverse(const Family& family, double mu_hat, double budget);

}  // namespace expfam
}  // namespace imedub
