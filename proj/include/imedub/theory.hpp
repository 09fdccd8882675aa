#pragma once

#include <string>
#include <vector>

#include "imedub/bandit.hpp"

namespace imedub {

/// Computable constants of a configuration.
struct TheoryReport {
    /// sum over suboptimal neighbours a of a* of gap_a / KL(mu_a, mu*).
    double c_nu{0.0};
    /// Half the smallest gap between two distinct arms' means. Zero when two
    /// arms share a mean.
    double epsilon_nu{0.0};
    ArmIndex optimal_arm{0};
    std::vector<ArmIndex> optimal_neighbors;
    std::vector<double> gaps;
    /// KL(mu_a, mu*) for each entry of optimal_neighbors.
    std::vector<double> neighbor_kl;
    std::vector<std::string> warnings;
};

TheoryReport lower_bound_constant(const BanditConfig& config);

double epsilon_nu(const BanditConfig& config);

/// Smallest alpha with KL(mu_a + eps, mu* - eps) <= KL(mu_a, mu*) / (1 + alpha)
/// for every suboptimal arm a. Requires 0 < eps < epsilon_nu(config).
double alpha_nu(const BanditConfig& config, double eps);

/// (1 + alpha_nu(eps)) log(horizon) / KL(mu_a, mu*): the leading term of the
/// pull-count bound for a neighbour `arm` of the optimum.
double pull_bound_leading_term(const BanditConfig& config, ArmIndex arm, double eps, double horizon);

}  // namespace imedub
