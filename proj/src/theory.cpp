#include "imedub/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "imedub/errors.hpp"

namespace imedub {

TheoryReport lower_bound_constant(const BanditConfig& config) {
    TheoryReport report;
    report.optimal_arm = config.optimal_arm();
    report.gaps = config.gaps();
    report.epsilon_nu = epsilon_nu(config);

    const double best = config.optimal_mean();
    for (ArmIndex a : config.graph().neighbors(report.optimal_arm)) {
        report.optimal_neighbors.push_back(a);
        const double divergence = expfam::kl(config.family(), config.means()[a], best);
        report.neighbor_kl.push_back(divergence);
        if (config.gap(a) > 0.0) report.c_nu += config.gap(a) / divergence;
    }

    if (report.epsilon_nu == 0.0) {
        report.warnings.emplace_back(
            "epsilon_nu = 0: some arms share a mean, so the finite-time pull bounds (which need "
            "0 < eps < epsilon_nu) do not apply to this configuration");
    }
    return report;
}

double epsilon_nu(const BanditConfig& config) {
    const auto& means = config.means();
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < means.size(); ++i) {
        for (std::size_t j = i + 1; j < means.size(); ++j) {
            smallest = std::min(smallest, std::abs(means[i] - means[j]));
        }
    }
    return std::isinf(smallest) ? 0.0 : smallest / 2.0;
}

double alpha_nu(const BanditConfig& config, double eps) {
    const double limit = epsilon_nu(config);
    if (limit == 0.0) throw ParameterError("alpha_nu: epsilon_nu is 0 (repeated means)");
    if (!(eps > 0.0) || !(eps < limit)) {
        std::ostringstream os;
        os << "alpha_nu: eps = " << eps << " must lie in (0, " << limit << ")";
        throw ParameterError(os.str());
    }

    const Family& family = config.family();
    const double best = config.optimal_mean();
    double alpha = 0.0;
    for (ArmIndex a = 0; a < config.arm_count(); ++a) {
        if (a == config.optimal_arm()) continue;
        const double lo = config.means()[a] + eps;
        const double hi = best - eps;
        if (!expfam::in_domain(family, lo) || !expfam::in_domain(family, hi)) {
            throw ParameterError("alpha_nu: perturbed means leave the family domain");
        }
        const double ratio = expfam::kl(family, config.means()[a], best) / expfam::kl(family, lo, hi);
        alpha = std::max(alpha, ratio - 1.0);
    }
    return alpha;
}

double pull_bound_leading_term(const BanditConfig& config, ArmIndex arm, double eps, double horizon) {
    if (!(horizon >= 1.0)) throw ParameterError("horizon must be at least 1");
    if (config.gap(arm) == 0.0) throw ParameterError("leading term is undefined for the optimal arm");
    const double divergence = expfam::kl(config.family(), config.means()[arm], config.optimal_mean());
    return (1.0 + alpha_nu(config, eps)) * std::log(horizon) / divergence;
}

}  // namespace imedub
