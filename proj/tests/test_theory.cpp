#include <cmath>
#include <vector>

#include "doctest.h"

#include "imedub/errors.hpp"
#include "imedub/theory.hpp"
#include "oracles.hpp"

using namespace imedub;

namespace {

BanditConfig experiment(Family family) { return BanditConfig(family, oracle::experiment_means(), line_graph(9)); }

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("lower-bound constant on the experiment means") {
    const auto means = oracle::experiment_means_big();

    // 2 * 0.05 / KL_Bern(0.20, 0.25) = 14.28141629916...
    const auto bern = lower_bound_constant(experiment(Family::bernoulli()));
    CHECK(bern.c_nu == doctest::Approx(oracle::c_nu_line(FamilyKind::Bernoulli, means)).epsilon(1e-12));
    CHECK(bern.c_nu == doctest::Approx(14.281416299161036).epsilon(1e-10));

    // 0.1 / (0.05^2 / (2 * 0.25)) = 20
    const auto gauss = lower_bound_constant(experiment(Family::gaussian(0.25)));
    CHECK(std::abs(gauss.c_nu - 20.0) < 1e-10);
    CHECK(gauss.c_nu ==
          doctest::Approx(oracle::c_nu_line(FamilyKind::Gaussian, means, oracle::Big("0.25"))).epsilon(1e-12));

    // 0.1 / (log 1.25 + 0.8 - 1) = 4.32085804993...
    const auto expo = lower_bound_constant(experiment(Family::exponential()));
    CHECK(expo.c_nu == doctest::Approx(oracle::c_nu_line(FamilyKind::Exponential, means)).epsilon(1e-12));

    CHECK(bern.optimal_arm == 4);
    CHECK(bern.optimal_neighbors == std::vector<ArmIndex>{3, 5});
    CHECK(bern.neighbor_kl.size() == 2);
    CHECK(bern.gaps[0] == doctest::Approx(0.2));
    CHECK(bern.gaps[4] == 0.0);
}

TEST_CASE("c(nu) ignores suboptimal arms outside the optimum's neighbourhood") {
    const auto full = lower_bound_constant(experiment(Family::bernoulli()));
    // Drop arm 0 (two hops or more from the optimum).
    const auto means = oracle::experiment_means();
    const std::vector<double> trimmed(means.begin() + 1, means.end());
    const auto smaller = lower_bound_constant(BanditConfig(Family::bernoulli(), trimmed, line_graph(8)));
    CHECK(smaller.c_nu == full.c_nu);

    // On a star centred at the optimum every arm is a neighbour.
    const auto star = lower_bound_constant(BanditConfig(Family::bernoulli(), {0.5, 0.1, 0.2, 0.3}, star_graph(4)));
    const double expected = 0.4 / expfam::kl(Family::bernoulli(), 0.1, 0.5) +
                            0.3 / expfam::kl(Family::bernoulli(), 0.2, 0.5) +
                            0.2 / expfam::kl(Family::bernoulli(), 0.3, 0.5);
    CHECK(star.c_nu == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("epsilon_nu") {
    CHECK(epsilon_nu(BanditConfig(Family::bernoulli(), {0.1, 0.3, 0.2}, line_graph(3))) == doctest::Approx(0.05));
    CHECK(epsilon_nu(BanditConfig(Family::gaussian(1.0), {0.0, 1.0}, line_graph(2))) == 0.5);
    const auto report = lower_bound_constant(experiment(Family::bernoulli()));
    CHECK(report.epsilon_nu == 0.0);
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("alpha_nu") {
    const BanditConfig two(Family::gaussian(1.0), {0.0, 1.0}, line_graph(2));
    // (mu* - mu)^2 / (mu* - mu - 2 eps)^2 - 1 = 1 / 0.64 - 1
    CHECK(alpha_nu(two, 0.1) == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(alpha_nu(two, 1e-9) < 1e-6);

    CHECK_THROWS_AS(alpha_nu(two, 0.5), ParameterError);
    CHECK_THROWS_AS(alpha_nu(two, 0.0), ParameterError);
    CHECK_THROWS_AS(alpha_nu(experiment(Family::bernoulli()), 0.01), ParameterError);
}

TEST_CASE("alpha_nu is nondecreasing in eps and satisfies the perturbed-KL inequality") {
    const std::vector<BanditConfig> configs{
        BanditConfig(Family::bernoulli(), {0.1, 0.3, 0.6, 0.4}, line_graph(4)),
        BanditConfig(Family::gaussian(0.25), {0.0, 1.0, 3.0, 2.5}, line_graph(4)),
        BanditConfig(Family::exponential(), {0.5, 1.0, 2.0, 1.5}, line_graph(4)),
    };
    for (const auto& cfg : configs) {
        const double limit = epsilon_nu(cfg);
        double previous = 0.0;
        for (int k = 1; k < 40; ++k) {
            const double eps = limit * k / 40.0;
            const double alpha = alpha_nu(cfg, eps);
            CHECK(alpha >= previous);
            previous = alpha;
            for (ArmIndex a = 0; a < cfg.arm_count(); ++a) {
                if (a == cfg.optimal_arm()) continue;
                const double lhs = expfam::kl(cfg.family(), cfg.means()[a] + eps, cfg.optimal_mean() - eps);
                const double rhs = expfam::kl(cfg.family(), cfg.means()[a], cfg.optimal_mean()) / (1.0 + alpha);
                CHECK(lhs >= rhs * (1.0 - 1e-12));
            }
        }
    }
}

TEST_CASE("alpha_nu vanishes as eps shrinks") {
    const std::vector<BanditConfig> configs{
        BanditConfig(Family::gaussian(1.0), {0.0, 5.0, 10.0}, line_graph(3)),
        BanditConfig(Family::exponential(), {1.0, 8.0, 64.0}, line_graph(3)),
    };
    for (const auto& cfg : configs) {
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 5; k <= 20; ++k) {
            const double alpha = alpha_nu(cfg, std::ldexp(1.0, -k));
            CHECK(alpha < previous);
            previous = alpha;
        }
        CHECK(previous < 1e-6);
    }
}

TEST_CASE("pull bound leading term") {
    const BanditConfig two(Family::gaussian(1.0), {0.0, 1.0}, line_graph(2));
    const double horizon = 1e4;
    CHECK(pull_bound_leading_term(two, 0, 0.1, horizon) == doctest::Approx(1.5625 * std::log(horizon) / 0.5));
    CHECK_THROWS_AS(pull_bound_leading_term(two, 1, 0.1, horizon), ParameterError);
}

}  // TEST_SUITE
