#include "imedub/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "imedub/errors.hpp"

namespace imedub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_mean(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require_closure(const Family& family, double mu, const char* what) {
    if (!expfam::in_closure(family, mu)) {
        throw ParameterError(std::string(what) + " = " + fmt_mean(mu) + " outside the mean domain of " +
                             describe(family));
    }
}

// x log(x / y) extended by continuity: 0 log(0 / y) = 0, x log(x / 0) = inf.
double xlogxy(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return kInf;
    return x * std::log(x / y);
}

double kl_bernoulli(double mu, double mu_prime) {
    return xlogxy(mu, mu_prime) + xlogxy(1.0 - mu, 1.0 - mu_prime);
}

double kl_exponential(double mu, double mu_prime) {
    if (mu == 0.0 || mu_prime == 0.0) return kInf;
    // log(m'/m) + m/m' - 1 = u - log1p(u) with u = m/m' - 1.
    const double u = mu / mu_prime - 1.0;
    return u - std::log1p(u);
}

}  // namespace

Family Family::gaussian(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw ParameterError("Gaussian variance must be positive and finite, got " + fmt_mean(variance));
    }
    return {FamilyKind::Gaussian, variance};
}

std::string_view to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Bernoulli: return "bernoulli";
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Exponential: return "exponential";
    }
    return "unknown";
}

FamilyKind family_kind_from_string(std::string_view name) {
    if (name == "bernoulli") return FamilyKind::Bernoulli;
    if (name == "gaussian") return FamilyKind::Gaussian;
    if (name == "exponential") return FamilyKind::Exponential;
    throw ParameterError("unknown family '" + std::string(name) + "'");
}

std::string describe(const Family& family) {
    if (family.kind == FamilyKind::Gaussian) return "gaussian(variance=" + fmt_mean(family.variance) + ")";
    return std::string(to_string(family.kind));
}

namespace expfam {

bool in_domain(const Family& family, double mean) {
    switch (family.kind) {
        case FamilyKind::Bernoulli: return mean > 0.0 && mean < 1.0;
        case FamilyKind::Gaussian: return std::isfinite(mean);
        case FamilyKind::Exponential: return mean > 0.0 && std::isfinite(mean);
    }
    return false;
}

bool in_closure(const Family& family, double mean) {
    switch (family.kind) {
        case FamilyKind::Bernoulli: return mean >= 0.0 && mean <= 1.0;
        case FamilyKind::Gaussian: return std::isfinite(mean);
        case FamilyKind::Exponential: return mean >= 0.0 && std::isfinite(mean);
    }
    return false;
}

double domain_max(const Family& family) {
    return family.kind == FamilyKind::Bernoulli ? 1.0 : kInf;
}

double kl(const Family& family, double mu, double mu_prime) {
    require_closure(family, mu, "mu");
    require_closure(family, mu_prime, "mu_prime");
    if (mu == mu_prime) return 0.0;

    double value = 0.0;
    switch (family.kind) {
        case FamilyKind::Bernoulli: value = kl_bernoulli(mu, mu_prime); break;
        case FamilyKind::Gaussian: {
            const double diff = mu_prime - mu;
            value = diff * diff / (2.0 * family.variance);
            break;
        }
        case FamilyKind::Exponential: value = kl_exponential(mu, mu_prime); break;
    }
    // Rounding can push a tiny divergence below zero.
    return std::max(value, 0.0);
}

double sample(const Family& family, double mu, RandomStream& rng) {
    if (!in_domain(family, mu)) {
        throw ParameterError("cannot sample " + describe(family) + " with mean " + fmt_mean(mu));
    }
    auto& engine = rng.engine();
    switch (family.kind) {
        case FamilyKind::Bernoulli: return rng.uniform() < mu ? 1.0 : 0.0;
        case FamilyKind::Gaussian:
            return std::normal_distribution<double>(mu, std::sqrt(family.variance))(engine);
        case FamilyKind::Exponential: {
            std::exponential_distribution<double> dist(1.0 / mu);
            double x = dist(engine);
            while (x <= 0.0) x = dist(engine);
            return x;
        }
    }
    return 0.0;
}

double variance(const Family& family, double mu) {
    require_closure(family, mu, "mu");
    switch (family.kind) {
        case FamilyKind::Bernoulli: return mu * (1.0 - mu);
        case FamilyKind::Gaussian: return family.variance;
        case FamilyKind::Exponential: return mu * mu;
    }
    return 0.0;
}

double variance_sup(const Family& family, double lo, double hi) {
    require_closure(family, lo, "lo");
    require_closure(family, hi, "hi");
    if (lo > hi) throw ParameterError("variance_sup: lo > hi");
    switch (family.kind) {
        case FamilyKind::Bernoulli: {
            const double nearest_half = std::clamp(0.5, lo, hi);
            return nearest_half * (1.0 - nearest_half);
        }
        case FamilyKind::Gaussian: return family.variance;
        case FamilyKind::Exponential: return hi * hi;
    }
    return 0.0;
}

double kl_upper_inverse(const Family& family, double mu_hat, double budget) {
    require_closure(family, mu_hat, "mu_hat");
    if (!(budget >= 0.0)) throw ParameterError("kl_upper_inverse: budget must be nonnegative");
    if (budget == 0.0) return mu_hat;

    const double cap = domain_max(family);
    if (mu_hat >= cap) return cap;

    double lo = mu_hat;
    double hi = cap;
    if (std::isinf(cap)) {
        // Grow an upper bracket until it is infeasible.
        double step = std::max(1.0, std::abs(mu_hat));
        hi = mu_hat + step;
        while (kl(family, mu_hat, hi) <= budget) {
            lo = hi;
            step *= 2.0;
            hi = mu_hat + step;
            if (!std::isfinite(hi)) return lo;
        }
    } else if (kl(family, mu_hat, cap) <= budget) {
        return cap;
    }

    // Stop once the bracket and the divergence residual are both within
    // tolerance, or when the bracket cannot shrink any further.
    const bool capped = hi == cap;
    for (int i = 0; i < kInverseMaxIterations; ++i) {
        if (hi - lo <= kInverseTolerance && budget - kl(family, mu_hat, lo) <= kInverseTolerance) break;
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (kl(family, mu_hat, mid) <= budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The root lies between the last double below the cap and the cap itself.
    if (capped && hi == cap && budget - kl(family, mu_hat, lo) > kInverseTolerance) return cap;
    return lo;
}

}  // namespace expfam
}  // namespace imedub
