#include "rdg/exploration.hpp"

#include <cmath>
#include <stdexcept>

namespace rdg {

bool walk_survival(const OutdegreeLaw& law, std::int64_t horizon, Rng& rng) {
    if (horizon < 1)
        throw std::invalid_argument("walk_survival: horizon must be positive");
    std::int64_t height = 1;  // 1 + R(t) - t
    for (std::int64_t t = 1; t <= horizon; ++t) {
        height += law.sample(rng) - 1;
        if (height <= 0)
            return false;
        // each step lowers the walk by at most one
        if (height > horizon - t)
            return true;
    }
    return true;
}

ExplorationTrace simulate_trace(std::int64_t n, const OutdegreeLaw& law, Rng& rng,
                                std::int64_t horizon) {
    if (n < 1)
        throw std::invalid_argument("simulate_trace: n must be positive");
    if (horizon < 1)
        throw std::invalid_argument("simulate_trace: horizon must be positive");
    ExplorationTrace tr;
    const auto un = static_cast<std::uint64_t>(n);
    std::vector<bool> seen(un, false);
    seen[0] = true;
    std::int64_t collected = 1;
    std::int64_t walk = law.sample(rng);  // R(1)
    std::int64_t height = 1 + walk - 1;   // 1 + R(1) - 1
    tr.surv = true;
    if (height <= 0)
        tr.surv = false;

    tr.R.push_back(walk);
    tr.N.push_back(collected);
    tr.S.push_back(walk);
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const auto label = uniform_below(rng, un);
        if (!seen[label]) {
            seen[label] = true;
            ++collected;
            const auto k = law.sample(rng);
            walk += k;
            height += k - 1;
            if (height <= 0)
                tr.surv = false;
        }
        const std::int64_t s = walk - t;
        tr.R.push_back(walk);
        tr.N.push_back(collected);
        tr.S.push_back(s);
        if (s <= 0) {
            tr.tau = t;
            break;
        }
    }
    return tr;
}

double fluid_limit(double mu, double s) {
    if (mu < 0.0 || s < 0.0)
        throw std::invalid_argument("fluid_limit: mu and s must be non-negative");
    return -std::expm1(-s) * mu - s;
}

double theta(double mu) {
    if (!(mu > 1.0) || std::isinf(mu))
        throw std::invalid_argument("theta: requires 1 < mu < infinity");
    // g(t) = (1 - e^{-t}) mu - t is positive on (0, theta) and negative after
    auto g = [mu](double t) { return -std::expm1(-t) * mu - t; };
    double lo = 0.0, hi = mu;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace rdg
