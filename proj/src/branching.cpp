#include "rdg/branching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdg {

SurvivalResult solve_extinction(const std::function<double(double)>& phi,
                                const std::function<double(double)>& dphi, double tol,
                                std::int64_t max_iterations) {
    if (!(tol > 0.0))
        throw std::invalid_argument("survival: tol must be positive");
    const double step_tol = tol * 1e-3;
    SurvivalResult r;
    double x = 0.0;
    r.converged = false;
    for (std::int64_t it = 1; it <= max_iterations; ++it) {
        const double fx = phi(x);
        double next = fx;
        const double slope = dphi(x);
        if (slope < 1.0) {
            const double newton = x + (fx - x) / (1.0 - slope);
            if (std::isfinite(newton))
                next = std::max(next, newton);
        }
        next = std::clamp(next, x, 1.0);
        const double step = next - x;
        x = next;
        r.iterations = it;
        if (step < step_tol) {
            r.converged = true;
            break;
        }
    }
    r.extinction = x;
    r.survival = 1.0 - x;
    return r;
}

SurvivalResult survival_result(const OutdegreeLaw& law, double tol) {
    auto r = solve_extinction([&](double x) { return pgf(law, x); },
                              [&](double x) { return pgf_derivative(law, x); }, tol);
    r.degenerate = law.atoms().size() == 1 && law.min_support() == 1;
    return r;
}

double survival(const OutdegreeLaw& law, double tol) {
    return survival_result(law, tol).survival;
}

double poisson_survival(double mu, double tol) {
    if (std::isnan(mu) || mu < 0.0)
        throw std::invalid_argument("poisson_survival: mu must be non-negative");
    if (std::isinf(mu))
        return 1.0;
    if (mu <= 1.0)
        return 0.0;
    const auto r = solve_extinction([mu](double x) { return std::exp(mu * (x - 1.0)); },
                                    [mu](double x) { return mu * std::exp(mu * (x - 1.0)); }, tol);
    return r.survival;
}

GwPath simulate_gw(const OutdegreeLaw& law, std::int64_t cap, Rng& rng) {
    if (cap < 1)
        throw std::invalid_argument("simulate_gw: cap must be positive");
    GwPath path;
    path.cap = cap;
    path.generations.push_back(1);
    path.total = 1;
    std::int64_t current = 1;
    while (current > 0) {
        if (path.total > cap) {
            path.outcome = GwOutcome::escaped;
            return path;
        }
        std::int64_t next = 0;
        for (std::int64_t i = 0; i < current; ++i)
            next += law.sample(rng);
        path.generations.push_back(next);
        path.total += next;
        current = next;
    }
    path.outcome = GwOutcome::extinct;
    return path;
}

double extinction_mc(const OutdegreeLaw& law, std::int64_t reps, std::int64_t cap, Rng& rng) {
    if (reps < 1)
        throw std::invalid_argument("extinction_mc: reps must be positive");
    std::int64_t escaped = 0;
    for (std::int64_t r = 0; r < reps; ++r)
        escaped += simulate_gw(law, cap, rng).escaped() ? 1 : 0;
    return static_cast<double>(escaped) / static_cast<double>(reps);
}

std::pair<GwPath, GwPath> simulate_gw_pair(const OutdegreeLaw& law, double mu, std::int64_t cap,
                                           Rng& rng) {
    const OutdegreeLaw poisson = poisson_law(mu);
    GwPath first = simulate_gw(law, cap, rng);
    GwPath second = simulate_gw(poisson, cap, rng);
    return {std::move(first), std::move(second)};
}

} // namespace rdg
