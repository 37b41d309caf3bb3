#ifndef RDG_BRANCHING_HPP
#define RDG_BRANCHING_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "rdg/distributions.hpp"
#include "rdg/rng.hpp"

namespace rdg {

inline constexpr double kDefaultSurvivalTol = 1e-10;
inline constexpr double kInfiniteMean = std::numeric_limits<double>::infinity();

struct SurvivalResult {
    double extinction = 1.0;   ///< x*, smallest fixed point of the generating function
    double survival = 0.0;     ///< 1 - x*
    std::int64_t iterations = 0;
    bool converged = true;
    /// Set for delta_1, where every x is a fixed point: the literal smallest
    /// fixed point gives survival 1 although the mean is not > 1.
    bool degenerate = false;
};

/// Smallest fixed point of x = phi(x) on [0, 1] by monotone iteration from 0.
/// Each step takes the larger of phi(x) and the Newton step for phi(x) - x;
/// both stay below the smallest root since phi is increasing and convex.
SurvivalResult solve_extinction(const std::function<double(double)>& phi,
                                const std::function<double(double)>& dphi, double tol,
                                std::int64_t max_iterations = 10'000'000);

SurvivalResult survival_result(const OutdegreeLaw& law, double tol = kDefaultSurvivalTol);
/// sigma(F) = 1 - x_F.
double survival(const OutdegreeLaw& law, double tol = kDefaultSurvivalTol);
/// sigma'(mu) for Poisson(mu) offspring; 0 for mu <= 1, 1 for mu = infinity.
double poisson_survival(double mu, double tol = kDefaultSurvivalTol);

enum class GwOutcome { extinct, escaped };

struct GwPath {
    std::vector<std::int64_t> generations;  ///< Z_0 = 1, Z_1, ...
    GwOutcome outcome = GwOutcome::extinct;
    std::int64_t total = 0;                 ///< T = sum of Z_m (so far, if escaped)
    std::int64_t cap = 0;
    bool escaped() const { return outcome == GwOutcome::escaped; }
};

/// Runs generations until extinction or until the running total exceeds `cap`.
GwPath simulate_gw(const OutdegreeLaw& law, std::int64_t cap, Rng& rng);
/// Fraction of `reps` runs that escape; Monte Carlo oracle for survival().
double extinction_mc(const OutdegreeLaw& law, std::int64_t reps, std::int64_t cap, Rng& rng);
/// Independent paths with offspring `law` and capped Poisson(mu).
std::pair<GwPath, GwPath> simulate_gw_pair(const OutdegreeLaw& law, double mu, std::int64_t cap,
                                           Rng& rng);

} // namespace rdg

#endif
