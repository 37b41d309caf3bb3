#ifndef RDG_EXPLORATION_HPP
#define RDG_EXPLORATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rdg/distributions.hpp"
#include "rdg/rng.hpp"

namespace rdg {

inline constexpr std::int64_t kDefaultHorizon = 10'000;

/// Arc-revelation process S(t) = R(N(t)) - t. Row t holds the cumulative
/// outdegree of the N(t) vertices found so far, N(t), and S(t).
struct ExplorationTrace {
    std::vector<std::int64_t> R;
    std::vector<std::int64_t> N;
    std::vector<std::int64_t> S;
    /// First stopping step; empty when the horizon was reached first (censored).
    std::optional<std::int64_t> tau;
    /// The walk 1 + sum_{i<=t} K_i - t stayed positive over the recorded range.
    bool surv = false;

    std::int64_t steps() const { return static_cast<std::int64_t>(S.size()) - 1; }
};

/// True iff 1 + R(t) - t > 0 for every 1 <= t <= horizon, where R is the
/// partial-sum walk of i.i.d. draws from `law`.
bool walk_survival(const OutdegreeLaw& law, std::int64_t horizon, Rng& rng);

/// Joint simulation of a coupon collector over n labels (N(0) = 1) and an
/// independent outdegree walk. Stops at tau = first t >= 1 with S(t) <= 0, or
/// after `horizon` steps (tau censored).
ExplorationTrace simulate_trace(std::int64_t n, const OutdegreeLaw& law, Rng& rng,
                                std::int64_t horizon);

/// (1 - e^{-s}) mu - s.
double fluid_limit(double mu, double s);

/// Positive root of (1 - e^{-theta}) / theta = 1 / mu; requires mu > 1.
double theta(double mu);

} // namespace rdg

#endif
