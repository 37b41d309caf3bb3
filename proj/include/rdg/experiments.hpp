#ifndef RDG_EXPERIMENTS_HPP
#define RDG_EXPERIMENTS_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rdg/digraph.hpp"
#include "rdg/distributions.hpp"
#include "rdg/report.hpp"
#include "rdg/rng.hpp"

namespace rdg {

struct ExperimentConfig {
    LawFamily law = LawFamily::constant(point_mass(2));
    std::vector<GraphKind> kinds{GraphKind::simple};
    std::vector<std::int64_t> ns{100'000};
    std::int64_t replicates = 20;
    std::size_t K = 50;
    std::size_t m_max = 2;
    std::vector<double> s_grid;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string output;

    /// Panel and b_n rule for the uniformity sweep.
    std::vector<LawFamily> panel;
    BoundRule bound;
    std::string bound_label;

    /// Everything except `workers` and `output`, which do not affect results.
    nlohmann::json echo() const;
    void validate() const;
};

/// Limit constants for a law or family: sigma(F), mu, sigma'(mu) and their product.
struct GiantTarget {
    double sigma = 0.0;
    double mu = 0.0;
    double sigma_prime = 0.0;
    double product() const { return sigma * sigma_prime; }
    std::string source() const;
};

GiantTarget giant_target(const OutdegreeLaw& law);
/// Uses the declared limit law and mu_infinity.
GiantTarget giant_target(const LawFamily& family);

/// Runs `job(rng, r)` for r = 0..count-1 with stream derive_stream(seed, r).
/// Results are stored by index, so output does not depend on `workers`.
template <class Job>
auto run_replicates(std::int64_t count, std::uint64_t seed, unsigned workers, Job&& job) {
    using Result = decltype(job(std::declval<Rng&>(), std::int64_t{0}));
    std::vector<Result> results(static_cast<std::size_t>(count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::int64_t r; (r = next.fetch_add(1)) < count;) {
            try {
                Rng rng = derive_stream(seed, static_cast<std::uint64_t>(r));
                results[static_cast<std::size_t>(r)] = job(rng, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = count;
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

/// n^{-1} L_1 and n^{-1} L_2 per (n, kind).
ExperimentReport mc_giant(const ExperimentConfig& config);
/// Two-cluster summary of n^{-1} T_1.
ExperimentReport mc_reach(const ExperimentConfig& config);
/// Frequencies of 1 ~> 2 and 1 <~> 2 plus the symmetry estimator (T_1-1)/(n-1).
ExperimentReport mc_connect(const ExperimentConfig& config);

/// Plug-in Ky Fan distance sup{eps : #{|x_i - target| > eps} / R > eps}.
double ky_fan(std::span<const double> samples, double target);

/// The default law panel for the uniformity sweep, with the geometric law
/// capped at b_n.
std::vector<LawFamily> default_uniformity_panel(const BoundRule& bound);
/// b_n rules: "sqrt" (ceil(n^{1/2})), "pow:<a>" (ceil(n^a)), "const:<b>".
BoundRule parse_bound_rule(const std::string& text);
ExperimentReport uniformity_sweep(const ExperimentConfig& config);

/// In-generations and L_1 under the n-1 hub family.
ExperimentReport counterexample_run(const ExperimentConfig& config);

/// Local branching approximation at depth config.m_max.
ExperimentReport branching_approx_check(const ExperimentConfig& config);

} // namespace rdg

#endif
