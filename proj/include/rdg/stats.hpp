#ifndef RDG_STATS_HPP
#define RDG_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdg::stats {

/// Pairwise summation; the result depends only on the order of `xs`.
double pairwise_sum(std::span<const double> xs);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  ///< sample standard deviation / sqrt(count)
    std::size_t count = 0;
};

MeanSe mean_se(std::span<const double> xs);

/// Pearson correlation; `degenerate` when either sample has zero variance,
/// in which case `value` is 0.
struct Correlation {
    double value = 0.0;
    bool degenerate = false;
};
Correlation correlation(std::span<const double> xs, std::span<const double> ys);

/// Goodness of fit of integer observations against a reference pmf on
/// {0, 1, ...}. Adjacent categories are pooled left to right until each
/// expected count is at least `min_expected`; the tail pools into the last bin.
struct ChiSquare {
    double statistic = 0.0;
    std::size_t bins = 0;
    std::size_t dof = 0;
    double p_value = 1.0;
    /// Upper 1 - alpha quantile of chi-square(dof).
    double critical = 0.0;
    /// Fewer than two bins after pooling (reference essentially a point mass).
    bool applicable = true;
    /// Observations falling in categories with zero reference mass.
    std::size_t impossible = 0;
};

ChiSquare chi_square(std::span<const std::int64_t> observations, std::span<const double> reference,
                     double alpha = 0.001, double min_expected = 5.0);

/// chi-square goodness of fit of category counts against expected counts
/// (no pooling); used for uniformity checks.
ChiSquare chi_square_counts(std::span<const double> observed, std::span<const double> expected,
                            double alpha = 0.001);

/// Homogeneity test of two integer samples over {0, 1, ...}; categories are
/// pooled on the combined counts.
ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                double alpha = 0.001, double min_expected = 5.0);

/// Poisson(mu) pmf on {0..kmax}.
std::vector<double> poisson_pmf(double mu, std::int64_t kmax);

} // namespace rdg::stats

#endif
