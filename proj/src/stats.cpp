#include "rdg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace rdg::stats {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs)
            s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_se(std::span<const double> xs) {
    MeanSe r;
    r.count = xs.size();
    if (xs.empty())
        return r;
    const double n = static_cast<double>(xs.size());
    r.mean = pairwise_sum(xs) / n;
    if (xs.size() > 1) {
        std::vector<double> sq(xs.size());
        std::transform(xs.begin(), xs.end(), sq.begin(),
                       [&](double x) { return (x - r.mean) * (x - r.mean); });
        r.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    return r;
}

Correlation correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("correlation: need two samples of equal length >= 2");
    const double mx = mean_se(xs).mean, my = mean_se(ys).mean;
    std::vector<double> cxy(xs.size()), cxx(xs.size()), cyy(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cxy[i] = (xs[i] - mx) * (ys[i] - my);
        cxx[i] = (xs[i] - mx) * (xs[i] - mx);
        cyy[i] = (ys[i] - my) * (ys[i] - my);
    }
    const double sxx = pairwise_sum(cxx), syy = pairwise_sum(cyy);
    if (sxx <= 0.0 || syy <= 0.0)
        return {0.0, true};
    return {pairwise_sum(cxy) / std::sqrt(sxx * syy), false};
}

namespace {

void finish(ChiSquare& c, double alpha) {
    if (c.bins < 2) {
        c.applicable = false;
        c.dof = 0;
        c.p_value = 1.0;
        c.critical = 0.0;
        return;
    }
    c.dof = c.bins - 1;
    const boost::math::chi_squared dist(static_cast<double>(c.dof));
    c.p_value = boost::math::cdf(boost::math::complement(dist, c.statistic));
    c.critical = boost::math::quantile(boost::math::complement(dist, alpha));
}

} // namespace

ChiSquare chi_square(std::span<const std::int64_t> observations, std::span<const double> reference,
                     double alpha, double min_expected) {
    if (observations.empty() || reference.empty())
        throw std::invalid_argument("chi_square: empty input");
    const double total = static_cast<double>(observations.size());
    const std::size_t K = reference.size();
    std::vector<double> observed(K, 0.0);
    ChiSquare c;
    for (auto x : observations) {
        const auto idx = static_cast<std::size_t>(std::clamp<std::int64_t>(x, 0, static_cast<std::int64_t>(K) - 1));
        if (x < 0 || reference[idx] <= 0.0)
            ++c.impossible;
        observed[idx] += 1.0;
    }
    // pool left to right
    std::vector<double> obs_bins, exp_bins;
    double o = 0.0, e = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        o += observed[k];
        e += reference[k] * total;
        if (e >= min_expected) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (exp_bins.empty()) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
        } else {
            obs_bins.back() += o;
            exp_bins.back() += e;
        }
    }
    c.bins = obs_bins.size();
    for (std::size_t b = 0; b < obs_bins.size(); ++b) {
        const double d = obs_bins[b] - exp_bins[b];
        c.statistic += exp_bins[b] > 0.0 ? d * d / exp_bins[b] : (obs_bins[b] > 0.0 ? INFINITY : 0.0);
    }
    finish(c, alpha);
    return c;
}

ChiSquare chi_square_counts(std::span<const double> observed, std::span<const double> expected,
                            double alpha) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_counts: size mismatch");
    ChiSquare c;
    c.bins = observed.size();
    for (std::size_t b = 0; b < observed.size(); ++b) {
        const double d = observed[b] - expected[b];
        c.statistic += d * d / expected[b];
    }
    finish(c, alpha);
    return c;
}

ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                double alpha, double min_expected) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("chi_square_two_sample: empty input");
    std::int64_t top = 0;
    for (auto x : a)
        top = std::max(top, x);
    for (auto x : b)
        top = std::max(top, x);
    const auto K = static_cast<std::size_t>(top) + 1;
    std::vector<double> ca(K, 0.0), cb(K, 0.0);
    for (auto x : a)
        ca[static_cast<std::size_t>(std::max<std::int64_t>(x, 0))] += 1.0;
    for (auto x : b)
        cb[static_cast<std::size_t>(std::max<std::int64_t>(x, 0))] += 1.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double fa = na / (na + nb), fb = nb / (na + nb);

    std::vector<double> pa, pb;
    double oa = 0.0, ob = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        oa += ca[k];
        ob += cb[k];
        const double both = oa + ob;
        if (both * std::min(fa, fb) >= min_expected) {
            pa.push_back(oa);
            pb.push_back(ob);
            oa = ob = 0.0;
        }
    }
    if (oa + ob > 0.0) {
        if (pa.empty()) {
            pa.push_back(oa);
            pb.push_back(ob);
        } else {
            pa.back() += oa;
            pb.back() += ob;
        }
    }
    ChiSquare c;
    c.bins = pa.size();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double both = pa[i] + pb[i];
        const double ea = both * fa, eb = both * fb;
        c.statistic += (pa[i] - ea) * (pa[i] - ea) / ea + (pb[i] - eb) * (pb[i] - eb) / eb;
    }
    finish(c, alpha);
    return c;
}

std::vector<double> poisson_pmf(double mu, std::int64_t kmax) {
    std::vector<double> p(static_cast<std::size_t>(kmax) + 1);
    for (std::int64_t k = 0; k <= kmax; ++k)
        p[k] = mu == 0.0 ? (k == 0 ? 1.0 : 0.0)
                         : std::exp(-mu + static_cast<double>(k) * std::log(mu) -
                                    std::lgamma(static_cast<double>(k) + 1.0));
    return p;
}

} // namespace rdg::stats
