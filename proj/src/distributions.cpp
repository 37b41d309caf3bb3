#include "rdg/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rdg {

namespace {

std::string entry_name(std::size_t index, std::int64_t k) {
    return "entry " + std::to_string(index) + " (k=" + std::to_string(k) + ")";
}

} // namespace

OutdegreeLaw OutdegreeLaw::from_pairs(std::span<const std::pair<std::int64_t, double>> pairs) {
    if (pairs.empty())
        throw LawError("outdegree law: empty list of atoms");

    std::vector<std::pair<std::int64_t, double>> sorted(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto [k, w] = sorted[i];
        if (k < 0)
            throw LawError("outdegree law: " + entry_name(i, k) + " has negative support value");
        if (!std::isfinite(w))
            throw LawError("outdegree law: " + entry_name(i, k) + " has non-finite weight");
        if (w < 0.0)
            throw LawError("outdegree law: " + entry_name(i, k) + " has negative weight");
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first == sorted[i - 1].first)
            throw LawError("outdegree law: duplicate support value k=" +
                           std::to_string(sorted[i].first));
    }

    double total = 0.0;
    for (const auto& [k, w] : sorted)
        total += w;
    if (!(total > 0.0))
        throw LawError("outdegree law: all weights are zero");

    OutdegreeLaw law;
    law.atoms_.reserve(sorted.size());
    for (const auto& [k, w] : sorted) {
        if (w > 0.0)
            law.atoms_.push_back({k, w / total});
    }
    for (const auto& a : law.atoms_)
        law.mean_ += static_cast<double>(a.k) * a.p;
    law.build_sampler();
    return law;
}

OutdegreeLaw OutdegreeLaw::from_pairs(std::initializer_list<std::pair<std::int64_t, double>> pairs) {
    return from_pairs(std::span<const std::pair<std::int64_t, double>>(pairs.begin(), pairs.size()));
}

// Vose's alias method.
void OutdegreeLaw::build_sampler() {
    const std::size_t m = atoms_.size();
    alias_prob_.assign(m, 0.0);
    alias_idx_.assign(m, 0);
    std::vector<double> scaled(m);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < m; ++i) {
        scaled[i] = atoms_[i].p * static_cast<double>(m);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        alias_prob_[s] = scaled[s];
        alias_idx_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (auto i : large) {
        alias_prob_[i] = 1.0;
        alias_idx_[i] = i;
    }
    for (auto i : small) {
        alias_prob_[i] = 1.0;
        alias_idx_[i] = i;
    }
}

double OutdegreeLaw::probability(std::int64_t k) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), k,
                               [](const Atom& a, std::int64_t v) { return a.k < v; });
    return (it != atoms_.end() && it->k == k) ? it->p : 0.0;
}

std::int64_t OutdegreeLaw::sample(Rng& rng) const {
    if (atoms_.size() == 1)
        return atoms_.front().k;
    const std::uint64_t column = uniform_below(rng, atoms_.size());
    const double coin = uniform01(rng);
    return coin < alias_prob_[column] ? atoms_[column].k : atoms_[alias_idx_[column]].k;
}

std::string OutdegreeLaw::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "pmf:";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0)
            out << ',';
        out << atoms_[i].k << ':' << atoms_[i].p;
    }
    return out.str();
}

OutdegreeLaw law_from_pairs(std::span<const std::pair<std::int64_t, double>> pairs) {
    return OutdegreeLaw::from_pairs(pairs);
}

OutdegreeLaw point_mass(std::int64_t k) {
    return OutdegreeLaw::from_pairs({{k, 1.0}});
}

OutdegreeLaw poisson_law(double mu, std::optional<std::int64_t> cap) {
    if (!std::isfinite(mu) || mu < 0.0)
        throw LawError("poisson law: mu must be finite and non-negative");
    if (cap && *cap < 0)
        throw LawError("poisson law: cap must be non-negative");
    if (mu == 0.0)
        return point_mass(0);

    // pmf far enough out that the remaining mass is far below double precision
    const auto kmax = static_cast<std::int64_t>(std::ceil(mu + 40.0 * std::sqrt(mu) + 60.0));
    const std::int64_t last = cap ? std::max<std::int64_t>(*cap, kmax) : kmax;
    std::vector<double> pmf(static_cast<std::size_t>(last) + 1);
    const double log_mu = std::log(mu);
    for (std::int64_t k = 0; k <= last; ++k)
        pmf[k] = std::exp(-mu + static_cast<double>(k) * log_mu - std::lgamma(static_cast<double>(k) + 1.0));

    // tail[k] = P[X >= k]
    std::vector<double> tail(pmf.size() + 1, 0.0);
    for (std::int64_t k = last; k >= 0; --k)
        tail[k] = tail[k + 1] + pmf[k];

    std::int64_t h = 0;
    if (cap) {
        h = *cap;
    } else {
        while (h < last && tail[h + 1] >= kDefaultTail)
            ++h;
    }
    std::vector<std::pair<std::int64_t, double>> pairs;
    pairs.reserve(static_cast<std::size_t>(h) + 1);
    for (std::int64_t k = 0; k < h; ++k)
        pairs.emplace_back(k, pmf[k]);
    pairs.emplace_back(h, tail[h]);
    return OutdegreeLaw::from_pairs(pairs);
}

OutdegreeLaw geometric_law(double p, std::optional<std::int64_t> cap) {
    if (!(p > 0.0 && p <= 1.0))
        throw LawError("geometric law: p must lie in (0, 1]");
    if (cap && *cap < 0)
        throw LawError("geometric law: cap must be non-negative");
    if (p == 1.0)
        return point_mass(0);
    const double q = 1.0 - p;
    std::int64_t h = 0;
    if (cap) {
        h = *cap;
    } else {
        // P[X > h] = q^(h+1)
        while (std::pow(q, static_cast<double>(h + 1)) >= kDefaultTail)
            ++h;
    }
    std::vector<std::pair<std::int64_t, double>> pairs;
    pairs.reserve(static_cast<std::size_t>(h) + 1);
    for (std::int64_t k = 0; k < h; ++k)
        pairs.emplace_back(k, p * std::pow(q, static_cast<double>(k)));
    pairs.emplace_back(h, std::pow(q, static_cast<double>(h)));
    return OutdegreeLaw::from_pairs(pairs);
}

double pgf(const OutdegreeLaw& law, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("pgf: argument must lie in [0, 1]");
    double sum = 0.0;
    for (const auto& a : law.atoms())
        sum += a.p * (a.k == 0 ? 1.0 : std::pow(x, static_cast<double>(a.k)));
    return std::min(sum, 1.0);
}

double pgf_derivative(const OutdegreeLaw& law, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("pgf_derivative: argument must lie in [0, 1]");
    double sum = 0.0;
    for (const auto& a : law.atoms()) {
        if (a.k == 0)
            continue;
        sum += a.p * static_cast<double>(a.k) *
               (a.k == 1 ? 1.0 : std::pow(x, static_cast<double>(a.k - 1)));
    }
    return sum;
}

OutdegreeLaw truncate(const OutdegreeLaw& law, std::int64_t h) {
    if (h < 0)
        throw LawError("truncate: h must be non-negative");
    if (law.max_support() <= h)
        return law;
    std::vector<std::pair<std::int64_t, double>> pairs;
    double lumped = 0.0;
    for (const auto& a : law.atoms()) {
        if (a.k < h)
            pairs.emplace_back(a.k, a.p);
        else
            lumped += a.p;
    }
    pairs.emplace_back(h, lumped);
    return OutdegreeLaw::from_pairs(pairs);
}

OutdegreeLaw clamp_to_simple(const OutdegreeLaw& law, std::int64_t n) {
    if (n < 1)
        throw LawError("clamp_to_simple: n must be positive");
    return truncate(law, n - 1);
}

LawFamily LawFamily::constant(OutdegreeLaw law) {
    LawFamily f;
    f.kind_ = Kind::constant;
    f.label_ = law.to_string();
    f.limit_mean_ = law.mean();
    f.rule_ = [law](std::int64_t) { return law; };
    f.limit_law_ = std::move(law);
    return f;
}

LawFamily LawFamily::counterexample() {
    LawFamily f;
    f.kind_ = Kind::counterexample;
    f.label_ = "family:counterexample";
    f.limit_law_ = point_mass(2);
    f.limit_mean_ = 4.0;
    f.rule_ = [](std::int64_t n) {
        if (n < 3)
            throw LawError("counterexample family: requires n >= 3, got n=" + std::to_string(n));
        const double hub = 2.0 / static_cast<double>(n);
        if (n == 3)
            return point_mass(2);
        return OutdegreeLaw::from_pairs({{2, 1.0 - hub}, {n - 1, hub}});
    };
    return f;
}

LawFamily LawFamily::custom(std::string label, std::function<OutdegreeLaw(std::int64_t)> rule,
                            std::optional<OutdegreeLaw> limit_law, double limit_mean,
                            BoundRule bound) {
    LawFamily f;
    f.kind_ = Kind::custom;
    f.label_ = std::move(label);
    f.rule_ = std::move(rule);
    f.limit_law_ = std::move(limit_law);
    f.limit_mean_ = limit_mean;
    f.bound_ = std::move(bound);
    return f;
}

OutdegreeLaw LawFamily::at(std::int64_t n) const {
    if (n < 1)
        throw LawError("law family: n must be positive");
    OutdegreeLaw law = rule_(n);
    if (bound_) {
        const std::int64_t b = bound_(n);
        if (law.max_support() > b)
            throw LawError("law family '" + label_ + "': support reaches " +
                           std::to_string(law.max_support()) + " > b_n=" + std::to_string(b) +
                           " at n=" + std::to_string(n));
    }
    return law;
}

} // namespace rdg
