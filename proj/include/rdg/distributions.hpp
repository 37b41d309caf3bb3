#ifndef RDG_DISTRIBUTIONS_HPP
#define RDG_DISTRIBUTIONS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rdg/rng.hpp"

namespace rdg {

/// Thrown for malformed or non-normalizable laws.
class LawError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Atom {
    std::int64_t k;
    double p;
    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite-support probability mass function on the non-negative integers.
///
/// Immutable after construction. Atoms are strictly increasing in k, carry
/// positive mass and sum to one. Sampling is O(1) through an alias table
/// built once; the random state lives in the caller's stream.
class OutdegreeLaw {
public:
    /// Normalizes `pairs` (k, weight) once. Zero weights are dropped.
    /// Rejects empty input, negative or non-finite weights, negative or
    /// duplicate k, and all-zero weight vectors.
    static OutdegreeLaw from_pairs(std::span<const std::pair<std::int64_t, double>> pairs);
    static OutdegreeLaw from_pairs(std::initializer_list<std::pair<std::int64_t, double>> pairs);

    std::span<const Atom> atoms() const { return atoms_; }
    double mean() const { return mean_; }
    std::int64_t min_support() const { return atoms_.front().k; }
    std::int64_t max_support() const { return atoms_.back().k; }
    /// F({k}); zero off the support.
    double probability(std::int64_t k) const;

    std::int64_t sample(Rng& rng) const;

    /// Canonical `pmf:` rendering with round-trip precision.
    std::string to_string() const;

    friend bool operator==(const OutdegreeLaw& a, const OutdegreeLaw& b) {
        return a.atoms_ == b.atoms_;
    }

private:
    OutdegreeLaw() = default;
    void build_sampler();

    std::vector<Atom> atoms_;
    double mean_ = 0.0;
    std::vector<double> alias_prob_;
    std::vector<std::uint32_t> alias_idx_;
};

OutdegreeLaw law_from_pairs(std::span<const std::pair<std::int64_t, double>> pairs);
OutdegreeLaw point_mass(std::int64_t k);

/// Smallest cap h with P[X > h] < tail; the tail is lumped onto h.
inline constexpr double kDefaultTail = 1e-12;
OutdegreeLaw poisson_law(double mu, std::optional<std::int64_t> cap = std::nullopt);
/// Geometric on {0,1,2,...}: P[k] = p (1-p)^k.
OutdegreeLaw geometric_law(double p, std::optional<std::int64_t> cap = std::nullopt);

/// Probability generating function; x must lie in [0, 1].
double pgf(const OutdegreeLaw& law, double x);
/// Derivative of the PGF on [0, 1].
double pgf_derivative(const OutdegreeLaw& law, double x);
inline double mean(const OutdegreeLaw& law) { return law.mean(); }
inline std::int64_t sample(const OutdegreeLaw& law, Rng& rng) { return law.sample(rng); }

/// Law of min(xi, h).
OutdegreeLaw truncate(const OutdegreeLaw& law, std::int64_t h);
/// Effective outdegree law in the simple digraph on n vertices: min(xi, n-1).
OutdegreeLaw clamp_to_simple(const OutdegreeLaw& law, std::int64_t n);

/// n -> b_n.
using BoundRule = std::function<std::int64_t(std::int64_t)>;

/// An n-indexed family of laws F_n with its declared limit.
class LawFamily {
public:
    enum class Kind { constant, counterexample, custom };

    static LawFamily constant(OutdegreeLaw law);
    /// F_n = {2: 1 - 2/n, n-1: 2/n}; defined for n >= 3. Limit law delta_2, mu -> 4.
    static LawFamily counterexample();
    /// `limit_law` empty means the limit has an atom at infinity (tag only).
    static LawFamily custom(std::string label, std::function<OutdegreeLaw(std::int64_t)> rule,
                            std::optional<OutdegreeLaw> limit_law, double limit_mean,
                            BoundRule bound = {});

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    /// F_n. Throws LawError when n is out of range or the produced law leaves {0..b_n}.
    OutdegreeLaw at(std::int64_t n) const;
    const std::optional<OutdegreeLaw>& limit_law() const { return limit_law_; }
    /// mu_infinity; may be +infinity.
    double limit_mean() const { return limit_mean_; }
    const BoundRule& bound() const { return bound_; }

private:
    LawFamily() = default;

    Kind kind_ = Kind::constant;
    std::string label_;
    std::function<OutdegreeLaw(std::int64_t)> rule_;
    std::optional<OutdegreeLaw> limit_law_;
    double limit_mean_ = 0.0;
    BoundRule bound_;
};

inline OutdegreeLaw family_law(const LawFamily& family, std::int64_t n) { return family.at(n); }

} // namespace rdg

#endif
