#ifndef RDG_RNG_HPP
#define RDG_RNG_HPP

#include <cstdint>
#include <random>

namespace rdg {

/// Random stream type used throughout the library. Every sampling routine
/// takes a caller-owned stream by reference; no global state.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based split: the stream for replicate `index` under `master`.
/// Streams for distinct indices are statistically independent and the
/// mapping does not depend on how replicates are scheduled.
Rng derive_stream(std::uint64_t master, std::uint64_t index);

/// Nondeterministic seed from system entropy (used when no seed is given).
std::uint64_t entropy_seed();

/// Uniform integer in [0, bound). `bound` must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Uniform real in [0, 1).
inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace rdg

#endif
