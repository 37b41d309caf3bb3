#ifndef RDG_ANALYSIS_HPP
#define RDG_ANALYSIS_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rdg/digraph.hpp"
#include "rdg/distributions.hpp"
#include "rdg/exploration.hpp"

namespace rdg {

/// Strong-component decomposition.
struct SccSummary {
    std::vector<std::uint32_t> component;  ///< component id per vertex
    std::vector<std::size_t> sizes;        ///< sorted descending

    std::size_t count() const { return sizes.size(); }
    /// Size of the k-th largest component (k >= 1); 0 past the last one.
    std::size_t L(std::size_t k) const { return k >= 1 && k <= sizes.size() ? sizes[k - 1] : 0; }
};

/// Iterative Tarjan; linear time, no recursion.
SccSummary scc(const Digraph& g);

enum class Direction { out, in };

struct GenerationProfile {
    Vertex origin = 0;
    Direction direction = Direction::out;
    /// S_0 = 1, S_1, ... Ends at min(m_max, first empty layer).
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    /// True when every vertex reachable in this direction was counted.
    bool exhausted = false;
};

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Breadth-first queries on one graph with reusable scratch. Construction
/// with `with_reverse` builds the transpose once for in-direction queries.
/// Not thread-safe; use one per worker.
class Reachability {
public:
    explicit Reachability(const Digraph& g, bool with_reverse = true);

    GenerationProfile generations(Vertex origin, Direction dir, std::size_t m_max = kUnbounded);
    /// |{j : origin ~> j}| (or j ~> origin for Direction::in).
    std::size_t reach_size(Vertex origin, Direction dir);
    /// min(reach size, limit + 1); stops as soon as the count exceeds `limit`.
    std::size_t reach_size_capped(Vertex origin, Direction dir, std::size_t limit);
    bool reaches(Vertex from, Vertex to);

    const Digraph& graph() const { return g_; }
    const Digraph& reverse() const;

private:
    const Digraph& adjacency(Direction dir) const;
    void check(Vertex v) const;
    void reset();

    const Digraph& g_;
    Digraph rev_;
    bool has_rev_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t epoch_ = 0;
    std::vector<Vertex> queue_;
};

GenerationProfile out_generations(const Digraph& g, Vertex i, std::size_t m_max = kUnbounded);
GenerationProfile in_generations(const Digraph& g, Vertex i, std::size_t m_max = kUnbounded);
/// T_i.
std::size_t reach_size(const Digraph& g, Vertex i);
/// T'_i.
std::size_t coreach_size(const Digraph& g, Vertex i);
bool reaches(const Digraph& g, Vertex i, Vertex j);

struct SmallCounts {
    std::size_t n_small = 0;  ///< #{i : T'_i <= K}
    std::size_t e_small = 0;  ///< #{i : T_i <= K or T'_i <= K}
    std::size_t n_large = 0;  ///< vertices in strong components of size > K
};

SmallCounts count_small(const Digraph& g, std::size_t K);
SmallCounts count_small(const Digraph& g, const SccSummary& comps, std::size_t K);

struct AvoidHit {
    double p_avoid = 1.0;          ///< P[A_r]: vertex 1 sends no arc into {2..r+1}
    double p_hit_and_avoid = 0.0;  ///< P[H_{r,s} and A_r]: also hits {r+2..r+s+1}
};

/// Exact probabilities of the avoid/hit events for vertex 1 in G_{n,F}
/// (multi) or G~_{n,F} (simple). Requires r + s + 1 <= n.
AvoidHit avoid_hit_exact(const OutdegreeLaw& law, std::int64_t n, std::int64_t r, std::int64_t s,
                         GraphKind kind);

struct GraphExploration {
    ExplorationTrace trace;
    std::size_t discovered = 0;
};

/// Replays arc revelation from `origin` on a realized multigraph: one
/// unassigned arc of the discovered set is revealed per step, in discovery
/// order. Stops at the first t >= 0 with no unassigned arcs.
GraphExploration explore_on_graph(const Digraph& g, Vertex origin);

} // namespace rdg

#endif
