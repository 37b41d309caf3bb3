#ifndef RDG_DIGRAPH_HPP
#define RDG_DIGRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdg/distributions.hpp"
#include "rdg/rng.hpp"

namespace rdg {

using Vertex = std::uint32_t;

enum class GraphKind { multi, simple };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view text);

class GraphFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Directed (multi)graph on n vertices in compressed adjacency form.
///
/// Vertices are 0-based inside the library and 1-based in files and on the
/// command line. Immutable once built.
class Digraph {
public:
    Digraph() = default;
    /// `offsets` has n+1 entries; arcs of v are targets[offsets[v], offsets[v+1]).
    Digraph(GraphKind kind, std::vector<std::size_t> offsets, std::vector<Vertex> targets);

    /// Builds from an arc list (0-based), grouping arcs by source and keeping
    /// their relative order.
    static Digraph from_arcs(std::size_t n, GraphKind kind,
                             std::span<const std::pair<Vertex, Vertex>> arcs);

    std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t arc_count() const { return targets_.size(); }
    GraphKind kind() const { return kind_; }

    std::span<const Vertex> out(Vertex v) const {
        return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t outdegree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const std::size_t> offsets() const { return offsets_; }
    std::span<const Vertex> targets() const { return targets_; }

    /// Reverse graph (same kind); arcs of the result are grouped by head.
    Digraph transpose() const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    GraphKind kind_ = GraphKind::multi;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> targets_;
};

/// G_{n,F}: i.i.d. outdegrees, each arc head uniform on all n vertices.
Digraph gen_multigraph(std::size_t n, const OutdegreeLaw& law, Rng& rng);

/// G~_{n,F}: out-neighbourhood of i is a uniform min(xi_i, n-1)-subset of the
/// other vertices.
Digraph gen_simple(std::size_t n, const OutdegreeLaw& law, Rng& rng);

struct CoupledPair {
    Digraph multi;
    Digraph simple;
};

/// Coupled realization in which simplify(multi) is an arc-subgraph of simple.
CoupledPair gen_coupled(std::size_t n, const OutdegreeLaw& law, Rng& rng);

Digraph generate(GraphKind kind, std::size_t n, const OutdegreeLaw& law, Rng& rng);

/// Drops loops, collapses parallel arcs; result is of simple kind with each
/// vertex's out-list sorted.
Digraph simplify(const Digraph& g);

/// Edge-list text: `n m kind` then m lines `src dst` (1-based). Each string
/// in `comments` is written as a `# ...` line after the header.
void write_edgelist(const Digraph& g, std::ostream& sink,
                    std::span<const std::string> comments = {});
/// Inverse of write_edgelist. `#` lines after the header are ignored.
Digraph read_edgelist(std::istream& source);

} // namespace rdg

#endif
