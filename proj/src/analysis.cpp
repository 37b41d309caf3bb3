#include "rdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdg {

SccSummary scc(const Digraph& g) {
    const std::size_t n = g.vertex_count();
    constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<Vertex> stack;
    struct Frame {
        Vertex v;
        std::size_t next;
    };
    std::vector<Frame> calls;
    SccSummary out;
    out.component.assign(n, 0);
    std::vector<std::size_t> raw_sizes;
    std::uint32_t counter = 0;

    for (Vertex root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        calls.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!calls.empty()) {
            auto& f = calls.back();
            const auto arcs = g.out(f.v);
            if (f.next < arcs.size()) {
                const Vertex w = arcs[f.next++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    calls.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const Vertex v = f.v;
            calls.pop_back();
            if (!calls.empty())
                low[calls.back().v] = std::min(low[calls.back().v], low[v]);
            if (low[v] == index[v]) {
                const auto id = static_cast<std::uint32_t>(raw_sizes.size());
                std::size_t size = 0;
                Vertex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = id;
                    ++size;
                } while (w != v);
                raw_sizes.push_back(size);
            }
        }
    }
    out.sizes = raw_sizes;
    std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
    return out;
}

Reachability::Reachability(const Digraph& g, bool with_reverse)
    : g_(g), has_rev_(with_reverse), mark_(g.vertex_count(), 0) {
    if (with_reverse)
        rev_ = g.transpose();
    queue_.reserve(g.vertex_count());
}

const Digraph& Reachability::reverse() const {
    if (!has_rev_)
        throw std::logic_error("Reachability: built without the reverse graph");
    return rev_;
}

const Digraph& Reachability::adjacency(Direction dir) const {
    return dir == Direction::out ? g_ : reverse();
}

void Reachability::check(Vertex v) const {
    if (v >= g_.vertex_count())
        throw std::out_of_range("vertex " + std::to_string(v) + " out of range for n=" +
                                std::to_string(g_.vertex_count()));
}

void Reachability::reset() {
    if (++epoch_ == 0) {
        std::fill(mark_.begin(), mark_.end(), 0);
        epoch_ = 1;
    }
    queue_.clear();
}

GenerationProfile Reachability::generations(Vertex origin, Direction dir, std::size_t m_max) {
    check(origin);
    const Digraph& adj = adjacency(dir);
    reset();
    GenerationProfile p;
    p.origin = origin;
    p.direction = dir;
    p.counts.push_back(1);
    p.total = 1;
    mark_[origin] = epoch_;
    queue_.push_back(origin);
    std::size_t layer_begin = 0, layer_end = 1;
    std::size_t depth = 0;
    while (true) {
        if (depth == m_max) {
            // peek one layer further to decide exhaustion
            bool more = false;
            for (std::size_t q = layer_begin; q < layer_end && !more; ++q)
                for (Vertex w : adj.out(queue_[q]))
                    if (mark_[w] != epoch_) {
                        more = true;
                        break;
                    }
            p.exhausted = !more;
            break;
        }
        for (std::size_t q = layer_begin; q < layer_end; ++q) {
            for (Vertex w : adj.out(queue_[q])) {
                if (mark_[w] != epoch_) {
                    mark_[w] = epoch_;
                    queue_.push_back(w);
                }
            }
        }
        const std::size_t added = queue_.size() - layer_end;
        p.counts.push_back(added);
        p.total += added;
        ++depth;
        if (added == 0) {
            p.exhausted = true;
            break;
        }
        layer_begin = layer_end;
        layer_end = queue_.size();
    }
    return p;
}

std::size_t Reachability::reach_size_capped(Vertex origin, Direction dir, std::size_t limit) {
    check(origin);
    const Digraph& adj = adjacency(dir);
    reset();
    mark_[origin] = epoch_;
    queue_.push_back(origin);
    if (queue_.size() > limit)
        return queue_.size();
    for (std::size_t q = 0; q < queue_.size(); ++q) {
        for (Vertex w : adj.out(queue_[q])) {
            if (mark_[w] != epoch_) {
                mark_[w] = epoch_;
                queue_.push_back(w);
                if (queue_.size() > limit)
                    return queue_.size();
            }
        }
    }
    return queue_.size();
}

std::size_t Reachability::reach_size(Vertex origin, Direction dir) {
    return reach_size_capped(origin, dir, kUnbounded - 1);
}

bool Reachability::reaches(Vertex from, Vertex to) {
    check(from);
    check(to);
    if (from == to)
        return true;
    reset();
    mark_[from] = epoch_;
    queue_.push_back(from);
    for (std::size_t q = 0; q < queue_.size(); ++q) {
        for (Vertex w : g_.out(queue_[q])) {
            if (w == to)
                return true;
            if (mark_[w] != epoch_) {
                mark_[w] = epoch_;
                queue_.push_back(w);
            }
        }
    }
    return false;
}

GenerationProfile out_generations(const Digraph& g, Vertex i, std::size_t m_max) {
    return Reachability(g, false).generations(i, Direction::out, m_max);
}

GenerationProfile in_generations(const Digraph& g, Vertex i, std::size_t m_max) {
    return Reachability(g, true).generations(i, Direction::in, m_max);
}

std::size_t reach_size(const Digraph& g, Vertex i) {
    return Reachability(g, false).reach_size(i, Direction::out);
}

std::size_t coreach_size(const Digraph& g, Vertex i) {
    return Reachability(g, true).reach_size(i, Direction::in);
}

bool reaches(const Digraph& g, Vertex i, Vertex j) {
    return Reachability(g, false).reaches(i, j);
}

SmallCounts count_small(const Digraph& g, std::size_t K) {
    return count_small(g, scc(g), K);
}

SmallCounts count_small(const Digraph& g, const SccSummary& comps, std::size_t K) {
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> comp_size(comps.count(), 0);
    for (auto c : comps.component)
        ++comp_size[c];
    Reachability bfs(g, true);
    SmallCounts out;
    for (Vertex v = 0; v < n; ++v) {
        if (comp_size[comps.component[v]] > K) {
            // the component alone gives T_v > K and T'_v > K
            ++out.n_large;
            continue;
        }
        const bool small_in = bfs.reach_size_capped(v, Direction::in, K) <= K;
        const bool small_out = small_in || bfs.reach_size_capped(v, Direction::out, K) <= K;
        out.n_small += small_in ? 1 : 0;
        out.e_small += small_out ? 1 : 0;
    }
    return out;
}

namespace {

// prod_{i=1..k} (1 - a / (n - i)) for k = 0..kmax; zero once a factor vanishes.
std::vector<double> avoid_products(std::int64_t n, std::int64_t a, std::int64_t kmax) {
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 1.0);
    double prod = 1.0;
    double log_prod = 0.0;
    bool zero = false;
    for (std::int64_t i = 1; i <= kmax; ++i) {
        const auto denom = static_cast<double>(n - i);
        if (n - i - a <= 0)
            zero = true;
        if (zero) {
            out[i] = 0.0;
            continue;
        }
        const double factor_log = std::log1p(-static_cast<double>(a) / denom);
        if (i <= 1000) {
            prod *= static_cast<double>(n - i - a) / denom;
            log_prod += factor_log;
            out[i] = prod;
        } else {
            log_prod += factor_log;
            out[i] = std::exp(log_prod);
        }
    }
    return out;
}

} // namespace

AvoidHit avoid_hit_exact(const OutdegreeLaw& law, std::int64_t n, std::int64_t r, std::int64_t s,
                         GraphKind kind) {
    if (n < 1 || r < 0 || s < 0 || r + s + 1 > n)
        throw std::invalid_argument("avoid_hit_exact: need r, s >= 0 and r + s + 1 <= n");
    AvoidHit out{0.0, 0.0};
    if (kind == GraphKind::simple) {
        const OutdegreeLaw clamped = clamp_to_simple(law, n);
        const std::int64_t kmax = clamped.max_support();
        const auto pa = avoid_products(n, r, kmax);
        const auto pb = avoid_products(n, r + s, kmax);
        for (const auto& atom : clamped.atoms()) {
            out.p_avoid += atom.p * pa[atom.k];
            out.p_hit_and_avoid += atom.p * (pa[atom.k] - pb[atom.k]);
        }
        return out;
    }
    const double nn = static_cast<double>(n);
    const double log_stay = std::log1p(-static_cast<double>(r) / nn);
    const double log_miss = std::log1p(-static_cast<double>(s) / static_cast<double>(n - r));
    for (const auto& atom : law.atoms()) {
        const auto k = static_cast<double>(atom.k);
        const double avoid = atom.k == 0 ? 1.0 : std::exp(k * log_stay);
        const double hit = atom.k == 0 ? 0.0 : -std::expm1(k * log_miss);
        out.p_avoid += atom.p * avoid;
        out.p_hit_and_avoid += atom.p * avoid * hit;
    }
    return out;
}

GraphExploration explore_on_graph(const Digraph& g, Vertex origin) {
    if (g.kind() != GraphKind::multi)
        throw std::invalid_argument("explore_on_graph: requires a multigraph");
    if (origin >= g.vertex_count())
        throw std::out_of_range("explore_on_graph: origin out of range");
    GraphExploration ex;
    auto& tr = ex.trace;
    std::vector<bool> found(g.vertex_count(), false);
    std::vector<Vertex> order{origin};
    found[origin] = true;
    std::int64_t arcs = static_cast<std::int64_t>(g.outdegree(origin));
    tr.R.push_back(arcs);
    tr.N.push_back(1);
    tr.S.push_back(arcs);
    std::size_t current = 0;  // position in `order` whose arcs are being revealed
    std::size_t next_arc = 0;
    std::int64_t t = 0;
    while (tr.S.back() > 0) {
        while (next_arc == g.outdegree(order[current])) {
            ++current;
            next_arc = 0;
        }
        const Vertex head = g.out(order[current])[next_arc++];
        ++t;
        if (!found[head]) {
            found[head] = true;
            order.push_back(head);
            arcs += static_cast<std::int64_t>(g.outdegree(head));
        }
        tr.R.push_back(arcs);
        tr.N.push_back(static_cast<std::int64_t>(order.size()));
        tr.S.push_back(arcs - t);
    }
    tr.tau = t;
    tr.surv = false;
    ex.discovered = order.size();
    return ex;
}

} // namespace rdg
