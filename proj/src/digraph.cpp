#include "rdg/digraph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace rdg {

std::string_view to_string(GraphKind kind) {
    return kind == GraphKind::multi ? "multi" : "simple";
}

GraphKind parse_graph_kind(std::string_view text) {
    if (text == "multi")
        return GraphKind::multi;
    if (text == "simple")
        return GraphKind::simple;
    throw std::invalid_argument("unknown graph kind '" + std::string(text) +
                                "' (expected multi or simple)");
}

Digraph::Digraph(GraphKind kind, std::vector<std::size_t> offsets, std::vector<Vertex> targets)
    : kind_(kind), offsets_(std::move(offsets)), targets_(std::move(targets)) {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != targets_.size())
        throw std::invalid_argument("Digraph: inconsistent offsets");
}

Digraph Digraph::from_arcs(std::size_t n, GraphKind kind,
                           std::span<const std::pair<Vertex, Vertex>> arcs) {
    std::vector<std::size_t> offsets(n + 1, 0);
    for (const auto& [s, t] : arcs) {
        if (s >= n || t >= n)
            throw std::out_of_range("Digraph::from_arcs: vertex id out of range");
        ++offsets[s + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<Vertex> targets(arcs.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [s, t] : arcs)
        targets[cursor[s]++] = t;
    return Digraph(kind, std::move(offsets), std::move(targets));
}

Digraph Digraph::transpose() const {
    const std::size_t n = vertex_count();
    std::vector<std::size_t> offsets(n + 1, 0);
    for (Vertex t : targets_)
        ++offsets[t + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<Vertex> sources(targets_.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex t : out(v))
            sources[cursor[t]++] = v;
    return Digraph(kind_, std::move(offsets), std::move(sources));
}

Digraph gen_multigraph(std::size_t n, const OutdegreeLaw& law, Rng& rng) {
    if (n < 1)
        throw std::invalid_argument("gen_multigraph: n must be positive");
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(static_cast<std::size_t>(law.mean() * static_cast<double>(n) * 1.05) + 16);
    for (std::size_t v = 0; v < n; ++v) {
        const auto deg = law.sample(rng);
        for (std::int64_t a = 0; a < deg; ++a)
            targets.push_back(static_cast<Vertex>(uniform_below(rng, n)));
        offsets[v + 1] = targets.size();
    }
    return Digraph(GraphKind::multi, std::move(offsets), std::move(targets));
}

namespace {

// Marks chosen heads for the current source vertex.
class Stamp {
public:
    explicit Stamp(std::size_t n) : mark_(n, 0) {}
    void next() { ++epoch_; }
    bool test_and_set(Vertex v) {
        if (mark_[v] == epoch_)
            return true;
        mark_[v] = epoch_;
        return false;
    }

private:
    std::vector<std::uint32_t> mark_;
    std::uint32_t epoch_ = 0;
};

void append_all_others(std::vector<Vertex>& targets, std::size_t n, Vertex self) {
    for (Vertex u = 0; u < n; ++u)
        if (u != self)
            targets.push_back(u);
}

} // namespace

Digraph gen_simple(std::size_t n, const OutdegreeLaw& law, Rng& rng) {
    if (n < 1)
        throw std::invalid_argument("gen_simple: n must be positive");
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(static_cast<std::size_t>(law.mean() * static_cast<double>(n) * 1.05) + 16);
    Stamp stamp(n);
    std::vector<Vertex> pool;
    const std::size_t others = n - 1;
    for (std::size_t v = 0; v < n; ++v) {
        const auto self = static_cast<Vertex>(v);
        const auto xi = static_cast<std::size_t>(law.sample(rng));
        const std::size_t d = std::min(xi, others);
        if (d == others) {
            append_all_others(targets, n, self);
        } else if (2 * d <= others) {
            stamp.next();
            stamp.test_and_set(self);
            for (std::size_t got = 0; got < d;) {
                const auto u = static_cast<Vertex>(uniform_below(rng, n));
                if (!stamp.test_and_set(u)) {
                    targets.push_back(u);
                    ++got;
                }
            }
        } else {
            // partial Fisher-Yates over the other n-1 vertices
            pool.clear();
            append_all_others(pool, n, self);
            for (std::size_t j = 0; j < d; ++j) {
                const auto pick = j + uniform_below(rng, others - j);
                std::swap(pool[j], pool[pick]);
                targets.push_back(pool[j]);
            }
        }
        offsets[v + 1] = targets.size();
    }
    return Digraph(GraphKind::simple, std::move(offsets), std::move(targets));
}

CoupledPair gen_coupled(std::size_t n, const OutdegreeLaw& law, Rng& rng) {
    if (n < 2)
        throw std::invalid_argument("gen_coupled: n must be at least 2");
    std::vector<std::size_t> moff(n + 1, 0), soff(n + 1, 0);
    std::vector<Vertex> mt, st;
    Stamp stamp(n);
    const std::size_t others = n - 1;
    for (std::size_t v = 0; v < n; ++v) {
        const auto self = static_cast<Vertex>(v);
        const auto xi = static_cast<std::size_t>(law.sample(rng));
        const std::size_t d = std::min(xi, others);
        stamp.next();
        stamp.test_and_set(self);
        std::size_t got = 0;
        // shared i.i.d. uniform sequence: first xi terms are the multigraph arcs
        for (std::size_t a = 0; a < xi; ++a) {
            const auto u = static_cast<Vertex>(uniform_below(rng, n));
            mt.push_back(u);
            if (d < others && got < d && !stamp.test_and_set(u)) {
                st.push_back(u);
                ++got;
            }
        }
        if (d == others) {
            append_all_others(st, n, self);
        } else {
            // extend the sequence until d distinct non-loop heads are seen
            while (got < d) {
                const auto u = static_cast<Vertex>(uniform_below(rng, n));
                if (!stamp.test_and_set(u)) {
                    st.push_back(u);
                    ++got;
                }
            }
        }
        moff[v + 1] = mt.size();
        soff[v + 1] = st.size();
    }
    return {Digraph(GraphKind::multi, std::move(moff), std::move(mt)),
            Digraph(GraphKind::simple, std::move(soff), std::move(st))};
}

Digraph generate(GraphKind kind, std::size_t n, const OutdegreeLaw& law, Rng& rng) {
    return kind == GraphKind::multi ? gen_multigraph(n, law, rng) : gen_simple(n, law, rng);
}

Digraph simplify(const Digraph& g) {
    if (g.kind() == GraphKind::simple)
        return g;
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(g.arc_count());
    for (Vertex v = 0; v < n; ++v) {
        const auto begin = targets.size();
        for (Vertex t : g.out(v))
            if (t != v)
                targets.push_back(t);
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(begin), targets.end());
        targets.erase(std::unique(targets.begin() + static_cast<std::ptrdiff_t>(begin), targets.end()),
                      targets.end());
        offsets[v + 1] = targets.size();
    }
    return Digraph(GraphKind::simple, std::move(offsets), std::move(targets));
}

void write_edgelist(const Digraph& g, std::ostream& sink, std::span<const std::string> comments) {
    sink << g.vertex_count() << ' ' << g.arc_count() << ' ' << to_string(g.kind()) << '\n';
    for (const auto& c : comments) {
        std::istringstream lines(c);
        std::string line;
        while (std::getline(lines, line))
            sink << "# " << line << '\n';
    }
    std::string buf;
    buf.reserve(1 << 16);
    char num[24];
    auto put = [&](std::uint64_t x) {
        auto [p, ec] = std::to_chars(num, num + sizeof num, x);
        buf.append(num, p);
    };
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        for (Vertex t : g.out(v)) {
            put(std::uint64_t{v} + 1);
            buf.push_back(' ');
            put(std::uint64_t{t} + 1);
            buf.push_back('\n');
        }
        if (buf.size() > (1 << 16) - 64) {
            sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!sink)
        throw GraphFormatError("write_edgelist: output stream failure");
}

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::vector<std::string_view> fields_of(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            f.push_back(line.substr(start, i - start));
    }
    return f;
}

} // namespace

Digraph read_edgelist(std::istream& source) {
    std::string line;
    if (!std::getline(source, line))
        throw GraphFormatError("edge list: missing header line");
    const auto header = fields_of(line);
    std::uint64_t n = 0, m = 0;
    if (header.size() != 3 || !parse_u64(header[0], n) || !parse_u64(header[1], m))
        throw GraphFormatError("edge list: malformed header '" + line + "' (expected 'n m kind')");
    if (n > std::uint64_t{0xffffffffu})
        throw GraphFormatError("edge list: vertex count too large");
    GraphKind kind;
    try {
        kind = parse_graph_kind(header[2]);
    } catch (const std::invalid_argument& e) {
        throw GraphFormatError(std::string("edge list header: ") + e.what());
    }

    std::vector<std::pair<Vertex, Vertex>> arcs;
    arcs.reserve(m);
    std::size_t lineno = 1;
    while (std::getline(source, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto f = fields_of(line);
        if (f.empty())
            continue;
        std::uint64_t s = 0, t = 0;
        if (f.size() != 2 || !parse_u64(f[0], s) || !parse_u64(f[1], t))
            throw GraphFormatError("edge list line " + std::to_string(lineno) + ": expected 'src dst'");
        if (s < 1 || s > n || t < 1 || t > n)
            throw GraphFormatError("edge list line " + std::to_string(lineno) + ": vertex id out of range 1.." +
                                   std::to_string(n));
        if (arcs.size() == m)
            throw GraphFormatError("edge list: more arcs than the header's m=" + std::to_string(m));
        arcs.emplace_back(static_cast<Vertex>(s - 1), static_cast<Vertex>(t - 1));
    }
    if (arcs.size() != m)
        throw GraphFormatError("edge list: header declares " + std::to_string(m) + " arcs, found " +
                               std::to_string(arcs.size()));
    Digraph g = Digraph::from_arcs(n, kind, arcs);
    if (kind == GraphKind::simple) {
        std::vector<Vertex> heads;
        for (Vertex v = 0; v < n; ++v) {
            heads.assign(g.out(v).begin(), g.out(v).end());
            std::sort(heads.begin(), heads.end());
            if (std::binary_search(heads.begin(), heads.end(), v))
                throw GraphFormatError("edge list: loop at vertex " + std::to_string(v + 1) +
                                       " in a simple graph");
            if (std::adjacent_find(heads.begin(), heads.end()) != heads.end())
                throw GraphFormatError("edge list: parallel arcs from vertex " + std::to_string(v + 1) +
                                       " in a simple graph");
        }
    }
    return g;
}

} // namespace rdg
