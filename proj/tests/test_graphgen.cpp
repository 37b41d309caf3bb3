#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "rdg/analysis.hpp"
#include "rdg/digraph.hpp"
#include "rdg/stats.hpp"

using namespace rdg;

namespace {

const OutdegreeLaw kMix = OutdegreeLaw::from_pairs({{0, 0.25}, {2, 0.75}});

std::set<std::pair<Vertex, Vertex>> arc_set(const Digraph& g) {
    std::set<std::pair<Vertex, Vertex>> s;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (auto w : g.out(v))
            s.insert({v, w});
    return s;
}

void check_simple(const Digraph& g) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::set<Vertex> seen;
        for (auto w : g.out(v)) {
            CHECK(w != v);
            CHECK(w < g.vertex_count());
            CHECK(seen.insert(w).second);
        }
    }
}

// uniformity of the out-neighborhood of vertex 0 over all k-subsets of {1..n-1}
stats::ChiSquare subset_uniformity(std::size_t n, std::int64_t k, int samples, std::uint64_t seed,
                                    bool coupled) {
    std::map<std::vector<Vertex>, double> counts;
    const auto law = point_mass(k);
    for (int i = 0; i < samples; ++i) {
        Rng rng = derive_stream(seed, static_cast<std::uint64_t>(i));
        const Digraph g = coupled ? gen_coupled(n, law, rng).simple : gen_simple(n, law, rng);
        std::vector<Vertex> s(g.out(0).begin(), g.out(0).end());
        std::sort(s.begin(), s.end());
        counts[s] += 1.0;
    }
    // number of k-subsets of n-1 items
    double subsets = 1.0;
    for (std::int64_t j = 0; j < k; ++j)
        subsets = subsets * static_cast<double>(n - 1 - j) / static_cast<double>(j + 1);
    std::vector<double> obs, expv;
    for (const auto& [s, c] : counts)
        obs.push_back(c);
    // subsets never drawn still contribute their expected count
    const auto missing = static_cast<std::size_t>(std::llround(subsets)) - obs.size();
    obs.insert(obs.end(), missing, 0.0);
    expv.assign(obs.size(), samples / subsets);
    return stats::chi_square_counts(obs, expv);
}

} // namespace

TEST_CASE("multigraph basics") {
    Rng rng = derive_stream(1, 0);
    CHECK(gen_multigraph(1, point_mass(0), rng).arc_count() == 0);
    const auto g = gen_multigraph(5, point_mass(2), rng);
    CHECK(g.arc_count() == 10);
    CHECK(g.kind() == GraphKind::multi);
    for (Vertex v = 0; v < 5; ++v)
        CHECK(g.outdegree(v) == 2);
}

TEST_CASE("multigraph arc and loop counts") {
    const int samples = 200;
    const std::size_t n = 1000;
    std::vector<double> arcs, loops;
    for (int i = 0; i < samples; ++i) {
        Rng rng = derive_stream(2, static_cast<std::uint64_t>(i));
        const auto g = gen_multigraph(n, kMix, rng);
        arcs.push_back(static_cast<double>(g.arc_count()));
        double l = 0;
        for (Vertex v = 0; v < n; ++v)
            for (auto w : g.out(v))
                l += w == v;
        loops.push_back(l);
    }
    const auto a = stats::mean_se(arcs), l = stats::mean_se(loops);
    const double se_arcs = std::sqrt(n * 0.75 / samples);
    CHECK(std::abs(a.mean - 1500.0) < 3 * se_arcs);
    // each arc is a loop with probability 1/n
    const double se_loops = std::sqrt(1.5 / samples);
    CHECK(std::abs(l.mean - 1.5) < 3 * se_loops);
}

TEST_CASE("multigraph degree law and destination uniformity") {
    const std::size_t n = 100'000;
    const auto law = poisson_law(2.0);
    Rng rng = derive_stream(3, 0);
    const auto g = gen_multigraph(n, law, rng);
    std::vector<std::int64_t> deg;
    for (Vertex v = 0; v < n; ++v)
        deg.push_back(static_cast<std::int64_t>(g.outdegree(v)));
    std::vector<double> ref(law.max_support() + 1);
    for (const auto& at : law.atoms())
        ref[at.k] = at.p;
    const auto chi = stats::chi_square(deg, ref);
    CHECK(chi.statistic < chi.critical);

    // first arc of vertex 0 over many graphs is uniform on all n vertices
    const std::size_t small = 20;
    std::vector<double> counts(small, 0.0);
    for (int i = 0; i < 40'000; ++i) {
        Rng r = derive_stream(4, static_cast<std::uint64_t>(i));
        counts[gen_multigraph(small, point_mass(1), r).out(0)[0]] += 1.0;
    }
    const auto u = stats::chi_square_counts(counts, std::vector<double>(small, 2000.0));
    CHECK(u.statistic < u.critical);
}

TEST_CASE("simple digraph basics") {
    Rng rng = derive_stream(5, 0);
    const auto g3 = gen_simple(3, point_mass(2), rng);
    CHECK(g3.arc_count() == 6);
    CHECK(scc(g3).L(1) == 3);
    const auto g5 = gen_simple(5, point_mass(10), rng);
    CHECK(g5.arc_count() == 20);
    check_simple(g5);
    CHECK(gen_simple(1, point_mass(4), rng).arc_count() == 0);

    for (int i = 0; i < 200; ++i) {
        const auto law = i % 2 ? poisson_law(3.0) : OutdegreeLaw::from_pairs({{1, 1}, {8, 1}, {30, 1}});
        const auto g = gen_simple(10 + i % 7, law, rng);
        check_simple(g);
    }
}

TEST_CASE("simple digraph outdegrees follow clamp_to_simple") {
    const std::size_t n = 100'000;
    const auto law = OutdegreeLaw::from_pairs({{0, 0.2}, {1, 0.3}, {3, 0.4}, {7, 0.1}});
    Rng rng = derive_stream(6, 0);
    const auto g = gen_simple(n, law, rng);
    std::vector<std::int64_t> deg;
    for (Vertex v = 0; v < n; ++v)
        deg.push_back(static_cast<std::int64_t>(g.outdegree(v)));
    const std::vector<double> ref{0.2, 0.3, 0, 0.4, 0, 0, 0, 0.1};
    const auto chi = stats::chi_square(deg, ref);
    CHECK(chi.impossible == 0);
    CHECK(chi.statistic < chi.critical);

    // small n: every outdegree is exactly min(xi, n-1) for point masses
    for (std::int64_t k = 0; k < 12; ++k) {
        const auto h = gen_simple(6, point_mass(k), rng);
        for (Vertex v = 0; v < 6; ++v)
            CHECK(h.outdegree(v) == static_cast<std::size_t>(std::min<std::int64_t>(k, 5)));
    }
}

TEST_CASE("simple digraph single arc is uniform on the other vertices") {
    const std::size_t n = 100;
    std::vector<double> counts(n - 1, 0.0);
    for (int i = 0; i < 100'000; ++i) {
        Rng rng = derive_stream(7, static_cast<std::uint64_t>(i));
        const auto g = gen_simple(n, point_mass(1), rng);
        const auto w = g.out(0)[0];
        REQUIRE(w != 0);
        counts[w - 1] += 1.0;
    }
    const auto chi = stats::chi_square_counts(counts, std::vector<double>(n - 1, 100'000.0 / (n - 1)));
    CHECK(chi.statistic < chi.critical);
}

TEST_CASE("simple digraph subsets are uniform in both sampling regimes") {
    // k=2 of 9 uses rejection, k=7 of 9 the shuffle prefix
    for (std::int64_t k : {2, 7}) {
        const auto chi = subset_uniformity(10, k, 36'000, 8, false);
        INFO("k=" << k);
        CHECK(chi.statistic < chi.critical);
    }
}

TEST_CASE("coupled pair") {
    for (int i = 0; i < 2000; ++i) {
        Rng rng = derive_stream(9, static_cast<std::uint64_t>(i));
        const std::size_t n = 2 + i % 40;
        const auto law = i % 3 == 0 ? poisson_law(2.5)
                         : i % 3 == 1 ? OutdegreeLaw::from_pairs({{0, 1}, {3, 1}, {60, 1}})
                                      : point_mass(1 + i % 5);
        const auto pair = gen_coupled(n, law, rng);
        check_simple(pair.simple);
        CHECK(pair.multi.kind() == GraphKind::multi);
        CHECK(pair.simple.kind() == GraphKind::simple);
        const auto big = arc_set(pair.simple);
        for (const auto& arc : arc_set(simplify(pair.multi)))
            CHECK(big.count(arc) == 1);
        for (Vertex v = 0; v < n; ++v)
            CHECK(pair.simple.outdegree(v) == std::min(pair.multi.outdegree(v), n - 1));
    }

    // n = 2, point mass 1
    int loops = 0;
    const int reps = 4000;
    for (int i = 0; i < reps; ++i) {
        Rng rng = derive_stream(10, static_cast<std::uint64_t>(i));
        const auto pair = gen_coupled(2, point_mass(1), rng);
        loops += pair.multi.out(0)[0] == 0;
        CHECK(pair.simple.out(0)[0] == 1);
        CHECK(pair.simple.out(1)[0] == 0);
    }
    CHECK(std::abs(loops / double(reps) - 0.5) < 3 * std::sqrt(0.25 / reps));
}

TEST_CASE("coupled simple marginal matches gen_simple") {
    const std::size_t n = 50;
    const int samples = 10'000;
    std::vector<double> coupled(n - 1, 0.0), direct(n - 1, 0.0);
    for (int i = 0; i < samples; ++i) {
        Rng a = derive_stream(11, static_cast<std::uint64_t>(i));
        Rng b = derive_stream(12, static_cast<std::uint64_t>(i));
        const auto pair = gen_coupled(n, point_mass(3), a);
        const auto g = gen_simple(n, point_mass(3), b);
        for (auto w : pair.simple.out(0))
            coupled[w - 1] += 1.0;
        for (auto w : g.out(0))
            direct[w - 1] += 1.0;
    }
    const std::vector<double> expected(n - 1, samples * 3.0 / (n - 1));
    const auto c1 = stats::chi_square_counts(coupled, expected);
    const auto c2 = stats::chi_square_counts(direct, expected);
    CHECK(c1.statistic < c1.critical);
    CHECK(c2.statistic < c2.critical);
    // full subset law of the coupled component
    const auto chi = subset_uniformity(8, 3, 35'000, 13, true);
    CHECK(chi.statistic < chi.critical);
}

TEST_CASE("simplify") {
    const std::vector<std::pair<Vertex, Vertex>> arcs{{0, 0}, {0, 1}, {0, 1}};
    const auto g = Digraph::from_arcs(2, GraphKind::multi, arcs);
    const auto s = simplify(g);
    CHECK(s.kind() == GraphKind::simple);
    CHECK(s.arc_count() == 1);
    CHECK(s.out(0)[0] == 1);

    const std::vector<std::pair<Vertex, Vertex>> clean{{0, 2}, {1, 0}, {2, 1}};
    const auto c = Digraph::from_arcs(3, GraphKind::multi, clean);
    CHECK(arc_set(simplify(c)) == arc_set(c));

    Rng rng = derive_stream(14, 0);
    for (int i = 0; i < 100; ++i) {
        const auto m = gen_multigraph(30, poisson_law(3.0), rng);
        const auto sm = simplify(m);
        CHECK(sm.arc_count() <= m.arc_count());
        check_simple(sm);
        const auto already = gen_simple(30, poisson_law(3.0), rng);
        CHECK(simplify(already) == already);
    }
}

TEST_CASE("edge-list round trip and validation") {
    Rng rng = derive_stream(15, 0);
    for (auto kind : {GraphKind::multi, GraphKind::simple}) {
        const auto g = generate(kind, 300, poisson_law(2.0), rng);
        std::stringstream ss;
        const std::vector<std::string> comments{"a comment"};
        write_edgelist(g, ss, comments);
        const auto text = ss.str();
        const auto back = read_edgelist(ss);
        CHECK(back == g);
        std::stringstream again;
        write_edgelist(back, again, comments);
        CHECK(again.str() == text);
    }
    std::stringstream empty;
    write_edgelist(Digraph::from_arcs(4, GraphKind::simple, {}), empty);
    CHECK(empty.str() == "4 0 simple\n");

    auto read = [](const std::string& s) {
        std::istringstream in(s);
        return read_edgelist(in);
    };
    CHECK(read("2 1 multi\n1 1\n").arc_count() == 1);
    CHECK(read("3 2 simple\n# note\n\n1 2\n2 3\n").arc_count() == 2);
    CHECK_THROWS_AS(read("3 1 simple\n0 1\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 1 simple\n1 4\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 2 simple\n1 2\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 1 simple\n1 2\n2 3\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 1 weird\n1 2\n"), GraphFormatError);
    CHECK_THROWS_AS(read("x 1 simple\n1 2\n"), GraphFormatError);
    CHECK_THROWS_AS(read(""), GraphFormatError);
    CHECK_THROWS_AS(read("3 1 simple\n1 1\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 2 simple\n1 2\n1 2\n"), GraphFormatError);
    CHECK_THROWS_AS(read("3 1 simple\n1 2 3\n"), GraphFormatError);
}

TEST_CASE("generation is deterministic in the seed") {
    for (auto kind : {GraphKind::multi, GraphKind::simple}) {
        Rng a = derive_stream(16, 4), b = derive_stream(16, 4), c = derive_stream(16, 5);
        const auto g1 = generate(kind, 1000, poisson_law(2.0), a);
        const auto g2 = generate(kind, 1000, poisson_law(2.0), b);
        const auto g3 = generate(kind, 1000, poisson_law(2.0), c);
        CHECK(g1 == g2);
        CHECK_FALSE(g1 == g3);
    }
}
