#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdg/analysis.hpp"
#include "rdg/branching.hpp"
#include "rdg/digraph.hpp"
#include "rdg/experiments.hpp"
#include "rdg/exploration.hpp"
#include "rdg/law_spec.hpp"
#include "rdg/report.hpp"

namespace {

using namespace rdg;

struct SeedFlag {
    std::uint64_t value = 0;
    CLI::Option* opt = nullptr;

    void add(CLI::App* cmd) { opt = cmd->add_option("--seed", value, "master seed (drawn from entropy if absent)"); }
    std::uint64_t resolve() {
        if (opt->count() == 0)
            value = entropy_seed();
        return value;
    }
};

struct ExperimentFlags {
    std::string law = "point:k=2";
    std::vector<std::string> kinds{"simple"};
    std::vector<std::int64_t> ns;
    std::int64_t reps = 20;
    std::size_t K = 50;
    std::size_t m_max = 2;
    std::vector<double> s_grid;
    unsigned workers = 1;
    std::string out;
    bool timing = false;
    SeedFlag seed;

    void add(CLI::App* cmd, std::vector<std::int64_t> default_ns, std::int64_t default_reps) {
        ns = std::move(default_ns);
        reps = default_reps;
        cmd->add_option("--law", law, "outdegree law or family spec")->capture_default_str();
        cmd->add_option("--kind", kinds, "graph kind(s): multi, simple or both")->capture_default_str();
        cmd->add_option("--n", ns, "vertex counts")->capture_default_str();
        cmd->add_option("--reps", reps, "replicate graphs per (n, kind)")->capture_default_str();
        cmd->add_option("--K", K, "small-component threshold")->capture_default_str();
        cmd->add_option("--m-max", m_max, "generation depth")->capture_default_str();
        cmd->add_option("--s-grid", s_grid, "time grid for fluid comparisons");
        cmd->add_option("--workers", workers, "worker threads")->capture_default_str();
        cmd->add_option("--out", out, "write <prefix>.json and <prefix>.csv");
        cmd->add_flag("--timing", timing, "include wall time in reports");
        seed.add(cmd);
    }

    ExperimentConfig resolve() {
        ExperimentConfig c;
        c.law = parse_law_spec(law);
        c.kinds.clear();
        for (const auto& k : kinds) {
            if (k == "both") {
                c.kinds.push_back(GraphKind::multi);
                c.kinds.push_back(GraphKind::simple);
            } else {
                c.kinds.push_back(parse_graph_kind(k));
            }
        }
        c.ns = ns;
        c.replicates = reps;
        c.K = K;
        c.m_max = m_max;
        c.s_grid = s_grid;
        c.seed = seed.resolve();
        c.workers = workers;
        c.output = out;
        return c;
    }
};

std::string cell(double x) {
    if (std::isnan(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void print_report(const ExperimentReport& rep, bool timing) {
    std::cout << "experiment: " << rep.experiment << "\nseed: " << rep.seed << "\n";
    std::cout << "estimator\tlabel\tn\tkind\testimate\tse\ttarget\treps";
    if (timing)
        std::cout << "\tseconds";
    std::cout << "\n";
    for (const auto& r : rep.rows) {
        std::cout << r.estimator << '\t' << (r.label.empty() ? "-" : r.label) << '\t' << r.n << '\t'
                  << (r.kind.empty() ? "-" : r.kind) << '\t' << cell(r.estimate) << '\t' << cell(r.se)
                  << '\t' << cell(r.target) << '\t' << r.reps;
        if (timing)
            std::cout << '\t' << cell(r.wall_seconds);
        std::cout << "\n";
    }
}

void finish_experiment(const ExperimentReport& rep, const ExperimentFlags& f) {
    if (!f.out.empty())
        write_report(rep, f.out, f.timing);
    print_report(rep, f.timing);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return file;
}

std::string version_line() { return std::string("rdg ") + RDG_VERSION; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random outdegree digraphs: survival, generation, analysis and Monte Carlo experiments"};
    app.set_version_flag("--version", version_line());
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
    app.require_subcommand(1, 1);

    // survival
    auto* survival_cmd = app.add_subcommand("survival", "survival probabilities sigma(F) and sigma'(mu)");
    std::string survival_law;
    double survival_mu = 0.0;
    survival_cmd->add_option("--law", survival_law, "outdegree law spec");
    auto* mu_opt = survival_cmd->add_option("--poisson-mu", survival_mu, "Poisson mean (default: mean of --law)");

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "sample a graph and write an edge list");
    std::int64_t gen_n = 0;
    std::string gen_law = "point:k=2", gen_kind = "simple", gen_out;
    SeedFlag gen_seed;
    generate_cmd->add_option("--n", gen_n, "vertex count")->required();
    generate_cmd->add_option("--law", gen_law, "outdegree law or family spec")->capture_default_str();
    generate_cmd->add_option("--kind", gen_kind, "multi or simple")->capture_default_str();
    generate_cmd->add_option("--out", gen_out, "output file (default stdout)");
    gen_seed.add(generate_cmd);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "strong components and small-reach counts of an edge list");
    std::string an_in, an_out;
    std::size_t an_K = 50;
    analyze_cmd->add_option("--in", an_in, "edge-list file")->required();
    analyze_cmd->add_option("--K", an_K, "small threshold")->capture_default_str();
    analyze_cmd->add_option("--out", an_out, "output file (default stdout)");

    // explore
    auto* explore_cmd = app.add_subcommand("explore", "arc-revelation trace rows t,R,N,S");
    std::int64_t ex_n = 10'000, ex_horizon = kDefaultHorizon;
    std::string ex_law = "point:k=2", ex_out;
    double ex_fluid = 0.0;
    SeedFlag ex_seed;
    explore_cmd->add_option("--n", ex_n, "vertex count")->capture_default_str();
    explore_cmd->add_option("--law", ex_law, "outdegree law spec")->capture_default_str();
    explore_cmd->add_option("--horizon", ex_horizon, "maximum number of steps")->capture_default_str();
    auto* fluid_opt = explore_cmd->add_option("--fluid", ex_fluid, "add column n*((1-e^{-t/n}) mu - t/n)");
    explore_cmd->add_option("--out", ex_out, "output file (default stdout)");
    ex_seed.add(explore_cmd);

    ExperimentFlags giant_f, reach_f, connect_f, cx_f, sweep_f, branch_f;
    auto* giant_cmd = app.add_subcommand("mc-giant", "L_1/n and L_2/n across replicate graphs");
    giant_f.add(giant_cmd, {100'000}, 20);
    auto* reach_cmd = app.add_subcommand("mc-reach", "two-cluster summary of T_1/n");
    reach_f.add(reach_cmd, {100'000}, 400);
    auto* connect_cmd = app.add_subcommand("mc-connect", "frequencies of 1~>2 and 1<~>2");
    connect_f.add(connect_cmd, {5000}, 4000);
    auto* cx_cmd = app.add_subcommand("counterexample", "hub family F_n{2: 1-2/n, n-1: 2/n}");
    cx_f.add(cx_cmd, {20'000}, 400);
    cx_f.law = "family:counterexample";
    auto* sweep_cmd = app.add_subcommand("sweep-unif", "Ky Fan distance of L_1/n over a law panel");
    sweep_f.add(sweep_cmd, {1000, 10'000, 100'000}, 20);
    std::vector<std::string> sweep_laws;
    std::string sweep_bn = "sqrt";
    sweep_cmd->remove_option(sweep_cmd->get_option("--law"));
    sweep_cmd->add_option("--law", sweep_laws, "panel law (repeatable; default panel if absent)");
    sweep_cmd->add_option("--bn", sweep_bn, "support bound rule: sqrt, pow:<a>, const:<b>")->capture_default_str();
    auto* branch_cmd = app.add_subcommand("branching-approx", "local generations against branching references");
    branch_f.add(branch_cmd, {100'000}, 10'000);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (survival_cmd->parsed()) {
            std::optional<GiantTarget> t;
            if (!survival_law.empty()) {
                const LawFamily fam = parse_law_spec(survival_law);
                t = fam.kind() == LawFamily::Kind::constant ? giant_target(fam.at(2)) : giant_target(fam);
                std::cout << "law: " << fam.label() << "\n";
            }
            if (mu_opt->count() == 0 && !t)
                throw std::invalid_argument("survival: give --law and/or --poisson-mu");
            const double mu = mu_opt->count() ? survival_mu : t->mu;
            const double sp = poisson_survival(mu);
            if (t)
                std::cout << "sigma = " << t->sigma << "\n";
            std::cout << "mu = " << mu << "\nsigma' = " << sp << "\n";
            if (t)
                std::cout << "product = " << t->sigma * sp << "\n";
        } else if (generate_cmd->parsed()) {
            if (gen_n < 1)
                throw std::invalid_argument("generate: --n must be >= 1");
            const std::uint64_t seed = gen_seed.resolve();
            const LawFamily fam = parse_law_spec(gen_law);
            const GraphKind kind = parse_graph_kind(gen_kind);
            Rng rng = derive_stream(seed, 0);
            const Digraph g = generate(kind, static_cast<std::size_t>(gen_n), fam.at(gen_n), rng);
            const nlohmann::json cfg{{"n", gen_n}, {"law", fam.label()}, {"kind", gen_kind}};
            const std::vector<std::string> comments{version_line(), "config: " + cfg.dump(),
                                                    "seed: " + std::to_string(seed)};
            if (gen_out.empty()) {
                write_edgelist(g, std::cout, comments);
            } else {
                auto file = open_output(gen_out);
                write_edgelist(g, file, comments);
                if (!file.flush())
                    throw std::runtime_error("write to '" + gen_out + "' failed");
                std::cout << "seed: " << seed << "\n";
            }
        } else if (analyze_cmd->parsed()) {
            std::ifstream in(an_in, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot open '" + an_in + "'");
            const Digraph g = read_edgelist(in);
            const SccSummary comps = scc(g);
            const SmallCounts sc = count_small(g, comps, an_K);
            std::map<std::size_t, std::size_t> hist;
            for (auto s : comps.sizes)
                ++hist[s];
            nlohmann::json j;
            j["tool"] = "rdg";
            j["version"] = RDG_VERSION;
            j["input"] = an_in;
            j["n"] = g.vertex_count();
            j["m"] = g.arc_count();
            j["kind"] = to_string(g.kind());
            j["components"] = comps.count();
            j["L1"] = comps.L(1);
            j["L2"] = comps.L(2);
            auto& hj = j["component_sizes"] = nlohmann::json::array();
            for (auto it = hist.rbegin(); it != hist.rend(); ++it)
                hj.push_back({{"size", it->first}, {"count", it->second}});
            j["K"] = an_K;
            j["n_small"] = sc.n_small;
            j["e_small"] = sc.e_small;
            j["n_large"] = sc.n_large;
            const std::string text = j.dump(2) + "\n";
            if (an_out.empty()) {
                std::cout << text;
            } else {
                auto file = open_output(an_out);
                file << text;
            }
        } else if (explore_cmd->parsed()) {
            const std::uint64_t seed = ex_seed.resolve();
            const OutdegreeLaw law = parse_law_spec(ex_law).at(ex_n);
            Rng rng = derive_stream(seed, 0);
            const auto tr = simulate_trace(ex_n, law, rng, ex_horizon);
            std::ostringstream o;
            o << "# " << version_line() << "\n# config: "
              << nlohmann::json{{"n", ex_n}, {"law", law.to_string()}, {"horizon", ex_horizon}}.dump()
              << "\n# seed: " << seed << "\n# tau: " << (tr.tau ? std::to_string(*tr.tau) : "censored")
              << "\n";
            o << "t,R,N,S" << (fluid_opt->count() ? ",fluid" : "") << "\n";
            const double nn = static_cast<double>(ex_n);
            for (std::size_t t = 0; t < tr.S.size(); ++t) {
                o << t << ',' << tr.R[t] << ',' << tr.N[t] << ',' << tr.S[t];
                if (fluid_opt->count())
                    o << ',' << cell(nn * fluid_limit(ex_fluid, static_cast<double>(t) / nn));
                o << "\n";
            }
            if (ex_out.empty()) {
                std::cout << o.str();
            } else {
                auto file = open_output(ex_out);
                file << o.str();
                std::cout << "seed: " << seed << "\n";
            }
        } else if (giant_cmd->parsed()) {
            finish_experiment(mc_giant(giant_f.resolve()), giant_f);
        } else if (reach_cmd->parsed()) {
            finish_experiment(mc_reach(reach_f.resolve()), reach_f);
        } else if (connect_cmd->parsed()) {
            finish_experiment(mc_connect(connect_f.resolve()), connect_f);
        } else if (cx_cmd->parsed()) {
            finish_experiment(counterexample_run(cx_f.resolve()), cx_f);
        } else if (branch_cmd->parsed()) {
            finish_experiment(branching_approx_check(branch_f.resolve()), branch_f);
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig c = sweep_f.resolve();
            c.bound = parse_bound_rule(sweep_bn);
            c.bound_label = sweep_bn;
            for (const auto& spec : sweep_laws)
                c.panel.push_back(parse_law_spec(spec));
            finish_experiment(uniformity_sweep(c), sweep_f);
        }
    } catch (const std::exception& e) {
        std::cerr << "rdg: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
