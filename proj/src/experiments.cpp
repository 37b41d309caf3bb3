#include "rdg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "rdg/analysis.hpp"
#include "rdg/branching.hpp"
#include "rdg/stats.hpp"

namespace rdg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(10);
    o << x;
    return o.str();
}

nlohmann::json chi_json(const stats::ChiSquare& c) {
    return {{"statistic", c.statistic}, {"bins", c.bins},         {"dof", c.dof},
            {"p_value", c.p_value},     {"critical", c.critical}, {"applicable", c.applicable},
            {"impossible", c.impossible}};
}

std::vector<double> column(const std::vector<std::pair<double, double>>& xs, bool second) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(),
                   [&](const auto& p) { return second ? p.second : p.first; });
    return out;
}

double binomial_se(double p, std::size_t count) {
    return count > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(count)) : 0.0;
}

constexpr double kCounterexampleCut = 0.9;

} // namespace

nlohmann::json ExperimentConfig::echo() const {
    nlohmann::json j;
    j["law"] = law.label();
    auto& kj = j["kinds"] = nlohmann::json::array();
    for (auto k : kinds)
        kj.push_back(std::string(to_string(k)));
    j["n"] = ns;
    j["replicates"] = replicates;
    j["K"] = K;
    j["m_max"] = m_max;
    j["s_grid"] = s_grid;
    j["seed"] = seed;
    if (!panel.empty()) {
        auto& pj = j["panel"] = nlohmann::json::array();
        for (const auto& p : panel)
            pj.push_back(p.label());
    }
    if (!bound_label.empty())
        j["b_n"] = bound_label;
    return j;
}

void ExperimentConfig::validate() const {
    if (replicates < 1)
        throw std::invalid_argument("experiment config: replicates must be >= 1");
    if (ns.empty())
        throw std::invalid_argument("experiment config: empty n list");
    for (auto n : ns)
        if (n < 2)
            throw std::invalid_argument("experiment config: every n must be >= 2");
    if (kinds.empty())
        throw std::invalid_argument("experiment config: no graph kind selected");
}

std::string GiantTarget::source() const {
    return "sigma'(mu=" + fmt(mu) + ")=" + fmt(sigma_prime) + " * sigma(F)=" + fmt(sigma);
}

GiantTarget giant_target(const OutdegreeLaw& law) {
    GiantTarget t;
    t.sigma = survival(law);
    t.mu = law.mean();
    t.sigma_prime = poisson_survival(t.mu);
    return t;
}

GiantTarget giant_target(const LawFamily& family) {
    if (!family.limit_law())
        throw LawError("law family '" + family.label() +
                       "': limit has an atom at infinity; survival target not available");
    GiantTarget t;
    t.sigma = survival(*family.limit_law());
    t.mu = family.limit_mean();
    t.sigma_prime = poisson_survival(t.mu);
    return t;
}

namespace {

ExperimentReport start_report(std::string name, const ExperimentConfig& config) {
    config.validate();
    ExperimentReport rep;
    rep.experiment = std::move(name);
    rep.config = config.echo();
    rep.seed = config.seed;
    return rep;
}

ReportRow make_row(std::string estimator, std::int64_t n, GraphKind kind, double estimate, double se,
                   double target, std::string source, std::int64_t reps, double secs,
                   std::string label = {}) {
    return ReportRow{std::move(estimator), std::move(label), n,       std::string(to_string(kind)),
                     estimate,             se,               target,  std::move(source),
                     reps,                 secs};
}

std::string key(std::int64_t n, GraphKind kind) {
    return std::to_string(n) + "/" + std::string(to_string(kind));
}

} // namespace

ExperimentReport mc_giant(const ExperimentConfig& config) {
    auto rep = start_report("mc-giant", config);
    const GiantTarget target = giant_target(config.law);
    for (auto n : config.ns) {
        const OutdegreeLaw law = config.law.at(n);
        for (auto kind : config.kinds) {
            const auto t0 = Clock::now();
            const auto samples = run_replicates(config.replicates, config.seed, config.workers,
                                                [&](Rng& rng, std::int64_t) {
                const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                const SccSummary c = scc(g);
                const double nn = static_cast<double>(n);
                return std::pair{static_cast<double>(c.L(1)) / nn, static_cast<double>(c.L(2)) / nn};
            });
            const double secs = seconds_since(t0);
            const auto l1 = column(samples, false), l2 = column(samples, true);
            const auto m1 = stats::mean_se(l1), m2 = stats::mean_se(l2);
            rep.rows.push_back(make_row("L1/n", n, kind, m1.mean, m1.se, target.product(),
                                        target.source(), config.replicates, secs));
            rep.rows.push_back(make_row("L2/n", n, kind, m2.mean, m2.se, 0.0, "0 (no second giant)",
                                        config.replicates, secs));
            rep.details["L1/n"][key(n, kind)] = l1;
        }
    }
    return rep;
}

ExperimentReport mc_reach(const ExperimentConfig& config) {
    auto rep = start_report("mc-reach", config);
    const GiantTarget target = giant_target(config.law);
    // threshold between the two limit atoms 0 and sigma'
    const double threshold = target.sigma_prime > 0.0 ? target.sigma_prime / 2.0 : 0.5;
    rep.details["threshold"] = threshold;
    for (auto n : config.ns) {
        const OutdegreeLaw law = config.law.at(n);
        for (auto kind : config.kinds) {
            const auto t0 = Clock::now();
            const auto samples = run_replicates(config.replicates, config.seed, config.workers,
                                                [&](Rng& rng, std::int64_t) {
                const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                return static_cast<double>(reach_size(g, 0));
            });
            const double secs = seconds_since(t0);
            const double nn = static_cast<double>(n);
            std::vector<double> frac, low, high, sym;
            for (double t : samples) {
                frac.push_back(t / nn);
                (t / nn <= threshold ? low : high).push_back(t / nn);
                sym.push_back((t - 1.0) / (nn - 1.0));
            }
            const double R = static_cast<double>(samples.size());
            const double w_high = static_cast<double>(high.size()) / R;
            const auto ml = stats::mean_se(low), mh = stats::mean_se(high), ms = stats::mean_se(sym);
            const std::int64_t reps = config.replicates;
            rep.rows.push_back(make_row("weight_low", n, kind, 1.0 - w_high, binomial_se(w_high, samples.size()),
                                        1.0 - target.sigma, "1 - sigma(F)=" + fmt(1.0 - target.sigma), reps, secs));
            rep.rows.push_back(make_row("weight_high", n, kind, w_high, binomial_se(w_high, samples.size()),
                                        target.sigma, "sigma(F)=" + fmt(target.sigma), reps, secs));
            rep.rows.push_back(make_row("location_low", n, kind, low.empty() ? NAN : ml.mean, ml.se, 0.0,
                                        "0", static_cast<std::int64_t>(low.size()), secs));
            rep.rows.push_back(make_row("location_high", n, kind, high.empty() ? NAN : mh.mean, mh.se,
                                        target.sigma_prime, "sigma'(mu)=" + fmt(target.sigma_prime),
                                        static_cast<std::int64_t>(high.size()), secs));
            rep.rows.push_back(make_row("symmetry_mean", n, kind, ms.mean, ms.se, target.product(),
                                        target.source(), reps, secs));
            rep.details["T1/n"][key(n, kind)] = frac;
        }
    }
    return rep;
}

ExperimentReport mc_connect(const ExperimentConfig& config) {
    auto rep = start_report("mc-connect", config);
    const GiantTarget target = giant_target(config.law);
    struct Sample {
        double forward = 0, both = 0, sym = 0;
    };
    for (auto n : config.ns) {
        const OutdegreeLaw law = config.law.at(n);
        for (auto kind : config.kinds) {
            const auto t0 = Clock::now();
            const auto samples = run_replicates(config.replicates, config.seed, config.workers,
                                                [&](Rng& rng, std::int64_t) {
                const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                Reachability bfs(g, false);
                Sample s;
                const bool fwd = bfs.reaches(0, 1);
                s.forward = fwd ? 1.0 : 0.0;
                s.both = fwd && bfs.reaches(1, 0) ? 1.0 : 0.0;
                s.sym = (static_cast<double>(bfs.reach_size(0, Direction::out)) - 1.0) /
                        (static_cast<double>(n) - 1.0);
                return s;
            });
            const double secs = seconds_since(t0);
            std::vector<double> fwd, both, sym, diff;
            for (const auto& s : samples) {
                fwd.push_back(s.forward);
                both.push_back(s.both);
                sym.push_back(s.sym);
            }
            const auto mf = stats::mean_se(fwd), mb = stats::mean_se(both), ms = stats::mean_se(sym);
            const std::int64_t reps = config.replicates;
            const double p = target.product();
            rep.rows.push_back(make_row("P[1~>2]", n, kind, mf.mean, mf.se, p, target.source(), reps, secs));
            rep.rows.push_back(make_row("P[1<~>2]", n, kind, mb.mean, mb.se, p * p,
                                        "(" + target.source() + ")^2", reps, secs));
            rep.rows.push_back(make_row("symmetry_mean", n, kind, ms.mean, ms.se, p, target.source(), reps, secs));
            rep.rows.push_back(make_row("symmetry_minus_direct", n, kind, ms.mean - mf.mean,
                                        std::hypot(ms.se, mf.se), 0.0,
                                        "E[(T_1-1)/(n-1)] = P[1~>2] by exchangeability", reps, secs));
        }
    }
    return rep;
}

double ky_fan(std::span<const double> samples, double target) {
    if (samples.empty())
        throw std::invalid_argument("ky_fan: empty sample");
    std::vector<double> dev(samples.size());
    std::transform(samples.begin(), samples.end(), dev.begin(),
                   [&](double x) { return std::abs(x - target); });
    std::sort(dev.begin(), dev.end(), std::greater<>());
    const double R = static_cast<double>(dev.size());
    // On [dev[j], dev[j-1]) exactly j deviations exceed eps (dev[-1] = +inf).
    double best = 0.0;
    for (std::size_t j = 1; j <= dev.size(); ++j) {
        const double lower = j < dev.size() ? dev[j] : 0.0;
        const double upper = std::min(dev[j - 1], static_cast<double>(j) / R);
        if (lower < upper)
            best = std::max(best, upper);
    }
    return best;
}

std::vector<LawFamily> default_uniformity_panel(const BoundRule& bound) {
    std::vector<LawFamily> panel;
    for (std::int64_t k = 0; k <= 3; ++k)
        panel.push_back(LawFamily::constant(point_mass(k)));
    panel.push_back(LawFamily::constant(OutdegreeLaw::from_pairs({{0, 0.25}, {2, 0.75}})));
    panel.push_back(LawFamily::custom(
        "geom:p=0.4,cap=b_n",
        [bound](std::int64_t n) {
            const auto full = geometric_law(0.4);
            return bound ? geometric_law(0.4, std::min(bound(n), full.max_support())) : full;
        },
        geometric_law(0.4), geometric_law(0.4).mean()));
    return panel;
}

BoundRule parse_bound_rule(const std::string& text) {
    auto ceil_pow = [](double a) {
        return [a](std::int64_t n) {
            return std::max<std::int64_t>(1, static_cast<std::int64_t>(
                std::ceil(std::pow(static_cast<double>(n), a) - 1e-9)));
        };
    };
    if (text == "sqrt")
        return ceil_pow(0.5);
    try {
        if (text.rfind("pow:", 0) == 0) {
            std::size_t used = 0;
            const double a = std::stod(text.substr(4), &used);
            if (used == text.size() - 4 && a > 0.0 && a < 1.0)
                return ceil_pow(a);
        } else if (text.rfind("const:", 0) == 0) {
            std::size_t used = 0;
            const long long b = std::stoll(text.substr(6), &used);
            if (used == text.size() - 6 && b >= 1)
                return [b](std::int64_t) { return static_cast<std::int64_t>(b); };
        }
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("b_n rule '" + text + "': expected sqrt, pow:<a> with 0<a<1, or const:<b>");
}

ExperimentReport uniformity_sweep(const ExperimentConfig& config) {
    if (!config.bound)
        throw std::invalid_argument("uniformity_sweep: a b_n rule is required");
    auto rep = start_report("sweep-unif", config);
    rep.config.erase("law");
    const auto panel = config.panel.empty() ? default_uniformity_panel(config.bound) : config.panel;
    if (config.panel.empty()) {
        auto& pj = rep.config["panel"] = nlohmann::json::array();
        for (const auto& p : panel)
            pj.push_back(p.label());
    }
    for (auto n : config.ns) {
        const std::int64_t b = config.bound(n);
        std::vector<OutdegreeLaw> laws;
        for (const auto& fam : panel) {
            OutdegreeLaw law = fam.at(n);
            if (law.max_support() > b)
                throw LawError("uniformity sweep: panel law '" + fam.label() + "' has support up to " +
                               std::to_string(law.max_support()) + " > b_n=" + std::to_string(b) +
                               " at n=" + std::to_string(n));
            laws.push_back(std::move(law));
        }
        for (auto kind : config.kinds) {
            double panel_max = 0.0;
            double secs_total = 0.0;
            for (std::size_t i = 0; i < panel.size(); ++i) {
                const auto& law = laws[i];
                const GiantTarget target = giant_target(law);
                const auto t0 = Clock::now();
                const auto l1 = run_replicates(config.replicates, config.seed, config.workers,
                                               [&](Rng& rng, std::int64_t) {
                    const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                    return static_cast<double>(scc(g).L(1)) / static_cast<double>(n);
                });
                const double secs = seconds_since(t0);
                secs_total += secs;
                const double d = ky_fan(l1, target.product());
                panel_max = std::max(panel_max, d);
                const auto m = stats::mean_se(l1);
                rep.rows.push_back(make_row("L1/n", n, kind, m.mean, m.se, target.product(), target.source(),
                                            config.replicates, secs, panel[i].label()));
                rep.rows.push_back(make_row("ky_fan", n, kind, d, 0.0, 0.0,
                                            "d(L1/n, sigma'sigma) -> 0 uniformly over M_{b_n}",
                                            config.replicates, secs, panel[i].label()));
            }
            rep.rows.push_back(make_row("panel_max_ky_fan", n, kind, panel_max, 0.0, 0.0,
                                        "sup over panel, b_n=" + std::to_string(b), config.replicates,
                                        secs_total));
        }
    }
    return rep;
}

ExperimentReport counterexample_run(const ExperimentConfig& config) {
    if (config.law.kind() != LawFamily::Kind::counterexample)
        throw std::invalid_argument("counterexample_run: requires law family:counterexample");
    auto rep = start_report("counterexample", config);
    const GiantTarget naive = giant_target(config.law);
    const double mu = config.law.limit_mean();
    struct Sample {
        std::int64_t s1 = 0, s2 = 0;
        double l1 = 0.0;
    };
    for (auto n : config.ns) {
        const OutdegreeLaw law = config.law.at(n);
        for (auto kind : config.kinds) {
            const auto t0 = Clock::now();
            const auto samples = run_replicates(config.replicates, config.seed, config.workers,
                                                [&](Rng& rng, std::int64_t) {
                const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                Reachability bfs(g, true);
                const auto prof = bfs.generations(0, Direction::in, 2);
                Sample s;
                s.s1 = prof.counts.size() > 1 ? static_cast<std::int64_t>(prof.counts[1]) : 0;
                s.s2 = prof.counts.size() > 2 ? static_cast<std::int64_t>(prof.counts[2]) : 0;
                s.l1 = static_cast<double>(scc(g).L(1)) / static_cast<double>(n);
                return s;
            });
            const double secs = seconds_since(t0);
            std::vector<double> s1, s2, l1, below;
            std::map<std::int64_t, std::int64_t> h1, h2;
            for (const auto& s : samples) {
                s1.push_back(static_cast<double>(s.s1));
                s2.push_back(static_cast<double>(s.s2));
                l1.push_back(s.l1);
                below.push_back(s.l1 < kCounterexampleCut ? 1.0 : 0.0);
                ++h1[s.s1];
                ++h2[s.s2];
            }
            const auto m1 = stats::mean_se(s1), m2 = stats::mean_se(s2), ml = stats::mean_se(l1),
                       mb = stats::mean_se(below);
            const std::int64_t reps = config.replicates;
            rep.rows.push_back(make_row("mean S'_{1,1}", n, kind, m1.mean, m1.se, mu,
                                        "E[Z'_1] = mu_inf = " + fmt(mu), reps, secs));
            rep.rows.push_back(make_row("mean S'_{1,2}", n, kind, m2.mean, m2.se, mu * mu,
                                        "E[Z'_2] = mu_inf^2 = " + fmt(mu * mu), reps, secs));
            rep.rows.push_back(make_row("mean L1/n", n, kind, ml.mean, ml.se, naive.product(),
                                        "naive " + naive.source(), reps, secs));
            rep.rows.push_back(make_row("frac L1/n<0.9", n, kind, mb.mean, mb.se, 0.0,
                                        "0 if L1/n concentrated at naive target " + fmt(naive.product()),
                                        reps, secs));
            rep.rows.push_back(make_row("ky_fan(L1/n, naive)", n, kind, ky_fan(l1, naive.product()), 0.0,
                                        0.0, "0 if naive limit held", reps, secs));
            auto& d = rep.details[key(n, kind)];
            for (auto [v, c] : h1)
                d["hist S'_{1,1}"][std::to_string(v)] = c;
            for (auto [v, c] : h2)
                d["hist S'_{1,2}"][std::to_string(v)] = c;
            d["separation_S'_{1,2}_in_se"] = m2.se > 0.0 ? (mu * mu - m2.mean) / m2.se : INFINITY;
            d["L1/n"] = l1;
        }
    }
    return rep;
}

namespace {

std::vector<std::int64_t> gw_generations(const OutdegreeLaw& law, std::size_t depth, Rng& rng) {
    std::vector<std::int64_t> z{1};
    for (std::size_t m = 1; m <= depth; ++m) {
        std::int64_t next = 0;
        for (std::int64_t i = 0; i < z.back(); ++i)
            next += law.sample(rng);
        z.push_back(next);
    }
    return z;
}

std::int64_t layer(const GenerationProfile& p, std::size_t m) {
    return m < p.counts.size() ? static_cast<std::int64_t>(p.counts[m]) : 0;
}

} // namespace

ExperimentReport branching_approx_check(const ExperimentConfig& config) {
    const std::size_t depth = config.m_max;
    if (depth < 1 || depth > 4)
        throw std::invalid_argument("branching_approx_check: m_max must lie in 1..4");
    auto rep = start_report("branching-approx", config);
    struct Sample {
        std::vector<std::int64_t> out1, in1, in2;
    };
    for (auto n : config.ns) {
        const OutdegreeLaw law = config.law.at(n);
        const double mu = law.mean();
        // independent GW reference sample from a separate master stream
        const auto reference = run_replicates(config.replicates, mix64(config.seed ^ 0x5eedULL),
                                              config.workers, [&](Rng& rng, std::int64_t) {
            return gw_generations(law, depth, rng);
        });
        for (auto kind : config.kinds) {
            const auto t0 = Clock::now();
            const auto samples = run_replicates(config.replicates, config.seed, config.workers,
                                                [&](Rng& rng, std::int64_t) {
                const Digraph g = generate(kind, static_cast<std::size_t>(n), law, rng);
                Reachability bfs(g, true);
                const auto o1 = bfs.generations(0, Direction::out, depth);
                const auto i1 = bfs.generations(0, Direction::in, depth);
                const auto i2 = bfs.generations(1, Direction::in, depth);
                Sample s;
                for (std::size_t m = 0; m <= depth; ++m) {
                    s.out1.push_back(layer(o1, m));
                    s.in1.push_back(layer(i1, m));
                    s.in2.push_back(layer(i2, m));
                }
                return s;
            });
            const double secs = seconds_since(t0);
            const std::int64_t reps = config.replicates;
            auto& d = rep.details[key(n, kind)];
            for (std::size_t m = 1; m <= depth; ++m) {
                std::vector<std::int64_t> graph_out, gw;
                std::vector<double> x, y;
                for (const auto& s : samples) {
                    graph_out.push_back(s.out1[m]);
                    x.push_back(static_cast<double>(s.out1[m]));
                    y.push_back(static_cast<double>(s.in2[m]));
                }
                for (const auto& z : reference)
                    gw.push_back(z[m]);
                const auto chi = stats::chi_square_two_sample(graph_out, gw);
                const std::string sm = std::to_string(m);
                const auto mean_out = stats::mean_se(x);
                rep.rows.push_back(make_row("mean S_{1," + sm + "}", n, kind, mean_out.mean, mean_out.se,
                                            std::pow(mu, static_cast<double>(m)), "E[Z_" + sm + "] = mu^" + sm,
                                            reps, secs));
                rep.rows.push_back(make_row(
                    "chi2 S_{1," + sm + "} vs Z_" + sm, n, kind, chi.statistic, 0.0,
                    chi.applicable ? chi.critical : 0.0,
                    chi.applicable ? "chi2 0.999 quantile, dof=" + std::to_string(chi.dof)
                                   : "not applicable: single pooled bin",
                    reps, secs));
                d["chi2 S_{1," + sm + "} vs Z_" + sm] = chi_json(chi);
                const auto corr = x.size() >= 2 ? stats::correlation(x, y) : stats::Correlation{0.0, true};
                rep.rows.push_back(make_row("corr(S_{1," + sm + "},S'_{2," + sm + "})", n, kind, corr.value,
                                            1.0 / std::sqrt(static_cast<double>(reps)), 0.0,
                                            "asymptotic independence", reps, secs));
                d["corr degenerate m=" + sm] = corr.degenerate;
            }
            // S'_{1,1} against Poisson(mu)
            const auto kmax = static_cast<std::int64_t>(std::ceil(mu + 12.0 * std::sqrt(mu + 1.0) + 10.0));
            auto ref = stats::poisson_pmf(mu, kmax);
            double head = 0.0;
            for (std::int64_t k = 0; k < kmax; ++k)
                head += ref[k];
            ref[kmax] = std::max(0.0, 1.0 - head);
            std::vector<std::int64_t> in11;
            for (const auto& s : samples)
                in11.push_back(s.in1[1]);
            const auto chi = stats::chi_square(in11, ref);
            rep.rows.push_back(make_row("chi2 S'_{1,1} vs Poisson(mu)", n, kind, chi.statistic, 0.0,
                                        chi.applicable ? chi.critical : 0.0,
                                        "chi2 0.999 quantile, dof=" + std::to_string(chi.dof) +
                                            ", mu=" + fmt(mu),
                                        reps, secs));
            d["chi2 S'_{1,1} vs Poisson(mu)"] = chi_json(chi);
        }
    }
    return rep;
}

} // namespace rdg
