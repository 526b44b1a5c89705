// Acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--known-fail 6,7] [--only 4]
//
// Exit status is non-zero when a criterion fails that is not listed in
// --known-fail. Known failures still print FAIL.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "sourcecr/bounds.hpp"
#include "sourcecr/experiment.hpp"
#include "sourcecr/framework.hpp"
#include "sourcecr/metrics.hpp"
#include "sourcecr/query.hpp"
#include "sourcecr/spread.hpp"
#include "sourcecr/training.hpp"

using namespace sourcecr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string g_cli;

// ---- 1: E-step against the Bayes oracle -----------------------------------

Outcome criterion_1() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> par(0.05, 0.95);
    std::uniform_int_distribution<int> size(1, 3);
    double worst = 0.0;
    int instances = 0;
    int redraws = 0;
    while (instances < 1000) {
        const int users = size(rng);
        const int claims = size(rng);
        std::vector<OpinionRecord> recs;
        for (int i = 0; i < users; ++i)
            for (int j = 0; j < claims; ++j)
                if (rng() % 4 != 0) recs.push_back({i, j, static_cast<Opinion>(rng() % 2 ? 1 : -1)});
        std::vector<NodeId> uids(users);
        std::vector<ClaimId> cids(claims);
        for (int i = 0; i < users; ++i) uids[i] = i;
        for (int j = 0; j < claims; ++j) cids[j] = j;
        const OpinionMatrix m(uids, cids, recs);
        std::vector<double> prior(claims), e1(users), e0(users);
        for (auto& x : prior) x = par(rng);
        for (auto& x : e1) x = par(rng);
        for (auto& x : e0) x = par(rng);
        std::vector<double> oracle;
        try {
            oracle = posterior_oracle(m, prior, e1, e0);
        } catch (const std::domain_error&) {
            ++redraws;  // conditionals cannot all be probabilities
            continue;
        }
        const auto fast = e_step(prior, e1, e0, m);
        for (std::size_t j = 0; j < fast.size(); ++j) worst = std::max(worst, std::abs(fast[j] - oracle[j]));
        ++instances;
    }
    return {worst <= 1e-9, fmt::format("max |e_step - oracle| = {:.3g} over 1000 instances ({} redrawn)", worst,
                                       redraws)};
}

// ---- 2: rumor centrality against enumeration --------------------------------

std::uint64_t enumerate_orders(const SocialGraph& g, Vertex root) {
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < g.node_count(); ++v)
        if (v != root) rest.push_back(v);
    std::uint64_t count = 0;
    do {
        std::vector<bool> in(g.node_count(), false);
        in[root] = true;
        bool ok = true;
        for (Vertex v : rest) {
            const auto nb = g.neighbors(v);
            if (std::none_of(nb.begin(), nb.end(), [&](Vertex w) { return in[w]; })) {
                ok = false;
                break;
            }
            in[v] = true;
        }
        count += ok;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return count;
}

Outcome criterion_2() {
    std::mt19937_64 rng(202);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (int i = 1; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>(rng() % i));
        const auto g = SocialGraph::from_edges(edges, std::vector<NodeId>{0});
        const auto rc = rumor_centrality(bfs_tree(g, static_cast<Vertex>(rng() % n)));
        for (Vertex v = 0; v < g.node_count(); ++v) mismatches += rc.exact[v] != enumerate_orders(g, v);
    }
    return {mismatches == 0, fmt::format("{} mismatching vertices over 100 random trees", mismatches)};
}

// ---- 3: spreading soundness ---------------------------------------------------

double ks_exponential(std::vector<double> xs, double rate) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = 1.0 - std::exp(-rate * xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

Outcome criterion_3() {
    const auto g = generate_random_graph(200, 8.0, 303);
    if (largest_component(g).size() != 200) return {false, "test graph is not connected"};
    bool all_infected = true;
    bool monotone = true;
    SpreadTrace trace;
    std::uint64_t seed = 0;
    int runs = 0;
    while (trace.delays.size() < 100000) {
        const Vertex a = static_cast<Vertex>(seed % 200);
        const Vertex b = static_cast<Vertex>((seed * 7 + 1) % 200 == a ? (a + 1) % 200 : (seed * 7 + 1) % 200);
        const auto o = simulate_joint_spread(g, a, b, {1.0, 1.0, seed}, 0, &trace);
        ++seed;
        ++runs;
        for (Vertex v = 0; v < g.node_count(); ++v) {
            if (o.state[v] == NodeState::kSusceptible) all_infected = false;
            const Vertex p = o.infect_parent[v];
            if (p != kNoVertex && !(o.infect_time[p] < o.infect_time[v] && o.state[p] == o.state[v])) monotone = false;
        }
    }
    const double d = ks_exponential(trace.delays, 1.0);
    const double crit = 1.6276 / std::sqrt(static_cast<double>(trace.delays.size()));
    return {all_infected && monotone && d < crit,
            fmt::format("{} runs, all infected: {}, parent-time monotone: {}, KS D = {:.5f} (critical {:.5f}, n = {})",
                        runs, all_infected, monotone, d, crit, trace.delays.size())};
}

// ---- 4: detection with perfect answers -----------------------------------------

Outcome criterion_4() {
    // 200-node cycle: every subnetwork is a path, the budget covers all of it,
    // and truthful answers leave the source as the only node with two
    // infection children.
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < 200; ++i) edges.emplace_back(i, (i + 1) % 200);
    const auto g = SocialGraph::from_edges(edges);
    const auto ds = generate_dataset(g, 50, 0.5, {0.9, 1.0, 404});
    const std::vector<double> ones(g.node_count(), 1.0);
    const std::vector<double> cred(50, 0.5);
    SourceDetector det(g, ds.opinions, ds.outcomes, ones);
    const auto res = det.detect(cred, ones, {600, 3}, 405);
    const double rate = source_detection_rate(res, ds.truths);
    return {rate == 1.0, fmt::format("detection rate {:.4f} over 50 claims (100 sides), K = 600, r = 3", rate)};
}

// ---- experiment-driven criteria -------------------------------------------------

ExperimentConfig recipe() {
    ExperimentConfig cfg;  // 500 nodes, 100 claims, p = 0.6, K = 60, r = 3
    cfg.repetitions = 20;
    cfg.seed = 2024;
    return cfg;
}

std::size_t alg_index(const ExperimentConfig& cfg, Algorithm a) {
    return static_cast<std::size_t>(std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a) -
                                    cfg.algorithms.begin());
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
    const auto [m, s] = mean_std(v);
    return {m, s / std::sqrt(static_cast<double>(v.size()))};
}

Outcome criterion_5() {
    auto cfg = recipe();
    cfg.sweep = SweepVariable::kBudget;
    cfg.grid = {60};
    cfg.algorithms = {Algorithm::kSourceCR};
    cfg.outer_cap = 10;
    const auto r = run_experiment(cfg);
    const double frac = r.converged_fraction[0];
    return {frac >= 0.95, fmt::format("{:.0f}% of 20 seeds converged within 10 outer iterations (mean {:.2f})",
                                      100 * frac, r.mean_outer_iterations[0])};
}

Outcome criterion_6() {
    auto cfg = recipe();
    cfg.sweep = SweepVariable::kPriorOffset;
    cfg.grid = {0.0, 0.25, 0.5};
    cfg.algorithms = {Algorithm::kSourceCR, Algorithm::kCrTri};
    const auto r = run_experiment(cfg);
    const auto acc = static_cast<std::size_t>(Metric::kAccuracyOfCredibility);
    std::vector<double> scr, tri;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        scr.push_back(mean_std(r.runs[g][alg_index(cfg, Algorithm::kSourceCR)][acc]).first);
        tri.push_back(mean_std(r.runs[g][alg_index(cfg, Algorithm::kCrTri)][acc]).first);
    }
    const double gap = scr[2] - tri[2];
    auto range = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo;
    };
    const bool gap_ok = gap >= 0.05;
    const bool range_ok = range(scr) < range(tri);
    return {gap_ok && range_ok,
            fmt::format("accuracy SourceCR [{:.3f} {:.3f} {:.3f}] CR-TRI [{:.3f} {:.3f} {:.3f}]; gap at 0.5 = {:.3f} "
                        "(need >= 0.05: {}); range {:.3f} vs {:.3f} (smaller: {})",
                        scr[0], scr[1], scr[2], tri[0], tri[1], tri[2], gap, gap_ok ? "ok" : "no", range(scr),
                        range(tri), range_ok ? "ok" : "no")};
}

Outcome criterion_7() {
    auto cfg = recipe();
    cfg.sweep = SweepVariable::kReliabilityOffset;
    cfg.grid = {0.5};
    cfg.algorithms = {Algorithm::kSourceCR, Algorithm::kQSi};
    const auto r = run_experiment(cfg);
    const auto det = static_cast<std::size_t>(Metric::kDetectionRate);
    const double scr = mean_std(r.runs[0][alg_index(cfg, Algorithm::kSourceCR)][det]).first;
    const double qsi = mean_std(r.runs[0][alg_index(cfg, Algorithm::kQSi)][det]).first;
    return {scr - qsi >= 0.05,
            fmt::format("detection rate SourceCR {:.4f} vs Q-SI {:.4f}, difference {:.4f} (need >= 0.05)", scr, qsi,
                        scr - qsi)};
}

Outcome criterion_8() {
    auto cfg = recipe();
    cfg.sweep = SweepVariable::kBudget;
    cfg.grid = {12, 24, 48, 96};
    cfg.algorithms = {Algorithm::kSourceCR};
    const auto r = run_experiment(cfg);
    const auto det = static_cast<std::size_t>(Metric::kDetectionRate);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) pts.push_back(mean_se(r.runs[g][0][det]));
    bool monotone = true;
    for (std::size_t g = 1; g < pts.size(); ++g) {
        const double se = std::hypot(pts[g].second, pts[g - 1].second);
        if (pts[g].first < pts[g - 1].first - se) monotone = false;
    }
    const double last_step = pts[3].first - pts[2].first;
    const bool plateau = std::abs(last_step) < 0.02;
    std::string means;
    for (std::size_t g = 0; g < pts.size(); ++g)
        means += fmt::format("{}K={}: {:.4f}+-{:.4f}", g ? ", " : "", cfg.grid[g], pts[g].first, pts[g].second);
    return {monotone && plateau, fmt::format("{}; non-decreasing within 1 SE: {}; last step {:.4f} (plateau: {})",
                                             means, monotone, last_step, plateau)};
}

// ---- 9: bounds ---------------------------------------------------------------------

Outcome criterion_9() {
    std::vector<std::string> issues;
    const auto b = coverage_bounds(3, 30, 3);
    if (std::abs(b.c1 - 28.0 / 3.0) > 1e-15 || b.c2 != 4.0) issues.push_back("constants");

    std::mt19937_64 rng(909);
    for (int i = 0; i < 1000; ++i) {
        const int d = 3 + static_cast<int>(rng() % 10);
        const int r = 1 + static_cast<int>(rng() % 5);
        const int k = r * (2 + static_cast<int>(rng() % 300));
        const auto c = coverage_bounds(d, k, r);
        if (c.lower > c.upper) {
            issues.push_back("lower > upper");
            break;
        }
    }

    std::vector<int> ks;
    for (int k = 9; k <= 300; k += 3) ks.push_back(k);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double emax = u(rng);
        const double emin = 1.0 - emax + (emax - (1.0 - emax)) * u(rng) * 0.5;
        const double ht = 0.5 + 2 * (u(rng) - 0.5);
        int prev = std::numeric_limits<int>::max();
        for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto best = admissible_budget(3, 3, delta, emax, std::min(emin, emax), ht, ks);
            for (int k : ks) {
                const bool holds = budget_inequality_holds({3, k, 3, delta, emax, std::min(emin, emax), ht});
                if (holds && (!best || k > *best)) issues.push_back("not maximal");
            }
            const int now = best.value_or(0);
            if (now > prev) issues.push_back("grows with delta");
            prev = now;
            ++checked;
        }
    }
    const auto ref = bound_report({3, 30, 3, 0.1, 0.5, 0.5, 1.0});
    return {issues.empty(), fmt::format("c1 = {:.6f}, c2 = {}, l = {:.6f}; lower <= upper on 1000 draws; {} "
                                        "admissible-budget checks over delta in {{0.1..0.9}}{}{}",
                                        ref.coverage.c1, ref.coverage.c2, ref.coverage.l, checked,
                                        issues.empty() ? "" : "; problems: ", issues.empty() ? "" : issues.front())};
}

// ---- 10: metric endpoints ----------------------------------------------------------

Outcome criterion_10() {
    const auto g = generate_random_graph(100, 6.0, 1010);
    const auto ds = generate_dataset(g, 20, 0.5, {0.6, 1.0, 1011});
    std::vector<int> z;
    for (const auto& t : ds.truths) z.push_back(t.z);
    const auto labels = label_map(ds.opinions, z);

    // Reliabilities on {0, 1} so that the flipped estimate is maximally wrong.
    ReliabilityMap truth, flipped;
    for (NodeId u = 0; u < 50; ++u) {
        truth[u] = u % 2;
        flipped[u] = 1 - u % 2;
    }
    LabelMap wrong;
    for (const auto& [c, l] : labels) wrong[c] = -l;

    std::vector<DetectionResult> perfect(ds.truths.size()), adversarial(ds.truths.size());
    for (std::size_t j = 0; j < ds.truths.size(); ++j) {
        perfect[j].claim = adversarial[j].claim = ds.truths[j].claim;
        perfect[j].pros.source = ds.truths[j].pros_source;
        perfect[j].cons.source = ds.truths[j].cons_source;
        adversarial[j].pros.source = ds.truths[j].cons_source;
        adversarial[j].cons.source = ds.truths[j].pros_source;
    }

    const double e0 = error_of_reliability(truth, truth), e1 = error_of_reliability(flipped, truth);
    const double a1 = accuracy_of_credibility(labels, labels), a0 = accuracy_of_credibility(wrong, labels);
    const double d1 = source_detection_rate(perfect, ds.truths), d0 = source_detection_rate(adversarial, ds.truths);
    const bool ok = e0 == 0 && e1 == 1 && a1 == 1 && a0 == 0 && d1 == 1 && d0 == 0;
    return {ok, fmt::format("perfect: error {} accuracy {} detection {}; adversarial: error {} accuracy {} "
                            "detection {}",
                            e0, a1, d1, e1, a0, d0)};
}

// ---- 11: determinism of the CLI -------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion_11() {
    if (g_cli.empty() || !fs::exists(g_cli)) return {false, "CLI binary not found (pass --cli)"};
    const fs::path root = fs::temp_directory_path() / fmt::format("sourcecr_accept_{}", ::getpid());
    fs::create_directories(root);
    {
        std::ofstream cfg(root / "run.cfg");
        cfg << "# small synthetic run\nnodes = 150\navg_degree = 6\nclaims = 30\nbudget = 30\nrounds = 3\n";
    }
    std::vector<std::string> names;
    for (const char* run : {"a", "b"}) {
        const std::string cmd = fmt::format("\"{}\" run --config \"{}\" --seed 77 --out \"{}\" > /dev/null 2>&1",
                                            g_cli, (root / "run.cfg").string(), (root / run).string());
        if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
    }
    std::size_t compared = 0;
    std::string diff;
    for (const auto& e : fs::directory_iterator(root / "a")) {
        if (e.path().extension() != ".csv") continue;
        ++compared;
        if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) diff += " " + e.path().filename().string();
    }
    fs::remove_all(root);
    return {compared > 0 && diff.empty(),
            diff.empty() ? fmt::format("{} CSV files byte-identical across two runs", compared)
                         : "differing files:" + diff};
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> known_fail, only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cli" && i + 1 < argc) {
            g_cli = argv[++i];
        } else if (a == "--known-fail" && i + 1 < argc) {
            known_fail = parse_list(argv[++i]);
        } else if (a == "--only" && i + 1 < argc) {
            only = parse_list(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--cli PATH] [--known-fail N,M] [--only N,M]\n";
            return 2;
        }
    }

    const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10, criterion_11};
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(n)) continue;
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool known = known_fail.count(n) > 0;
        fmt::print("{} criterion {}: {}{}\n", o.pass ? "PASS" : "FAIL", n, o.detail,
                   !o.pass && known ? " [known failure]" : "");
        std::fflush(stdout);
        if (!o.pass && !known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
