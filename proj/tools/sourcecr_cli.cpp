// Command-line front end: simulate, train, detect, run, bounds, experiment.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "sourcecr/bounds.hpp"
#include "sourcecr/experiment.hpp"
#include "sourcecr/framework.hpp"
#include "sourcecr/io.hpp"
#include "sourcecr/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sourcecr;

namespace {

/// Flags that map one-to-one onto experiment config keys. Only flags the user
/// actually passed override the config file.
struct Overrides {
    std::string config_path;
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_experiment_config(config_path);
        for (const auto& [k, v] : values) apply_config_entry(cfg, k, v);
        return cfg;
    }
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "Flat key=value config file")->check(CLI::ExistingFile);
    o.add(app, "--seed", "seed", "Master seed");
    o.add(app, "--budget", "budget", "Query budget K per subnetwork");
    o.add(app, "--rounds", "rounds", "Rounds r per respondent");
    o.add(app, "--tol-inner", "tol_inner", "Training tolerance on eta");
    o.add(app, "--tol-outer", "tol_outer", "Outer tolerance on credibility");
    o.add(app, "--out", "out_dir", "Output directory");
}

void add_dataset(CLI::App* app, Overrides& o) {
    o.add(app, "--graph", "graph", "Edge-list file");
    o.add(app, "--opinions", "opinions", "Opinions CSV (claim_id,user_id,opinion)");
    o.add(app, "--labels", "labels", "Claim labels CSV (claim_id,label)");
    o.add(app, "--spread", "spread", "Spread records CSV");
    o.add(app, "--nodes", "nodes", "Synthetic graph size");
    o.add(app, "--avg-degree", "avg_degree", "Synthetic average degree");
    o.add(app, "--claims", "claims", "Synthetic claim count");
    o.add(app, "--truth-fraction", "truth_fraction", "Fraction of true claims");
    o.add(app, "--success-probability", "success_probability", "Edge transmission probability");
}

fs::path out_dir(const ExperimentConfig& cfg) {
    fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

PreparedData load_data(const ExperimentConfig& cfg) {
    cfg.validate();
    return cfg.opinions_path.empty() ? prepare_synthetic(cfg, 0) : prepare_from_files(cfg);
}

std::vector<double> priors_for(const ExperimentConfig& cfg, const PreparedData& p) {
    if (cfg.prior_offset) return init_priors_offset(p.z, *cfg.prior_offset);
    return init_priors(p.data.opinions.claim_count(), cfg.seed);
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_output(path.string());
    out << j.dump(2) << "\n";
}

TranscriptSink transcript_writer(std::ostream& out, const SocialGraph& g) {
    write_csv_row(out, {"claim_id", "side", "respondent", "round", "id_answer", "dir_answer"});
    return [&out, &g](ClaimId claim, Side side, const QueryTranscript& t) {
        for (const auto& a : t.answers) {
            for (int k = 0; k < t.rounds; ++k) {
                const Vertex p = a.pointed[static_cast<std::size_t>(k)];
                write_csv_row(out, {std::to_string(claim), to_string(side), std::to_string(g.id(a.respondent)),
                                    std::to_string(k + 1), a.said_source[static_cast<std::size_t>(k)] ? "yes" : "no",
                                    p == kNoVertex ? "" : std::to_string(g.id(p))});
            }
        }
    };
}

int cmd_simulate(const Overrides& o) {
    ExperimentConfig cfg = o.resolve();
    cfg.validate();
    const PreparedData p = prepare_synthetic(cfg, 0);
    const fs::path dir = out_dir(cfg);
    {
        auto out = open_output((dir / "graph.txt").string());
        write_edge_list(p.data.graph, out);
    }
    {
        auto out = open_output((dir / "opinions.csv").string());
        write_opinions_csv(p.data.opinions, out);
    }
    {
        auto out = open_output((dir / "labels.csv").string());
        write_claim_labels_csv(p.labels, out);
    }
    {
        auto out = open_output((dir / "spread.csv").string());
        write_spread_csv(p.data.graph, p.data.outcomes, out);
    }
    write_json(dir / "summary.json", {{"nodes", p.data.graph.node_count()},
                                      {"edges", p.data.graph.edge_count()},
                                      {"claims", p.data.opinions.claim_count()},
                                      {"opinions", p.data.opinions.entry_count()},
                                      {"seed", cfg.seed}});
    std::cout << fmt::format("wrote {} nodes, {} edges, {} claims, {} opinions to {}\n", p.data.graph.node_count(),
                             p.data.graph.edge_count(), p.data.opinions.claim_count(),
                             p.data.opinions.entry_count(), dir.string());
    return 0;
}

int cmd_train(const Overrides& o) {
    ExperimentConfig cfg = o.resolve();
    const PreparedData p = load_data(cfg);
    const auto& opinions = p.data.opinions;
    const auto prior = priors_for(cfg, p);
    const fs::path dir = out_dir(cfg);

    auto trace = open_output((dir / "training_trace.csv").string());
    write_csv_row(trace, {"iteration", "max_delta_eta", "mean_credibility"});
    TrainingOptions opts;
    opts.tolerance = cfg.tol_inner;
    opts.max_iterations = cfg.inner_cap;
    opts.eta_neg_estimator = cfg.eta_neg_estimator;
    opts.seed = cfg.seed;
    opts.on_iteration = [&trace](const TrainingTraceRow& r) {
        write_csv_row(trace, {std::to_string(r.iteration), format_number(r.max_delta_eta),
                              format_number(r.mean_credibility)});
    };
    const auto start = std::chrono::steady_clock::now();
    const TrainingState st = train(opinions, prior, opts);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    {
        auto out = open_output((dir / "credibility.csv").string());
        write_credibility_csv(opinions, st.credibility, st.prior, out);
    }
    {
        auto out = open_output((dir / "reliability.csv").string());
        write_reliability_csv(opinions, st.eta_pos, st.eta_neg, st.reliability, out);
    }
    const double acc =
        accuracy_of_credibility(label_map(opinions, classify_claims(st.credibility)), p.labels);
    const double err = error_of_reliability(reliability_map(opinions, st.reliability), p.true_reliability_map);
    write_json(dir / "summary.json", {{"iterations", st.iterations},
                                      {"converged", st.converged},
                                      {"accuracy_of_credibility", acc},
                                      {"error_of_reliability", err},
                                      {"elapsed_ms", ms}});
    std::cout << fmt::format("training: {} iterations, converged={}, accuracy={:.4f}, reliability error={:.4f}\n",
                             st.iterations, st.converged, acc, err);
    return 0;
}

int cmd_detect(const Overrides& o, const std::string& cred_path, const std::string& rel_path) {
    ExperimentConfig cfg = o.resolve();
    const PreparedData p = load_data(cfg);
    if (!p.has_spread) throw std::invalid_argument("detect needs spread records (--graph and --spread)");
    const auto& opinions = p.data.opinions;

    std::vector<double> credibility(opinions.claim_count());
    {
        auto in = open_input(cred_path);
        const auto m = read_credibility_csv(in);
        for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
            auto it = m.find(opinions.claim_id(j));
            if (it == m.end())
                throw std::invalid_argument(fmt::format("no credibility for claim {}", opinions.claim_id(j)));
            credibility[j] = it->second;
        }
    }
    std::vector<double> reliability;
    {
        auto in = open_input(rel_path);
        reliability = user_vector(opinions, read_reliability_csv(in), 0.5);
    }

    const fs::path dir = out_dir(cfg);
    SourceDetector detector(p.data.graph, opinions, p.data.outcomes, p.true_reliability);
    auto transcripts = open_output((dir / "transcripts.csv").string());
    const auto detections = detector.detect(credibility, reliability, QuerySettings{cfg.budget, cfg.rounds},
                                            derive_seed(cfg.seed, {0x51ULL}),
                                            transcript_writer(transcripts, p.data.graph));
    {
        auto out = open_output((dir / "detections.csv").string());
        write_detections_csv(p.data.graph, detections, out);
    }
    const double rate = source_detection_rate(detections, p.data.truths);
    write_json(dir / "summary.json", {{"source_detection_rate", rate}, {"budget", cfg.budget}, {"rounds", cfg.rounds}});
    std::cout << fmt::format("detection rate {:.4f} over {} claims\n", rate, detections.size());
    return 0;
}

int cmd_run(const Overrides& o) {
    ExperimentConfig cfg = o.resolve();
    const PreparedData p = load_data(cfg);
    if (!p.has_spread) throw std::invalid_argument("run needs spread records (--graph and --spread) or a synthetic dataset");
    const auto& opinions = p.data.opinions;

    FrameworkConfig fc;
    fc.query = {cfg.budget, cfg.rounds};
    fc.inner_tolerance = cfg.tol_inner;
    fc.outer_tolerance = cfg.tol_outer;
    fc.inner_cap = cfg.inner_cap;
    fc.outer_cap = cfg.outer_cap;
    fc.seed = cfg.seed;
    fc.warm_start = cfg.warm_start;
    fc.eta_neg_estimator = cfg.eta_neg_estimator;
    fc.initial_priors = priors_for(cfg, p);

    SourceDetector detector(p.data.graph, opinions, p.data.outcomes, p.true_reliability);
    const TraceTruth truth{p.z, p.data.truths};
    const auto start = std::chrono::steady_clock::now();
    const FrameworkResult r = run_sourcecr(detector, opinions, fc, &truth);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = out_dir(cfg);
    {
        auto out = open_output((dir / "credibility.csv").string());
        write_credibility_csv(opinions, r.credibility, r.prior, out);
    }
    {
        auto out = open_output((dir / "reliability.csv").string());
        write_reliability_csv(opinions, r.eta_pos, r.eta_neg, r.reliability, out);
    }
    {
        auto out = open_output((dir / "detections.csv").string());
        write_detections_csv(p.data.graph, r.detections, out);
    }
    {
        auto out = open_output((dir / "outer_trace.csv").string());
        write_csv_row(out, {"iteration", "max_delta", "mean_delta", "accuracy", "detection_rate"});
        for (const auto& t : r.trace) {
            write_csv_row(out, {std::to_string(t.iteration), format_number(t.max_delta), format_number(t.mean_delta),
                                format_number(t.accuracy), format_number(t.detection_rate)});
        }
    }
    const double acc = r.trace.empty() ? NAN : r.trace.back().accuracy;
    const double rate = r.trace.empty() ? NAN : r.trace.back().detection_rate;
    const double err = error_of_reliability(reliability_map(opinions, r.reliability), p.true_reliability_map);
    write_json(dir / "summary.json", {{"iterations", r.iterations},
                                      {"converged", r.converged},
                                      {"accuracy_of_credibility", acc},
                                      {"source_detection_rate", rate},
                                      {"error_of_reliability", err},
                                      {"elapsed_ms", ms}});
    std::cout << fmt::format("SourceCR: {} outer iterations, converged={}, accuracy={:.4f}, detection={:.4f}, "
                             "reliability error={:.4f}\n",
                             r.iterations, r.converged, acc, rate, err);
    return 0;
}

struct BoundArgs {
    BoundInputs in;
    int k_min = 0;
    int k_max = 0;
    bool as_json = false;
};

int cmd_bounds(const BoundArgs& a) {
    std::vector<int> budgets;
    if (a.k_max > 0) {
        const int r = a.in.rounds;
        for (int k = std::max(a.k_min, 2 * r + 1); k <= a.k_max; ++k) {
            if (k % r == 0) budgets.push_back(k);
        }
        if (budgets.empty()) throw std::invalid_argument("budget range holds no multiple of rounds above 2 * rounds");
    }
    const BoundReport rep = bound_report(a.in, budgets);
    json adm = rep.admissible_budget ? json(*rep.admissible_budget) : json(nullptr);
    if (a.as_json) {
        json j = {{"degree", a.in.degree},
                  {"budget", a.in.budget},
                  {"rounds", a.in.rounds},
                  {"delta", a.in.delta},
                  {"eta_max", a.in.eta_max},
                  {"eta_min", a.in.eta_min},
                  {"time_entropy", a.in.time_entropy},
                  {"c1", rep.coverage.c1},
                  {"c2", rep.coverage.c2},
                  {"l", rep.coverage.l},
                  {"coverage_lower", rep.coverage.lower},
                  {"coverage_upper", rep.coverage.upper},
                  {"coverage_lower_clamped", rep.coverage.lower_clamped},
                  {"coverage_upper_clamped", rep.coverage.upper_clamped},
                  {"h1", rep.h1},
                  {"h2", rep.h2},
                  {"f", rep.f},
                  {"h_g", rep.h_g},
                  {"inequality_holds", rep.inequality_holds},
                  {"admissible_budget", adm}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    auto line = [](const char* name, const std::string& v) { std::cout << fmt::format("{:<18} {}\n", name, v); };
    line("c1", format_number(rep.coverage.c1));
    line("c2", format_number(rep.coverage.c2));
    line("l", format_number(rep.coverage.l));
    line("coverage_lower", format_number(rep.coverage.lower) + (rep.coverage.lower_clamped ? " (clamped)" : ""));
    line("coverage_upper", format_number(rep.coverage.upper) + (rep.coverage.upper_clamped ? " (clamped)" : ""));
    line("h1", format_number(rep.h1));
    line("h2", format_number(rep.h2));
    line("f", format_number(rep.f));
    line("h_g", format_number(rep.h_g));
    line("inequality_holds", rep.inequality_holds ? "yes" : "no");
    if (!budgets.empty()) line("admissible_budget", rep.admissible_budget ? std::to_string(*rep.admissible_budget) : "none");
    return 0;
}

int cmd_experiment(const Overrides& o) {
    ExperimentConfig cfg = o.resolve();
    cfg.validate();
    const fs::path dir = out_dir(cfg);
    const auto result = run_experiment(cfg, [&cfg](std::size_t gi, int rep) {
        if (rep == 0 || (rep + 1) % 5 == 0)
            std::cerr << fmt::format("[{}={}] repetition {}/{}\n", to_string(cfg.sweep), cfg.grid[gi], rep + 1,
                                     cfg.repetitions);
    });
    {
        auto out = open_output((dir / "sweep.csv").string());
        write_sweep_csv(cfg, result, out);
    }
    {
        auto out = open_output((dir / "summary.json").string());
        out << experiment_summary_json(cfg, result);
    }
    for (const auto& row : result.rows) {
        if (std::isnan(row.mean)) continue;
        std::cout << fmt::format("{:>8} {:<9} {:<24} {:.4f} +- {:.4f}\n", format_number(row.sweep_value),
                                 to_string(row.algorithm), to_string(row.metric), row.mean, row.stddev);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint claim credibility and opinion source detection"};
    app.require_subcommand(1);

    Overrides sim_o, train_o, detect_o, run_o, exp_o;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic graph, opinions, labels and spread records");
    add_common(sim, sim_o);
    add_dataset(sim, sim_o);

    auto* trn = app.add_subcommand("train", "Credibility/reliability training only");
    add_common(trn, train_o);
    add_dataset(trn, train_o);
    train_o.add(trn, "--prior-offset", "prior_offset", "Oracle-offset priors instead of random ones");
    train_o.add(trn, "--eta-neg-estimator", "eta_neg_estimator", "verbatim | posterior-frequency");

    std::string cred_path, rel_path;
    auto* det = app.add_subcommand("detect", "Division-querying source detection from given estimates");
    add_common(det, detect_o);
    add_dataset(det, detect_o);
    det->add_option("--credibility", cred_path, "credibility.csv from train")->required()->check(CLI::ExistingFile);
    det->add_option("--reliability", rel_path, "reliability.csv from train")->required()->check(CLI::ExistingFile);

    auto* run = app.add_subcommand("run", "Full alternating framework");
    add_common(run, run_o);
    add_dataset(run, run_o);
    run_o.add(run, "--prior-offset", "prior_offset", "Oracle-offset priors instead of random ones");
    run_o.add(run, "--outer-cap", "outer_cap", "Outer iteration cap");
    run_o.add(run, "--warm-start", "warm_start", "Continue training from the previous eta (true/false)");
    run_o.add(run, "--eta-neg-estimator", "eta_neg_estimator", "verbatim | posterior-frequency");

    BoundArgs bargs;
    auto* bnd = app.add_subcommand("bounds", "Budget bound calculators on d-regular trees");
    bnd->add_option("--degree", bargs.in.degree, "Tree degree d (>= 3)");
    bnd->add_option("--budget", bargs.in.budget, "Budget K");
    bnd->add_option("--rounds", bargs.in.rounds, "Rounds r");
    bnd->add_option("--delta", bargs.in.delta, "Target failure probability");
    bnd->add_option("--eta-max", bargs.in.eta_max, "Largest reliability");
    bnd->add_option("--eta-min", bargs.in.eta_min, "Smallest reliability");
    bnd->add_option("--time-entropy", bargs.in.time_entropy, "Entropy of infection times (nats)");
    bnd->add_option("--k-min", bargs.k_min, "Start of the budget scan");
    bnd->add_option("--k-max", bargs.k_max, "End of the budget scan (enables admissible_budget)");
    bnd->add_flag("--json", bargs.as_json, "Print JSON instead of aligned text");

    auto* exp = app.add_subcommand("experiment", "Parameter sweeps over SourceCR and the built-in baselines");
    add_common(exp, exp_o);
    add_dataset(exp, exp_o);
    exp_o.add(exp, "--sweep", "sweep", "prior-offset | reliability-offset | budget | iterations");
    exp_o.add(exp, "--grid", "grid", "Comma separated sweep values");
    exp_o.add(exp, "--repetitions", "repetitions", "Repetitions per grid point");
    exp_o.add(exp, "--algorithms", "algorithms", "Comma separated: SourceCR, CR-TRI, Q-SI");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_o);
        if (*trn) return cmd_train(train_o);
        if (*det) return cmd_detect(detect_o, cred_path, rel_path);
        if (*run) return cmd_run(run_o);
        if (*bnd) return cmd_bounds(bargs);
        if (*exp) return cmd_experiment(exp_o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
