#include "sourcecr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "sourcecr/io.hpp"
#include "sourcecr/random.hpp"

namespace sourcecr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string normalize_key(std::string key) {
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    return key;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    for (char c : value + ",") {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (value.empty() || used != value.size())
        throw std::invalid_argument(fmt::format("{}: expected a number, got '{}'", key, value));
    return v;
}

long long to_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (value.empty() || used != value.size())
        throw std::invalid_argument(fmt::format("{}: expected an integer, got '{}'", key, value));
    return v;
}

bool to_bool(const std::string& key, std::string value) {
    value = normalize_key(value);
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw std::invalid_argument(fmt::format("{}: expected a boolean, got '{}'", key, value));
}

bool is_integral(double x) { return std::isfinite(x) && x == std::floor(x); }

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

const char* to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::kPriorOffset: return "prior-offset";
    case SweepVariable::kReliabilityOffset: return "reliability-offset";
    case SweepVariable::kBudget: return "budget";
    case SweepVariable::kIterations: return "iterations";
    }
    return "?";
}

SweepVariable parse_sweep_variable(const std::string& name) {
    const std::string n = normalize_key(name);
    if (n == "prior_offset") return SweepVariable::kPriorOffset;
    if (n == "reliability_offset") return SweepVariable::kReliabilityOffset;
    if (n == "budget") return SweepVariable::kBudget;
    if (n == "iterations") return SweepVariable::kIterations;
    throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::kSourceCR: return "SourceCR";
    case Algorithm::kCrTri: return "CR-TRI";
    case Algorithm::kQSi: return "Q-SI";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    const std::string n = normalize_key(name);
    if (n == "sourcecr") return Algorithm::kSourceCR;
    if (n == "cr_tri") return Algorithm::kCrTri;
    if (n == "q_si") return Algorithm::kQSi;
    if (n == "tf_tri" || n == "mvna_si")
        throw std::invalid_argument("algorithm '" + name + "' is a plug-in slot with no built-in implementation");
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

const char* to_string(Metric m) {
    switch (m) {
    case Metric::kErrorOfReliability: return "error_of_reliability";
    case Metric::kAccuracyOfCredibility: return "accuracy_of_credibility";
    case Metric::kDetectionRate: return "source_detection_rate";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (opinions_path.empty()) {
        if (nodes < 2) throw std::invalid_argument("nodes must be >= 2");
        if (!(avg_degree > 0.0 && avg_degree < nodes)) throw std::invalid_argument("avg_degree must lie in (0, nodes)");
        if (claims < 1) throw std::invalid_argument("claims must be >= 1");
        if (!(truth_fraction >= 0.0 && truth_fraction <= 1.0))
            throw std::invalid_argument("truth_fraction must lie in [0, 1]");
        SpreadConfig{success_probability, infection_rate, 0}.validate();
    } else {
        if (labels_path.empty()) throw std::invalid_argument("opinions file given without a labels file");
        if (!spread_path.empty() && graph_path.empty())
            throw std::invalid_argument("spread file given without a graph file");
    }
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
    if (std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() != algorithms.size())
        throw std::invalid_argument("algorithm listed twice");
    if (!(tol_inner > 0.0) || !(tol_outer > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (inner_cap < 1 || outer_cap < 1) throw std::invalid_argument("iteration caps must be >= 1");
    if (prior_offset && !(*prior_offset >= 0.0 && *prior_offset <= 0.5))
        throw std::invalid_argument("prior_offset must lie in [0, 0.5]");
    if (!(reliability_offset >= 0.0 && reliability_offset <= 0.5))
        throw std::invalid_argument("reliability_offset must lie in [0, 0.5]");
    validate_budget(budget, rounds);
    for (double v : grid) {
        switch (sweep) {
        case SweepVariable::kPriorOffset:
        case SweepVariable::kReliabilityOffset:
            if (!(v >= 0.0 && v <= 0.5)) throw std::invalid_argument(fmt::format("offset {} outside [0, 0.5]", v));
            break;
        case SweepVariable::kBudget:
            if (!is_integral(v) || v < 1) throw std::invalid_argument(fmt::format("budget {} is not a positive integer", v));
            validate_budget(static_cast<int>(v), rounds);
            break;
        case SweepVariable::kIterations:
            if (!is_integral(v) || v < 1) throw std::invalid_argument(fmt::format("iteration cap {} is not >= 1", v));
            break;
        }
    }
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalize_key(trim(raw_key));
    const std::string value = trim(raw_value);
    if (key == "graph" || key == "graph_path") {
        cfg.graph_path = value;
    } else if (key == "opinions" || key == "opinions_path") {
        cfg.opinions_path = value;
    } else if (key == "labels" || key == "labels_path") {
        cfg.labels_path = value;
    } else if (key == "spread" || key == "spread_path") {
        cfg.spread_path = value;
    } else if (key == "nodes") {
        cfg.nodes = static_cast<int>(to_int(key, value));
    } else if (key == "avg_degree") {
        cfg.avg_degree = to_double(key, value);
    } else if (key == "claims") {
        cfg.claims = static_cast<int>(to_int(key, value));
    } else if (key == "truth_fraction") {
        cfg.truth_fraction = to_double(key, value);
    } else if (key == "success_probability" || key == "p") {
        cfg.success_probability = to_double(key, value);
    } else if (key == "infection_rate") {
        cfg.infection_rate = to_double(key, value);
    } else if (key == "sweep") {
        cfg.sweep = parse_sweep_variable(value);
    } else if (key == "grid") {
        cfg.grid.clear();
        for (const auto& item : split_list(value)) cfg.grid.push_back(to_double(key, item));
    } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const auto& item : split_list(value)) cfg.algorithms.push_back(parse_algorithm(item));
    } else if (key == "repetitions") {
        cfg.repetitions = static_cast<int>(to_int(key, value));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "budget") {
        cfg.budget = static_cast<int>(to_int(key, value));
    } else if (key == "rounds") {
        cfg.rounds = static_cast<int>(to_int(key, value));
    } else if (key == "tol_inner") {
        cfg.tol_inner = to_double(key, value);
    } else if (key == "tol_outer") {
        cfg.tol_outer = to_double(key, value);
    } else if (key == "inner_cap") {
        cfg.inner_cap = static_cast<int>(to_int(key, value));
    } else if (key == "outer_cap") {
        cfg.outer_cap = static_cast<int>(to_int(key, value));
    } else if (key == "warm_start") {
        cfg.warm_start = to_bool(key, value);
    } else if (key == "eta_neg_estimator") {
        const std::string v = normalize_key(value);
        if (v == "verbatim") {
            cfg.eta_neg_estimator = EtaNegEstimator::kVerbatim;
        } else if (v == "posterior_frequency") {
            cfg.eta_neg_estimator = EtaNegEstimator::kPosteriorFrequency;
        } else {
            throw std::invalid_argument("eta_neg_estimator: expected verbatim or posterior-frequency");
        }
    } else if (key == "prior_offset") {
        if (normalize_key(value) == "random") {
            cfg.prior_offset.reset();
        } else {
            cfg.prior_offset = to_double(key, value);
        }
    } else if (key == "reliability_offset") {
        cfg.reliability_offset = to_double(key, value);
    } else if (key == "out" || key == "out_dir") {
        cfg.out_dir = value;
    } else {
        throw std::invalid_argument("unknown config key '" + raw_key + "'");
    }
}

ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", number);
        try {
            apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), number);
        }
    }
    return base;
}

ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base) {
    auto in = open_input(path);
    return parse_experiment_config(in, std::move(base));
}

namespace {

void finish_prepared(PreparedData& p) {
    const auto& opinions = p.data.opinions;
    p.z = labels_by_index(opinions, p.labels);
    p.true_reliability_map = ground_truth_reliability(opinions, p.labels);
    p.true_reliability = user_vector(opinions, p.true_reliability_map, 0.5);
}

} // namespace

PreparedData prepare_synthetic(const ExperimentConfig& cfg, int repetition) {
    const auto rep = static_cast<std::uint64_t>(repetition);
    PreparedData p;
    SocialGraph g = generate_random_graph(cfg.nodes, cfg.avg_degree, derive_seed(cfg.seed, {rep, 1}));
    SpreadConfig spread{cfg.success_probability, cfg.infection_rate, derive_seed(cfg.seed, {rep, 2})};
    p.data = generate_dataset(g, cfg.claims, cfg.truth_fraction, spread);
    for (const auto& t : p.data.truths) p.labels.emplace(t.claim, t.z);
    finish_prepared(p);
    return p;
}

PreparedData prepare_from_files(const ExperimentConfig& cfg) {
    PreparedData p;
    if (!cfg.graph_path.empty()) p.data.graph = load_edge_list_file(cfg.graph_path);
    p.data.opinions = load_opinions_csv(cfg.opinions_path, p.data.graph.ids());
    p.labels = load_claim_labels_csv(cfg.labels_path);
    p.has_spread = !cfg.spread_path.empty();
    if (p.has_spread) {
        auto in = open_input(cfg.spread_path);
        p.data.outcomes = read_spread_csv(p.data.graph, in);
        p.data.truths = truths_from_spread(p.data.outcomes, p.labels);
    }
    finish_prepared(p);
    return p;
}

std::vector<double> noisy_reliability(std::span<const double> truth, double offset, std::uint64_t seed) {
    Engine engine = make_engine(seed, {0x4e4fULL});
    std::uniform_real_distribution<double> noise(-2.0 * offset, 2.0 * offset);
    std::vector<double> out(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double n = offset > 0.0 ? noise(engine) : 0.0;
        out[i] = std::clamp(truth[i] + n, 0.0, 1.0);
    }
    return out;
}

std::pair<double, double> mean_std(std::span<const double> values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++n;
    }
    if (n == 0) return {kNaN, kNaN};
    const double mean = sum / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) {
        if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress) {
    cfg.validate();
    const std::size_t n_grid = cfg.grid.size();
    const std::size_t n_alg = cfg.algorithms.size();
    constexpr std::size_t n_metric = std::size(kAllMetrics);

    ExperimentResult result;
    result.runs.assign(n_grid, std::vector<std::vector<std::vector<double>>>(
                                   n_alg, std::vector<std::vector<double>>(n_metric)));
    std::vector<std::vector<double>> outer_iters(n_grid);
    std::vector<std::vector<double>> outer_converged(n_grid);
    std::map<Algorithm, double> total_ms;
    std::map<Algorithm, double> total_claims;

    auto alg_index = [&](Algorithm a) -> std::optional<std::size_t> {
        auto it = std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a);
        if (it == cfg.algorithms.end()) return std::nullopt;
        return static_cast<std::size_t>(it - cfg.algorithms.begin());
    };

    // A file dataset is loaded once and reused by every repetition.
    std::optional<PreparedData> shared;
    if (!cfg.opinions_path.empty()) shared = prepare_from_files(cfg);

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const PreparedData prepared = shared ? *shared : prepare_synthetic(cfg, rep);
        const auto& data = prepared.data;
        const auto& opinions = data.opinions;
        const double n_claims = static_cast<double>(opinions.claim_count());
        std::optional<SourceDetector> detector;
        if (prepared.has_spread) detector.emplace(data.graph, opinions, data.outcomes, prepared.true_reliability);

        const std::uint64_t run_seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(rep), 3});
        // SourceCR uses this answer stream too, so Q-SI sees identical respondents' answers.
        const std::uint64_t answer_seed = derive_seed(run_seed, {0x51ULL});
        const std::uint64_t first_training_seed = derive_seed(run_seed, {0x54ULL, 1ULL});
        const std::vector<double> random_priors = init_priors(opinions.claim_count(), run_seed);

        auto record = [&](std::size_t gi, Algorithm a, Metric m, double v) {
            if (auto ai = alg_index(a)) result.runs[gi][*ai][static_cast<std::size_t>(m)].push_back(v);
        };
        auto error_of = [&](std::span<const double> reliability) {
            return error_of_reliability(reliability_map(opinions, reliability), prepared.true_reliability_map);
        };
        auto accuracy_of = [&](std::span<const double> credibility) {
            return accuracy_of_credibility(label_map(opinions, classify_claims(credibility)), prepared.labels);
        };

        for (std::size_t gi = 0; gi < n_grid; ++gi) {
            if (progress) progress(gi, rep);
            const double v = cfg.grid[gi];

            std::vector<double> prior = random_priors;
            if (cfg.sweep == SweepVariable::kPriorOffset) {
                prior = init_priors_offset(prepared.z, v);
            } else if (cfg.prior_offset) {
                prior = init_priors_offset(prepared.z, *cfg.prior_offset);
            }
            QuerySettings query{cfg.budget, cfg.rounds};
            if (cfg.sweep == SweepVariable::kBudget) query.budget = static_cast<int>(v);
            const double rel_offset = cfg.sweep == SweepVariable::kReliabilityOffset ? v : cfg.reliability_offset;
            const std::vector<double> noisy = noisy_reliability(
                prepared.true_reliability, rel_offset, derive_seed(cfg.seed, {static_cast<std::uint64_t>(rep), 4}));
            const bool iteration_sweep = cfg.sweep == SweepVariable::kIterations;

            if (alg_index(Algorithm::kSourceCR)) {
                const auto start = Clock::now();
                double err = kNaN;
                double acc = kNaN;
                double det = kNaN;
                if (detector) {
                    FrameworkConfig fc;
                    fc.query = query;
                    fc.inner_tolerance = cfg.tol_inner;
                    fc.outer_tolerance = cfg.tol_outer;
                    fc.inner_cap = cfg.inner_cap;
                    fc.outer_cap = iteration_sweep ? static_cast<int>(v) : cfg.outer_cap;
                    fc.seed = run_seed;
                    fc.warm_start = cfg.warm_start;
                    fc.eta_neg_estimator = cfg.eta_neg_estimator;
                    fc.initial_priors = prior;
                    if (cfg.sweep == SweepVariable::kReliabilityOffset) fc.initial_eta = WarmStart{noisy, noisy};
                    const FrameworkResult fr = run_sourcecr(*detector, opinions, fc);
                    err = error_of(fr.reliability);
                    acc = accuracy_of(fr.credibility);
                    det = source_detection_rate(fr.detections, data.truths);
                    outer_iters[gi].push_back(fr.iterations);
                    outer_converged[gi].push_back(fr.converged ? 1.0 : 0.0);
                } else {
                    // Without spread records there is nothing to query, and
                    // the loop reduces to one training pass.
                    TrainingOptions opts;
                    opts.tolerance = cfg.tol_inner;
                    opts.max_iterations = cfg.inner_cap;
                    opts.eta_neg_estimator = cfg.eta_neg_estimator;
                    opts.seed = first_training_seed;
                    const TrainingState st = train(opinions, prior, opts);
                    err = error_of(st.reliability);
                    acc = accuracy_of(st.credibility);
                }
                total_ms[Algorithm::kSourceCR] += elapsed_ms(start);
                total_claims[Algorithm::kSourceCR] += n_claims;
                record(gi, Algorithm::kSourceCR, Metric::kErrorOfReliability, err);
                record(gi, Algorithm::kSourceCR, Metric::kAccuracyOfCredibility, acc);
                record(gi, Algorithm::kSourceCR, Metric::kDetectionRate, det);
            }

            const bool need_training = alg_index(Algorithm::kCrTri) || alg_index(Algorithm::kQSi);
            if (!need_training) continue;
            const auto train_start = Clock::now();
            TrainingOptions opts;
            opts.tolerance = cfg.tol_inner;
            opts.max_iterations = iteration_sweep ? static_cast<int>(v) : cfg.inner_cap;
            opts.eta_neg_estimator = cfg.eta_neg_estimator;
            opts.seed = first_training_seed;
            const TrainingState crtri = train(opinions, prior, opts);
            const double train_ms = elapsed_ms(train_start);

            if (alg_index(Algorithm::kCrTri)) {
                total_ms[Algorithm::kCrTri] += train_ms;
                total_claims[Algorithm::kCrTri] += n_claims;
                record(gi, Algorithm::kCrTri, Metric::kErrorOfReliability, error_of(crtri.reliability));
                record(gi, Algorithm::kCrTri, Metric::kAccuracyOfCredibility, accuracy_of(crtri.credibility));
                record(gi, Algorithm::kCrTri, Metric::kDetectionRate, kNaN);
            }
            if (alg_index(Algorithm::kQSi)) {
                double det = kNaN;
                const auto start = Clock::now();
                if (detector) {
                    const auto detections = detector->detect(crtri.credibility, noisy, query, answer_seed);
                    det = source_detection_rate(detections, data.truths);
                }
                total_ms[Algorithm::kQSi] += elapsed_ms(start);
                total_claims[Algorithm::kQSi] += n_claims;
                record(gi, Algorithm::kQSi, Metric::kErrorOfReliability, kNaN);
                record(gi, Algorithm::kQSi, Metric::kAccuracyOfCredibility, kNaN);
                record(gi, Algorithm::kQSi, Metric::kDetectionRate, det);
            }
        }
    }

    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        for (std::size_t ai = 0; ai < n_alg; ++ai) {
            for (std::size_t mi = 0; mi < n_metric; ++mi) {
                const auto [mean, sd] = mean_std(result.runs[gi][ai][mi]);
                result.rows.push_back({cfg.grid[gi], cfg.algorithms[ai], kAllMetrics[mi], mean, sd});
            }
        }
        result.mean_outer_iterations.push_back(mean_std(outer_iters[gi]).first);
        result.converged_fraction.push_back(mean_std(outer_converged[gi]).first);
    }
    for (const auto& [alg, ms] : total_ms) {
        result.ms_per_claim[alg] = total_claims[alg] > 0 ? ms / total_claims[alg] : kNaN;
    }
    return result;
}

void write_sweep_csv(const ExperimentConfig& cfg, const ExperimentResult& result, std::ostream& out) {
    write_csv_row(out, {"sweep_variable", "sweep_value", "algorithm", "metric", "mean", "std"});
    for (const auto& row : result.rows) {
        write_csv_row(out, {to_string(cfg.sweep), format_number(row.sweep_value), to_string(row.algorithm),
                            to_string(row.metric), format_number(row.mean), format_number(row.stddev)});
    }
}

std::string experiment_summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    using nlohmann::json;
    auto num = [](double x) -> json { return std::isfinite(x) ? json(x) : json(nullptr); };

    json config = {
        {"sweep", to_string(cfg.sweep)},
        {"grid", cfg.grid},
        {"repetitions", cfg.repetitions},
        {"seed", cfg.seed},
        {"budget", cfg.budget},
        {"rounds", cfg.rounds},
        {"tol_inner", cfg.tol_inner},
        {"tol_outer", cfg.tol_outer},
        {"inner_cap", cfg.inner_cap},
        {"outer_cap", cfg.outer_cap},
        {"warm_start", cfg.warm_start},
        {"eta_neg_estimator",
         cfg.eta_neg_estimator == EtaNegEstimator::kVerbatim ? "verbatim" : "posterior-frequency"},
        {"reliability_offset", cfg.reliability_offset},
        {"prior_offset", cfg.prior_offset ? json(*cfg.prior_offset) : json("random")},
    };
    if (cfg.opinions_path.empty()) {
        config["dataset"] = {{"kind", "synthetic"},
                             {"nodes", cfg.nodes},
                             {"avg_degree", cfg.avg_degree},
                             {"claims", cfg.claims},
                             {"truth_fraction", cfg.truth_fraction},
                             {"success_probability", cfg.success_probability},
                             {"infection_rate", cfg.infection_rate}};
    } else {
        config["dataset"] = {{"kind", "files"},
                             {"graph", cfg.graph_path},
                             {"opinions", cfg.opinions_path},
                             {"labels", cfg.labels_path},
                             {"spread", cfg.spread_path}};
    }
    json algorithms = json::array();
    for (Algorithm a : cfg.algorithms) algorithms.push_back(to_string(a));
    config["algorithms"] = algorithms;

    json points = json::array();
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        json per_alg = json::object();
        for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
            json metrics = json::object();
            for (std::size_t mi = 0; mi < std::size(kAllMetrics); ++mi) {
                const auto& values = result.runs[gi][ai][mi];
                const auto [mean, sd] = mean_std(values);
                json runs = json::array();
                for (double v : values) runs.push_back(num(v));
                metrics[to_string(kAllMetrics[mi])] = {{"mean", num(mean)}, {"std", num(sd)}, {"runs", runs}};
            }
            per_alg[to_string(cfg.algorithms[ai])] = metrics;
        }
        points.push_back({{"sweep_value", cfg.grid[gi]},
                          {"sourcecr_mean_outer_iterations", num(result.mean_outer_iterations[gi])},
                          {"sourcecr_converged_fraction", num(result.converged_fraction[gi])},
                          {"algorithms", per_alg}});
    }
    json timing = json::object();
    for (const auto& [alg, ms] : result.ms_per_claim) timing[to_string(alg)] = num(ms);

    json root = {{"config", config}, {"points", points}, {"ms_per_claim", timing}};
    return root.dump(2) + "\n";
}

} // namespace sourcecr
