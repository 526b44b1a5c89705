#ifndef SOURCECR_EXPERIMENT_HPP
#define SOURCECR_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sourcecr/framework.hpp"
#include "sourcecr/metrics.hpp"
#include "sourcecr/spread.hpp"

namespace sourcecr {

enum class SweepVariable { kPriorOffset, kReliabilityOffset, kBudget, kIterations };

const char* to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& name);

/// Built-in algorithms. TF-TRI and MVNA-SI are recognised names with no
/// implementation; selecting them is reported as a configuration error.
enum class Algorithm { kSourceCR, kCrTri, kQSi };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

enum class Metric { kErrorOfReliability, kAccuracyOfCredibility, kDetectionRate };

const char* to_string(Metric m);
inline constexpr Metric kAllMetrics[] = {Metric::kErrorOfReliability, Metric::kAccuracyOfCredibility,
                                         Metric::kDetectionRate};

struct ExperimentConfig {
    // Dataset: synthetic unless opinions_path is set.
    std::string graph_path;
    std::string opinions_path;
    std::string labels_path;
    std::string spread_path;
    int nodes = 500;
    double avg_degree = 10.0;
    int claims = 100;
    double truth_fraction = 0.5;
    double success_probability = 0.6;
    double infection_rate = 1.0;

    SweepVariable sweep = SweepVariable::kPriorOffset;
    std::vector<double> grid{0.0, 0.25, 0.5};
    std::vector<Algorithm> algorithms{Algorithm::kSourceCR, Algorithm::kCrTri, Algorithm::kQSi};
    int repetitions = 20;
    std::uint64_t seed = 1;

    int budget = 60;
    int rounds = 3;
    double tol_inner = 0.01;
    double tol_outer = 0.001;
    int inner_cap = 500;
    int outer_cap = 50;
    bool warm_start = true;
    EtaNegEstimator eta_neg_estimator = EtaNegEstimator::kVerbatim;

    /// Prior offset when the sweep is not over priors; unset means random priors.
    std::optional<double> prior_offset;
    /// Noise level of the reliability handed to Q-SI outside reliability sweeps.
    double reliability_offset = 0.0;

    std::string out_dir;

    /// Throws std::invalid_argument describing the first inconsistency.
    void validate() const;
};

/// Applies one key=value pair; unknown keys throw std::invalid_argument.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" text; '#' starts a comment.
ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base = {});

/// Dataset plus everything derived from its ground truth.
struct PreparedData {
    Dataset data;
    bool has_spread = true;
    std::vector<int> z;                   // per claim index
    std::vector<double> true_reliability; // per user index, 0.5 for silent users
    ReliabilityMap true_reliability_map;  // opinion holders only
    LabelMap labels;
};

PreparedData prepare_synthetic(const ExperimentConfig& cfg, int repetition);
PreparedData prepare_from_files(const ExperimentConfig& cfg);

/// Adds U(-2 offset, 2 offset) noise (mean absolute value = offset), clamped to [0,1].
std::vector<double> noisy_reliability(std::span<const double> truth, double offset, std::uint64_t seed);

struct SweepRow {
    double sweep_value = 0.0;
    Algorithm algorithm = Algorithm::kSourceCR;
    Metric metric = Metric::kErrorOfReliability;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentResult {
    std::vector<SweepRow> rows;
    /// Retained per-repetition values: [grid][algorithm][metric] -> one per repetition.
    std::vector<std::vector<std::vector<std::vector<double>>>> runs;
    /// Mean outer iterations of SourceCR per grid point (NaN if not run).
    std::vector<double> mean_outer_iterations;
    std::vector<double> converged_fraction;
    /// Wall-clock milliseconds per claim per algorithm, averaged over all runs.
    std::map<Algorithm, double> ms_per_claim;
};

using ProgressSink = std::function<void(std::size_t grid_index, int repetition)>;

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress = {});

/// sweep_value,algorithm,metric,mean,std
void write_sweep_csv(const ExperimentConfig& cfg, const ExperimentResult& result, std::ostream& out);
/// Config echo, per-grid summaries and timings.
std::string experiment_summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Sample mean and standard deviation (n - 1 denominator; 0 for n < 2).
/// NaN entries are skipped; all-NaN gives NaN.
std::pair<double, double> mean_std(std::span<const double> values);

} // namespace sourcecr

#endif // SOURCECR_EXPERIMENT_HPP
