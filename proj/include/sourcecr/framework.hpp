#ifndef SOURCECR_FRAMEWORK_HPP
#define SOURCECR_FRAMEWORK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sourcecr/query.hpp"
#include "sourcecr/training.hpp"

namespace sourcecr {

struct FrameworkConfig {
    QuerySettings query;
    double inner_tolerance = 0.01;
    double outer_tolerance = 0.001;
    int inner_cap = 500;
    int outer_cap = 50;
    std::uint64_t seed = 0;
    /// Continue each inner training from the previous eta estimate.
    bool warm_start = true;
    EtaNegEstimator eta_neg_estimator = EtaNegEstimator::kVerbatim;
    /// Per claim index; drawn by init_priors when absent.
    std::optional<std::vector<double>> initial_priors;
    /// Starting eta for the first training; random when absent.
    std::optional<WarmStart> initial_eta;

    void validate() const;
};

struct OuterTraceRow {
    int iteration = 0;
    double max_delta = 0.0;   // max_j |lambda_j(k) - lambda_j(k-1)|, NaN on the first pass
    double mean_delta = 0.0;
    double accuracy = 0.0;        // NaN without ground truth
    double detection_rate = 0.0;  // NaN without ground truth
};

struct FrameworkResult {
    std::vector<double> credibility;  // per claim index
    std::vector<int> verdict;         // +1 truth / -1 rumor
    std::vector<double> reliability;  // per user index
    std::vector<double> eta_pos;
    std::vector<double> eta_neg;
    std::vector<double> prior;  // priors used by the final training
    std::vector<DetectionResult> detections;
    int iterations = 0;
    bool converged = false;
    std::vector<OuterTraceRow> trace;
};

/// Optional ground truth, only used to fill accuracy/detection columns of the trace.
struct TraceTruth {
    std::span<const int> z;                       // per claim index
    std::span<const ClaimGroundTruth> sources;    // per claim index
};

/// Independent uniform priors in (0,1), clamped to [eps, 1 - eps].
std::vector<double> init_priors(std::size_t claims, std::uint64_t seed);

/// phi = 1 - offset for true claims and offset for false ones; offset in [0, 0.5].
std::vector<double> init_priors_offset(std::span<const int> z, double offset);

struct PriorRefinement {
    std::vector<double> prior;
    /// Claims that fell back to 0.5 (a side undetected or zero reliabilities).
    std::vector<bool> fallback;
};

/// phi_j = eta(pros source) / (eta(pros source) + eta(cons source)), with
/// reliabilities looked up by graph vertex.
PriorRefinement refine_priors(std::span<const DetectionResult> detections,
                              std::span<const double> reliability_by_vertex);

std::vector<int> classify_claims(std::span<const double> credibility);

/// Alternates training and division-querying, refining priors from the
/// detected sources, until credibility moves by less than the outer tolerance.
FrameworkResult run_sourcecr(SourceDetector& detector, const OpinionMatrix& opinions,
                             const FrameworkConfig& cfg, const TraceTruth* truth = nullptr);

} // namespace sourcecr

#endif // SOURCECR_FRAMEWORK_HPP
