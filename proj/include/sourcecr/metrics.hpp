#ifndef SOURCECR_METRICS_HPP
#define SOURCECR_METRICS_HPP

#include <map>
#include <span>
#include <vector>

#include "sourcecr/opinions.hpp"
#include "sourcecr/query.hpp"
#include "sourcecr/spread.hpp"

namespace sourcecr {

using ReliabilityMap = std::map<NodeId, double>;
/// claim id -> +1 (truth) / -1 (rumor)
using LabelMap = std::map<ClaimId, int>;

/// Fraction of each user's opinions that agree with the claim label. Users
/// without opinions are absent. Throws if an opinion's claim is unlabeled.
ReliabilityMap ground_truth_reliability(const OpinionMatrix& opinions, const LabelMap& z);

/// Mean |estimated - true| over the users both maps share. `unmatched`, when
/// given, receives the number of users present in only one map.
double error_of_reliability(const ReliabilityMap& estimated, const ReliabilityMap& truth,
                            std::size_t* unmatched = nullptr);

double accuracy_of_credibility(const LabelMap& verdicts, const LabelMap& z);

/// Over every (claim, side) of the shared claims, the fraction whose detected
/// source equals the true one. Undetected sides are misses.
double source_detection_rate(std::span<const DetectionResult> results,
                             std::span<const ClaimGroundTruth> truths);

ReliabilityMap reliability_map(const OpinionMatrix& opinions, std::span<const double> per_user,
                               bool opinion_holders_only = true);
LabelMap label_map(const OpinionMatrix& opinions, std::span<const int> per_claim);
std::vector<int> labels_by_index(const OpinionMatrix& opinions, const LabelMap& labels);
std::vector<double> user_vector(const OpinionMatrix& opinions, const ReliabilityMap& values, double fallback);

} // namespace sourcecr

#endif // SOURCECR_METRICS_HPP
