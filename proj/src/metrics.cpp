#include "sourcecr/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sourcecr {

ReliabilityMap ground_truth_reliability(const OpinionMatrix& opinions, const LabelMap& z) {
    std::vector<int> label(opinions.claim_count(), 0);
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        auto it = z.find(opinions.claim_id(j));
        if (it != z.end()) label[j] = it->second;
    }
    ReliabilityMap out;
    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        const auto row = opinions.row(i);
        if (row.empty()) continue;
        std::size_t correct = 0;
        for (const auto& e : row) {
            if (label[e.index] == 0)
                throw std::invalid_argument("unlabeled claim " + std::to_string(opinions.claim_id(e.index)));
            if (e.value == label[e.index]) ++correct;
        }
        out.emplace(opinions.user_id(i), static_cast<double>(correct) / static_cast<double>(row.size()));
    }
    return out;
}

double error_of_reliability(const ReliabilityMap& estimated, const ReliabilityMap& truth, std::size_t* unmatched) {
    double total = 0.0;
    std::size_t shared = 0;
    for (const auto& [user, value] : estimated) {
        auto it = truth.find(user);
        if (it == truth.end()) continue;
        total += std::abs(value - it->second);
        ++shared;
    }
    if (shared == 0) throw std::invalid_argument("error_of_reliability: no shared users");
    if (unmatched) *unmatched = (estimated.size() - shared) + (truth.size() - shared);
    return total / static_cast<double>(shared);
}

double accuracy_of_credibility(const LabelMap& verdicts, const LabelMap& z) {
    std::size_t shared = 0;
    std::size_t correct = 0;
    for (const auto& [claim, verdict] : verdicts) {
        auto it = z.find(claim);
        if (it == z.end()) continue;
        ++shared;
        if (verdict == it->second) ++correct;
    }
    if (shared == 0) throw std::invalid_argument("accuracy_of_credibility: no shared claims");
    return static_cast<double>(correct) / static_cast<double>(shared);
}

double source_detection_rate(std::span<const DetectionResult> results, std::span<const ClaimGroundTruth> truths) {
    std::unordered_map<ClaimId, const ClaimGroundTruth*> by_claim;
    for (const auto& t : truths) by_claim.emplace(t.claim, &t);
    std::size_t sides = 0;
    std::size_t hits = 0;
    for (const auto& r : results) {
        auto it = by_claim.find(r.claim);
        if (it == by_claim.end()) continue;
        const ClaimGroundTruth& t = *it->second;
        sides += 2;
        if (r.pros.source != kNoVertex && r.pros.source == t.pros_source) ++hits;
        if (r.cons.source != kNoVertex && r.cons.source == t.cons_source) ++hits;
    }
    if (sides == 0) throw std::invalid_argument("source_detection_rate: no shared claims");
    return static_cast<double>(hits) / static_cast<double>(sides);
}

ReliabilityMap reliability_map(const OpinionMatrix& opinions, std::span<const double> per_user,
                               bool opinion_holders_only) {
    if (per_user.size() != opinions.user_count()) throw std::invalid_argument("reliability size != user count");
    ReliabilityMap out;
    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        if (opinion_holders_only && opinions.row(i).empty()) continue;
        out.emplace(opinions.user_id(i), per_user[i]);
    }
    return out;
}

LabelMap label_map(const OpinionMatrix& opinions, std::span<const int> per_claim) {
    if (per_claim.size() != opinions.claim_count()) throw std::invalid_argument("label size != claim count");
    LabelMap out;
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) out.emplace(opinions.claim_id(j), per_claim[j]);
    return out;
}

std::vector<int> labels_by_index(const OpinionMatrix& opinions, const LabelMap& labels) {
    std::vector<int> out(opinions.claim_count());
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        auto it = labels.find(opinions.claim_id(j));
        if (it == labels.end())
            throw std::invalid_argument("no label for claim " + std::to_string(opinions.claim_id(j)));
        out[j] = it->second;
    }
    return out;
}

std::vector<double> user_vector(const OpinionMatrix& opinions, const ReliabilityMap& values, double fallback) {
    std::vector<double> out(opinions.user_count(), fallback);
    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        auto it = values.find(opinions.user_id(i));
        if (it != values.end()) out[i] = it->second;
    }
    return out;
}

} // namespace sourcecr
