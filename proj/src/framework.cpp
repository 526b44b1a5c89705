#include "sourcecr/framework.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sourcecr/metrics.hpp"
#include "sourcecr/random.hpp"

namespace sourcecr {

void FrameworkConfig::validate() const {
    validate_budget(query.budget, query.rounds);
    if (!(inner_tolerance > 0.0) || !(outer_tolerance > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (inner_cap < 1 || outer_cap < 1) throw std::invalid_argument("iteration caps must be >= 1");
}

std::vector<double> init_priors(std::size_t claims, std::uint64_t seed) {
    Engine engine = make_engine(seed, {0x5052ULL});
    std::vector<double> prior(claims);
    for (auto& p : prior) p = clamp_probability(uniform01(engine));
    return prior;
}

std::vector<double> init_priors_offset(std::span<const int> z, double offset) {
    if (!(offset >= 0.0 && offset <= 0.5)) throw std::invalid_argument("prior offset must lie in [0, 0.5]");
    std::vector<double> prior(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) prior[j] = clamp_probability(z[j] > 0 ? 1.0 - offset : offset);
    return prior;
}

PriorRefinement refine_priors(std::span<const DetectionResult> detections,
                              std::span<const double> reliability_by_vertex) {
    PriorRefinement out;
    out.prior.resize(detections.size(), 0.5);
    out.fallback.resize(detections.size(), true);
    for (std::size_t j = 0; j < detections.size(); ++j) {
        const Vertex pros = detections[j].pros.source;
        const Vertex cons = detections[j].cons.source;
        if (pros == kNoVertex || cons == kNoVertex) continue;
        const double a = reliability_by_vertex[pros];
        const double b = reliability_by_vertex[cons];
        if (!(a + b > 0.0)) continue;
        out.prior[j] = clamp_probability(a / (a + b));
        out.fallback[j] = false;
    }
    return out;
}

std::vector<int> classify_claims(std::span<const double> credibility) {
    std::vector<int> verdict(credibility.size());
    std::transform(credibility.begin(), credibility.end(), verdict.begin(),
                   [](double l) { return l >= 0.5 ? 1 : -1; });
    return verdict;
}

FrameworkResult run_sourcecr(SourceDetector& detector, const OpinionMatrix& opinions, const FrameworkConfig& cfg,
                             const TraceTruth* truth) {
    cfg.validate();
    const std::size_t claims = opinions.claim_count();
    std::vector<double> prior = cfg.initial_priors ? *cfg.initial_priors : init_priors(claims, cfg.seed);
    if (prior.size() != claims) throw std::invalid_argument("initial priors size != claim count");

    std::optional<WarmStart> eta = cfg.initial_eta;
    // Answers are keyed by respondent, so one stream seed for the whole run
    // means a respondent asked again repeats itself.
    const std::uint64_t answer_seed = derive_seed(cfg.seed, {0x51ULL});

    FrameworkResult result;
    std::vector<double> previous;
    for (int k = 1; k <= cfg.outer_cap; ++k) {
        TrainingOptions opts;
        opts.tolerance = cfg.inner_tolerance;
        opts.max_iterations = cfg.inner_cap;
        opts.eta_neg_estimator = cfg.eta_neg_estimator;
        opts.seed = derive_seed(cfg.seed, {0x54ULL, static_cast<std::uint64_t>(k)});
        TrainingState state = train(opinions, prior, opts, eta ? &*eta : nullptr);
        if (cfg.warm_start) {
            eta = WarmStart{state.eta_pos, state.eta_neg};
        } else {
            eta.reset();
        }

        const auto rel_by_vertex = detector.by_vertex(state.reliability, 0.5);
        result.detections = detector.detect(state.credibility, state.reliability, cfg.query, answer_seed);

        OuterTraceRow row;
        row.iteration = k;
        row.max_delta = std::numeric_limits<double>::quiet_NaN();
        row.mean_delta = std::numeric_limits<double>::quiet_NaN();
        bool settled = claims == 0;
        if (claims == 0) {
            row.max_delta = 0.0;
            row.mean_delta = 0.0;
        } else if (!previous.empty()) {
            double max_delta = 0.0;
            double sum = 0.0;
            for (std::size_t j = 0; j < claims; ++j) {
                const double d = std::abs(state.credibility[j] - previous[j]);
                max_delta = std::max(max_delta, d);
                sum += d;
            }
            row.max_delta = max_delta;
            row.mean_delta = sum / static_cast<double>(claims);
            settled = max_delta < cfg.outer_tolerance;
        }

        result.verdict = classify_claims(state.credibility);
        row.accuracy = std::numeric_limits<double>::quiet_NaN();
        row.detection_rate = std::numeric_limits<double>::quiet_NaN();
        if (truth && claims > 0) {
            std::size_t correct = 0;
            for (std::size_t j = 0; j < claims; ++j) correct += result.verdict[j] == truth->z[j];
            row.accuracy = static_cast<double>(correct) / static_cast<double>(claims);
            row.detection_rate = source_detection_rate(result.detections, truth->sources);
        }
        result.trace.push_back(row);

        result.prior = prior;
        result.credibility = state.credibility;
        result.reliability = state.reliability;
        result.eta_pos = state.eta_pos;
        result.eta_neg = state.eta_neg;
        result.iterations = k;
        if (settled) {
            result.converged = true;
            break;
        }
        prior = refine_priors(result.detections, rel_by_vertex).prior;
        previous = std::move(state.credibility);
    }
    return result;
}

} // namespace sourcecr
