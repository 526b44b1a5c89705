#ifndef SOURCECR_TRAINING_HPP
#define SOURCECR_TRAINING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sourcecr/opinions.hpp"

namespace sourcecr {

/// Probabilities entering log-ratios are clamped to [kProbEpsilon, 1 - kProbEpsilon].
inline constexpr double kProbEpsilon = 1e-9;

double clamp_probability(double p);

/// Credibility / reliability estimates. Claim vectors are indexed by claim
/// index, user vectors by user index of the OpinionMatrix.
struct TrainingState {
    std::vector<double> prior;        // phi_j
    std::vector<double> credibility;  // lambda_j
    std::vector<double> eta_pos;      // eta^1_i = P(z=1 | x=1)
    std::vector<double> eta_neg;      // eta^-1_i = P(z=-1 | x=-1)
    std::vector<double> reliability;  // (eta^1_i + eta^-1_i) / 2
    int iterations = 0;
    bool converged = false;
};

enum class EtaNegEstimator {
    /// sum_{C^1}(1 - lambda) / (sum_{C^1}(1 - lambda) + sum_{C^-1} lambda).
    kVerbatim,
    /// sum_{C^-1}(1 - lambda) / |C^-1|.
    kPosteriorFrequency,
};

struct TrainingTraceRow {
    int iteration;
    double max_delta_eta;
    double mean_credibility;
};

struct TrainingOptions {
    double tolerance = 0.01;
    int max_iterations = 500;
    EtaNegEstimator eta_neg_estimator = EtaNegEstimator::kVerbatim;
    /// Seeds the uniform (0,1) initialisation of eta when no warm start is given.
    std::uint64_t seed = 0;
    std::function<void(const TrainingTraceRow&)> on_iteration;
};

/// Posterior P(z_j = 1 | X_j), evaluated in log-odds space over the
/// opinion-holders of each claim. Claims without opinions return their prior.
std::vector<double> e_step(std::span<const double> prior, std::span<const double> eta_pos,
                           std::span<const double> eta_neg, const OpinionMatrix& opinions);

struct EtaUpdate {
    std::vector<double> eta_pos;
    std::vector<double> eta_neg;
};

/// Re-estimates eta^1 / eta^-1. Users without opinions keep their previous
/// values; a zero denominator yields 0.5.
EtaUpdate m_step(std::span<const double> credibility, std::span<const double> prev_eta_pos,
                 std::span<const double> prev_eta_neg, const OpinionMatrix& opinions,
                 EtaNegEstimator estimator = EtaNegEstimator::kVerbatim);

struct WarmStart {
    std::vector<double> eta_pos;
    std::vector<double> eta_neg;
};

/// Alternates E and M steps until no eta moves by more than the tolerance.
/// Hitting the iteration cap returns a state with converged == false.
TrainingState train(const OpinionMatrix& opinions, std::span<const double> prior,
                    const TrainingOptions& options, const WarmStart* warm = nullptr);

/// Independent Bayes evaluation of P(z_j = 1 | X_j) through the four
/// conditional probabilities p^(x,z). The marginal xi = P(x_ij = 1) must
/// cancel; it is evaluated at two admissible values and checked to agree.
/// Intended for instances of at most 4 users x 4 claims.
/// Throws std::domain_error when no xi keeps all four conditionals in [0,1].
std::vector<double> posterior_oracle(const OpinionMatrix& opinions, std::span<const double> prior,
                                     std::span<const double> eta_pos,
                                     std::span<const double> eta_neg);

} // namespace sourcecr

#endif // SOURCECR_TRAINING_HPP
