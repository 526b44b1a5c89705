#include "sourcecr/training.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sourcecr/random.hpp"

namespace sourcecr {

double clamp_probability(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

// 1 / (1 + exp(x)) without overflow.
double inverse_one_plus_exp(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

void check_sizes(const OpinionMatrix& opinions, std::size_t prior, std::size_t pos, std::size_t neg) {
    if (prior != opinions.claim_count()) throw std::invalid_argument("prior size != claim count");
    if (pos != opinions.user_count() || neg != opinions.user_count())
        throw std::invalid_argument("eta size != user count");
}

} // namespace

std::vector<double> e_step(std::span<const double> prior, std::span<const double> eta_pos,
                           std::span<const double> eta_neg, const OpinionMatrix& opinions) {
    check_sizes(opinions, prior.size(), eta_pos.size(), eta_neg.size());

    // log-odds of z = -1 against z = +1 for each user, per opinion sign
    std::vector<double> pos_term(opinions.user_count());
    std::vector<double> neg_term(opinions.user_count());
    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        pos_term[i] = -logit(clamp_probability(eta_pos[i]));
        neg_term[i] = logit(clamp_probability(eta_neg[i]));
    }

    std::vector<double> credibility(opinions.claim_count());
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        const double phi = clamp_probability(prior[j]);
        const auto column = opinions.column(j);
        if (column.empty()) {
            credibility[j] = phi;
            continue;
        }
        double log_ratio = static_cast<double>(column.size() - 1) * logit(phi);
        for (const auto& e : column) log_ratio += (e.value > 0) ? pos_term[e.index] : neg_term[e.index];
        credibility[j] = inverse_one_plus_exp(log_ratio);
    }
    return credibility;
}

EtaUpdate m_step(std::span<const double> credibility, std::span<const double> prev_eta_pos,
                 std::span<const double> prev_eta_neg, const OpinionMatrix& opinions,
                 EtaNegEstimator estimator) {
    check_sizes(opinions, credibility.size(), prev_eta_pos.size(), prev_eta_neg.size());
    EtaUpdate out{std::vector<double>(prev_eta_pos.begin(), prev_eta_pos.end()),
                  std::vector<double>(prev_eta_neg.begin(), prev_eta_neg.end())};

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.5; };

    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        const auto row = opinions.row(i);
        if (row.empty()) continue;
        double pos_lambda = 0.0;      // sum over C^1 of lambda
        double pos_not_lambda = 0.0;  // sum over C^1 of (1 - lambda)
        double neg_lambda = 0.0;      // sum over C^-1 of lambda
        double neg_not_lambda = 0.0;  // sum over C^-1 of (1 - lambda)
        std::size_t neg_count = 0;
        for (const auto& e : row) {
            const double l = credibility[e.index];
            if (e.value > 0) {
                pos_lambda += l;
                pos_not_lambda += 1.0 - l;
            } else {
                neg_lambda += l;
                neg_not_lambda += 1.0 - l;
                ++neg_count;
            }
        }
        out.eta_pos[i] = ratio(pos_lambda, pos_lambda + neg_not_lambda);
        switch (estimator) {
        case EtaNegEstimator::kVerbatim:
            out.eta_neg[i] = ratio(pos_not_lambda, pos_not_lambda + neg_lambda);
            break;
        case EtaNegEstimator::kPosteriorFrequency:
            out.eta_neg[i] = ratio(neg_not_lambda, static_cast<double>(neg_count));
            break;
        }
    }
    return out;
}

TrainingState train(const OpinionMatrix& opinions, std::span<const double> prior,
                    const TrainingOptions& options, const WarmStart* warm) {
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("training tolerance must be positive");
    if (options.max_iterations < 1) throw std::invalid_argument("iteration cap must be >= 1");
    if (prior.size() != opinions.claim_count()) throw std::invalid_argument("prior size != claim count");

    TrainingState state;
    state.prior.resize(prior.size());
    std::transform(prior.begin(), prior.end(), state.prior.begin(), clamp_probability);

    const std::size_t users = opinions.user_count();
    if (warm) {
        if (warm->eta_pos.size() != users || warm->eta_neg.size() != users)
            throw std::invalid_argument("warm start size != user count");
        state.eta_pos = warm->eta_pos;
        state.eta_neg = warm->eta_neg;
    } else {
        Engine engine = make_engine(options.seed, {0x454dULL});
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto draw = [&] {
            double u = 0.0;
            while (u == 0.0) u = unit(engine);
            return u;
        };
        state.eta_pos.resize(users);
        state.eta_neg.resize(users);
        for (std::size_t i = 0; i < users; ++i) {
            state.eta_pos[i] = draw();
            state.eta_neg[i] = draw();
        }
    }

    while (true) {
        state.credibility = e_step(state.prior, state.eta_pos, state.eta_neg, opinions);
        EtaUpdate next = m_step(state.credibility, state.eta_pos, state.eta_neg, opinions,
                                options.eta_neg_estimator);
        double delta = 0.0;
        for (std::size_t i = 0; i < users; ++i) {
            delta = std::max({delta, std::abs(next.eta_pos[i] - state.eta_pos[i]),
                              std::abs(next.eta_neg[i] - state.eta_neg[i])});
        }
        state.eta_pos = std::move(next.eta_pos);
        state.eta_neg = std::move(next.eta_neg);
        ++state.iterations;

        if (options.on_iteration) {
            double mean = 0.0;
            for (double l : state.credibility) mean += l;
            if (!state.credibility.empty()) mean /= static_cast<double>(state.credibility.size());
            options.on_iteration({state.iterations, delta, mean});
        }
        if (delta <= options.tolerance) {
            state.converged = true;
            break;
        }
        if (state.iterations >= options.max_iterations) break;
    }

    state.credibility = e_step(state.prior, state.eta_pos, state.eta_neg, opinions);
    state.reliability.resize(users);
    for (std::size_t i = 0; i < users; ++i)
        state.reliability[i] = 0.5 * (state.eta_pos[i] + state.eta_neg[i]);
    return state;
}

} // namespace sourcecr
