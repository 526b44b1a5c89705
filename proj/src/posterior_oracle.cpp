#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sourcecr/training.hpp"

namespace sourcecr {

namespace {

struct Conditionals {
    double pos_given_true;   // P(x = 1 | z = 1)
    double neg_given_true;   // P(x = -1 | z = 1)
    double pos_given_false;  // P(x = 1 | z = -1)
    double neg_given_false;  // P(x = -1 | z = -1)
};

Conditionals conditionals(double xi, double phi, double eta_pos, double eta_neg) {
    return {xi * eta_pos / phi, (1.0 - xi) * (1.0 - eta_neg) / phi,
            xi * (1.0 - eta_pos) / (1.0 - phi), (1.0 - xi) * eta_neg / (1.0 - phi)};
}

struct XiRange {
    double lo;
    double hi;
};

// Values of xi for which every conditional lies in [0, 1].
XiRange admissible_xi(double phi, double eta_pos, double eta_neg, std::size_t user, std::size_t claim) {
    double lo = 0.0;
    double hi = 1.0;
    std::string violated;
    auto upper = [&](double bound, const char* name) {
        if (bound < hi) {
            hi = bound;
            violated = name;
        }
    };
    auto lower = [&](double bound, const char* name) {
        if (bound > lo) {
            lo = bound;
            violated = name;
        }
    };
    upper(phi / eta_pos, "p(1,1) <= 1");
    upper((1.0 - phi) / (1.0 - eta_pos), "p(1,-1) <= 1");
    lower(1.0 - (1.0 - phi) / eta_neg, "p(-1,-1) <= 1");
    lower(1.0 - phi / (1.0 - eta_neg), "p(-1,1) <= 1");
    if (lo > hi) {
        throw std::domain_error("posterior_oracle: no admissible xi for user " + std::to_string(user) +
                                " on claim " + std::to_string(claim) + " (constraint " + violated + ")");
    }
    return {lo, hi};
}

double posterior(const OpinionMatrix& opinions, std::size_t claim, double phi,
                 std::span<const double> eta_pos, std::span<const double> eta_neg, double fraction) {
    double like_true = 1.0;
    double like_false = 1.0;
    for (const auto& e : opinions.column(claim)) {
        const auto r = admissible_xi(phi, eta_pos[e.index], eta_neg[e.index], e.index, claim);
        const double xi = r.lo + fraction * (r.hi - r.lo);
        const auto c = conditionals(xi, phi, eta_pos[e.index], eta_neg[e.index]);
        if (e.value > 0) {
            like_true *= c.pos_given_true;
            like_false *= c.pos_given_false;
        } else {
            like_true *= c.neg_given_true;
            like_false *= c.neg_given_false;
        }
    }
    const double joint_true = phi * like_true;
    const double joint_false = (1.0 - phi) * like_false;
    return joint_true / (joint_true + joint_false);
}

} // namespace

std::vector<double> posterior_oracle(const OpinionMatrix& opinions, std::span<const double> prior,
                                     std::span<const double> eta_pos,
                                     std::span<const double> eta_neg) {
    if (prior.size() != opinions.claim_count() || eta_pos.size() != opinions.user_count() ||
        eta_neg.size() != opinions.user_count()) {
        throw std::invalid_argument("posterior_oracle: parameter sizes do not match opinions");
    }
    auto interior = [](double p) { return p > 0.0 && p < 1.0; };
    if (!std::all_of(prior.begin(), prior.end(), interior) ||
        !std::all_of(eta_pos.begin(), eta_pos.end(), interior) ||
        !std::all_of(eta_neg.begin(), eta_neg.end(), interior)) {
        throw std::domain_error("posterior_oracle: parameters must lie strictly inside (0, 1)");
    }

    std::vector<double> out(opinions.claim_count());
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        const double a = posterior(opinions, j, prior[j], eta_pos, eta_neg, 1.0 / 3.0);
        const double b = posterior(opinions, j, prior[j], eta_pos, eta_neg, 2.0 / 3.0);
        if (std::abs(a - b) > 1e-12) {
            throw std::logic_error("posterior_oracle: xi failed to cancel on claim " + std::to_string(j));
        }
        out[j] = a;
    }
    return out;
}

} // namespace sourcecr
