#ifndef SOURCECR_BOUNDS_HPP
#define SOURCECR_BOUNDS_HPP

#include <optional>
#include <span>
#include <vector>

namespace sourcecr {

// Closed-form querying budget bounds on d-regular trees. All logarithms are
// natural.

struct BoundInputs {
    int degree = 3;
    int budget = 30;
    int rounds = 3;
    double delta = 0.1;
    double eta_max = 0.5;
    double eta_min = 0.5;
    /// Entropy of the infection-time vector, in nats.
    double time_entropy = 1.0;

    void validate() const;
};

struct CoverageBounds {
    double c1 = 0.0;
    double c2 = 0.0;
    double l = 0.0;
    /// Bounds on P(true source is among the respondents), clamped to [0,1].
    double lower = 0.0;
    double upper = 0.0;
    /// Set when clamping was needed, i.e. the raw bound is vacuous.
    bool lower_clamped = false;
    bool upper_clamped = false;
};

CoverageBounds coverage_bounds(int degree, int budget, int rounds);

/// eta_max^n when eta_max + eta_min > 1, else (1 - eta_min)^n.
double f_factor(double eta_max, double eta_min, double n);

/// eta_min log eta_min + (1 - eta_max) log(1 - eta_max), with 0 log 0 = 0.
double entropy_floor_identity(double eta_max, double eta_min);
/// eta_min log eta_min + (1 - eta_max) log((1 - eta_max) / (d - 1)).
double entropy_floor_direction(int degree, double eta_max, double eta_min);

/// H_G; requires budget > 2 * rounds.
double h_g(const BoundInputs& in);

/// Whether the impossibility inequality K <= [(1 - delta) + c2 e^{-l log l}] H_G holds.
bool budget_inequality_holds(const BoundInputs& in);

/// Largest budget in `budgets` for which the inequality holds, if any. Every
/// budget must be a multiple of `rounds` greater than 2 * rounds.
std::optional<int> admissible_budget(int degree, int rounds, double delta, double eta_max, double eta_min,
                                     double time_entropy, std::span<const int> budgets);

struct BoundReport {
    BoundInputs inputs;
    CoverageBounds coverage;
    double h1 = 0.0;
    double h2 = 0.0;
    double f = 0.0;
    double h_g = 0.0;
    bool inequality_holds = false;
    std::optional<int> admissible_budget;
};

/// Everything for one input set; `budgets` (optional) feeds admissible_budget.
BoundReport bound_report(const BoundInputs& in, std::span<const int> budgets = {});

} // namespace sourcecr

#endif // SOURCECR_BOUNDS_HPP
