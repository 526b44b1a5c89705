#include "sourcecr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sourcecr {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_budget(int budget, int rounds) {
    if (budget <= 0 || rounds <= 0) throw std::invalid_argument("budget and rounds must be positive");
    if (budget % rounds != 0) throw std::invalid_argument("rounds must divide the budget");
}

void check_reliability(double eta_max, double eta_min) {
    if (!(eta_min >= 0.0 && eta_max <= 1.0 && eta_min <= eta_max))
        throw std::invalid_argument("need 0 <= eta_min <= eta_max <= 1");
}

} // namespace

void BoundInputs::validate() const {
    if (degree < 3) throw std::invalid_argument("degree must be >= 3");
    check_budget(budget, rounds);
    if (budget / rounds < 2) throw std::invalid_argument("need budget / rounds >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    check_reliability(eta_max, eta_min);
    if (!(time_entropy > 0.0)) throw std::invalid_argument("time entropy must be positive");
}

CoverageBounds coverage_bounds(int degree, int budget, int rounds) {
    if (degree < 3) throw std::invalid_argument("coverage_bounds: degree must be >= 3");
    check_budget(budget, rounds);
    const double d = degree;
    CoverageBounds b;
    b.c1 = 7.0 * (d + 1.0) / d;
    b.c2 = 4.0 * d / (3.0 * (d - 2.0));
    b.l = std::log(2.0 * budget * (d - 2.0) / (static_cast<double>(rounds) * d) + 2.0) / std::log(d - 1.0);
    const double raw_lower = 1.0 - b.c1 * std::exp(-(b.l / 2.0) * std::log(b.l));
    const double raw_upper = 1.0 - b.c2 * std::exp(-b.l * std::log(b.l));
    b.lower = std::clamp(raw_lower, 0.0, 1.0);
    b.upper = std::clamp(raw_upper, 0.0, 1.0);
    b.lower_clamped = b.lower != raw_lower;
    b.upper_clamped = b.upper != raw_upper;
    return b;
}

double f_factor(double eta_max, double eta_min, double n) {
    check_reliability(eta_max, eta_min);
    if (n < 1.0) throw std::invalid_argument("f_factor: n must be >= 1");
    return eta_max + eta_min > 1.0 ? std::pow(eta_max, n) : std::pow(1.0 - eta_min, n);
}

double entropy_floor_identity(double eta_max, double eta_min) {
    check_reliability(eta_max, eta_min);
    return xlogx(eta_min) + xlogx(1.0 - eta_max);
}

double entropy_floor_direction(int degree, double eta_max, double eta_min) {
    check_reliability(eta_max, eta_min);
    if (degree < 3) throw std::invalid_argument("degree must be >= 3");
    const double q = 1.0 - eta_max;
    return xlogx(eta_min) + (q > 0.0 ? q * std::log(q / (degree - 1.0)) : 0.0);
}

double h_g(const BoundInputs& in) {
    in.validate();
    if (in.budget <= 2 * in.rounds) throw std::invalid_argument("h_g: need budget > 2 * rounds");
    const double n = static_cast<double>(in.budget) / in.rounds;
    const double f = f_factor(in.eta_max, in.eta_min, n);
    const double h1 = entropy_floor_identity(in.eta_max, in.eta_min);
    const double h2 = entropy_floor_direction(in.degree, in.eta_max, in.eta_min);
    const double numerator = (1.0 - h1) + f * (1.0 - f) * std::pow(2.0, n - 1.0) * (std::log(in.degree) - h2);
    const double denominator = in.time_entropy * (n - 1.0) * std::log(in.budget / (2.0 * in.rounds));
    return numerator / denominator;
}

bool budget_inequality_holds(const BoundInputs& in) {
    const auto cov = coverage_bounds(in.degree, in.budget, in.rounds);
    const double factor = (1.0 - in.delta) + cov.c2 * std::exp(-cov.l * std::log(cov.l));
    return static_cast<double>(in.budget) <= factor * h_g(in);
}

std::optional<int> admissible_budget(int degree, int rounds, double delta, double eta_max, double eta_min,
                                     double time_entropy, std::span<const int> budgets) {
    if (budgets.empty()) throw std::invalid_argument("admissible_budget: empty budget range");
    std::optional<int> best;
    for (int k : budgets) {
        BoundInputs in{degree, k, rounds, delta, eta_max, eta_min, time_entropy};
        if (k <= 2 * rounds) throw std::invalid_argument("admissible_budget: budgets must exceed 2 * rounds");
        if (budget_inequality_holds(in) && (!best || k > *best)) best = k;
    }
    return best;
}

BoundReport bound_report(const BoundInputs& in, std::span<const int> budgets) {
    in.validate();
    BoundReport r;
    r.inputs = in;
    r.coverage = coverage_bounds(in.degree, in.budget, in.rounds);
    const double n = static_cast<double>(in.budget) / in.rounds;
    r.h1 = entropy_floor_identity(in.eta_max, in.eta_min);
    r.h2 = entropy_floor_direction(in.degree, in.eta_max, in.eta_min);
    r.f = f_factor(in.eta_max, in.eta_min, n);
    r.h_g = h_g(in);
    r.inequality_holds = budget_inequality_holds(in);
    if (!budgets.empty()) {
        r.admissible_budget = admissible_budget(in.degree, in.rounds, in.delta, in.eta_max, in.eta_min,
                                                in.time_entropy, budgets);
    }
    return r;
}

} // namespace sourcecr
