#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "sourcecr/training.hpp"

using namespace sourcecr;
using doctest::Approx;
using testing::matrix_of;

namespace {

// Brute-force Bayes over z with normalised likelihoods P(x | z) obtained from
// the reliabilities via P(x=1|z=1) = eta1 xi / phi etc., with xi chosen so the
// conditionals of each user normalise. Independent of the library oracle.
double bayes_by_hand(const std::vector<int>& xs, const std::vector<double>& e1, const std::vector<double>& e0,
                     double phi) {
    double t = phi;
    double f = 1.0 - phi;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double xi = (phi + e0[i] - 1.0) / (e1[i] + e0[i] - 1.0);
        const double p11 = xi * e1[i] / phi;
        const double p1m = xi * (1.0 - e1[i]) / (1.0 - phi);
        if (xs[i] > 0) {
            t *= p11;
            f *= p1m;
        } else {
            t *= 1.0 - p11;
            f *= 1.0 - p1m;
        }
    }
    return t / (t + f);
}

struct Instance {
    OpinionMatrix opinions;
    std::vector<double> prior, eta_pos, eta_neg;
};

// Random instance with at most 3 users x 3 claims and parameters in [0.05, 0.95],
// redrawn until the oracle has an admissible xi for every opinion.
Instance random_instance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> par(0.05, 0.95);
    std::uniform_int_distribution<int> size(1, 3);
    while (true) {
        const int users = size(rng);
        const int claims = size(rng);
        std::vector<OpinionRecord> recs;
        for (int i = 0; i < users; ++i) {
            for (int j = 0; j < claims; ++j) {
                const auto r = rng() % 3;
                if (r == 0) continue;
                recs.push_back({i, j, static_cast<Opinion>(r == 1 ? 1 : -1)});
            }
        }
        std::vector<NodeId> uid;
        std::vector<ClaimId> cid;
        for (int i = 0; i < users; ++i) uid.push_back(i);
        for (int j = 0; j < claims; ++j) cid.push_back(j);
        Instance inst{OpinionMatrix(uid, cid, recs), {}, {}, {}};
        for (int j = 0; j < claims; ++j) inst.prior.push_back(par(rng));
        for (int i = 0; i < users; ++i) {
            inst.eta_pos.push_back(par(rng));
            inst.eta_neg.push_back(par(rng));
        }
        try {
            (void)posterior_oracle(inst.opinions, inst.prior, inst.eta_pos, inst.eta_neg);
            return inst;
        } catch (const std::domain_error&) {
        }
    }
}

} // namespace

TEST_CASE("opinion matrix views") {
    const auto m = matrix_of({{10, 1, 1}, {10, 2, -1}, {20, 2, 1}}, {30});
    CHECK(m.user_count() == 3);
    CHECK(m.claim_count() == 2);
    CHECK(m.row(0).size() == 2);
    CHECK(m.row(2).empty());
    CHECK(m.column(1).size() == 2);
    CHECK(m.value(0, 1) == Opinion{-1});
    CHECK_FALSE(m.value(1, 0).has_value());
    CHECK(m.claims_marked(0, 1) == std::vector<std::uint32_t>{0});
    CHECK(m.claims_marked(0, -1) == std::vector<std::uint32_t>{1});
    CHECK(m.find_user(20) == std::optional<std::size_t>{1});
    CHECK(m.negated().value(0, 1) == Opinion{1});
    CHECK_THROWS_AS(matrix_of({{1, 1, 1}, {1, 1, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(matrix_of({{1, 1, 0}}), std::invalid_argument);
}

TEST_CASE("e_step examples") {
    SUBCASE("single user, x = +1, eta1 = 0.9, any prior") {
        const auto m = matrix_of({{0, 0, 1}});
        for (double phi : {0.1, 0.5, 0.77}) {
            const std::vector<double> prior{phi}, e1{0.9}, e0{0.3};
            CHECK(e_step(prior, e1, e0, m)[0] == Approx(0.9).epsilon(1e-12));
        }
    }
    SUBCASE("total symmetry") {
        const auto m = matrix_of({{0, 0, 1}});
        const std::vector<double> half{0.5};
        CHECK(e_step(half, half, half, m)[0] == Approx(0.5));
    }
    SUBCASE("two agreeing users") {
        const auto m = matrix_of({{0, 0, 1}, {1, 0, 1}});
        const std::vector<double> prior{0.5}, e1{0.8, 0.8}, e0{0.5, 0.5};
        CHECK(e_step(prior, e1, e0, m)[0] == Approx(16.0 / 17.0).epsilon(1e-12));
    }
    SUBCASE("single user, x = -1, eta-1 = 0.7") {
        const auto m = matrix_of({{0, 0, -1}});
        const std::vector<double> prior{0.4}, e1{0.6}, e0{0.7};
        CHECK(e_step(prior, e1, e0, m)[0] == Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("claim without opinions keeps its prior") {
        const auto m = matrix_of({{0, 0, 1}}, {}, {0, 1});
        const std::vector<double> prior{0.5, 0.3}, e1{0.9}, e0{0.6};
        CHECK(e_step(prior, e1, e0, m)[1] == Approx(0.3));
    }
    SUBCASE("extreme parameters are clamped, not rejected") {
        const auto m = matrix_of({{0, 0, 1}, {1, 0, -1}});
        const std::vector<double> prior{1.0}, e1{1.0, 0.0}, e0{0.0, 1.0};
        const auto l = e_step(prior, e1, e0, m);
        CHECK(std::isfinite(l[0]));
        CHECK(l[0] >= 0.0);
        CHECK(l[0] <= 1.0);
    }
    SUBCASE("thousands of opinions do not underflow") {
        std::vector<OpinionRecord> recs;
        for (int i = 0; i < 5000; ++i) recs.push_back({i, 0, 1});
        const auto m = matrix_of(recs);
        const std::vector<double> prior{0.5}, e1(5000, 0.7), e0(5000, 0.6);
        const auto l = e_step(prior, e1, e0, m);
        CHECK(l[0] == Approx(1.0));
        const std::vector<double> e1_low(5000, 0.3);
        CHECK(e_step(prior, e1_low, e0, m)[0] == Approx(0.0));
    }
}

TEST_CASE("posterior oracle: examples and hand Bayes") {
    const auto m = matrix_of({{0, 0, 1}, {1, 0, 1}});
    const std::vector<double> prior{0.5}, e1{0.8, 0.8}, e0{0.5, 0.5};
    CHECK(posterior_oracle(m, prior, e1, e0)[0] == Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(bayes_by_hand({1, 1}, e1, {0.6, 0.6}, 0.5) == Approx(16.0 / 17.0).epsilon(1e-12));

    const auto single = matrix_of({{0, 0, -1}});
    const std::vector<double> p4{0.4}, a{0.6}, b{0.7};
    CHECK(posterior_oracle(single, p4, a, b)[0] == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("posterior oracle: errors") {
    const auto m = matrix_of({{0, 0, 1}});
    const std::vector<double> prior{0.1}, e1{0.9}, e0{0.1};
    CHECK_THROWS_AS((void)posterior_oracle(m, prior, e1, e0), std::domain_error);
    const std::vector<double> zero{0.0}, half{0.5};
    CHECK_THROWS_AS((void)posterior_oracle(m, half, zero, half), std::domain_error);
}

TEST_CASE("e_step equals the posterior oracle on random small instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto inst = random_instance(rng);
        const auto a = e_step(inst.prior, inst.eta_pos, inst.eta_neg, inst.opinions);
        const auto b = posterior_oracle(inst.opinions, inst.prior, inst.eta_pos, inst.eta_neg);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-9);
    }
}

TEST_CASE("e_step agrees with hand Bayes when likelihoods normalise") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> par(0.05, 0.95);
    int checked = 0;
    while (checked < 300) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const double phi = par(rng);
        std::vector<double> e1(n), e0(n);
        std::vector<int> xs(n);
        std::vector<OpinionRecord> recs;
        bool valid = true;
        for (int i = 0; i < n; ++i) {
            e1[i] = par(rng);
            e0[i] = par(rng);
            const double xi = (phi + e0[i] - 1.0) / (e1[i] + e0[i] - 1.0);
            const double p11 = xi * e1[i] / phi;
            const double p1m = xi * (1.0 - e1[i]) / (1.0 - phi);
            valid = valid && xi > 0 && xi < 1 && p11 > 0 && p11 < 1 && p1m > 0 && p1m < 1;
            xs[i] = (rng() & 1) ? 1 : -1;
            recs.push_back({i, 0, static_cast<Opinion>(xs[i])});
        }
        if (!valid) continue;
        ++checked;
        const auto m = matrix_of(recs);
        const std::vector<double> prior{phi};
        CHECK(e_step(prior, e1, e0, m)[0] == Approx(bayes_by_hand(xs, e1, e0, phi)).epsilon(1e-9));
    }
}

TEST_CASE("m_step examples") {
    SUBCASE("verbatim estimator") {
        const auto m = matrix_of({{0, 1, 1}, {0, 2, -1}});
        const std::vector<double> lambda{0.9, 0.2}, prev{0.5};
        const auto u = m_step(lambda, prev, prev, m);
        CHECK(u.eta_pos[0] == Approx(0.9 / 1.7).epsilon(1e-12));
        CHECK(u.eta_neg[0] == Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("posterior-frequency estimator") {
        const auto m = matrix_of({{0, 1, 1}, {0, 2, -1}, {0, 3, -1}});
        const std::vector<double> lambda{0.9, 0.2, 0.6}, prev{0.5};
        const auto u = m_step(lambda, prev, prev, m, EtaNegEstimator::kPosteriorFrequency);
        CHECK(u.eta_neg[0] == Approx((0.8 + 0.4) / 2.0).epsilon(1e-12));
        CHECK(u.eta_pos[0] == Approx(0.9 / (0.9 + 0.8 + 0.4)).epsilon(1e-12));
    }
    SUBCASE("degenerate denominator falls back to 0.5") {
        const auto m = matrix_of({{0, 1, 1}, {0, 2, 1}});
        const std::vector<double> lambda{1.0, 1.0}, prev{0.3};
        const auto u = m_step(lambda, prev, prev, m);
        CHECK(u.eta_pos[0] == 1.0);
        CHECK(u.eta_neg[0] == 0.5);
    }
    SUBCASE("silent user keeps previous values") {
        const auto m = matrix_of({{0, 1, 1}}, {7});
        const std::vector<double> lambda{0.8}, p1{0.2, 0.35}, p0{0.6, 0.45};
        const auto u = m_step(lambda, p1, p0, m);
        CHECK(u.eta_pos[1] == 0.35);
        CHECK(u.eta_neg[1] == 0.45);
    }
}

TEST_CASE("train") {
    SUBCASE("empty opinion matrix") {
        const OpinionMatrix m({}, std::vector<ClaimId>{1, 2}, {});
        const std::vector<double> prior{0.3, 0.8};
        const auto st = train(m, prior, {});
        CHECK(st.credibility == prior);
        CHECK(st.converged);
        CHECK(st.iterations == 1);
    }
    SUBCASE("silent users keep their initial values") {
        const auto m = matrix_of({{0, 0, 1}, {1, 0, -1}}, {5});
        const std::vector<double> prior{0.6};
        TrainingOptions opts;
        opts.seed = 3;
        const WarmStart warm{{0.7, 0.6, 0.25}, {0.55, 0.65, 0.75}};
        const auto st = train(m, prior, opts, &warm);
        CHECK(st.eta_pos[2] == 0.25);
        CHECK(st.eta_neg[2] == 0.75);
        CHECK(st.reliability[2] == Approx(0.5));
    }

    const auto ds_graph = generate_random_graph(60, 5.0, 4);
    std::vector<OpinionRecord> recs;
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 25; ++j) {
            if (rng() % 3 == 0) continue;
            const bool truth = j % 2 == 0;
            const bool right = (rng() % 10) < static_cast<unsigned>(5 + i % 5);
            recs.push_back({i, j, static_cast<Opinion>((truth == right) ? 1 : -1)});
        }
    }
    const auto m = matrix_of(recs);
    std::vector<double> prior(m.claim_count());
    for (auto& p : prior) p = 0.2 + 0.6 * (rng() % 1000) / 1000.0;

    SUBCASE("2 x 2 fixed point satisfies both updates") {
        const auto small = matrix_of({{0, 0, 1}, {0, 1, -1}, {1, 0, 1}, {1, 1, 1}});
        const std::vector<double> p2{0.6, 0.4};
        TrainingOptions opts;
        opts.tolerance = 1e-10;
        opts.max_iterations = 100000;
        const auto st = train(small, p2, opts);
        REQUIRE(st.converged);
        const auto lam = e_step(st.prior, st.eta_pos, st.eta_neg, small);
        const auto upd = m_step(lam, st.eta_pos, st.eta_neg, small);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(upd.eta_pos[i] - st.eta_pos[i]) <= 1e-9);
            CHECK(std::abs(upd.eta_neg[i] - st.eta_neg[i]) <= 1e-9);
        }
        for (std::size_t j = 0; j < 2; ++j) CHECK(lam[j] == st.credibility[j]);
    }
    SUBCASE("determinism") {
        TrainingOptions opts;
        opts.seed = 12;
        const auto a = train(m, prior, opts);
        const auto b = train(m, prior, opts);
        CHECK(a.credibility == b.credibility);
        CHECK(a.eta_pos == b.eta_pos);
        CHECK(a.eta_neg == b.eta_neg);
        CHECK(a.iterations == b.iterations);
    }
    SUBCASE("ranges, reliability view and residual at convergence") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            for (auto est : {EtaNegEstimator::kVerbatim, EtaNegEstimator::kPosteriorFrequency}) {
                TrainingOptions opts;
                opts.seed = seed;
                opts.eta_neg_estimator = est;
                const auto st = train(m, prior, opts);
                for (double l : st.credibility) CHECK((l >= 0.0 && l <= 1.0));
                for (std::size_t i = 0; i < m.user_count(); ++i) {
                    CHECK((st.eta_pos[i] >= 0.0 && st.eta_pos[i] <= 1.0));
                    CHECK((st.eta_neg[i] >= 0.0 && st.eta_neg[i] <= 1.0));
                    CHECK(st.reliability[i] == Approx(0.5 * (st.eta_pos[i] + st.eta_neg[i])));
                }
                if (st.converged) {
                    const auto lam = e_step(st.prior, st.eta_pos, st.eta_neg, m);
                    const auto upd = m_step(lam, st.eta_pos, st.eta_neg, m, est);
                    for (std::size_t i = 0; i < m.user_count(); ++i) {
                        CHECK(std::abs(upd.eta_pos[i] - st.eta_pos[i]) <= opts.tolerance);
                        CHECK(std::abs(upd.eta_neg[i] - st.eta_neg[i]) <= opts.tolerance);
                    }
                }
            }
        }
    }
    SUBCASE("iteration cap flags non-convergence") {
        TrainingOptions opts;
        opts.tolerance = 1e-15;
        opts.max_iterations = 2;
        const auto st = train(m, prior, opts);
        CHECK(st.iterations == 2);
        CHECK_FALSE(st.converged);
    }
    SUBCASE("trace callback sees every iteration") {
        TrainingOptions opts;
        int calls = 0;
        opts.on_iteration = [&](const TrainingTraceRow& r) { CHECK(r.iteration == ++calls); };
        const auto st = train(m, prior, opts);
        CHECK(calls == st.iterations);
    }
    SUBCASE("bad options") {
        TrainingOptions opts;
        opts.tolerance = 0.0;
        CHECK_THROWS((void)train(m, prior, opts));
        const std::vector<double> short_prior{0.5};
        CHECK_THROWS((void)train(m, short_prior, {}));
    }
}

TEST_CASE("label-flip symmetry of the E-step") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = random_instance(rng);
        const auto flipped = inst.opinions.negated();
        std::vector<double> prior_flip(inst.prior.size());
        for (std::size_t j = 0; j < prior_flip.size(); ++j) prior_flip[j] = 1.0 - inst.prior[j];
        const auto a = e_step(inst.prior, inst.eta_pos, inst.eta_neg, inst.opinions);
        const auto b = e_step(prior_flip, inst.eta_neg, inst.eta_pos, flipped);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(b[j] == Approx(1.0 - a[j]).epsilon(1e-12));
    }
}
