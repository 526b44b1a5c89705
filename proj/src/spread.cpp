#include "sourcecr/spread.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "sourcecr/random.hpp"

namespace sourcecr {

void SpreadConfig::validate() const {
    if (!(success_probability >= 0.0 && success_probability <= 1.0))
        throw std::invalid_argument("success probability must lie in [0, 1]");
    if (!(infection_rate > 0.0)) throw std::invalid_argument("infection rate must be positive");
}

namespace {

struct Pending {
    double time;
    Vertex target;
    Vertex from;

    bool operator>(const Pending& o) const {
        return std::tie(time, target, from) > std::tie(o.time, o.target, o.from);
    }
};

} // namespace

SpreadOutcome simulate_joint_spread(const SocialGraph& g, Vertex pros_source, Vertex cons_source,
                                    const SpreadConfig& cfg, ClaimId claim, SpreadTrace* trace) {
    cfg.validate();
    if (pros_source >= g.node_count() || cons_source >= g.node_count())
        throw std::out_of_range("spread source not in graph");
    if (pros_source == cons_source) throw std::invalid_argument("pros and cons sources must differ");

    const std::size_t n = g.node_count();
    SpreadOutcome out;
    out.claim = claim;
    out.pros_source = pros_source;
    out.cons_source = cons_source;
    out.state.assign(n, NodeState::kSusceptible);
    out.infect_time.assign(n, std::numeric_limits<double>::infinity());
    out.infect_parent.assign(n, kNoVertex);

    Engine engine = make_engine(cfg.seed, {0x5350ULL, static_cast<std::uint64_t>(claim)});
    std::bernoulli_distribution transmits(cfg.success_probability);
    std::exponential_distribution<double> delay(cfg.infection_rate);
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;

    auto infect = [&](Vertex v, NodeState s, double t, Vertex parent) {
        out.state[v] = s;
        out.infect_time[v] = t;
        out.infect_parent[v] = parent;
        for (Vertex w : g.neighbors(v)) {
            if (out.state[w] != NodeState::kSusceptible) continue;
            if (!transmits(engine)) continue;
            const double d = delay(engine);
            if (trace) trace->delays.push_back(d);
            pending.push({t + d, w, v});
        }
    };

    out.state[pros_source] = NodeState::kPros;
    out.state[cons_source] = NodeState::kCons;
    infect(pros_source, NodeState::kPros, 0.0, kNoVertex);
    infect(cons_source, NodeState::kCons, 0.0, kNoVertex);

    while (!pending.empty()) {
        const Pending next = pending.top();
        pending.pop();
        if (out.state[next.target] != NodeState::kSusceptible) continue;
        infect(next.target, out.state[next.from], next.time, next.from);
    }
    return out;
}

std::vector<std::pair<Vertex, Opinion>> opinions_from_spread(const SpreadOutcome& outcome) {
    std::vector<std::pair<Vertex, Opinion>> column;
    for (Vertex v = 0; v < outcome.state.size(); ++v) {
        switch (outcome.state[v]) {
        case NodeState::kPros: column.emplace_back(v, Opinion{1}); break;
        case NodeState::kCons: column.emplace_back(v, Opinion{-1}); break;
        case NodeState::kSusceptible: break;
        }
    }
    return column;
}

Dataset generate_dataset(const SocialGraph& g, int n_claims, double truth_fraction,
                         const SpreadConfig& cfg) {
    if (n_claims < 1) throw std::invalid_argument("generate_dataset: need at least one claim");
    if (!(truth_fraction >= 0.0 && truth_fraction <= 1.0))
        throw std::invalid_argument("generate_dataset: truth fraction must lie in [0, 1]");
    if (g.node_count() < 2) throw std::invalid_argument("generate_dataset: graph needs >= 2 nodes");
    cfg.validate();

    Engine engine = make_engine(cfg.seed, {0x4453ULL});
    const auto n_true = static_cast<std::size_t>(std::floor(truth_fraction * n_claims));
    std::vector<int> labels(static_cast<std::size_t>(n_claims), -1);
    std::fill_n(labels.begin(), n_true, 1);
    std::shuffle(labels.begin(), labels.end(), engine);

    Dataset ds;
    ds.graph = g;
    std::vector<OpinionRecord> records;
    std::vector<ClaimId> claim_ids;
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(g.node_count() - 1));
    for (int c = 0; c < n_claims; ++c) {
        const Vertex pros = pick(engine);
        Vertex cons = pick(engine);
        while (cons == pros) cons = pick(engine);

        SpreadOutcome outcome = simulate_joint_spread(g, pros, cons, cfg, c);
        for (const auto& [v, x] : opinions_from_spread(outcome)) records.push_back({g.id(v), c, x});
        ds.truths.push_back({c, labels[static_cast<std::size_t>(c)], pros, cons});
        ds.outcomes.push_back(std::move(outcome));
        claim_ids.push_back(c);
    }
    ds.opinions = OpinionMatrix(g.ids(), claim_ids, records);
    return ds;
}

} // namespace sourcecr
