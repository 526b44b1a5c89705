#ifndef SOURCECR_SPREAD_HPP
#define SOURCECR_SPREAD_HPP

#include <cstdint>
#include <vector>

#include "sourcecr/graph.hpp"
#include "sourcecr/opinions.hpp"

namespace sourcecr {

struct SpreadConfig {
    /// Probability that an infected->susceptible edge ever transmits.
    double success_probability = 0.6;
    /// Rate of the exponential transmission delay.
    double infection_rate = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class NodeState : std::uint8_t { kSusceptible, kPros, kCons };

/// Ground truth of one claim's joint spread. Indexed by graph vertex.
struct SpreadOutcome {
    ClaimId claim = 0;
    Vertex pros_source = kNoVertex;
    Vertex cons_source = kNoVertex;
    std::vector<NodeState> state;
    /// +inf for susceptible nodes.
    std::vector<double> infect_time;
    /// kNoVertex for sources and susceptible nodes.
    std::vector<Vertex> infect_parent;

    [[nodiscard]] Vertex source_of(NodeState side) const {
        return side == NodeState::kPros ? pros_source : cons_source;
    }
};

/// Optional instrumentation: every transmission delay that was drawn,
/// including those that lost the race.
struct SpreadTrace {
    std::vector<double> delays;
};

struct ClaimGroundTruth {
    ClaimId claim = 0;
    int z = 1;  // +1 truth, -1 rumor
    Vertex pros_source = kNoVertex;
    Vertex cons_source = kNoVertex;
};

/// Continuous-time race of two SI cascades. Each directed edge out of a newly
/// infected node gets one Bernoulli(p) draw; a successful edge fires after an
/// Exp(rate) delay. The earliest pending transmission to a susceptible node
/// wins, and infected nodes never change state.
SpreadOutcome simulate_joint_spread(const SocialGraph& g, Vertex pros_source, Vertex cons_source,
                                    const SpreadConfig& cfg, ClaimId claim = 0,
                                    SpreadTrace* trace = nullptr);

/// (vertex, +1/-1) for every infected vertex, ascending by vertex.
std::vector<std::pair<Vertex, Opinion>> opinions_from_spread(const SpreadOutcome& outcome);

struct Dataset {
    SocialGraph graph;
    /// Users are exactly the graph's node ids, so user index == vertex.
    OpinionMatrix opinions;
    std::vector<ClaimGroundTruth> truths;
    std::vector<SpreadOutcome> outcomes;
};

/// Claims get ids 0..n_claims-1. Exactly floor(truth_fraction * n_claims)
/// claims are true (randomly placed); sources are drawn without replacement.
Dataset generate_dataset(const SocialGraph& g, int n_claims, double truth_fraction,
                         const SpreadConfig& cfg);

} // namespace sourcecr

#endif // SOURCECR_SPREAD_HPP
