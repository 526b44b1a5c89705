#ifndef SOURCECR_QUERY_HPP
#define SOURCECR_QUERY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "sourcecr/graph.hpp"
#include "sourcecr/opinions.hpp"
#include "sourcecr/spread.hpp"

namespace sourcecr {

enum class Side : std::uint8_t { kPros, kCons };
enum class SubnetLabel : std::uint8_t { kCorrect, kIncorrect };

const char* to_string(Side side);
const char* to_string(SubnetLabel label);

/// A claim is taken as true when credibility >= 0.5; the side agreeing with
/// that verdict is "correct".
SubnetLabel label_for(Side side, double credibility);

/// Induced subgraph over the opinion-holders of one side of a claim.
struct Subnetwork {
    ClaimId claim = 0;
    Side side = Side::kPros;
    SubnetLabel label = SubnetLabel::kCorrect;
    /// Node ids are those of the parent graph.
    SocialGraph graph;
    /// Parent-graph vertex of each subnetwork vertex (ascending).
    std::vector<Vertex> members;

    [[nodiscard]] bool empty() const noexcept { return members.empty(); }
};

std::pair<Subnetwork, Subnetwork> divide_and_label(const SocialGraph& g, ClaimId claim,
                                                   std::span<const std::pair<Vertex, Opinion>> column,
                                                   double credibility);

/// Rumor centrality R(v, T) = n! / prod_u |subtree_v(u)| for every covered
/// vertex of a fixed tree, by rerooting from the tree root.
struct RumorCentrality {
    /// log R; -inf for vertices the tree does not cover.
    std::vector<double> log_value;
    /// Exact counts, filled only when the tree has at most 20 nodes.
    std::vector<std::uint64_t> exact;
};

RumorCentrality rumor_centrality(const RootedTree& tree);

/// log R(v, T_bfs(v)) for every vertex of the largest component of `g`;
/// -inf for vertices outside it.
std::vector<double> bfs_rumor_centrality(const SocialGraph& g);

/// Per-subnetwork quantities that do not depend on credibility or reliability.
struct SubnetworkAnalysis {
    std::vector<Vertex> component;       // largest component, subnetwork vertices
    std::vector<double> log_centrality;  // by subnetwork vertex
    Vertex center = kNoVertex;           // subnetwork vertex
    std::vector<Vertex> hop_order;       // component by (hop from center, vertex)
};

SubnetworkAnalysis analyze_subnetwork(const Subnetwork& sub);

/// Returns the parent-graph vertex of the center.
Vertex select_center(const Subnetwork& sub);

struct QueryPlan {
    int budget = 0;
    int rounds = 0;
    Vertex center = kNoVertex;
    /// Parent-graph vertices. The first `high_count` were chosen for high
    /// reliability, the rest (incorrect subnetworks only) for low reliability.
    std::vector<Vertex> respondents;
    std::size_t high_count = 0;
};

void validate_budget(int budget, int rounds);

/// `reliability` is indexed by parent-graph vertex.
QueryPlan select_respondents(const Subnetwork& sub, const SubnetworkAnalysis& analysis,
                             std::span<const double> reliability, int budget, int rounds);
QueryPlan select_respondents(const Subnetwork& sub, std::span<const double> reliability, int budget,
                             int rounds);

struct RespondentAnswers {
    Vertex respondent = kNoVertex;
    std::vector<bool> said_source;
    /// kNoVertex exactly when the respondent said it is the source.
    std::vector<Vertex> pointed;
};

struct QueryTranscript {
    int rounds = 0;
    std::vector<RespondentAnswers> answers;
};

/// Each round a respondent answers the identity question truthfully with
/// probability equal to its true reliability. When it answers "no" it names
/// its infection parent with the same probability, otherwise a uniformly
/// random other neighbor. Each respondent draws from its own stream derived
/// from `stream_seed`, so re-asking the same respondent reproduces its answers.
QueryTranscript simulate_answers(const QueryPlan& plan, const SpreadOutcome& outcome, const SocialGraph& g,
                                 std::span<const double> true_reliability, std::uint64_t stream_seed);

struct FilteredSets {
    std::vector<Vertex> by_identity;   // T_id
    std::vector<Vertex> by_direction;  // T_dir
};

FilteredSets filter_sets(const QueryTranscript& transcript, int rounds);

/// Returns a parent-graph vertex.
Vertex pick_source(const Subnetwork& sub, const SubnetworkAnalysis& analysis, const FilteredSets& sets);

struct SideDetection {
    bool attempted = false;
    SubnetLabel label = SubnetLabel::kCorrect;
    Vertex center = kNoVertex;
    std::vector<Vertex> respondents;
    FilteredSets sets;
    /// kNoVertex when the side had no opinion-holders.
    Vertex source = kNoVertex;
};

struct DetectionResult {
    ClaimId claim = 0;
    SideDetection pros;
    SideDetection cons;

    [[nodiscard]] const SideDetection& side(Side s) const { return s == Side::kPros ? pros : cons; }
};

struct QuerySettings {
    int budget = 60;
    int rounds = 3;
};

using TranscriptSink =
    std::function<void(ClaimId claim, Side side, const QueryTranscript& transcript)>;

/// Division-querying over a fixed world (graph, opinions, true spreads and
/// true reliabilities). Subnetwork analyses are computed once per claim side
/// and reused across calls.
class SourceDetector {
public:
    /// `true_reliability` is indexed by user index of `opinions` and drives
    /// the simulated answers.
    SourceDetector(const SocialGraph& g, const OpinionMatrix& opinions, std::span<const SpreadOutcome> outcomes,
                   std::span<const double> true_reliability);

    /// `credibility` is per claim index, `reliability` per user index.
    std::vector<DetectionResult> detect(std::span<const double> credibility, std::span<const double> reliability,
                                        const QuerySettings& settings, std::uint64_t seed,
                                        const TranscriptSink& sink = {});

    [[nodiscard]] const SocialGraph& graph() const noexcept { return *graph_; }
    /// Parent-graph vertex of each user index, kNoVertex if absent from the graph.
    [[nodiscard]] const std::vector<Vertex>& user_vertices() const noexcept { return user_vertex_; }
    [[nodiscard]] std::vector<double> by_vertex(std::span<const double> per_user, double fallback) const;

private:
    struct ClaimSides {
        Subnetwork pros;
        Subnetwork cons;
        SubnetworkAnalysis pros_analysis;
        SubnetworkAnalysis cons_analysis;
    };

    const ClaimSides& sides_for(std::size_t claim);

    const SocialGraph* graph_;
    const OpinionMatrix* opinions_;
    std::vector<const SpreadOutcome*> outcome_by_claim_;
    std::vector<Vertex> user_vertex_;
    std::vector<double> true_reliability_by_vertex_;
    std::vector<std::unique_ptr<ClaimSides>> cache_;
};

/// One-shot convenience wrapper around SourceDetector.
std::vector<DetectionResult> detect_sources(const SocialGraph& g, const OpinionMatrix& opinions,
                                            std::span<const double> credibility,
                                            std::span<const double> reliability,
                                            std::span<const SpreadOutcome> outcomes,
                                            std::span<const double> true_reliability,
                                            const QuerySettings& settings, std::uint64_t seed);

} // namespace sourcecr

#endif // SOURCECR_QUERY_HPP
