#include "sourcecr/query.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "sourcecr/random.hpp"

namespace sourcecr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scores closer than this are treated as ties and resolved by smallest vertex.
constexpr double kScoreTieTolerance = 1e-9;

bool better_score(double candidate, Vertex cv, double best, Vertex bv) {
    if (best == kNegInf && candidate == kNegInf) return cv < bv;
    if (candidate > best + kScoreTieTolerance) return true;
    if (candidate < best - kScoreTieTolerance) return false;
    return cv < bv;
}

// Subtree sizes of every covered vertex when the tree hangs from its root.
std::vector<std::uint32_t> subtree_sizes(const RootedTree& tree) {
    std::vector<std::uint32_t> size(tree.parent.size(), 0);
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
        size[*it] += 1;
        if (tree.parent[*it] != kNoVertex) size[tree.parent[*it]] += size[*it];
    }
    return size;
}

// sum_u log|subtree(u)|, accumulated by size class so that isomorphic trees
// produce bit-identical sums.
double log_size_product(const RootedTree& tree, const std::vector<std::uint32_t>& size,
                        std::vector<std::uint32_t>& histogram) {
    histogram.assign(tree.size() + 1, 0);
    for (Vertex v : tree.order) ++histogram[size[v]];
    double total = 0.0;
    for (std::size_t s = 2; s < histogram.size(); ++s) {
        if (histogram[s]) total += histogram[s] * std::log(static_cast<double>(s));
    }
    return total;
}

Vertex parent_vertex(const Subnetwork& sub, Vertex local) { return sub.members.at(local); }

std::optional<Vertex> local_vertex(const Subnetwork& sub, Vertex parent) {
    auto it = std::lower_bound(sub.members.begin(), sub.members.end(), parent);
    if (it == sub.members.end() || *it != parent) return std::nullopt;
    return static_cast<Vertex>(it - sub.members.begin());
}

} // namespace

const char* to_string(Side side) { return side == Side::kPros ? "pros" : "cons"; }

const char* to_string(SubnetLabel label) {
    return label == SubnetLabel::kCorrect ? "correct" : "incorrect";
}

SubnetLabel label_for(Side side, double credibility) {
    const bool truth = credibility >= 0.5;
    return (truth == (side == Side::kPros)) ? SubnetLabel::kCorrect : SubnetLabel::kIncorrect;
}

std::pair<Subnetwork, Subnetwork> divide_and_label(const SocialGraph& g, ClaimId claim,
                                                   std::span<const std::pair<Vertex, Opinion>> column,
                                                   double credibility) {
    std::vector<Vertex> pros;
    std::vector<Vertex> cons;
    for (const auto& [v, x] : column) (x > 0 ? pros : cons).push_back(v);
    std::sort(pros.begin(), pros.end());
    std::sort(cons.begin(), cons.end());

    auto build = [&](Side side, std::vector<Vertex> members) {
        Subnetwork sub;
        sub.claim = claim;
        sub.side = side;
        sub.label = label_for(side, credibility);
        sub.graph = induced_subgraph(g, members);
        sub.members = std::move(members);
        return sub;
    };
    return {build(Side::kPros, std::move(pros)), build(Side::kCons, std::move(cons))};
}

RumorCentrality rumor_centrality(const RootedTree& tree) {
    RumorCentrality rc;
    rc.log_value.assign(tree.parent.size(), kNegInf);
    const std::size_t n = tree.size();
    if (n == 0) return rc;

    const auto size = subtree_sizes(tree);
    std::vector<std::uint32_t> histogram;
    rc.log_value[tree.root] = std::lgamma(static_cast<double>(n) + 1.0) - log_size_product(tree, size, histogram);

    const bool exact = n <= 20;
    std::vector<unsigned __int128> count;
    if (exact) {
        count.assign(tree.parent.size(), 0);
        unsigned __int128 numerator = 1;
        unsigned __int128 denominator = 1;
        for (std::size_t k = 2; k <= n; ++k) numerator *= k;
        for (Vertex v : tree.order) denominator *= size[v];
        count[tree.root] = numerator / denominator;
    }

    // R(child) = R(parent) * t_child / (n - t_child)
    for (std::size_t k = 1; k < tree.order.size(); ++k) {
        const Vertex v = tree.order[k];
        const Vertex p = tree.parent[v];
        const double t = size[v];
        rc.log_value[v] = rc.log_value[p] + std::log(t) - std::log(static_cast<double>(n) - t);
        if (exact) count[v] = count[p] * size[v] / (n - size[v]);
    }
    if (exact) {
        rc.exact.assign(tree.parent.size(), 0);
        for (Vertex v : tree.order) rc.exact[v] = static_cast<std::uint64_t>(count[v]);
    }
    return rc;
}

std::vector<double> bfs_rumor_centrality(const SocialGraph& g) {
    std::vector<double> out(g.node_count(), kNegInf);
    if (g.empty()) return out;
    const auto component = largest_component(g);
    const double log_n_factorial = std::lgamma(static_cast<double>(component.size()) + 1.0);
    std::vector<std::uint32_t> histogram;
    for (Vertex v : component) {
        const RootedTree tree = bfs_tree(g, v);
        out[v] = log_n_factorial - log_size_product(tree, subtree_sizes(tree), histogram);
    }
    return out;
}

SubnetworkAnalysis analyze_subnetwork(const Subnetwork& sub) {
    SubnetworkAnalysis a;
    if (sub.empty()) return a;
    a.component = largest_component(sub.graph);
    a.log_centrality = bfs_rumor_centrality(sub.graph);
    a.center = a.component.front();
    for (Vertex v : a.component) {
        if (better_score(a.log_centrality[v], v, a.log_centrality[a.center], a.center)) a.center = v;
    }
    a.hop_order = bfs_tree(sub.graph, a.center).order;
    return a;
}

Vertex select_center(const Subnetwork& sub) {
    if (sub.empty()) throw std::invalid_argument("select_center: empty subnetwork");
    return parent_vertex(sub, analyze_subnetwork(sub).center);
}

void validate_budget(int budget, int rounds) {
    if (budget <= 0 || rounds <= 0) throw std::invalid_argument("budget and rounds must be positive");
    if (budget % rounds != 0) throw std::invalid_argument("rounds must divide the budget");
}

namespace {

QueryPlan plan_respondents(std::span<const Vertex> members, SubnetLabel label,
                           const SubnetworkAnalysis& analysis, std::span<const double> reliability,
                           int budget, int rounds) {
    validate_budget(budget, rounds);
    QueryPlan plan;
    plan.budget = budget;
    plan.rounds = rounds;
    if (members.empty()) return plan;
    plan.center = members[analysis.center];

    const auto quota = static_cast<std::size_t>(budget / rounds);
    const std::size_t pool_size = std::min(2 * quota, analysis.hop_order.size());
    std::vector<Vertex> pool;
    pool.reserve(pool_size);
    for (std::size_t k = 0; k < pool_size; ++k) pool.push_back(members[analysis.hop_order[k]]);

    auto rel = [&](Vertex v) { return reliability[v]; };
    auto by_high = [&](Vertex a, Vertex b) { return rel(a) != rel(b) ? rel(a) > rel(b) : a < b; };
    auto by_low = [&](Vertex a, Vertex b) { return rel(a) != rel(b) ? rel(a) < rel(b) : a < b; };

    if (label == SubnetLabel::kCorrect) {
        std::sort(pool.begin(), pool.end(), by_high);
        pool.resize(std::min(quota, pool.size()));
        plan.respondents = std::move(pool);
        plan.high_count = plan.respondents.size();
        return plan;
    }

    // Incorrect side: half from the top of the reliability ranking, half from the bottom.
    const std::size_t take = std::min(quota, pool.size());
    const std::size_t high = (take + 1) / 2;
    std::sort(pool.begin(), pool.end(), by_high);
    plan.respondents.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(high));
    std::vector<Vertex> rest(pool.begin() + static_cast<std::ptrdiff_t>(high), pool.end());
    std::sort(rest.begin(), rest.end(), by_low);
    plan.respondents.insert(plan.respondents.end(), rest.begin(),
                            rest.begin() + static_cast<std::ptrdiff_t>(take - high));
    plan.high_count = high;
    return plan;
}

} // namespace

QueryPlan select_respondents(const Subnetwork& sub, const SubnetworkAnalysis& analysis,
                             std::span<const double> reliability, int budget, int rounds) {
    return plan_respondents(sub.members, sub.label, analysis, reliability, budget, rounds);
}

QueryPlan select_respondents(const Subnetwork& sub, std::span<const double> reliability, int budget,
                             int rounds) {
    return select_respondents(sub, analyze_subnetwork(sub), reliability, budget, rounds);
}

QueryTranscript simulate_answers(const QueryPlan& plan, const SpreadOutcome& outcome, const SocialGraph& g,
                                 std::span<const double> true_reliability, std::uint64_t stream_seed) {
    QueryTranscript transcript;
    transcript.rounds = plan.rounds;
    transcript.answers.reserve(plan.respondents.size());
    for (Vertex v : plan.respondents) {
        if (v >= outcome.state.size() || outcome.state[v] == NodeState::kSusceptible)
            throw std::invalid_argument("simulate_answers: respondent has no infection record");
        const double eta = std::clamp(true_reliability[v], 0.0, 1.0);
        const bool is_source = v == outcome.source_of(outcome.state[v]);
        const Vertex parent = outcome.infect_parent[v];

        std::vector<Vertex> others;
        for (Vertex w : g.neighbors(v)) {
            if (w != parent) others.push_back(w);
        }

        Engine engine = make_engine(stream_seed, {v});
        std::bernoulli_distribution truthful(eta);
        RespondentAnswers ans;
        ans.respondent = v;
        for (int round = 0; round < plan.rounds; ++round) {
            const bool says_source = truthful(engine) ? is_source : !is_source;
            ans.said_source.push_back(says_source);
            if (says_source) {
                ans.pointed.push_back(kNoVertex);
                continue;
            }
            const bool honest = truthful(engine);
            if (honest && parent != kNoVertex) {
                ans.pointed.push_back(parent);
            } else if (!others.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
                ans.pointed.push_back(others[pick(engine)]);
            } else {
                // Only the parent is available (or nothing, for an isolated source).
                ans.pointed.push_back(parent);
            }
        }
        transcript.answers.push_back(std::move(ans));
    }
    return transcript;
}

FilteredSets filter_sets(const QueryTranscript& transcript, int rounds) {
    FilteredSets sets;
    std::map<Vertex, std::size_t> pointed;
    for (const auto& ans : transcript.answers) {
        const auto yes = std::count(ans.said_source.begin(), ans.said_source.end(), true);
        if (static_cast<double>(yes) >= rounds / 2.0) sets.by_identity.push_back(ans.respondent);
        for (Vertex w : ans.pointed) {
            if (w != kNoVertex) ++pointed[w];
        }
    }
    std::sort(sets.by_identity.begin(), sets.by_identity.end());
    sets.by_identity.erase(std::unique(sets.by_identity.begin(), sets.by_identity.end()), sets.by_identity.end());

    std::size_t best = 0;
    for (const auto& [w, c] : pointed) best = std::max(best, c);
    for (const auto& [w, c] : pointed) {
        if (c == best) sets.by_direction.push_back(w);
    }
    return sets;
}

Vertex pick_source(const Subnetwork& sub, const SubnetworkAnalysis& analysis, const FilteredSets& sets) {
    if (sub.empty()) throw std::invalid_argument("pick_source: empty subnetwork");
    std::vector<Vertex> candidates;
    std::set_intersection(sets.by_identity.begin(), sets.by_identity.end(), sets.by_direction.begin(),
                          sets.by_direction.end(), std::back_inserter(candidates));
    if (candidates.empty()) {
        std::set_union(sets.by_identity.begin(), sets.by_identity.end(), sets.by_direction.begin(),
                       sets.by_direction.end(), std::back_inserter(candidates));
    }
    if (candidates.empty()) return parent_vertex(sub, analysis.center);

    auto score = [&](Vertex v) {
        const auto local = local_vertex(sub, v);
        return local ? analysis.log_centrality[*local] : kNegInf;
    };
    Vertex best = candidates.front();
    double best_score = score(best);
    for (Vertex v : candidates) {
        const double s = score(v);
        if (better_score(s, v, best_score, best)) {
            best = v;
            best_score = s;
        }
    }
    return best;
}

SourceDetector::SourceDetector(const SocialGraph& g, const OpinionMatrix& opinions,
                               std::span<const SpreadOutcome> outcomes, std::span<const double> true_reliability)
    : graph_(&g), opinions_(&opinions) {
    if (true_reliability.size() != opinions.user_count())
        throw std::invalid_argument("true reliability size != user count");
    user_vertex_.resize(opinions.user_count());
    for (std::size_t i = 0; i < opinions.user_count(); ++i)
        user_vertex_[i] = g.find(opinions.user_id(i)).value_or(kNoVertex);

    std::unordered_map<ClaimId, const SpreadOutcome*> by_id;
    for (const auto& o : outcomes) by_id.emplace(o.claim, &o);
    outcome_by_claim_.resize(opinions.claim_count(), nullptr);
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        auto it = by_id.find(opinions.claim_id(j));
        if (it == by_id.end())
            throw std::invalid_argument("no spread record for claim " + std::to_string(opinions.claim_id(j)));
        if (it->second->state.size() != g.node_count())
            throw std::invalid_argument("spread record does not match graph size");
        outcome_by_claim_[j] = it->second;
    }
    true_reliability_by_vertex_ = by_vertex(true_reliability, 0.5);
    cache_.resize(opinions.claim_count());
}

std::vector<double> SourceDetector::by_vertex(std::span<const double> per_user, double fallback) const {
    if (per_user.size() != user_vertex_.size()) throw std::invalid_argument("per-user vector size mismatch");
    std::vector<double> out(graph_->node_count(), fallback);
    for (std::size_t i = 0; i < per_user.size(); ++i) {
        if (user_vertex_[i] != kNoVertex) out[user_vertex_[i]] = per_user[i];
    }
    return out;
}

const SourceDetector::ClaimSides& SourceDetector::sides_for(std::size_t claim) {
    auto& slot = cache_[claim];
    if (!slot) {
        std::vector<std::pair<Vertex, Opinion>> column;
        for (const auto& e : opinions_->column(claim)) {
            const Vertex v = user_vertex_[e.index];
            if (v != kNoVertex) column.emplace_back(v, e.value);
        }
        auto [pros, cons] = divide_and_label(*graph_, opinions_->claim_id(claim), column, 1.0);
        slot = std::make_unique<ClaimSides>();
        slot->pros_analysis = analyze_subnetwork(pros);
        slot->cons_analysis = analyze_subnetwork(cons);
        slot->pros = std::move(pros);
        slot->cons = std::move(cons);
    }
    return *slot;
}

std::vector<DetectionResult> SourceDetector::detect(std::span<const double> credibility,
                                                    std::span<const double> reliability,
                                                    const QuerySettings& settings, std::uint64_t seed,
                                                    const TranscriptSink& sink) {
    validate_budget(settings.budget, settings.rounds);
    if (credibility.size() != opinions_->claim_count()) throw std::invalid_argument("credibility size mismatch");
    const auto rel_by_vertex = by_vertex(reliability, 0.5);

    std::vector<DetectionResult> results;
    results.reserve(opinions_->claim_count());
    for (std::size_t j = 0; j < opinions_->claim_count(); ++j) {
        const ClaimSides& sides = sides_for(j);
        DetectionResult result;
        result.claim = opinions_->claim_id(j);
        for (Side side : {Side::kPros, Side::kCons}) {
            const Subnetwork& sub = side == Side::kPros ? sides.pros : sides.cons;
            const SubnetworkAnalysis& analysis = side == Side::kPros ? sides.pros_analysis : sides.cons_analysis;
            SideDetection& out = side == Side::kPros ? result.pros : result.cons;
            out.label = label_for(side, credibility[j]);
            if (sub.empty()) continue;

            // The cached subnetwork's own label is a placeholder; labels follow credibility.
            const QueryPlan plan = plan_respondents(sub.members, out.label, analysis, rel_by_vertex,
                                                    settings.budget, settings.rounds);
            const auto stream = derive_seed(seed, {static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(side)});
            const QueryTranscript transcript =
                simulate_answers(plan, *outcome_by_claim_[j], *graph_, true_reliability_by_vertex_, stream);
            if (sink) sink(result.claim, side, transcript);

            out.attempted = true;
            out.center = plan.center;
            out.respondents = plan.respondents;
            out.sets = filter_sets(transcript, settings.rounds);
            out.source = pick_source(sub, analysis, out.sets);
        }
        results.push_back(std::move(result));
    }
    return results;
}

std::vector<DetectionResult> detect_sources(const SocialGraph& g, const OpinionMatrix& opinions,
                                            std::span<const double> credibility,
                                            std::span<const double> reliability,
                                            std::span<const SpreadOutcome> outcomes,
                                            std::span<const double> true_reliability,
                                            const QuerySettings& settings, std::uint64_t seed) {
    SourceDetector detector(g, opinions, outcomes, true_reliability);
    return detector.detect(credibility, reliability, settings, seed);
}

} // namespace sourcecr
