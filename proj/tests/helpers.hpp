#ifndef SOURCECR_TEST_HELPERS_HPP
#define SOURCECR_TEST_HELPERS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sourcecr/graph.hpp"
#include "sourcecr/opinions.hpp"

namespace testing {

using sourcecr::NodeId;
using sourcecr::SocialGraph;

inline SocialGraph graph_of(std::vector<std::pair<NodeId, NodeId>> edges, std::vector<NodeId> extra = {}) {
    return SocialGraph::from_edges(edges, extra);
}

inline SocialGraph path_graph(int n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return graph_of(e, n == 1 ? std::vector<NodeId>{0} : std::vector<NodeId>{});
}

inline SocialGraph cycle_graph(int n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return graph_of(e);
}

inline SocialGraph star_graph(int leaves) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return graph_of(e);
}

/// Uniform random labelled tree on n nodes (random parent among earlier nodes,
/// then relabelled by a random permutation).
inline SocialGraph random_tree(int n, std::mt19937_64& rng) {
    std::vector<NodeId> label(n);
    for (int i = 0; i < n; ++i) label[i] = i;
    std::shuffle(label.begin(), label.end(), rng);
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        e.emplace_back(label[i], label[pick(rng)]);
    }
    return graph_of(e, {label[0]});
}

inline sourcecr::OpinionMatrix matrix_of(std::vector<sourcecr::OpinionRecord> records,
                                         std::vector<NodeId> users = {},
                                         std::vector<sourcecr::ClaimId> claims = {}) {
    return sourcecr::OpinionMatrix(users, claims, records);
}

} // namespace testing

#endif // SOURCECR_TEST_HELPERS_HPP
