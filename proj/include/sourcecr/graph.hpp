#ifndef SOURCECR_GRAPH_HPP
#define SOURCECR_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sourcecr {

/// External user identifier, preserved from input files.
using NodeId = std::int64_t;

/// Dense vertex index. Vertices are numbered in ascending NodeId order, so
/// "smallest node-id" and "smallest vertex" tie-breaks coincide.
using Vertex = std::uint32_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Undirected simple graph in compressed adjacency form. Immutable once built.
class SocialGraph {
public:
    SocialGraph() = default;

    /// Builds a graph from an edge list. Duplicate and reversed edges collapse,
    /// self-loops are dropped. `extra_nodes` adds vertices that may be isolated.
    static SocialGraph from_edges(std::span<const std::pair<NodeId, NodeId>> edges,
                                  std::span<const NodeId> extra_nodes = {});

    [[nodiscard]] std::size_t node_count() const noexcept { return ids_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    [[nodiscard]] bool empty() const noexcept { return ids_.empty(); }

    [[nodiscard]] NodeId id(Vertex v) const { return ids_.at(v); }
    [[nodiscard]] const std::vector<NodeId>& ids() const noexcept { return ids_; }
    [[nodiscard]] std::optional<Vertex> find(NodeId id) const;
    /// Throws std::out_of_range for unknown ids.
    [[nodiscard]] Vertex index_of(NodeId id) const;

    /// Neighbors of `v`, sorted ascending.
    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    [[nodiscard]] bool has_edge(Vertex u, Vertex v) const;

    /// Unique undirected edges as (smaller, larger) vertex pairs.
    [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const;

private:
    std::vector<NodeId> ids_;
    std::unordered_map<NodeId, Vertex> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> targets_;
};

/// BFS tree over the component of `root`. Uncovered vertices have
/// hop == -1 and parent == kNoVertex.
struct RootedTree {
    Vertex root = kNoVertex;
    std::vector<Vertex> parent;
    std::vector<int> hop;
    /// Covered vertices in (hop, vertex) order; starts with root.
    std::vector<Vertex> order;

    [[nodiscard]] bool covers(Vertex v) const { return v < hop.size() && hop[v] >= 0; }
    [[nodiscard]] std::size_t size() const noexcept { return order.size(); }
};

/// Reads "u v" lines; '#' and '%' lines are comments.
SocialGraph load_edge_list(std::istream& in);
SocialGraph load_edge_list_file(const std::string& path);
void write_edge_list(const SocialGraph& g, std::ostream& out);

SocialGraph induced_subgraph(const SocialGraph& g, std::span<const Vertex> keep);

/// Parents are chosen as the smallest-id neighbor one hop closer to the root.
RootedTree bfs_tree(const SocialGraph& g, Vertex root);

/// Vertices of a largest connected component, sorted. Ties go to the
/// component holding the smallest vertex.
std::vector<Vertex> largest_component(const SocialGraph& g);

/// Root 0 has d children, every other internal node d-1; ids in BFS order.
SocialGraph generate_regular_tree(int d, int depth);

/// Erdos-Renyi G(n, avg_degree / (n - 1)) with ids 0..n-1.
SocialGraph generate_random_graph(int n, double avg_degree, std::uint64_t seed);

} // namespace sourcecr

#endif // SOURCECR_GRAPH_HPP
