#include "sourcecr/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "sourcecr/random.hpp"

namespace sourcecr {

SocialGraph SocialGraph::from_edges(std::span<const std::pair<NodeId, NodeId>> edges,
                                    std::span<const NodeId> extra_nodes) {
    SocialGraph g;
    g.ids_.reserve(edges.size() * 2 + extra_nodes.size());
    for (const auto& [u, v] : edges) {
        g.ids_.push_back(u);
        g.ids_.push_back(v);
    }
    g.ids_.insert(g.ids_.end(), extra_nodes.begin(), extra_nodes.end());
    std::sort(g.ids_.begin(), g.ids_.end());
    g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());

    g.index_.reserve(g.ids_.size());
    for (Vertex v = 0; v < g.ids_.size(); ++v) g.index_.emplace(g.ids_[v], v);

    std::vector<std::pair<Vertex, Vertex>> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        Vertex a = g.index_.at(u);
        Vertex b = g.index_.at(v);
        arcs.emplace_back(a, b);
        arcs.emplace_back(b, a);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    g.offsets_.assign(g.ids_.size() + 1, 0);
    for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.targets_.reserve(arcs.size());
    for (const auto& arc : arcs) g.targets_.push_back(arc.second);
    return g;
}

std::optional<Vertex> SocialGraph::find(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vertex SocialGraph::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return it->second;
}

bool SocialGraph::has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> SocialGraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < node_count(); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

SocialGraph load_edge_list(std::istream& in) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == '%') continue;
        std::istringstream fields(line);
        NodeId u = 0;
        NodeId v = 0;
        std::string rest;
        if (!(fields >> u >> v)) throw ParseError("expected two integer node ids", line_no);
        if (fields >> rest) throw ParseError("unexpected token '" + rest + "'", line_no);
        if (u < 0 || v < 0) throw ParseError("node ids must be non-negative", line_no);
        edges.emplace_back(u, v);
    }
    return SocialGraph::from_edges(edges);
}

SocialGraph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list " + path);
    return load_edge_list(in);
}

void write_edge_list(const SocialGraph& g, std::ostream& out) {
    for (const auto& [u, v] : g.edges()) out << g.id(u) << ' ' << g.id(v) << '\n';
}

SocialGraph induced_subgraph(const SocialGraph& g, std::span<const Vertex> keep) {
    std::vector<char> in_set(g.node_count(), 0);
    std::vector<NodeId> nodes;
    nodes.reserve(keep.size());
    for (Vertex v : keep) {
        if (v >= g.node_count()) throw std::out_of_range("induced_subgraph: vertex not in graph");
        if (!in_set[v]) nodes.push_back(g.id(v));
        in_set[v] = 1;
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (Vertex v : keep) {
        for (Vertex u : g.neighbors(v)) {
            if (v < u && in_set[u]) edges.emplace_back(g.id(v), g.id(u));
        }
    }
    return SocialGraph::from_edges(edges, nodes);
}

RootedTree bfs_tree(const SocialGraph& g, Vertex root) {
    if (root >= g.node_count()) throw std::out_of_range("bfs_tree: root not in graph");
    RootedTree tree;
    tree.root = root;
    tree.parent.assign(g.node_count(), kNoVertex);
    tree.hop.assign(g.node_count(), -1);
    tree.hop[root] = 0;
    tree.order.push_back(root);

    // Level-synchronous so that each level can be visited in ascending id order.
    std::vector<Vertex> frontier{root};
    std::vector<Vertex> next;
    int level = 0;
    while (!frontier.empty()) {
        next.clear();
        for (Vertex u : frontier) {
            for (Vertex w : g.neighbors(u)) {
                if (tree.hop[w] < 0) {
                    tree.hop[w] = level + 1;
                    next.push_back(w);
                }
            }
        }
        std::sort(next.begin(), next.end());
        for (Vertex w : next) {
            for (Vertex u : g.neighbors(w)) {
                if (tree.hop[u] == level) {
                    tree.parent[w] = u;
                    break;
                }
            }
        }
        tree.order.insert(tree.order.end(), next.begin(), next.end());
        frontier.swap(next);
        ++level;
    }
    return tree;
}

std::vector<Vertex> largest_component(const SocialGraph& g) {
    if (g.empty()) throw std::invalid_argument("largest_component: empty graph");
    std::vector<char> seen(g.node_count(), 0);
    std::vector<Vertex> best;
    std::vector<Vertex> current;
    std::deque<Vertex> queue;
    for (Vertex start = 0; start < g.node_count(); ++start) {
        if (seen[start]) continue;
        current.clear();
        seen[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            Vertex u = queue.front();
            queue.pop_front();
            current.push_back(u);
            for (Vertex w : g.neighbors(u)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        // Components are discovered in order of their smallest vertex, so a
        // strict comparison keeps the earliest among equal sizes.
        if (current.size() > best.size()) best = current;
    }
    std::sort(best.begin(), best.end());
    return best;
}

SocialGraph generate_regular_tree(int d, int depth) {
    if (d < 3) throw std::invalid_argument("generate_regular_tree: d must be >= 3");
    if (depth < 0) throw std::invalid_argument("generate_regular_tree: depth must be >= 0");
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> level{0};
    NodeId next_id = 1;
    for (int k = 0; k < depth; ++k) {
        std::vector<NodeId> children;
        const int fanout = (k == 0) ? d : d - 1;
        for (NodeId parent : level) {
            for (int c = 0; c < fanout; ++c) {
                edges.emplace_back(parent, next_id);
                children.push_back(next_id++);
            }
        }
        level.swap(children);
    }
    const NodeId root = 0;
    return SocialGraph::from_edges(edges, std::span<const NodeId>(&root, 1));
}

SocialGraph generate_random_graph(int n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_random_graph: n must be >= 2");
    if (!(avg_degree > 0.0) || !(avg_degree < n))
        throw std::invalid_argument("generate_random_graph: need 0 < avg_degree < n");
    const double p = std::min(1.0, avg_degree / (n - 1));
    Engine engine = make_engine(seed, {0x6e72ULL});
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (coin(engine)) edges.emplace_back(u, v);
        }
    }
    std::vector<NodeId> all(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
    return SocialGraph::from_edges(edges, all);
}

} // namespace sourcecr
