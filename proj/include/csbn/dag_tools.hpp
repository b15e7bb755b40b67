#pragma once

#include <compare>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace csbn {

struct Edge {
    Index from = 0;
    Index to = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Directed graph on nodes 0..p-1 without self-loops, stored as a dense
/// adjacency matrix (p is small for every use in this library).
class DirectedGraph {
public:
    explicit DirectedGraph(Index p = 0) : p_(p), adj_(static_cast<std::size_t>(p * p), 0) {}

    DirectedGraph(Index p, const std::vector<Edge>& edges) : DirectedGraph(p) {
        for (const Edge& e : edges) add_edge(e.from, e.to);
    }

    Index nodes() const noexcept { return p_; }

    bool has_edge(Index i, Index j) const { return adj_[idx(i, j)] != 0; }

    void add_edge(Index i, Index j) {
        check(i);
        check(j);
        if (i == j) throw argument_error("self-loop at node " + std::to_string(i + 1));
        adj_[idx(i, j)] = 1;
    }

    void remove_edge(Index i, Index j) { adj_[idx(i, j)] = 0; }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (char c : adj_) n += (c != 0);
        return n;
    }

    // Edges in lexicographic (from, to) order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (Index i = 0; i < p_; ++i) {
            for (Index j = 0; j < p_; ++j) {
                if (has_edge(i, j)) out.push_back({i, j});
            }
        }
        return out;
    }

    std::vector<Index> parents(Index j) const {
        std::vector<Index> out;
        for (Index i = 0; i < p_; ++i) {
            if (has_edge(i, j)) out.push_back(i);
        }
        return out;
    }

    std::vector<Index> children(Index i) const {
        std::vector<Index> out;
        for (Index j = 0; j < p_; ++j) {
            if (has_edge(i, j)) out.push_back(j);
        }
        return out;
    }

    friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

private:
    std::size_t idx(Index i, Index j) const { return static_cast<std::size_t>(i * p_ + j); }
    void check(Index i) const {
        if (i < 0 || i >= p_) throw argument_error("node " + std::to_string(i + 1) + " out of range");
    }

    Index p_;
    std::vector<char> adj_;
};

/// Edge (i -> j) iff |beta_ij| > threshold.
inline DirectedGraph graph_from_coefs(const MatrixXd& b, double threshold = default_zero_threshold) {
    if (!(threshold >= 0.0)) throw argument_error("threshold must be >= 0");
    DirectedGraph g(b.rows());
    for (Index i = 0; i < b.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (i != j && std::abs(b(i, j)) > threshold) g.add_edge(i, j);
        }
    }
    return g;
}

inline DirectedGraph graph_from_coefs(const CoefMatrix& b, double threshold = default_zero_threshold) {
    return graph_from_coefs(b.matrix(), threshold);
}

/// Kahn's procedure: true iff roots can be peeled off until the graph is empty.
inline bool is_dag(const DirectedGraph& g) {
    const Index p = g.nodes();
    std::vector<Index> indeg(static_cast<std::size_t>(p), 0);
    for (const Edge& e : g.edges()) ++indeg[static_cast<std::size_t>(e.to)];
    std::vector<Index> queue;
    for (Index v = 0; v < p; ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
    Index seen = 0;
    while (!queue.empty()) {
        const Index v = queue.back();
        queue.pop_back();
        ++seen;
        for (Index c : g.children(v)) {
            if (--indeg[static_cast<std::size_t>(c)] == 0) queue.push_back(c);
        }
    }
    return seen == p;
}

/// Nodes reachable from v along directed edges (v excluded), ascending.
inline std::vector<Index> descendants(const DirectedGraph& g, Index v) {
    std::vector<char> seen(static_cast<std::size_t>(g.nodes()), 0);
    std::vector<Index> stack{v};
    while (!stack.empty()) {
        const Index u = stack.back();
        stack.pop_back();
        for (Index c : g.children(u)) {
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                stack.push_back(c);
            }
        }
    }
    std::vector<Index> out;
    for (Index k = 0; k < g.nodes(); ++k) {
        if (seen[static_cast<std::size_t>(k)] && k != v) out.push_back(k);
    }
    return out;
}

/// How weak an edge is: larger p-value is weaker; ties go to the smaller
/// |coefficient|, then to the lexicographically smaller edge.
struct EdgeWeakness {
    double pvalue = 1.0;
    double abs_coef = 0.0;
};

using WeaknessMap = std::map<Edge, EdgeWeakness>;

struct TopoResult {
    std::vector<Index> order;        // every parent precedes its children in `dag`
    std::vector<Edge> removed_edges; // in removal order
    DirectedGraph dag;
};

namespace detail {

// True if edge a is strictly weaker than edge b.
inline bool weaker(const Edge& a, const EdgeWeakness& wa, const Edge& b, const EdgeWeakness& wb) {
    if (wa.pvalue != wb.pvalue) return wa.pvalue > wb.pvalue;
    if (wa.abs_coef != wb.abs_coef) return wa.abs_coef < wb.abs_coef;
    return a < b;
}

} // namespace detail

/// Topological sorting with cycle elimination. Each round either moves
/// every current root (ascending) to the tail of the order and deletes it
/// with its out-going edges, or, when the remaining graph has no root,
/// deletes the weakest edge among the remaining ones.
inline TopoResult kahn_eliminate(const DirectedGraph& g, const WeaknessMap& weakness) {
    const Index p = g.nodes();
    for (const Edge& e : g.edges()) {
        if (!weakness.contains(e)) {
            throw argument_error("no weakness given for edge " + std::to_string(e.from + 1) + " -> " +
                                 std::to_string(e.to + 1));
        }
    }

    DirectedGraph live = g;
    std::vector<bool> alive(static_cast<std::size_t>(p), true);
    std::vector<Index> indeg(static_cast<std::size_t>(p), 0);
    for (const Edge& e : g.edges()) ++indeg[static_cast<std::size_t>(e.to)];

    TopoResult out;
    out.order.reserve(static_cast<std::size_t>(p));
    Index remaining = p;
    while (remaining > 0) {
        std::vector<Index> roots;
        for (Index v = 0; v < p; ++v) {
            if (alive[static_cast<std::size_t>(v)] && indeg[static_cast<std::size_t>(v)] == 0) roots.push_back(v);
        }
        if (!roots.empty()) {
            for (Index r : roots) {
                out.order.push_back(r);
                for (Index c : live.children(r)) {
                    live.remove_edge(r, c);
                    --indeg[static_cast<std::size_t>(c)];
                }
                alive[static_cast<std::size_t>(r)] = false;
                --remaining;
            }
            continue;
        }
        // No root: every remaining node sits on or downstream of a cycle.
        const auto live_edges = live.edges();
        const Edge* worst = nullptr;
        for (const Edge& e : live_edges) {
            if (!worst || detail::weaker(e, weakness.at(e), *worst, weakness.at(*worst))) worst = &e;
        }
        live.remove_edge(worst->from, worst->to);
        --indeg[static_cast<std::size_t>(worst->to)];
        out.removed_edges.push_back(*worst);
    }

    out.dag = g;
    for (const Edge& e : out.removed_edges) out.dag.remove_edge(e.from, e.to);
    return out;
}

// Uniform weakness, so eliminations fall back to the lexicographic rule.
inline WeaknessMap uniform_weakness(const DirectedGraph& g) {
    WeaknessMap w;
    for (const Edge& e : g.edges()) w[e] = EdgeWeakness{};
    return w;
}

/// `i -> j` per line, 1-based.
inline void write_edge_list(std::ostream& os, const DirectedGraph& g) {
    for (const Edge& e : g.edges()) os << (e.from + 1) << " -> " << (e.to + 1) << '\n';
}

/// p x p 0/1 matrix, row = parent, column = child.
inline void write_adjacency_csv(std::ostream& os, const DirectedGraph& g) {
    for (Index i = 0; i < g.nodes(); ++i) {
        for (Index j = 0; j < g.nodes(); ++j) {
            if (j) os << ',';
            os << (g.has_edge(i, j) ? 1 : 0);
        }
        os << '\n';
    }
}

} // namespace csbn
