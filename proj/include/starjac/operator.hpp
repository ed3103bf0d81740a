#ifndef STARJAC_OPERATOR_HPP
#define STARJAC_OPERATOR_HPP

#include <Eigen/Dense>
#include <unordered_map>
#include <unordered_set>

#include "starjac/graph.hpp"

namespace starjac {

// Finitely supported (or windowed) function on the vertex set.
struct Vector {
    std::unordered_map<VertexId, cplx> values;

    bool defined(const VertexId& v) const { return values.count(v) != 0; }
    cplx at(const VertexId& v) const {
        auto it = values.find(v);
        if (it == values.end())
            throw std::out_of_range("Vector: value requested outside window at " + v.str());
        return it->second;
    }
    cplx& operator[](const VertexId& v) { return values[v]; }
};

inline std::vector<VertexId> graph_neighbors(const StarLikeGraph& g, const VertexId& u) {
    std::vector<VertexId> out;
    if (u.is_compact()) {
        for (const auto& w : g.compact_neighbors(u.root)) out.push_back(compact_vertex(w));
        if (g.has_halfline(u.root)) out.push_back(halfline_site(u.root, 1));
    } else {
        out.push_back(u.index == 1 ? compact_vertex(u.root) : halfline_site(u.root, u.index - 1));
        out.push_back(halfline_site(u.root, u.index + 1));
    }
    return out;
}

inline real edge_weight(const JacobiCoefficients& c, const VertexId& u, const VertexId& w) {
    if (u.is_compact() && w.is_compact()) return c.a_edge(u.root, w.root);
    const VertexId& deep = u.index >= w.index ? u : w;
    return c.halflines.at(deep.root).a(deep.index - 1);
}

inline real diagonal(const JacobiCoefficients& c, const VertexId& u) {
    return u.is_compact() ? c.b_vertex(u.root) : c.halflines.at(u.root).b(u.index);
}

// (J phi)(u) = sum_{w ~ u} a_{(u,w)} phi_w + b_u phi_u  for u in the window.
// phi must be defined on the window and its 1-neighborhood.
inline Vector apply_operator(const StarLikeGraph& g, const JacobiCoefficients& c,
                             const Vector& phi, const std::vector<VertexId>& window) {
    Vector out;
    for (const auto& u : window) {
        cplx acc = diagonal(c, u) * phi.at(u);
        for (const auto& w : graph_neighbors(g, u)) acc += edge_weight(c, u, w) * phi.at(w);
        out[u] = acc;
    }
    return out;
}

// The compact adjacency matrix A of the weighted compact component:
// A_ij = a_(v_i,v_j) when adjacent, 0 otherwise. Ordering follows
// StarLikeGraph::compact_vertices.
inline Eigen::MatrixXd compact_adjacency(const StarLikeGraph& g, const JacobiCoefficients& c) {
    const int n = g.n_compact();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.compact_edges) {
        int i = *g.index_of(u), j = *g.index_of(v);
        A(i, j) = A(j, i) = c.a_edge(u, v);
    }
    return A;
}

}  // namespace starjac

#endif
