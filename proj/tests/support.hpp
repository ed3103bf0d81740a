#ifndef STARJAC_TESTS_SUPPORT_HPP
#define STARJAC_TESTS_SUPPORT_HPP

#include <random>

#include "starjac/graph.hpp"

namespace starjac::testing {

// triangle compact component, one free half-line on every vertex
inline std::pair<StarLikeGraph, JacobiCoefficients> free_triangle() {
    StarLikeGraph g;
    g.compact_vertices = {"v1", "v2", "v3"};
    g.compact_edges = {{"v1", "v2"}, {"v2", "v3"}, {"v1", "v3"}};
    g.halfline_roots = {"v1", "v2", "v3"};
    JacobiCoefficients c;
    for (auto& v : g.compact_vertices) c.b_compact[v] = 0.0;
    for (auto& [u, v] : g.compact_edges) c.a_compact[EdgeKey(u, v)] = 1.0;
    for (auto& v : g.halfline_roots) c.halflines[v] = HalfLineCoefficients{};
    return {g, c};
}

// single compact vertex with one free half-line: the graph is N itself
inline std::pair<StarLikeGraph, JacobiCoefficients> free_nline() {
    StarLikeGraph g;
    g.compact_vertices = {"o"};
    g.halfline_roots = {"o"};
    JacobiCoefficients c;
    c.b_compact["o"] = 0.0;
    c.halflines["o"] = HalfLineCoefficients{};
    return {g, c};
}

// two compact vertices joined by a unit edge, each with a free half-line: Z
inline std::pair<StarLikeGraph, JacobiCoefficients> free_zline() {
    StarLikeGraph g;
    g.compact_vertices = {"L", "R"};
    g.compact_edges = {{"L", "R"}};
    g.halfline_roots = {"L", "R"};
    JacobiCoefficients c;
    c.b_compact["L"] = c.b_compact["R"] = 0.0;
    c.a_compact[EdgeKey("L", "R")] = 1.0;
    c.halflines["L"] = c.halflines["R"] = HalfLineCoefficients{};
    return {g, c};
}

// star: center of degree k, each neighbor carries a free half-line
inline std::pair<StarLikeGraph, JacobiCoefficients> free_star(int k) {
    StarLikeGraph g;
    g.compact_vertices = {"c"};
    JacobiCoefficients c;
    c.b_compact["c"] = 0.0;
    for (int i = 1; i <= k; ++i) {
        std::string v = "l" + std::to_string(i);
        g.compact_vertices.push_back(v);
        g.compact_edges.push_back({"c", v});
        g.halfline_roots.push_back(v);
        c.b_compact[v] = 0.0;
        c.a_compact[EdgeKey("c", v)] = 1.0;
        c.halflines[v] = HalfLineCoefficients{};
    }
    return {g, c};
}

// connected random compact component with random bounded coefficients and
// constant random tails; |a| >= a_min everywhere
inline std::pair<StarLikeGraph, JacobiCoefficients> random_graph(std::mt19937_64& rng, int n_max = 6,
                                                                 int k_max = 4, real a_min = 0.1) {
    std::uniform_int_distribution<int> nd(1, n_max);
    std::uniform_real_distribution<real> coef(-2.0, 2.0);
    auto nz = [&](real lo = -2.0, real hi = 2.0) {
        real x;
        do
            x = std::uniform_real_distribution<real>(lo, hi)(rng);
        while (std::abs(x) < a_min);
        return x;
    };
    StarLikeGraph g;
    JacobiCoefficients c;
    int n = nd(rng);
    for (int i = 0; i < n; ++i) {
        std::string v = "v" + std::to_string(i);
        g.compact_vertices.push_back(v);
        c.b_compact[v] = coef(rng);
        if (i > 0) {  // random spanning tree keeps it connected
            int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
            g.compact_edges.push_back({"v" + std::to_string(j), v});
            c.a_compact[EdgeKey("v" + std::to_string(j), v)] = nz();
        }
    }
    // a few extra edges
    for (int t = 0; t < n; ++t) {
        int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
        int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (i == j) continue;
        EdgeKey k("v" + std::to_string(i), "v" + std::to_string(j));
        if (c.a_compact.count(k)) continue;
        if (std::bernoulli_distribution(0.4)(rng)) {
            g.compact_edges.push_back({k.u, k.v});
            c.a_compact[k] = nz();
        }
    }
    int kmax = std::min(k_max, n);
    int k = std::uniform_int_distribution<int>(1, kmax)(rng);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int t = 0; t < k; ++t) {
        std::string v = "v" + std::to_string(order[t]);
        g.halfline_roots.push_back(v);
        HalfLineCoefficients h;
        int plen = std::uniform_int_distribution<int>(0, 5)(rng);
        for (int i = 0; i < plen; ++i) {
            h.b_prefix.push_back(coef(rng));
            h.a_prefix.push_back(nz());
        }
        h.tail = ConstantTail{coef(rng), nz()};
        c.halflines[v] = std::move(h);
    }
    return {g, c};
}

}  // namespace starjac::testing

#endif
