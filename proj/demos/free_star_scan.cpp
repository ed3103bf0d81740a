// Scan a free star graph (three free half-lines glued to a center) over
// [-3, 3] and print the band structure: AC inside (-2, 2), the off-band zone
// where every branch carries a subordinate direction, and the two isolated
// eigenvalues at +-sqrt(4.5) found by kernel-root refinement.
#include <cstdio>

#include "starjac/classify.hpp"

using namespace starjac;

int main() {
    StarLikeGraph g;
    JacobiCoefficients c;
    g.compact_vertices = {"c"};
    c.b_compact["c"] = 0.0;
    for (int i = 1; i <= 3; ++i) {
        std::string v = "l" + std::to_string(i);
        g.compact_vertices.push_back(v);
        g.compact_edges.push_back({"c", v});
        g.halfline_roots.push_back(v);
        c.b_compact[v] = 0.0;
        c.a_compact[EdgeKey("c", v)] = 1.0;
        c.halflines[v] = HalfLineCoefficients{};
    }

    std::vector<real> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(-3.0 + 6.0 * i / 60);
    ScanSummary sum;
    auto res = scan(g, c, grid, {}, 2, &sum);
    for (auto& ec : res)
        std::printf("E=%+6.2f  %s\n", ec.energy,
                    !ec.conclusive      ? "inconclusive"
                    : ec.ac_support_member ? "ac support"
                                           : "singular zone");
    std::printf("summary: ac=%ld sing=%ld inconclusive=%ld\n", sum.ac, sum.singular,
                sum.inconclusive);

    for (real lo : {-2.3, 2.05}) {
        for (real root : find_kernel_roots(g, c, lo, lo + 0.4, 200)) {
            auto ec = classify_energy(g, c, root);
            std::printf("eigenvalue at E=%.9f (dim S = %d)\n", root, ec.kernel_dim);
        }
    }
    return 0;
}
