// The worked triangle example: three half-lines built from measures, a
// two-dimensional space of global subordinate solutions at E = 0 but local
// multiplicity one (zero is a simple eigenvalue).
#include <cstdio>

#include "starjac/example52.hpp"
#include "starjac/multiplicity.hpp"

using namespace starjac;

int main() {
    auto ex = build_example_5_2();
    std::printf("branch measures: v1=%s v2=%s v3=%s (atom offset removed: %.2e)\n",
                ex.branch_measure.at("v1").c_str(), ex.branch_measure.at("v2").c_str(),
                ex.branch_measure.at("v3").c_str(), ex.atom_offset);

    auto ec = classify_energy(ex.graph, ex.coeffs, 0.0);
    std::printf("E = 0: ac=%d singular_zone=%d dim S = %d\n", (int)ec.ac_support_member,
                (int)ec.singular_zone, ec.kernel_dim);

    auto space = subordinate_space(ex.graph, ex.coeffs, 0.0);
    for (auto& el : space.basis) {
        std::printf("  solution (%+.3f, %+.3f, %+.3f)  square-summable: %s\n",
                    el.compact_values(0), el.compact_values(1), el.compact_values(2),
                    el.l2_evidence ? "yes" : "no");
    }

    auto rep = multiplicity_bound(ex.graph, ex.coeffs, 0.0);
    std::printf("omega rank = %d, dim S = %d, multiplicity bound = %d\n", rep.omega_rank,
                rep.dim_subordinate_space, rep.bound);
    std::printf("=> N(0) = %d < %d = dim S(0): zero is a simple eigenvalue\n", rep.omega_rank,
                rep.dim_subordinate_space);
    return 0;
}
