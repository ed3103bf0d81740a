#ifndef STARJAC_STAR_OVERLAP_HPP
#define STARJAC_STAR_OVERLAP_HPP

#include "starjac/multiplicity.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Star graphs: one center, n branches, each branch a half-line. Per branch,
// A_k is the set where the branch's Dirichlet solution is subordinate (the
// branch m-function diverges). Overlap of two A_k puts the energy in S1 with
// multiplicity at most n-1 (every subordinate solution vanishes at the
// center, leaving the vanishing-sum constraint); a one-dimensional global
// subordinate space otherwise gives multiplicity one on S2 cap S.
//
// Beyond the strict memberships the verdict also reports the zone where at
// least two branches merely carry a subordinate direction; without a global
// matching (dim S = 0) such an energy is labelled S1 as the overlap zone of
// the per-branch singular candidates, with the same n-1 bound attached.
// ---------------------------------------------------------------------------

enum class StarVerdict { S1, S2_and_S, neither };

inline const char* to_string(StarVerdict v) {
    switch (v) {
        case StarVerdict::S1: return "S1";
        case StarVerdict::S2_and_S: return "S2&S";
        case StarVerdict::neither: return "neither";
    }
    return "?";
}

struct StarOverlapReport {
    real energy = 0.0;
    int n_branches = 0;
    StarVerdict verdict = StarVerdict::neither;
    std::vector<std::string> branch;            // leaf vertex names
    std::vector<bool> dirichlet_member;         // strict A_k membership
    std::vector<bool> subordinate_member;       // branch carries a subordinate direction
    int strict_count = 0, loose_count = 0;
    int dim_s = -1;
    int bound = -1;  // multiplicity bound attached to the verdict
    bool conclusive = true;
};

// the designated center: the unique compact vertex without a half-line,
// adjacent to every other compact vertex
inline std::optional<std::string> star_center(const StarLikeGraph& g) {
    std::optional<std::string> center;
    for (const auto& v : g.compact_vertices) {
        if (!g.has_halfline(v)) {
            if (center) return std::nullopt;
            center = v;
        }
    }
    if (!center) return std::nullopt;
    if (g.compact_neighbors(*center).size() != g.compact_vertices.size() - 1) return std::nullopt;
    for (const auto& v : g.compact_vertices)
        if (v != *center && g.compact_neighbors(v) != std::vector<std::string>{*center})
            return std::nullopt;
    return center;
}

inline StarOverlapReport star_overlap_classify(const StarLikeGraph& g,
                                               const JacobiCoefficients& c, real E,
                                               const ClassifyOptions& o = {}) {
    auto center = star_center(g);
    if (!center)
        throw std::invalid_argument("star_overlap_classify: graph is not a star");
    StarOverlapReport rep;
    rep.energy = E;
    rep.n_branches = g.n_halflines();

    auto slices = make_slices(g, c, o.mfunction);
    auto ec = classify_energy(g, c, E, slices, o);
    rep.conclusive = ec.conclusive;
    rep.dim_s = ec.kernel_dim;
    for (int j = 0; j < g.n_compact(); ++j) {
        if (slices[j].kind != HalfLineSlice::Kind::halfline) continue;
        rep.branch.push_back(g.compact_vertices[j]);
        const auto& st = ec.roots[j].status;
        bool strict = st.kind == BranchStatusKind::divergent;
        bool loose = st.carries_subordinate();
        rep.dirichlet_member.push_back(strict);
        rep.subordinate_member.push_back(loose);
        rep.strict_count += strict;
        rep.loose_count += loose;
    }
    if (!rep.conclusive) return rep;

    if (rep.strict_count >= 2 || rep.dim_s >= 2 || (rep.loose_count >= 2 && rep.dim_s == 0)) {
        rep.verdict = StarVerdict::S1;
        rep.bound = rep.n_branches - 1;
    } else if (rep.dim_s == 1) {
        rep.verdict = StarVerdict::S2_and_S;
        rep.bound = 1;
    } else {
        rep.verdict = StarVerdict::neither;
    }
    return rep;
}

}  // namespace starjac

#endif
