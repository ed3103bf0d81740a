#ifndef STARJAC_BOUNDARY_HPP
#define STARJAC_BOUNDARY_HPP

#include "starjac/ladder.hpp"
#include "starjac/mmatrix.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Boundary behavior of a branch m-function at a real energy, classified from
// the epsilon ladder. The four conclusive outcomes drive everything above:
//   finite_positive  0 < Im m(E+i0) < oo : no subordinate solution on the branch
//   real_limit       m(E+i0) = c real    : subordinate seed theta = arccot(c)
//   zero_limit       m(E+i0) = 0         : subordinate seed theta = pi/2
//   divergent        |m(E+i0)| = oo      : the Dirichlet solution is subordinate
// ---------------------------------------------------------------------------

enum class BranchStatusKind {
    finite_positive,
    real_limit,
    zero_limit,
    divergent,
    inconclusive,
    singleton
};

inline const char* to_string(BranchStatusKind k) {
    switch (k) {
        case BranchStatusKind::finite_positive: return "ac";
        case BranchStatusKind::real_limit: return "real";
        case BranchStatusKind::zero_limit: return "zero";
        case BranchStatusKind::divergent: return "div";
        case BranchStatusKind::inconclusive: return "inc";
        case BranchStatusKind::singleton: return "pt";
    }
    return "?";
}

struct BoundaryThresholds {
    real im_tol = 1e-6;     // Im limit below this counts as real
    real zero_tol = 1e-9;   // |real limit| below this counts as zero
    real err_guard = 3.0;   // limits must clear their error estimate by this factor
};

struct BranchStatus {
    BranchStatusKind kind = BranchStatusKind::inconclusive;
    real real_limit = 0.0;       // c for real_limit; b - E for singleton
    real im_limit = 0.0;         // extrapolated Im m(E+i0) when finite
    real error = 0.0;
    real growth_exponent = 0.0;  // |m| ~ eps^-p when divergent
    std::vector<cplx> ladder;    // audit trail

    bool conclusive() const { return kind != BranchStatusKind::inconclusive; }
    bool carries_subordinate() const {
        return kind == BranchStatusKind::real_limit || kind == BranchStatusKind::zero_limit ||
               kind == BranchStatusKind::divergent;
    }
    // boundary seed for the subordinate solution, when one exists
    std::optional<BoundaryCondition> subordinate_theta() const {
        switch (kind) {
            case BranchStatusKind::real_limit: return jl_theta_from_m(MBoundary::finite(real_limit));
            case BranchStatusKind::zero_limit: return BoundaryCondition(kPi / 2);
            case BranchStatusKind::divergent: return BoundaryCondition(0.0);
            default: return std::nullopt;
        }
    }
};

inline BranchStatus classify_boundary(const std::vector<cplx>& ladder, const std::vector<real>& eps,
                                      const LadderOptions& lo = {}, BoundaryThresholds th = {}) {
    BranchStatus st;
    st.ladder = ladder;
    LadderResult r = extrapolate_ladder(ladder, eps, lo);
    if (r.status == LadderStatus::divergent) {
        st.kind = BranchStatusKind::divergent;
        st.growth_exponent = r.growth_exponent;
        return st;
    }
    if (r.status == LadderStatus::inconclusive) return st;
    st.error = r.error;
    st.im_limit = r.limit.imag();
    if (r.limit.imag() > std::max(th.im_tol, th.err_guard * r.error)) {
        st.kind = BranchStatusKind::finite_positive;
        return st;
    }
    if (std::abs(r.limit.imag()) <= std::max(th.im_tol, th.err_guard * r.error)) {
        st.real_limit = r.limit.real();
        st.kind = std::abs(st.real_limit) < th.zero_tol ? BranchStatusKind::zero_limit
                                                        : BranchStatusKind::real_limit;
        return st;
    }
    return st;
}

inline BranchStatus branch_status(const HalfLineSlice& slice, real E,
                                  const LadderOptions& lo = {}, BoundaryThresholds th = {}) {
    if (slice.kind == HalfLineSlice::Kind::singleton) {
        BranchStatus st;
        st.kind = BranchStatusKind::singleton;
        st.real_limit = slice.b_singleton - E;  // this is 1/m, exactly
        return st;
    }
    auto eps = epsilon_ladder(lo);
    std::vector<cplx> ladder;
    ladder.reserve(eps.size());
    for (real e : eps) ladder.push_back(slice.m(cplx(E, e)));
    return classify_boundary(ladder, eps, lo, th);
}

// ---------------------------------------------------------------------------
// Boundary values of the full M-matrix: per-entry extrapolation plus the
// Im tr M divergence flag of the singular-support criterion.
// ---------------------------------------------------------------------------

struct MMatrixBoundary {
    real energy = 0.0;
    std::vector<real> eps;
    std::vector<Eigen::MatrixXcd> ladder;       // M(E + i eps_j)
    std::vector<LadderResult> entries;          // row-major n x n extrapolations
    LadderResult im_trace;
    int n = 0;

    const LadderResult& entry(int i, int j) const { return entries[i * n + j]; }
};

inline MMatrixBoundary boundary_value(const StarLikeGraph& g, const JacobiCoefficients& c, real E,
                                      const std::vector<HalfLineSlice>& slices,
                                      const LadderOptions& lo = {}) {
    MMatrixBoundary out;
    out.energy = E;
    out.n = g.n_compact();
    out.eps = epsilon_ladder(lo);
    for (real e : out.eps) out.ladder.push_back(assemble(g, c, cplx(E, e), slices).entries);
    const int n = out.n;
    std::vector<cplx> seq(out.eps.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (size_t k = 0; k < out.eps.size(); ++k) seq[k] = out.ladder[k](i, j);
            out.entries.push_back(extrapolate_ladder(seq, out.eps, lo));
        }
    for (size_t k = 0; k < out.eps.size(); ++k) seq[k] = cplx(out.ladder[k].trace().imag(), 0.0);
    out.im_trace = extrapolate_ladder(seq, out.eps, lo);
    return out;
}

inline MMatrixBoundary boundary_value(const StarLikeGraph& g, const JacobiCoefficients& c, real E,
                                      const LadderOptions& lo = {}, MFunctionOptions mo = {}) {
    return boundary_value(g, c, E, make_slices(g, c, mo), lo);
}

}  // namespace starjac

#endif
