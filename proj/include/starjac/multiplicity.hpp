#ifndef STARJAC_MULTIPLICITY_HPP
#define STARJAC_MULTIPLICITY_HPP

#include "starjac/classify.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Local multiplicity bounds on the singular part. The ratio matrix
//     omega_lj ~ lim M_lj(E+i eps) / M_kk(E+i eps)
// (up to an energy-dependent positive scalar that cannot change the rank)
// estimates the multiplicity from below; the dimension of the space of global
// subordinate solutions bounds it from above. On purely continuous singular
// energies the number of half-lines caps the multiplicity as well.
// ---------------------------------------------------------------------------

struct OmegaOptions {
    LadderOptions ladder;
    MFunctionOptions mfunction;
    real sv_threshold = 1e-5;   // omega entries carry extrapolation noise
    real pivot_floor = 1e-12;   // smallest usable |M_kk|
};

struct OmegaMatrix {
    real energy = 0.0;
    int pivot = -1;
    Eigen::MatrixXcd ratios;           // extrapolated entries
    Eigen::MatrixXi flagged;           // 1 = non-convergent entry
    int rank = -1;                     // -1 while entries are flagged
};

inline int rank_of(const Eigen::MatrixXcd& m, real sv_threshold) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    real smax = svd.singularValues()(0);
    if (smax <= 0) return 0;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > sv_threshold * smax) ++r;
    return r;
}

inline OmegaMatrix omega_matrix(const StarLikeGraph& g, const JacobiCoefficients& c, real E,
                                const std::vector<HalfLineSlice>& slices,
                                const OmegaOptions& o = {}) {
    OmegaMatrix out;
    out.energy = E;
    const int n = g.n_compact();
    auto eps = epsilon_ladder(o.ladder);
    std::vector<Eigen::MatrixXcd> Ms;
    Ms.reserve(eps.size());
    for (real e : eps) Ms.push_back(assemble(g, c, cplx(E, e), slices).entries);
    // pivot: largest diagonal entry at the smallest epsilon
    real best = 0.0;
    for (int k = 0; k < n; ++k) {
        real v = std::abs(Ms.back()(k, k));
        if (v > best) {
            best = v;
            out.pivot = k;
        }
    }
    if (out.pivot < 0 || best < o.pivot_floor)
        throw std::runtime_error("omega_matrix: all diagonal entries vanish; no valid pivot");
    out.ratios = Eigen::MatrixXcd::Zero(n, n);
    out.flagged = Eigen::MatrixXi::Zero(n, n);
    std::vector<cplx> seq(eps.size());
    bool any_flag = false;
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            for (size_t t = 0; t < eps.size(); ++t)
                seq[t] = Ms[t](l, j) / Ms[t](out.pivot, out.pivot);
            auto r = extrapolate_ladder(seq, eps, o.ladder);
            if (r.status == LadderStatus::converged) {
                out.ratios(l, j) = r.limit;
            } else if (r.status == LadderStatus::divergent) {
                out.flagged(l, j) = 1;
                any_flag = true;
            } else {
                // a ratio hovering near zero extrapolates poorly but is zero
                // for rank purposes; anything else is flagged
                real tail = std::abs(seq[eps.size() - 1]);
                if (tail < 1e-4) out.ratios(l, j) = 0.0;
                else {
                    out.flagged(l, j) = 1;
                    any_flag = true;
                }
            }
        }
    if (!any_flag) out.rank = rank_of(out.ratios, o.sv_threshold);
    return out;
}

inline OmegaMatrix omega_matrix(const StarLikeGraph& g, const JacobiCoefficients& c, real E,
                                const OmegaOptions& o = {}) {
    return omega_matrix(g, c, E, make_slices(g, c, o.mfunction), o);
}

// ---------------------------------------------------------------------------
// The space S(E) of global subordinate solutions, with square-summability
// evidence per basis element.
// ---------------------------------------------------------------------------

struct SubordinateSpaceOptions {
    ClassifyOptions classify;
    long l2_length = 32768;       // tail-evidence window horizon
    real l2_window_tol = 1e-8;    // final window mass below this share = square-summable
};

struct SubordinateElement {
    Eigen::VectorXd compact_values;
    std::map<std::string, real> branch_theta;  // boundary angle per non-vanishing branch
    bool l2_evidence = false;
    real residual = 0.0;
    real direction_mismatch = 0.0;  // forward-forced vs backward-minimal seed ratio
    std::map<std::string, std::string> vanishing;  // audit: branches forced to zero
};

struct SubordinateSpaceBasis {
    real energy = 0.0;
    int dim_lower = 0, dim_upper = 0;  // equal when all branch statuses are conclusive
    bool conclusive = false;
    std::vector<SubordinateElement> basis;
    real gram_condition = 0.0;  // window Gram condition of the basis (independence)
};

namespace detail {

// share of the solution's mass in the final geometric window, in log space
inline bool l2_window_evidence(const HalfLineSolution& u, long length, real tol) {
    real total_mx = -std::numeric_limits<real>::infinity();
    for (long n = 1; n <= length; ++n) total_mx = std::max(total_mx, u.log_abs(n));
    if (std::isinf(total_mx)) return true;  // identically zero branch
    real total = 0, last_window = 0;
    long half = length / 2;
    for (long n = 1; n <= length; ++n) {
        real t = std::exp(2 * (u.log_abs(n) - total_mx));
        total += t;
        if (n > half) last_window += t;
    }
    return last_window < tol * total;
}

}  // namespace detail

// Evaluate one candidate compact-value assignment: extend, residual-check,
// and gather square-summability evidence from the backward (minimal)
// recurrence on every non-vanishing branch. The forward extension fixes only
// the seed; it cannot track a decaying solution.
inline SubordinateElement evaluate_subordinate_element(
    const StarLikeGraph& g, const JacobiCoefficients& c, real E, const Eigen::VectorXd& alpha,
    const std::vector<HalfLineSlice>& slices, const std::vector<BranchStatus>& statuses,
    const SubordinateSpaceOptions& o = {}) {
    SubordinateElement el;
    el.compact_values = alpha;
    auto ext = extend_compact_solution(g, c, alpha, E, 256);
    el.residual = assembled_residual(g, c, ext, E, 256);
    bool l2 = true;
    for (auto& [root, b] : ext.branches) {
        int j = *g.index_of(root);
        if (std::abs(b.value(1)) + std::abs(b.value(2)) < 1e-13) {
            el.vanishing[root] = "zero-branch";
            continue;
        }
        if (auto th = statuses[j].subordinate_theta()) el.branch_theta[root] = th->theta;
        auto mini = minimal_solution(slices[j].evaluator->op(), E, o.l2_length, b.value(1));
        real forced = b.value(2) / b.value(1);
        real got = mini.mant[2] * std::exp(mini.logs[2] - mini.logs[1]) / mini.mant[1];
        el.direction_mismatch = std::max(el.direction_mismatch,
                                         std::abs(forced - got) / std::max(1.0, std::abs(forced)));
        if (!detail::l2_window_evidence(mini, o.l2_length, o.l2_window_tol)) l2 = false;
    }
    el.l2_evidence = l2;
    return el;
}

inline SubordinateSpaceBasis subordinate_space(const StarLikeGraph& g, const JacobiCoefficients& c,
                                               real E, const SubordinateSpaceOptions& o = {}) {
    SubordinateSpaceBasis out;
    out.energy = E;
    auto slices = make_slices(g, c, o.classify.mfunction);
    const int n = g.n_compact();
    std::vector<BranchStatus> statuses(n);
    std::vector<int> inconclusive_roots;
    for (int j = 0; j < n; ++j) {
        statuses[j] = branch_status(slices[j], E, o.classify.ladder, o.classify.thresholds);
        if (!statuses[j].conclusive()) inconclusive_roots.push_back(j);
    }
    auto evaluate_element = [&](const Eigen::VectorXd& alpha) {
        return evaluate_subordinate_element(g, c, E, alpha, slices, statuses, o);
    };
    if (inconclusive_roots.empty()) {
        auto ks = kernel_system(g, c, statuses, o.classify.kernel_svd_threshold);
        out.dim_lower = out.dim_upper = ks.dim;
        out.conclusive = true;
        if (ks.dim == 1) {
            out.basis.push_back(evaluate_element(ks.basis[0]));
        } else if (ks.dim == 2) {
            // candidates: every in-kernel combination vanishing at one compact
            // vertex, then the raw pair. A square-summable ray must kill every
            // non-square-summable branch, i.e. vanish at its root, so testing
            // the vanishing combinations cannot miss it.
            std::vector<Eigen::VectorXd> cands;
            auto push = [&](Eigen::VectorXd v) {
                real nv = v.norm();
                if (nv < 1e-6) return;
                v /= nv;
                for (auto& u : cands)
                    if (std::abs(u.dot(v)) > 1.0 - 1e-9) return;
                cands.push_back(v);
            };
            for (int j = 0; j < n; ++j)
                push(ks.basis[1](j) * ks.basis[0] - ks.basis[0](j) * ks.basis[1]);
            push(ks.basis[0]);
            push(ks.basis[1]);
            std::vector<SubordinateElement> els;
            for (auto& v : cands) els.push_back(evaluate_element(v));
            std::stable_sort(els.begin(), els.end(),
                             [](const SubordinateElement& a, const SubordinateElement& b) {
                                 return a.l2_evidence > b.l2_evidence;
                             });
            out.basis.push_back(els[0]);
            for (auto& el : els) {
                real overlap = std::abs(el.compact_values.dot(out.basis[0].compact_values));
                if (overlap < 0.99) {
                    out.basis.push_back(el);
                    break;
                }
            }
        } else if (ks.dim > 2) {
            for (auto& alpha : ks.basis) out.basis.push_back(evaluate_element(alpha));
        }
        // independence certificate: condition of the compact-window Gram matrix
        if (!out.basis.empty()) {
            Eigen::MatrixXd B(n, out.basis.size());
            for (size_t i = 0; i < out.basis.size(); ++i) B.col(i) = out.basis[i].compact_values;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
            out.gram_condition =
                svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
        }
        return out;
    }
    // dimension interval: every inconclusive branch is tried as vanishing
    // (two constraints) and as Dirichlet-free (one constraint)
    int lo = n + 1, hi = -1;
    int m = static_cast<int>(inconclusive_roots.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
        auto trial = statuses;
        for (int t = 0; t < m; ++t)
            trial[inconclusive_roots[t]].kind = (mask >> t) & 1 ? BranchStatusKind::finite_positive
                                                                : BranchStatusKind::divergent;
        auto ks = kernel_system(g, c, trial, o.classify.kernel_svd_threshold);
        lo = std::min(lo, ks.dim);
        hi = std::max(hi, ks.dim);
    }
    out.dim_lower = lo;
    out.dim_upper = hi;
    out.conclusive = false;
    return out;
}

// ---------------------------------------------------------------------------
// Combined report per singular-zone energy.
// ---------------------------------------------------------------------------

struct MultiplicityReport {
    real energy = 0.0;
    int pivot = -1;
    OmegaMatrix omega;
    int omega_rank = -1;
    int dim_subordinate_space = -1;   // -1 when inconclusive (see interval)
    int dim_lower = 0, dim_upper = 0;
    bool eigenvalue_flag = false;     // some basis element carries l2 evidence
    bool sc_bound_applicable = false; // no l2 element and more than one half-line
    int k_halflines = 0;
    int bound = -1;                   // proven upper bound for the local multiplicity
    int conjectured_cap = -1;         // k-1, reported alongside, no stance taken
    std::string flags;
};

struct MultiplicityOptions {
    OmegaOptions omega;
    SubordinateSpaceOptions space;
};

inline MultiplicityReport multiplicity_bound(const StarLikeGraph& g, const JacobiCoefficients& c,
                                             real E, const MultiplicityOptions& o = {}) {
    MultiplicityReport rep;
    rep.energy = E;
    rep.k_halflines = g.n_halflines();
    auto space = subordinate_space(g, c, E, o.space);
    rep.dim_lower = space.dim_lower;
    rep.dim_upper = space.dim_upper;
    if (space.conclusive) rep.dim_subordinate_space = space.dim_upper;
    for (auto& el : space.basis) rep.eigenvalue_flag |= el.l2_evidence;
    try {
        rep.omega = omega_matrix(g, c, E, o.omega);
        rep.pivot = rep.omega.pivot;
        rep.omega_rank = rep.omega.rank;
    } catch (const std::runtime_error&) {
        rep.flags += "no-pivot;";
    }
    rep.bound = space.conclusive ? space.dim_upper : space.dim_upper;  // upper end either way
    rep.sc_bound_applicable = !rep.eigenvalue_flag && rep.k_halflines > 1 && space.conclusive &&
                              !space.basis.empty();
    if (rep.sc_bound_applicable) {
        rep.bound = std::min(rep.bound, rep.k_halflines);
        rep.conjectured_cap = rep.k_halflines - 1;
    }
    if (rep.omega_rank >= 0 && rep.dim_subordinate_space >= 0 &&
        rep.omega_rank > rep.dim_subordinate_space)
        rep.flags += "rank-exceeds-dimS;";
    return rep;
}

}  // namespace starjac

#endif
