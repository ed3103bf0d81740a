#ifndef STARJAC_CLASSIFY_HPP
#define STARJAC_CLASSIFY_HPP

#include "starjac/boundary.hpp"
#include "starjac/parallel.hpp"
#include "starjac/subordinacy.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Energy classification. Per branch, the boundary value of m_k separates the
// absolutely-continuous support (some branch has 0 < Im m_k(E+i0) < oo) from
// the zone where every branch carries a subordinate direction. Within that
// zone, global subordinate solutions are the kernel of the compact linear
// system with boundary data 1/m_k(E+i0):
//
//   row per root with a real limit c != 0 :  sum_l a_lj alpha_l + (1/c) alpha_j = 0
//   root with m -> 0                      :  alpha_j = 0        (theta = pi/2 branch)
//   root with |m| -> oo                   :  sum_l a_lj alpha_l = 0   (Dirichlet branch)
//   branch with no subordinate direction  :  alpha_j = 0  and  sum_l a_lj alpha_l = 0
//   half-line-free vertex                 :  free eigenvalue equation row
//
// The kernel dimension is dim S(E); each kernel element extends to an actual
// solution on G, residual-checked and optionally evidence-checked.
// ---------------------------------------------------------------------------

struct ClassifyOptions {
    LadderOptions ladder;
    BoundaryThresholds thresholds;
    MFunctionOptions mfunction;
    real kernel_svd_threshold = 1e-8;
    long witness_length = 2000;     // extension length for residual checks
    bool evidence_checks = false;   // run detect_subordinate on witnesses
    SubordinacyOptions subordinacy;
};

struct RootRecord {
    std::string vertex;
    BranchStatus status;
};

struct KernelSystem {
    Eigen::MatrixXd rows;               // homogeneous constraints on compact values
    std::vector<std::string> ordering;  // column labels
    int dim = 0;
    std::vector<Eigen::VectorXd> basis;
};

struct EnergyClassification {
    real energy = 0.0;
    std::vector<RootRecord> roots;  // one record per compact vertex
    bool conclusive = false;
    bool ac_support_member = false;
    bool singular_zone = false;  // every half-line carries a subordinate direction
    int kernel_dim = 0;          // dim S(E); -1 when not conclusive
    KernelSystem kernel;
    real witness_residual = 0.0;  // max over extended kernel witnesses
    bool witness_evidence_ok = true;
    std::string flags;
};

namespace detail {

inline void append_row(Eigen::MatrixXd& R, const Eigen::RowVectorXd& row) {
    R.conservativeResize(R.rows() + 1, Eigen::NoChange);
    R.row(R.rows() - 1) = row;
}

}  // namespace detail

// Assemble the compact constraint system from per-vertex boundary statuses.
inline KernelSystem kernel_system(const StarLikeGraph& g, const JacobiCoefficients& c,
                                  const std::vector<BranchStatus>& statuses,
                                  real svd_threshold = 1e-8) {
    const int n = g.n_compact();
    Eigen::MatrixXd A = compact_adjacency(g, c);
    Eigen::MatrixXd R(0, n);
    for (int j = 0; j < n; ++j) {
        const auto& st = statuses[j];
        Eigen::RowVectorXd arow = A.row(j);
        Eigen::RowVectorXd ej = Eigen::RowVectorXd::Zero(n);
        ej(j) = 1.0;
        switch (st.kind) {
            case BranchStatusKind::singleton:
                detail::append_row(R, arow + st.real_limit * ej);  // real_limit stores b - E
                break;
            case BranchStatusKind::real_limit:
                detail::append_row(R, arow + (1.0 / st.real_limit) * ej);
                break;
            case BranchStatusKind::zero_limit:
                detail::append_row(R, ej);
                break;
            case BranchStatusKind::divergent:
                detail::append_row(R, arow);
                break;
            case BranchStatusKind::finite_positive:
                detail::append_row(R, ej);
                detail::append_row(R, arow);
                break;
            case BranchStatusKind::inconclusive:
                throw std::logic_error("kernel_system: inconclusive branch status");
        }
    }
    KernelSystem ks;
    ks.rows = R;
    ks.ordering = g.compact_vertices;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
    real smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    for (int i = 0; i < n; ++i) {
        real s = i < svd.singularValues().size() ? svd.singularValues()(i) : 0.0;
        if (s <= svd_threshold * std::max(smax, 1e-300)) {
            ks.basis.push_back(svd.matrixV().col(i));
            ++ks.dim;
        }
    }
    return ks;
}

// Extend compact values to the half-lines through the eigenvalue equation at
// every root. The candidate must already satisfy the free equation at
// half-line-free vertices (checked, relative residual <= tol).
struct ExtendedSolution {
    Eigen::VectorXd compact_values;
    std::map<std::string, HalfLineSolution> branches;
    real max_residual = 0.0;
};

inline ExtendedSolution extend_compact_solution(const StarLikeGraph& g,
                                                const JacobiCoefficients& c,
                                                const Eigen::VectorXd& alpha, real E, long length,
                                                real tol = 1e-10) {
    const int n = g.n_compact();
    if (alpha.size() != n) throw std::invalid_argument("extend: candidate size mismatch");
    Eigen::MatrixXd A = compact_adjacency(g, c);
    real scale = alpha.cwiseAbs().maxCoeff() * std::max(1.0, std::abs(E) + c.coefficient_bound(64));
    ExtendedSolution out;
    out.compact_values = alpha;
    for (int j = 0; j < n; ++j) {
        const std::string& v = g.compact_vertices[j];
        real lhs = A.row(j).dot(alpha) + c.b_vertex(v) * alpha(j) - E * alpha(j);
        if (!g.has_halfline(v)) {
            if (std::abs(lhs) > tol * std::max(scale, 1e-30))
                throw std::invalid_argument(
                    "extend: candidate violates the eigenvalue equation at half-line-free vertex " + v);
            continue;
        }
        // the boundary pair of the branch restriction is
        // (u0, u1) = (sum_l a_lj alpha_l, alpha_j); the recurrence then forces
        // the same site-2 value as the eigenvalue equation at the root
        auto op = slice_operator(g, c, v);
        out.branches.emplace(v, iterate_from_seed(op, E, A.row(j).dot(alpha), alpha(j), length));
    }
    return out;
}

// residual of J phi = E phi over a finite window of the assembled solution
inline real assembled_residual(const StarLikeGraph& g, const JacobiCoefficients& c,
                               const ExtendedSolution& sol, real E, long window) {
    const int n = g.n_compact();
    Eigen::MatrixXd A = compact_adjacency(g, c);
    real worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const std::string& v = g.compact_vertices[j];
        real acc = (c.b_vertex(v) - E) * sol.compact_values(j) + A.row(j).dot(sol.compact_values);
        real mag = std::abs(sol.compact_values(j));
        if (g.has_halfline(v)) {
            // slice site 2 is the first half-line site
            real first = sol.branches.at(v).value(2);
            acc += c.halflines.at(v).a(0) * first;
            mag += std::abs(first);
        }
        worst = std::max(worst, std::abs(acc) / std::max(1.0, mag));
    }
    for (auto& [root, b] : sol.branches) {
        auto op = slice_operator(g, c, root);
        // slice sites: 1 = root, i >= 2 are half-line sites i-1
        for (long i = 2; i < std::min(window, b.length()); ++i) {
            real base = b.logs[i];
            real up = b.mant[i + 1] * std::exp(b.logs[i + 1] - base);
            real mid = b.mant[i];
            real dn = b.mant[i - 1] * std::exp(b.logs[i - 1] - base);
            real resid = op.a(i) * up - (E - op.b(i)) * mid + op.a(i - 1) * dn;
            real mag = std::abs(up) + std::abs(mid) + std::abs(dn);
            worst = std::max(worst, std::abs(resid) / std::max(1.0, mag));
        }
    }
    return worst;
}

inline EnergyClassification classify_energy(const StarLikeGraph& g, const JacobiCoefficients& c,
                                            real E, const std::vector<HalfLineSlice>& slices,
                                            const ClassifyOptions& o = {}) {
    EnergyClassification out;
    out.energy = E;
    const int n = g.n_compact();
    std::vector<BranchStatus> statuses(n);
    bool all_conclusive = true;
    bool any_ac = false, any_halfline = false;
    for (int j = 0; j < n; ++j) {
        statuses[j] = branch_status(slices[j], E, o.ladder, o.thresholds);
        out.roots.push_back({g.compact_vertices[j], statuses[j]});
        if (slices[j].kind == HalfLineSlice::Kind::halfline) {
            any_halfline = true;
            if (!statuses[j].conclusive()) all_conclusive = false;
            if (statuses[j].kind == BranchStatusKind::finite_positive) any_ac = true;
        }
    }
    out.conclusive = all_conclusive && any_halfline;
    if (!out.conclusive) {
        out.kernel_dim = -1;
        out.flags = "inconclusive-branch";
        return out;
    }
    out.ac_support_member = any_ac;
    out.singular_zone = !any_ac;
    out.kernel = kernel_system(g, c, statuses, o.kernel_svd_threshold);
    out.kernel_dim = out.kernel.dim;
    if (out.kernel_dim > 0) {
        for (auto& basis : out.kernel.basis) {
            auto ext = extend_compact_solution(g, c, basis, E, o.witness_length);
            out.witness_residual =
                std::max(out.witness_residual, assembled_residual(g, c, ext, E, o.witness_length));
            if (o.evidence_checks) {
                for (auto& [root, b] : ext.branches) {
                    // vanishing branches carry no evidence to check
                    if (std::abs(b.value(1)) + std::abs(b.value(2)) < 1e-13) continue;
                    int j = *g.index_of(root);
                    auto verdict = detect_subordinate(slices[j].evaluator->op(), E, o.subordinacy,
                                                      statuses[j].subordinate_theta());
                    if (verdict.kind == SubordinacyKind::no_subordinate)
                        out.witness_evidence_ok = false;
                }
            }
        }
    }
    return out;
}

inline EnergyClassification classify_energy(const StarLikeGraph& g, const JacobiCoefficients& c,
                                            real E, const ClassifyOptions& o = {}) {
    return classify_energy(g, c, E, make_slices(g, c, o.mfunction), o);
}

// ---------------------------------------------------------------------------
// Grid scan with per-point classification, evaluated in parallel; results are
// indexed by grid position so the output is independent of the job count.
// ---------------------------------------------------------------------------

struct ScanSummary {
    long total = 0, ac = 0, singular = 0, inconclusive = 0, kernel_hits = 0;
};

inline std::vector<EnergyClassification> scan(const StarLikeGraph& g, const JacobiCoefficients& c,
                                              const std::vector<real>& grid,
                                              const ClassifyOptions& o = {}, int jobs = 1,
                                              ScanSummary* summary = nullptr) {
    std::vector<EnergyClassification> out(grid.size());
    parallel_for(static_cast<long>(grid.size()), jobs, [&](long i) {
        auto slices = make_slices(g, c, o.mfunction);
        out[i] = classify_energy(g, c, grid[i], slices, o);
    });
    if (summary) {
        summary->total = static_cast<long>(out.size());
        for (auto& e : out) {
            if (!e.conclusive) ++summary->inconclusive;
            else if (e.ac_support_member) ++summary->ac;
            else ++summary->singular;
            if (e.kernel_dim > 0) ++summary->kernel_hits;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel-root refinement: in regions where every branch has a real boundary
// limit, det(A + diag(1/m_j(E))) is real and its zeros are the energies
// carrying global subordinate solutions (isolated eigenvalues, typically).
// ---------------------------------------------------------------------------

inline real kernel_determinant(const StarLikeGraph& g, const JacobiCoefficients& c, real E,
                               const std::vector<HalfLineSlice>& slices, real probe_eps = 1e-12) {
    const int n = g.n_compact();
    Eigen::MatrixXd K = compact_adjacency(g, c);
    for (int j = 0; j < n; ++j) {
        if (slices[j].kind == HalfLineSlice::Kind::singleton) {
            K(j, j) += slices[j].b_singleton - E;
        } else {
            cplx m = slices[j].m(cplx(E, probe_eps));
            K(j, j) += (1.0 / m).real();
        }
    }
    return K.determinant();
}

inline std::vector<real> find_kernel_roots(const StarLikeGraph& g, const JacobiCoefficients& c,
                                           real lo, real hi, int grid_points = 400,
                                           MFunctionOptions mo = {}) {
    auto slices = make_slices(g, c, mo);
    std::vector<real> roots;
    real prev_E = lo, prev_d = kernel_determinant(g, c, lo, slices);
    for (int i = 1; i <= grid_points; ++i) {
        real E = lo + (hi - lo) * i / grid_points;
        real d = kernel_determinant(g, c, E, slices);
        if (std::isfinite(prev_d) && std::isfinite(d) && prev_d * d < 0) {
            real a = prev_E, b = E, fa = prev_d;
            for (int it = 0; it < 100; ++it) {  // bisection is plenty at these scales
                real mid = 0.5 * (a + b);
                real fm = kernel_determinant(g, c, mid, slices);
                if (fa * fm <= 0) b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_E = E;
        prev_d = d;
    }
    return roots;
}

// Absorb the first p sites of every half-line into the compact component.
// Classifications are independent of this choice; tests rely on comparing
// scans across enlargements.
inline std::pair<StarLikeGraph, JacobiCoefficients> enlarge_compact(const StarLikeGraph& g,
                                                                    const JacobiCoefficients& c,
                                                                    int p) {
    StarLikeGraph g2 = g;
    JacobiCoefficients c2 = c;
    if (p <= 0) return {g2, c2};
    g2.halfline_roots.clear();
    c2.halflines.clear();
    for (const auto& root : g.halfline_roots) {
        const auto& h = c.halflines.at(root);
        std::string prev = root;
        for (int i = 1; i <= p; ++i) {
            std::string name = root + "#" + std::to_string(i);
            g2.compact_vertices.push_back(name);
            g2.compact_edges.push_back({prev, name});
            c2.b_compact[name] = h.b(i);
            c2.a_compact[EdgeKey(prev, name)] = h.a(i - 1);
            prev = name;
        }
        g2.halfline_roots.push_back(prev);
        HalfLineCoefficients h2;
        // shift prefix by p
        for (size_t i = p; i < h.b_prefix.size(); ++i) h2.b_prefix.push_back(h.b_prefix[i]);
        for (size_t i = p; i < h.a_prefix.size(); ++i) h2.a_prefix.push_back(h.a_prefix[i]);
        if (std::holds_alternative<GeneratorTail>(h.tail)) {
            GeneratorTail gt = std::get<GeneratorTail>(h.tail);
            GeneratorTail shifted = gt;
            long np_b = static_cast<long>(h.b_prefix.size());
            long np_a = static_cast<long>(h.a_prefix.size());
            long drop_b = std::max<long>(0, p - np_b);
            long drop_a = std::max<long>(0, p - np_a);
            shifted.b = [f = gt.b, drop_b](long i) { return f(i + drop_b); };
            shifted.a = [f = gt.a, drop_a](long i) { return f(i + drop_a); };
            shifted.depth_limit = gt.depth_limit - p;
            h2.tail = shifted;
        } else {
            h2.tail = h.tail;
            if (std::holds_alternative<PeriodicTail>(h.tail)) {
                // rotate the periodic tail by however many tail sites were absorbed
                auto pt = std::get<PeriodicTail>(h.tail);
                long shift_b = std::max<long>(0, p - static_cast<long>(h.b_prefix.size()));
                long shift_a = std::max<long>(0, p - static_cast<long>(h.a_prefix.size()));
                PeriodicTail rot;
                for (size_t i = 0; i < pt.b.size(); ++i)
                    rot.b.push_back(pt.b[(i + shift_b) % pt.b.size()]);
                for (size_t i = 0; i < pt.a.size(); ++i)
                    rot.a.push_back(pt.a[(i + shift_a) % pt.a.size()]);
                h2.tail = rot;
            }
        }
        c2.halflines[prev] = std::move(h2);
    }
    return {g2, c2};
}

}  // namespace starjac

#endif
