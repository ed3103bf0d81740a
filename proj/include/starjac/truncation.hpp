#ifndef STARJAC_TRUNCATION_HPP
#define STARJAC_TRUNCATION_HPP

#include <Eigen/Dense>

#include "starjac/operator.hpp"

namespace starjac {

// Finite section of J: the compact component plus the first `depth` sites of
// every half-line. Kept in structured form (compact block + tridiagonal
// tails); dense() materializes the full symmetric matrix for small depths.
struct TruncatedOperator {
    int n = 0;                     // compact size
    long depth = 0;                // sites kept per half-line
    Eigen::MatrixXd compact;       // n x n: diag(b) + adjacency
    std::vector<int> root_index;   // compact index of each tail's root
    std::vector<std::string> root_name;
    // per tail: diag[0..depth-1] = b(1..depth); offd[0] = a(0) (root coupling),
    // offd[i] = a(i) couples tail sites i, i+1
    std::vector<std::vector<real>> tail_diag;
    std::vector<std::vector<real>> tail_offd;

    long size() const { return n + static_cast<long>(root_index.size()) * depth; }

    std::vector<VertexId> ordering() const {
        std::vector<VertexId> ord;
        ord.reserve(size());
        for (const auto& nm : names_) ord.push_back(compact_vertex(nm));
        for (size_t t = 0; t < root_name.size(); ++t)
            for (long i = 1; i <= depth; ++i) ord.push_back(halfline_site(root_name[t], (int)i));
        return ord;
    }

    Eigen::MatrixXd dense() const {
        const long N = size();
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
        M.topLeftCorner(n, n) = compact;
        for (size_t t = 0; t < tail_diag.size(); ++t) {
            long off = n + static_cast<long>(t) * depth;
            M(root_index[t], off) = M(off, root_index[t]) = tail_offd[t][0];
            for (long i = 0; i < depth; ++i) {
                M(off + i, off + i) = tail_diag[t][i];
                if (i + 1 < depth) M(off + i, off + i + 1) = M(off + i + 1, off + i) = tail_offd[t][i + 1];
            }
        }
        return M;
    }

    std::vector<std::string> names_;
};

inline TruncatedOperator truncate(const StarLikeGraph& g, const JacobiCoefficients& c, long depth) {
    if (depth < 1) throw std::invalid_argument("truncate: depth must be >= 1");
    TruncatedOperator T;
    T.n = g.n_compact();
    T.depth = depth;
    T.names_ = g.compact_vertices;
    T.compact = compact_adjacency(g, c);
    for (int i = 0; i < T.n; ++i) T.compact(i, i) = c.b_vertex(g.compact_vertices[i]);
    for (const auto& r : g.halfline_roots) {
        const auto& h = c.halflines.at(r);
        T.root_index.push_back(*g.index_of(r));
        T.root_name.push_back(r);
        std::vector<real> d(depth), o(depth);
        for (long i = 0; i < depth; ++i) {
            d[i] = h.b(i + 1);
            o[i] = h.a(i);
        }
        T.tail_diag.push_back(std::move(d));
        T.tail_offd.push_back(std::move(o));
    }
    return T;
}

// Solve (T - z) X = B for the structured truncation, eliminating each tail by a
// pivoted tridiagonal factorization and finishing with a dense solve on the
// compact block. Works for complex z and for real shifts (z = E + 0i).
//
// B columns are restricted to the compact block (rows n..N-1 of B are zero),
// which covers resolvent sampling against delta vectors on C; full right-hand
// sides are supported through `tail_rhs`.
struct StructuredShiftSolver {
    const TruncatedOperator& T;
    cplx z;
    // factorizations of (tail - z) per tail, LU with partial pivoting on a
    // tridiagonal (fill-in adds a second superdiagonal)
    struct TriLU {
        std::vector<cplx> dl, d, du, du2;
        std::vector<int> piv;
    };
    std::vector<TriLU> lu;
    Eigen::PartialPivLU<Eigen::MatrixXcd> schur_lu;
    bool singular_tail = false;

    StructuredShiftSolver(const TruncatedOperator& T_, cplx z_) : T(T_), z(z_) {
        Eigen::MatrixXcd S = T.compact.cast<cplx>();
        for (int i = 0; i < T.n; ++i) S(i, i) -= z;
        for (size_t t = 0; t < T.tail_diag.size(); ++t) {
            lu.push_back(factor_tail(t));
            // g = e1^T (tail - z)^{-1} e1 folds the tail into its root entry
            std::vector<cplx> e1(T.depth, cplx(0));
            e1[0] = 1.0;
            tri_solve(lu.back(), e1);
            const real a0 = T.tail_offd[t][0];
            S(T.root_index[t], T.root_index[t]) -= a0 * a0 * e1[0];
        }
        schur_lu.compute(S);
    }

    // columns of (T - z)^{-1} restricted to the compact block, for rhs = delta
    // at each compact vertex: returns the n x n compact resolvent block
    Eigen::MatrixXcd compact_resolvent() {
        Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(T.n, T.n);
        return schur_lu.solve(I);
    }

    // full solve for an arbitrary rhs (length size())
    Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const {
        const long d = T.depth;
        Eigen::VectorXcd rc = b.head(T.n);
        std::vector<std::vector<cplx>> tail_sol(lu.size());
        for (size_t t = 0; t < lu.size(); ++t) {
            std::vector<cplx> rt(d);
            for (long i = 0; i < d; ++i) rt[i] = b(T.n + static_cast<long>(t) * d + i);
            tri_solve(lu[t], rt);  // (tail - z)^{-1} r_t
            rc(T.root_index[t]) -= T.tail_offd[t][0] * rt[0];
            tail_sol[t] = std::move(rt);
        }
        Eigen::VectorXcd xc = schur_lu.solve(rc);
        Eigen::VectorXcd x(T.size());
        x.head(T.n) = xc;
        for (size_t t = 0; t < lu.size(); ++t) {
            // x_t = (tail - z)^{-1} (r_t - a0 xc(root) e1)
            std::vector<cplx> rt(d);
            for (long i = 0; i < d; ++i) rt[i] = b(T.n + static_cast<long>(t) * d + i);
            rt[0] -= T.tail_offd[t][0] * xc(T.root_index[t]);
            tri_solve(lu[t], rt);
            for (long i = 0; i < d; ++i) x(T.n + static_cast<long>(t) * d + i) = rt[i];
        }
        return x;
    }

  private:
    TriLU factor_tail(size_t t) {
        const long m = T.depth;
        TriLU f;
        f.d.resize(m);
        f.dl.assign(m, cplx(0));
        f.du.assign(m, cplx(0));
        f.du2.assign(m, cplx(0));
        f.piv.resize(m);
        for (long i = 0; i < m; ++i) {
            f.d[i] = T.tail_diag[t][i] - z;
            if (i + 1 < m) f.du[i] = T.tail_offd[t][i + 1], f.dl[i + 1] = T.tail_offd[t][i + 1];
        }
        // LU with partial pivoting (LAPACK gttrf style)
        for (long i = 0; i + 1 < m; ++i) {
            if (std::abs(f.d[i]) >= std::abs(f.dl[i + 1])) {
                f.piv[i] = 0;
                if (f.d[i] == cplx(0)) {
                    singular_tail = true;
                    f.d[i] = 1e-300;
                }
                cplx fac = f.dl[i + 1] / f.d[i];
                f.dl[i + 1] = fac;
                f.d[i + 1] -= fac * f.du[i];
            } else {
                f.piv[i] = 1;
                cplx fac = f.d[i] / f.dl[i + 1];
                f.d[i] = f.dl[i + 1];
                f.dl[i + 1] = fac;
                cplx tmp = f.du[i];
                f.du[i] = f.d[i + 1];
                f.d[i + 1] = tmp - fac * f.d[i + 1];
                if (i + 2 < m) {
                    f.du2[i] = f.du[i + 1];
                    f.du[i + 1] = -fac * f.du[i + 1];
                }
            }
        }
        if (f.d[m - 1] == cplx(0)) {
            singular_tail = true;
            f.d[m - 1] = 1e-300;
        }
        return f;
    }

    static void tri_solve(const TriLU& f, std::vector<cplx>& x) {
        const long m = static_cast<long>(x.size());
        for (long i = 0; i + 1 < m; ++i) {
            if (f.piv[i] == 0) {
                x[i + 1] -= f.dl[i + 1] * x[i];
            } else {
                cplx tmp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = tmp - f.dl[i + 1] * x[i];
            }
        }
        x[m - 1] /= f.d[m - 1];
        if (m >= 2) x[m - 2] = (x[m - 2] - f.du[m - 2] * x[m - 1]) / f.d[m - 2];
        for (long i = m - 3; i >= 0; --i)
            x[i] = (x[i] - f.du[i] * x[i + 1] - f.du2[i] * x[i + 2]) / f.d[i];
    }
};

}  // namespace starjac

#endif
