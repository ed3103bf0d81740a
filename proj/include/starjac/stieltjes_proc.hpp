#ifndef STARJAC_STIELTJES_PROC_HPP
#define STARJAC_STIELTJES_PROC_HPP

#include "starjac/measure.hpp"
#include "starjac/mfunction.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Measure -> Jacobi coefficients: Lanczos on the discretized measure (the
// diagonal matrix of quadrature nodes, started from the weight vector) with
// full reorthogonalization. Determinant-based moment recursions break down
// near depth 15 in double precision; the orthogonalized Lanczos run is stable
// to any depth the discretization supports.
// ---------------------------------------------------------------------------

struct JacobiPrefix {
    std::vector<real> b;  // b(1) .. b(N)
    std::vector<real> a;  // a(1) .. a(N-1), couples n and n+1
    bool breakdown = false;
    int requested = 0;

    int depth() const { return static_cast<int>(b.size()); }

    HalfLineOperator with_constant_tail() const {
        std::vector<real> bb = b, aa = a;
        ConstantTail tail{b.back(), a.empty() ? 1.0 : a.back()};
        return standalone_operator(bb, aa, tail);
    }
};

inline JacobiPrefix lanczos_jacobi(const std::vector<real>& x, const std::vector<real>& w, int n) {
    const int m = static_cast<int>(x.size());
    JacobiPrefix out;
    out.requested = n;
    if (m < n) {
        n = m;  // finitely supported measure: the exact matrix has m sites
        out.breakdown = true;
    }
    Eigen::MatrixXd Q(m, n);
    Eigen::VectorXd q(m);
    real tot = 0;
    for (real ww : w) tot += ww;
    for (int i = 0; i < m; ++i) q[i] = std::sqrt(std::max(w[i], 0.0) / tot);
    Q.col(0) = q;
    Eigen::VectorXd v(m);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < m; ++i) v[i] = x[i] * Q(i, k);
        if (k > 0) v -= out.a[k - 1] * Q.col(k - 1);
        real ak = Q.col(k).dot(v);
        out.b.push_back(ak);
        if (k == n - 1) break;
        v -= ak * Q.col(k);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) v -= Q.col(j).dot(v) * Q.col(j);
        real nb = v.norm();
        if (nb < 1e-13) {
            out.breakdown = true;  // finitely supported measure: exact prefix found
            break;
        }
        out.a.push_back(nb);
        Q.col(k + 1) = v / nb;
    }
    return out;
}

inline JacobiPrefix jacobi_from_moments(const MomentSequence& ms) {
    const int n = (static_cast<int>(ms.moments.size()) - 1) / 2;
    if (n < 1) throw std::invalid_argument("jacobi_from_moments: need at least 3 moments");
    std::vector<real> x, w;
    discretize(ms.source, std::max(4 * n, 512), x, w);
    return lanczos_jacobi(x, w, n);
}

// Gauss rule of the measure from its recurrence coefficients
// (eigenvalues of the truncated Jacobi matrix; weights from first components).
inline void golub_welsch(const JacobiPrefix& p, std::vector<real>& nodes,
                         std::vector<real>& weights, real m0 = 1.0) {
    const int n = p.depth();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        T(i, i) = p.b[i];
        if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = p.a[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        weights[i] = m0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
}

// max deviation between the continued-fraction m of the prefix (constant-tail
// completion) and the direct quadrature Borel transform of the measure
inline real roundtrip_check(const JacobiPrefix& p, const MeasureSpec& spec,
                            const std::vector<cplx>& zs) {
    if (p.depth() < 1) throw std::invalid_argument("roundtrip_check: empty prefix");
    std::vector<real> x, w;
    discretize(spec, 4096, x, w);
    real worst = 0.0;
    for (cplx z : zs) {
        cplx direct = 0.0;
        for (size_t i = 0; i < x.size(); ++i) direct += w[i] / (x[i] - z);
        cplx cf;
        if (p.breakdown) {
            // finitely supported measure: the finite continued fraction is exact
            cf = 0.0;
            for (int j = p.depth(); j >= 1; --j) {
                real aj = j <= static_cast<int>(p.a.size()) ? p.a[j - 1] : 0.0;
                cf = 1.0 / (p.b[j - 1] - z - aj * aj * cf);
            }
        } else {
            cf = MFunctionEvaluator(p.with_constant_tail()).evaluate_uncached(z);
        }
        worst = std::max(worst, std::abs(cf - direct));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Closed-form coefficient families used as independent oracles and as exact
// tail generators.
// ---------------------------------------------------------------------------

// uniform measure on [-1, 1]: b = 0, a_n = n / sqrt(4 n^2 - 1)
inline real legendre_a(long n) { return n / std::sqrt(4.0 * n * n - 1.0); }

// pushforward of the uniform measure under t -> t^2, i.e. the normalized
// 1/(2 sqrt(x)) density on (0,1): even-sublattice squares of the Legendre
// chain give b(1) = a~1^2, b(k+1) = a~(2k)^2 + a~(2k+1)^2, a(k) = a~(2k-1) a~(2k)
inline real sqrt_density_b(long k) {
    if (k == 1) return legendre_a(1) * legendre_a(1);
    long n = k - 1;
    return legendre_a(2 * n) * legendre_a(2 * n) + legendre_a(2 * n + 1) * legendre_a(2 * n + 1);
}
inline real sqrt_density_a(long k) { return legendre_a(2 * k - 1) * legendre_a(2 * k); }

}  // namespace starjac

#endif
