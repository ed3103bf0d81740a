#ifndef STARJAC_ORACLE_HPP
#define STARJAC_ORACLE_HPP

#include "starjac/mmatrix.hpp"
#include "starjac/truncation.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Brute-force cross-checks against finite sections of J. These deliberately
// avoid the continued-fraction path: tails are eliminated by pivoted
// tridiagonal factorizations of the finite section and the compact block is
// solved densely.
// ---------------------------------------------------------------------------

struct OracleOptions {
    long initial_depth = 256;
    long max_depth = 1L << 16;
    real tol = 1e-9;  // max-norm agreement between successive depth doublings
};

// compact block of (J_N - z)^{-1}, depth-doubled until stable
inline Eigen::MatrixXcd direct_oracle(const StarLikeGraph& g, const JacobiCoefficients& c, cplx z,
                                      OracleOptions o = {}) {
    if (z.imag() < 0.05)
        throw std::invalid_argument("direct_oracle: requires Im z >= 0.05 (finite sections converge too slowly)");
    long d = o.initial_depth;
    StructuredShiftSolver s0(truncate(g, c, d), z);
    Eigen::MatrixXcd prev = s0.compact_resolvent();
    while (true) {
        d *= 2;
        if (d > o.max_depth)
            throw std::runtime_error("direct_oracle: no convergence at max depth");
        StructuredShiftSolver s(truncate(g, c, d), z);
        Eigen::MatrixXcd cur = s.compact_resolvent();
        if ((cur - prev).cwiseAbs().maxCoeff() <= o.tol) return cur;
        prev = cur;
    }
}

struct EigenpairResult {
    real eigenvalue = 0.0;
    real residual = std::numeric_limits<real>::infinity();  // ||J v - theta v||, v normalized
    real window_mass = 0.0;  // mass of v inside the first `window` sites of every tail + compact
    Eigen::VectorXd vector;
    bool converged = false;
};

inline Eigen::VectorXd apply_truncated(const TruncatedOperator& T, const Eigen::VectorXd& x) {
    const long d = T.depth;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(T.size());
    y.head(T.n) = T.compact * x.head(T.n);
    for (size_t t = 0; t < T.tail_diag.size(); ++t) {
        long off = T.n + static_cast<long>(t) * d;
        y(T.root_index[t]) += T.tail_offd[t][0] * x(off);
        y(off) += T.tail_offd[t][0] * x(T.root_index[t]);
        for (long i = 0; i < d; ++i) {
            y(off + i) += T.tail_diag[t][i] * x(off + i);
            if (i + 1 < d) {
                y(off + i) += T.tail_offd[t][i + 1] * x(off + i + 1);
                y(off + i + 1) += T.tail_offd[t][i + 1] * x(off + i);
            }
        }
    }
    return y;
}

// Inverse iteration with Rayleigh refinement at a real shift. For a symmetric
// matrix the residual certifies dist(theta, spec(J_N)) <= residual.
inline EigenpairResult nearest_eigenpair(const StarLikeGraph& g, const JacobiCoefficients& c,
                                         long depth, real E, long window = 0, int max_iter = 40) {
    TruncatedOperator T = truncate(g, c, depth);
    real shift = E;
    EigenpairResult out;
    Eigen::VectorXd v = Eigen::VectorXd::Random(T.size()).normalized();
    real theta = E;
    for (int it = 0; it < max_iter; ++it) {
        StructuredShiftSolver s(T, cplx(shift, 0.0));
        Eigen::VectorXcd w = s.solve(v.cast<cplx>());
        if (!w.allFinite()) {
            shift += 1e-11 * (1.0 + std::abs(shift));
            continue;
        }
        v = w.real().normalized();
        Eigen::VectorXd Jv = apply_truncated(T, v);
        theta = v.dot(Jv);
        out.residual = (Jv - theta * v).norm();
        if (out.residual < 1e-10 * (1.0 + std::abs(theta))) break;
        shift = theta;
    }
    out.eigenvalue = theta;
    out.vector = v;
    out.converged = out.residual < 1e-8 * (1.0 + std::abs(theta));
    if (window <= 0) window = depth;
    real mass = v.head(T.n).squaredNorm();
    for (size_t t = 0; t < T.tail_diag.size(); ++t) {
        long off = T.n + static_cast<long>(t) * T.depth;
        mass += v.segment(off, std::min(window, T.depth)).squaredNorm();
    }
    out.window_mass = mass;
    return out;
}

}  // namespace starjac

#endif
