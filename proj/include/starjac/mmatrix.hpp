#ifndef STARJAC_MMATRIX_HPP
#define STARJAC_MMATRIX_HPP

#include <Eigen/Dense>
#include <memory>

#include "starjac/mfunction.hpp"
#include "starjac/operator.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// The compact-block resolvent matrix M(z)_{kj} = <delta_k, (J-z)^{-1} delta_j>
// is assembled from the branch m-functions through
//     M(z)^{-1} = A + diag(1/m_1(z), ..., 1/m_n(z)),
// which reduces the infinite-dimensional resolvent to n scalar continued
// fractions plus one n x n inversion.
// ---------------------------------------------------------------------------

struct HalfLineSlice {
    enum class Kind { halfline, singleton } kind = Kind::singleton;
    std::string vertex;
    real b_singleton = 0.0;
    std::shared_ptr<MFunctionEvaluator> evaluator;  // set for halfline slices

    cplx m(cplx z) const {
        if (kind == Kind::singleton) return 1.0 / (b_singleton - z);
        return evaluator->evaluate(z);
    }
};

inline std::vector<HalfLineSlice> make_slices(const StarLikeGraph& g, const JacobiCoefficients& c,
                                              MFunctionOptions opts = {}) {
    std::vector<HalfLineSlice> out;
    for (const auto& v : g.compact_vertices) {
        HalfLineSlice s;
        s.vertex = v;
        if (g.has_halfline(v)) {
            s.kind = HalfLineSlice::Kind::halfline;
            s.evaluator = std::make_shared<MFunctionEvaluator>(slice_operator(g, c, v), opts);
        } else {
            s.kind = HalfLineSlice::Kind::singleton;
            s.b_singleton = c.b_vertex(v);
        }
        out.push_back(std::move(s));
    }
    return out;
}

struct MMatrix {
    cplx z;
    Eigen::MatrixXcd entries;
    std::vector<std::string> ordering;

    Eigen::MatrixXd herglotz_part() const {  // Im M; real symmetric since M = M^T
        return entries.imag();
    }
};

struct SingularKError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline MMatrix assemble(const StarLikeGraph& g, const JacobiCoefficients& c, cplx z,
                        const std::vector<HalfLineSlice>& slices) {
    const int n = g.n_compact();
    Eigen::MatrixXcd K = compact_adjacency(g, c).cast<cplx>();
    for (int k = 0; k < n; ++k) K(k, k) += 1.0 / slices[k].m(z);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
    Eigen::MatrixXcd M = lu.solve(Eigen::MatrixXcd::Identity(n, n));
    real cond = K.cwiseAbs().rowwise().sum().maxCoeff() * M.cwiseAbs().rowwise().sum().maxCoeff();
    if (!M.allFinite() || cond > 1e14)
        throw SingularKError("assemble: K(z) numerically singular (cond ~ " + std::to_string(cond) +
                             "); m-function tolerance failure suspected");
    return MMatrix{z, 0.5 * (M + M.transpose()), g.compact_vertices};
}

inline MMatrix assemble(const StarLikeGraph& g, const JacobiCoefficients& c, cplx z,
                        MFunctionOptions opts = {}) {
    return assemble(g, c, z, make_slices(g, c, opts));
}

}  // namespace starjac

#endif
