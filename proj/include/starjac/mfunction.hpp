#ifndef STARJAC_MFUNCTION_HPP
#define STARJAC_MFUNCTION_HPP

#include <atomic>
#include <unordered_map>

#include "starjac/halfline.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// m(z) = <delta_1, (J - z)^{-1} delta_1> for a half-line Jacobi matrix,
// evaluated by the backward continued-fraction recursion
//     m^{(N)} = seed,   m^{(j-1)} = 1 / (b_j - z - a_j^2 m^{(j)}),
// doubling N until two successive evaluations agree. The forward three-term
// recursion for the minimal solution is unstable; the backward recursion is
// self-correcting.
//
// For an eventually constant tail the recursion can be seeded with the exact
// fixed point of the period-1 tail map, which makes the result exact for the
// prefix-plus-constant-tail operator at any z off its spectrum.
// ---------------------------------------------------------------------------

// Herglotz root of ac^2 m^2 - (bc - z) m + 1 = 0 (resolvent of the constant
// half-line): Im m > 0 for Im z > 0; decaying branch for real z off the band.
inline cplx constant_tail_m(real bc, real ac, cplx z) {
    cplx w = bc - z;
    cplx disc = std::sqrt(w * w - 4.0 * ac * ac);
    cplx r1 = (w + disc) / (2.0 * ac * ac);
    cplx r2 = (w - disc) / (2.0 * ac * ac);
    if (z.imag() > 0.0) {
        if (r1.imag() > 0.0 && r2.imag() <= 0.0) return r1;
        if (r2.imag() > 0.0 && r1.imag() <= 0.0) return r2;
    }
    return std::abs(r1) < std::abs(r2) ? r1 : r2;
}

struct MFunctionNonConvergence : std::runtime_error {
    cplx last, previous;
    long depth;
    MFunctionNonConvergence(cplx m1, cplx m0, long d)
        : std::runtime_error("m-function continued fraction did not converge at depth " +
                             std::to_string(d)),
          last(m1), previous(m0), depth(d) {}
};

struct MFunctionOptions {
    real rel_tol = 1e-11;
    long initial_depth = 64;
    long max_depth = 1L << 23;
    bool tail_fixed_point = true;  // use the exact constant-tail seed when available
};

class MFunctionEvaluator {
  public:
    explicit MFunctionEvaluator(HalfLineOperator op, MFunctionOptions opts = {})
        : op_(std::move(op)), opts_(opts), id_(next_id()) {}

    const HalfLineOperator& op() const { return op_; }
    const MFunctionOptions& options() const { return opts_; }

    cplx operator()(cplx z) const { return evaluate(z); }

    cplx evaluate(cplx z) const {
        thread_local std::unordered_map<uint64_t, std::pair<cplx, cplx>> cache;
        uint64_t key = id_ * 0x9e3779b97f4a7c15ull;
        auto it = cache.find(key);
        if (it != cache.end() && it->second.first == z) return it->second.second;
        cplx m = evaluate_uncached(z);
        cache[key] = {z, m};
        return m;
    }

    cplx evaluate_uncached(cplx z) const {
        if (op_.const_from > 0 && opts_.tail_fixed_point) {
            cplx m = constant_tail_m(op_.bc, op_.ac, z);
            for (long j = op_.const_from - 1; j >= 1; --j) {
                real aj = op_.a(j);
                m = 1.0 / (op_.b(j) - z - aj * aj * m);
            }
            return m;
        }
        long d = std::max<long>(opts_.initial_depth, op_.const_from);
        d = std::min({d, op_.depth_limit, opts_.max_depth});
        cplx prev = cf(z, d);
        // near the spectrum the recursion's own roundoff floor sits a few
        // orders above machine epsilon; doubling past it cannot help
        const real tol = std::max(opts_.rel_tol, 4e-9);
        while (true) {
            long d2 = std::min({2 * d, op_.depth_limit, opts_.max_depth});
            if (d2 == d) throw MFunctionNonConvergence(prev, prev, d);
            cplx cur = cf(z, d2);
            if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
            d = d2;
            prev = cur;
        }
    }

  private:
    cplx cf(cplx z, long depth) const {
        cplx m = 0.0;
        if (op_.const_from > 0 && opts_.tail_fixed_point && depth >= op_.const_from)
            m = constant_tail_m(op_.bc, op_.ac, z);
        for (long j = depth; j >= 1; --j) {
            real aj = op_.a(j);
            m = 1.0 / (op_.b(j) - z - aj * aj * m);
        }
        return m;
    }

    static uint64_t next_id() {
        static std::atomic<uint64_t> ctr{1};
        return ctr.fetch_add(1);
    }

    HalfLineOperator op_;
    MFunctionOptions opts_;
    uint64_t id_;
};

// Boundary limit of m classified for subordinacy purposes.
struct MBoundary {
    enum class Kind { finite, infinite, none } kind = Kind::none;
    real value = 0.0;  // the real limit when kind == finite

    static MBoundary finite(real c) { return {Kind::finite, c}; }
    static MBoundary infinite() { return {Kind::infinite, 0.0}; }
    static MBoundary none() { return {Kind::none, 0.0}; }
};

// Theorem: lim m(E + i eps) = cot(theta) exactly when the theta-boundary
// solution is subordinate; a divergent limit selects Dirichlet, m -> 0 selects
// theta = pi/2, and a genuinely complex limit means no subordinate solution.
inline std::optional<BoundaryCondition> jl_theta_from_m(const MBoundary& mb) {
    switch (mb.kind) {
        case MBoundary::Kind::finite: {
            real t = std::atan2(1.0, mb.value);  // arccot into (0, pi)
            if (t >= kPi) t = 0.0;
            return BoundaryCondition(t);
        }
        case MBoundary::Kind::infinite:
            return BoundaryCondition(0.0);
        case MBoundary::Kind::none:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace starjac

#endif
