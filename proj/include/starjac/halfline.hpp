#ifndef STARJAC_HALFLINE_HPP
#define STARJAC_HALFLINE_HPP

#include <cmath>
#include <vector>

#include "starjac/graph.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// One-dimensional view: a Jacobi matrix on N with sites 1, 2, ...
// b(n) is the diagonal at site n; a(n) couples sites n and n+1. The formal
// boundary site 0 always carries weight a_0 = 1 toward site 1.
// ---------------------------------------------------------------------------

struct HalfLineOperator {
    std::function<real(long)> bf, af;  // 1-based
    long const_from = 0;  // smallest site s with b(n)=bc, a(n)=ac for all n >= s; 0 = unknown
    real bc = 0.0, ac = 1.0;
    long depth_limit = 1L << 40;

    real b(long n) const { return n >= const_from && const_from > 0 ? bc : bf(n); }
    real a(long n) const { return n >= const_from && const_from > 0 ? ac : af(n); }
};

// The half-line slice rooted at a compact vertex: site 1 is the root itself.
inline HalfLineOperator slice_operator(const StarLikeGraph& g, const JacobiCoefficients& c,
                                       const std::string& root) {
    if (!g.has_halfline(root))
        throw std::invalid_argument("slice_operator: " + root + " carries no half-line");
    HalfLineOperator op;
    const HalfLineCoefficients h = c.halflines.at(root);
    const real broot = c.b_vertex(root);
    op.bf = [h, broot](long n) { return n == 1 ? broot : h.b(n - 1); };
    op.af = [h](long n) { return h.a(n - 1); };
    long cf = h.constant_from();
    if (cf > 0) {
        op.const_from = std::max<long>(2, cf + 1);
        op.bc = std::get<ConstantTail>(h.tail).b;
        op.ac = std::get<ConstantTail>(h.tail).a;
    }
    if (std::holds_alternative<GeneratorTail>(h.tail))
        op.depth_limit = std::get<GeneratorTail>(h.tail).depth_limit;
    return op;
}

// A standalone Jacobi matrix on N described by prefix arrays plus tail;
// here a[0] of the prefix is ignored and a(n) couples n, n+1 directly.
inline HalfLineOperator standalone_operator(std::vector<real> b, std::vector<real> a,
                                            TailRule tail = ConstantTail{}) {
    HalfLineCoefficients h{std::move(b), {}, std::move(tail)};
    h.a_prefix.insert(h.a_prefix.begin(), 0.0);  // placeholder so h.a(n) is the n-th weight
    h.a_prefix.insert(h.a_prefix.end(), a.begin(), a.end());
    HalfLineOperator op;
    op.bf = [h](long n) { return h.b(n); };
    op.af = [h](long n) { return h.a(n); };
    long cf = h.constant_from();
    if (cf > 0) {
        op.const_from = cf;
        op.bc = std::get<ConstantTail>(h.tail).b;
        op.ac = std::get<ConstantTail>(h.tail).a;
    }
    if (std::holds_alternative<GeneratorTail>(h.tail)) {
        const auto& g = std::get<GeneratorTail>(h.tail);
        op.depth_limit = g.depth_limit;
        // generator indices are halfline-style: b at i>=1, a at i>=0
        auto gb = g.b, ga = g.a;
        size_t npb = h.b_prefix.size(), npa = h.a_prefix.size();
        op.bf = [h](long n) { return h.b(n); };
        op.af = [h, ga, npa](long n) {
            return n < static_cast<long>(npa) ? h.a(n) : ga(n - static_cast<long>(npa));
        };
        (void)gb; (void)npb;
    }
    return op;
}

inline HalfLineOperator free_operator() {
    HalfLineOperator op;
    op.bf = [](long) { return 0.0; };
    op.af = [](long) { return 1.0; };
    op.const_from = 1;
    op.bc = 0.0;
    op.ac = 1.0;
    return op;
}

// ---------------------------------------------------------------------------
// Solutions of the eigenvalue equation with boundary condition
// u_0 cos(theta) + u_1 sin(theta) = 0, seeded as (u_0, u_1) = (-sin t, cos t).
// ---------------------------------------------------------------------------

struct BoundaryCondition {
    real theta = 0.0;  // in [0, pi); 0 is Dirichlet
    BoundaryCondition() = default;
    explicit BoundaryCondition(real t) : theta(t) {
        if (!(t >= 0.0 && t < kPi)) throw std::invalid_argument("theta must be in [0, pi)");
    }
};

// Values are kept as mantissa * exp(logscale) with renormalization, so that
// exponentially growing solutions at energies off the essential spectrum stay
// representable out to lengths ~ 1e4 and beyond.
struct HalfLineSolution {
    real energy = 0.0;
    BoundaryCondition boundary;
    std::vector<real> mant;  // index n = 0..length
    std::vector<real> logs;

    long length() const { return static_cast<long>(mant.size()) - 1; }
    real log_abs(long n) const {
        return mant[n] == 0 ? -std::numeric_limits<real>::infinity()
                            : logs[n] + std::log(std::abs(mant[n]));
    }
    real value(long n) const { return mant[n] * std::exp(logs[n]); }  // may overflow
    int sign(long n) const { return (mant[n] > 0) - (mant[n] < 0); }
};

inline HalfLineSolution iterate_from_seed(const HalfLineOperator& op, real E, real seed_u0,
                                          real seed_u1, long length) {
    if (length < 2) throw std::invalid_argument("iterate_solution: length must be >= 2");
    HalfLineSolution sol;
    sol.energy = E;
    sol.mant.resize(length + 1);
    sol.logs.resize(length + 1);
    real u0 = seed_u0, u1 = seed_u1, scale = 0.0;
    sol.mant[0] = u0;
    sol.logs[0] = 0.0;
    sol.mant[1] = u1;
    sol.logs[1] = 0.0;
    real am = 1.0;  // a_{n-1}, with a_0 = 1
    for (long n = 1; n < length; ++n) {
        real an = op.a(n);
        real u2 = ((E - op.b(n)) * u1 - am * u0) / an;
        real s = std::max(std::abs(u2), std::abs(u1));
        if (s > 1e140 || (s > 0 && s < 1e-140)) {
            u1 /= s;
            u2 /= s;
            scale += std::log(s);
        }
        sol.mant[n + 1] = u2;
        sol.logs[n + 1] = scale;
        u0 = sol.mant[n] * std::exp(sol.logs[n] - scale);  // re-express u_n on current scale
        u1 = u2;
        am = an;
    }
    return sol;
}

inline HalfLineSolution iterate_solution(const HalfLineOperator& op, real E,
                                         BoundaryCondition bc, long length) {
    auto sol = iterate_from_seed(op, E, -std::sin(bc.theta), std::cos(bc.theta), length);
    sol.boundary = bc;
    return sol;
}

// Minimal solution by backward recurrence (Miller's scheme): seeded far out
// with (1, 0) and iterated down, the dominant direction dies off and the
// returned values follow the decaying/subordinate solution. The forward
// recurrence cannot do this: roundoff reinjects the growing solution within a
// few dozen sites. Normalized so that value(1) = match_u1.
inline HalfLineSolution minimal_solution(const HalfLineOperator& op, real E, long length,
                                         real match_u1 = 1.0) {
    long start = std::max(length + 256, 2 * length);
    HalfLineSolution sol;
    sol.energy = E;
    sol.mant.assign(start + 2, 0.0);
    sol.logs.assign(start + 2, 0.0);
    real v1 = 1.0, v2 = 0.0, scale = 0.0;  // v1 = v_n, v2 = v_{n+1}
    sol.mant[start] = v1;
    sol.mant[start + 1] = v2;
    for (long n = start; n >= 2; --n) {
        real v0 = ((E - op.b(n)) * v1 - op.a(n) * v2) / op.a(n - 1);
        real s = std::max(std::abs(v0), std::abs(v1));
        if (s > 1e140 || (s > 0 && s < 1e-140)) {
            v0 /= s;
            v1 /= s;
            scale += std::log(s);
        }
        sol.mant[n - 1] = v0;
        sol.logs[n - 1] = scale;
        v2 = sol.mant[n] * std::exp(sol.logs[n] - scale);
        v1 = v0;
    }
    if (sol.mant[1] == 0.0)
        throw std::runtime_error("minimal_solution: vanishes at site 1; cannot renormalize");
    // renormalize to value(1) = match_u1; logs are relative, so shift them
    real dlog = std::log(std::abs(match_u1)) - sol.log_abs(1);
    real sgn = (match_u1 < 0) == (sol.mant[1] < 0) ? 1.0 : -1.0;
    for (long n = 0; n <= start + 1; ++n) {
        sol.mant[n] *= sgn;
        sol.logs[n] += dlog;
    }
    // formal boundary value from the site-1 equation with a_0 = 1
    real base = sol.logs[1];
    sol.mant[0] = (E - op.b(1)) * sol.mant[1] -
                  op.a(1) * sol.mant[2] * std::exp(sol.logs[2] - base);
    sol.logs[0] = base;
    sol.mant.resize(length + 1);
    sol.logs.resize(length + 1);
    return sol;
}

// ||u||_L with the fractional weight on the last term, as a log-magnitude.
inline LogValue truncated_norm(const HalfLineSolution& u, real L) {
    if (L <= 0) throw std::invalid_argument("truncated_norm: L must be positive");
    long lfloor = static_cast<long>(std::floor(L));
    real frac = L - static_cast<real>(lfloor);
    if (u.length() < lfloor + (frac > 0 ? 1 : 0))
        throw std::invalid_argument("truncated_norm: solution not computed far enough");
    real mx = -std::numeric_limits<real>::infinity();
    for (long n = 1; n <= lfloor; ++n) mx = std::max(mx, u.log_abs(n));
    if (frac > 0) mx = std::max(mx, u.log_abs(lfloor + 1));
    if (std::isinf(mx)) return LogValue{};  // identically zero prefix
    real s = 0.0;
    for (long n = 1; n <= lfloor; ++n) s += std::exp(2.0 * (u.log_abs(n) - mx));
    if (frac > 0) s += frac * std::exp(2.0 * (u.log_abs(lfloor + 1) - mx));
    return LogValue{mx + 0.5 * std::log(s)};
}

// a_n (u_{n+1} v_n - u_n v_{n+1}); constant in n for two solutions at the same E.
inline real wronskian(const HalfLineOperator& op, const HalfLineSolution& u,
                      const HalfLineSolution& v, long n) {
    real t1 = u.sign(n + 1) * v.sign(n) * std::exp(u.log_abs(n + 1) + v.log_abs(n));
    real t2 = u.sign(n) * v.sign(n + 1) * std::exp(u.log_abs(n) + v.log_abs(n + 1));
    return op.a(n) * (t1 - t2);
}

}  // namespace starjac

#endif
