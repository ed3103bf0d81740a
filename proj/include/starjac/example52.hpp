#ifndef STARJAC_EXAMPLE52_HPP
#define STARJAC_EXAMPLE52_HPP

#include "starjac/classify.hpp"
#include "starjac/stieltjes_proc.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// The triangle counterexample: a triangle with three half-lines whose branch
// operators are built from two measures on [0, 1],
//   mu1 = 1/2 delta_0 + 1/2 Uniform[0,1]   (atom at zero)
//   mu2 = 1/(2 sqrt(x)) dx                 (divergent Borel transform at zero)
// via the moments->Jacobi correspondence. Each branch carries the pi/4
// boundary twist, i.e. the raw matrix plus one at the origin diagonal.
//
// Branches one and two are the mu1 operator; branch three is the mu2
// operator. With that placement the two distinguished solutions at E = 0 are
//   psi   = (phi1 on G1, -phi1 on G2, 0 on G3)  -- square-summable,
//   psit  = (phi1 on G1, 0 on G2, phi2 on G3)   -- not square-summable,
// so zero is a simple eigenvalue while dim S(0) = 2.
//
// mu1's operator is computed by the Lanczos run to a finite prefix; the
// leftover displacement of its zero eigenvalue (about 1e-11 at depth 400) is
// measured and removed by an energy shift so that the distinguished energy
// sits at exactly 0. mu2's coefficients have a closed form (Legendre even
// sublattice), used as an exact generator tail.
// ---------------------------------------------------------------------------

struct Example52Options {
    int mu1_prefix = 400;
    long mu2_depth_limit = 4'000'000;
    bool recenter_atom = true;
};

struct Example52 {
    StarLikeGraph graph;
    JacobiCoefficients coeffs;
    MeasureSpec mu1, mu2;
    JacobiPrefix mu1_prefix;      // raw (theta-twisted) coefficients before the shift
    real atom_offset = 0.0;       // measured eigenvalue displacement that was removed
    // branch placement: which measure each root carries
    std::map<std::string, std::string> branch_measure;
};

namespace detail {

// locate the small eigenvalue of the prefix+tail operator near zero through
// the pole of its m-function on the real axis
inline real locate_pole_near_zero(const HalfLineOperator& op, real window = 1e-3) {
    MFunctionEvaluator ev(op);
    auto f = [&](real E) { return (1.0 / ev.evaluate_uncached(cplx(E, 0.0))).real(); };
    real edge = op.bc - 2 * std::abs(op.ac);  // essential-spectrum edge of the tail
    real hi = std::min(window, edge - 1e-13), lo = -window;
    real flo = f(lo), prev = flo, prevE = lo;
    const int grid = 256;
    for (int i = 1; i <= grid; ++i) {
        real E = lo + (hi - lo) * i / grid;
        real cur = f(E);
        if (prev * cur < 0) {
            real a = prevE, b = E, fa = prev;
            for (int it = 0; it < 200; ++it) {
                real mid = 0.5 * (a + b), fm = f(mid);
                if (fa * fm <= 0) b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            return 0.5 * (a + b);
        }
        prev = cur;
        prevE = E;
    }
    return 0.0;  // no pole found in the window
}

}  // namespace detail

inline Example52 build_example_5_2(Example52Options o = {}) {
    Example52 out;
    out.mu1 = MeasureSpec::uniform(0.0, 1.0, 0.5).add_atom(0.0, 0.5);
    out.mu2 = MeasureSpec::power_law(-0.5);

    out.mu1_prefix = jacobi_from_moments(moments(out.mu1, 2 * o.mu1_prefix + 1));
    if (o.recenter_atom) {
        out.atom_offset = detail::locate_pole_near_zero(out.mu1_prefix.with_constant_tail());
        for (auto& b : out.mu1_prefix.b) b -= out.atom_offset;
    }
    const auto& J1 = out.mu1_prefix;

    out.graph.compact_vertices = {"v1", "v2", "v3"};
    out.graph.compact_edges = {{"v1", "v2"}, {"v2", "v3"}, {"v1", "v3"}};
    out.graph.halfline_roots = {"v1", "v2", "v3"};
    for (auto& [u, v] : out.graph.compact_edges)
        out.coeffs.a_compact[EdgeKey(u, v)] = 1.0;

    // mu1 branches on v1 and v2: prefix plus constant tail, origin twisted by +1
    HalfLineCoefficients h1;
    for (size_t i = 1; i < J1.b.size(); ++i) h1.b_prefix.push_back(J1.b[i]);
    for (size_t i = 0; i < J1.a.size(); ++i) h1.a_prefix.push_back(J1.a[i]);
    h1.tail = ConstantTail{J1.b.back(), J1.a.back()};
    for (auto v : {"v1", "v2"}) {
        out.coeffs.b_compact[v] = J1.b.front() + 1.0;
        out.coeffs.halflines[v] = h1;
        out.branch_measure[v] = "mu1";
    }

    // mu2 branch on v3: exact closed-form generator
    GeneratorTail g2;
    g2.name = "sqrt-density";
    g2.b = [](long i) { return sqrt_density_b(i + 1); };
    g2.a = [](long i) { return sqrt_density_a(i + 1); };
    g2.depth_limit = o.mu2_depth_limit;
    HalfLineCoefficients h2;
    h2.tail = g2;
    out.coeffs.b_compact["v3"] = sqrt_density_b(1) + 1.0;
    out.coeffs.halflines["v3"] = h2;
    out.branch_measure["v3"] = "mu2";
    return out;
}

// the raw (untwisted) branch operator whose spectral measure is the source
// measure: the slice minus the rank-one twist at the origin
inline HalfLineOperator example52_branch_theta_operator(const Example52& ex,
                                                        const std::string& root) {
    auto op = slice_operator(ex.graph, ex.coeffs, root);
    HalfLineOperator raw = op;
    auto bf = op.bf;
    raw.bf = [bf](long n) { return n == 1 ? bf(1) - 1.0 : bf(n); };
    if (raw.const_from == 1) raw.const_from = 2;  // origin no longer matches the tail
    return raw;
}

}  // namespace starjac

#endif
