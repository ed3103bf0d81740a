#ifndef STARJAC_MEASURE_HPP
#define STARJAC_MEASURE_HPP

#include <Eigen/Dense>
#include <vector>

#include "starjac/core.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Probability measures on a bounded interval: atoms plus a registry of named
// densities. Each density kind knows an exact discretization (a substitution
// that turns its quadrature into a polynomial-exact rule), which doubles as
// the weighted point set the Stieltjes procedure runs on.
// ---------------------------------------------------------------------------

struct Atom {
    real location = 0.0, weight = 0.0;
};

struct DensityComponent {
    enum class Kind { uniform, power_law, semicircle, table } kind = Kind::uniform;
    real lo = 0.0, hi = 1.0;   // support for uniform/table
    real p = 0.0;              // exponent for power_law (c * x^p on (0,1))
    real radius = 2.0;         // semicircle support [-r, r]
    std::vector<real> xs, ys;  // table nodes (linear interpolation)
    real weight = 1.0;         // total mass of the component
};

struct MeasureSpec {
    std::vector<Atom> atoms;
    std::vector<DensityComponent> densities;

    real total_mass() const {
        real m = 0;
        for (auto& a : atoms) m += a.weight;
        for (auto& d : densities) m += d.weight;
        return m;
    }
    bool has_density() const { return !densities.empty(); }

    static MeasureSpec point(real x, real w = 1.0) { return {{{x, w}}, {}}; }
    static MeasureSpec uniform(real lo, real hi, real w = 1.0) {
        DensityComponent d;
        d.kind = DensityComponent::Kind::uniform;
        d.lo = lo;
        d.hi = hi;
        d.weight = w;
        return {{}, {d}};
    }
    static MeasureSpec power_law(real p, real w = 1.0) {
        DensityComponent d;
        d.kind = DensityComponent::Kind::power_law;
        d.p = p;
        d.weight = w;
        return {{}, {d}};
    }
    static MeasureSpec semicircle(real radius = 2.0, real w = 1.0) {
        DensityComponent d;
        d.kind = DensityComponent::Kind::semicircle;
        d.radius = radius;
        d.weight = w;
        return {{}, {d}};
    }
    MeasureSpec& add_atom(real x, real w) {
        atoms.push_back({x, w});
        return *this;
    }
};

inline void check_probability(const MeasureSpec& s) {
    if (std::abs(s.total_mass() - 1.0) > 1e-12)
        throw std::invalid_argument("MeasureSpec: total mass must be 1");
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int m, std::vector<real>& x, std::vector<real>& w) {
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        real t = std::cos(kPi * (i + 0.75) / (m + 0.5));
        real p0 = 0, p1 = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= m; ++k) {
                real p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
            real dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[m - 1 - i] = t;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// weighted point-set discretization that integrates polynomials of degree
// <= 2m-1 against the measure exactly (atoms exactly always)
inline void discretize(const MeasureSpec& s, int m, std::vector<real>& x, std::vector<real>& w) {
    x.clear();
    w.clear();
    for (auto& a : s.atoms) {
        x.push_back(a.location);
        w.push_back(a.weight);
    }
    std::vector<real> gx, gw;
    for (auto& d : s.densities) {
        switch (d.kind) {
            case DensityComponent::Kind::uniform: {
                gauss_legendre(m, gx, gw);
                for (int i = 0; i < m; ++i) {
                    x.push_back(d.lo + 0.5 * (gx[i] + 1) * (d.hi - d.lo));
                    w.push_back(d.weight * 0.5 * gw[i]);
                }
                break;
            }
            case DensityComponent::Kind::power_law: {
                // c x^p on (0,1): u = x^{p+1} turns the integral into a plain
                // unit-interval one of f(u^{1/(p+1)})
                if (d.p <= -1.0) throw std::invalid_argument("power_law: p must exceed -1");
                gauss_legendre(m, gx, gw);
                for (int i = 0; i < m; ++i) {
                    real u = 0.5 * (gx[i] + 1);
                    x.push_back(std::pow(u, 1.0 / (d.p + 1.0)));
                    w.push_back(d.weight * 0.5 * gw[i]);
                }
                break;
            }
            case DensityComponent::Kind::semicircle: {
                // Chebyshev rule of the second kind, exact for the semicircle
                for (int j = 1; j <= m; ++j) {
                    real phi = kPi * j / (m + 1);
                    x.push_back(d.radius * std::cos(phi));
                    w.push_back(d.weight * 2.0 / (m + 1) * std::sin(phi) * std::sin(phi));
                }
                break;
            }
            case DensityComponent::Kind::table: {
                // piecewise-linear density: 4-point Gauss per interval
                gauss_legendre(4, gx, gw);
                real norm = 0;
                for (size_t i = 0; i + 1 < d.xs.size(); ++i)
                    norm += 0.5 * (d.ys[i] + d.ys[i + 1]) * (d.xs[i + 1] - d.xs[i]);
                for (size_t i = 0; i + 1 < d.xs.size(); ++i) {
                    real a = d.xs[i], b = d.xs[i + 1];
                    for (int q = 0; q < 4; ++q) {
                        real t = a + 0.5 * (gx[q] + 1) * (b - a);
                        real y = d.ys[i] + (d.ys[i + 1] - d.ys[i]) * (t - a) / (b - a);
                        x.push_back(t);
                        w.push_back(d.weight * y / norm * 0.5 * gw[q] * (b - a));
                    }
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Power moments m_k = int x^k dmu, with an error estimate from doubling the
// quadrature order.
// ---------------------------------------------------------------------------

struct MomentSequence {
    std::vector<real> moments;      // m_0 .. m_{count-1}
    std::vector<real> abs_moments;  // int |x|^k dmu: the natural error scale
    MeasureSpec source;
    real quad_error = 0.0;
};

inline void raw_moments(const MeasureSpec& s, int count, int m, std::vector<real>& mom,
                        std::vector<real>& abs_mom) {
    std::vector<real> x, w;
    discretize(s, m, x, w);
    mom.assign(count, 0.0);
    abs_mom.assign(count, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        real pw = w[i], apw = std::abs(w[i]);
        for (int k = 0; k < count; ++k) {
            mom[k] += pw;
            abs_mom[k] += apw;
            pw *= x[i];
            apw *= std::abs(x[i]);
        }
    }
}

inline MomentSequence moments(const MeasureSpec& s, int count) {
    check_probability(s);
    MomentSequence out;
    out.source = s;
    int m = std::max(count, 64);
    std::vector<real> coarse, fine, am;
    raw_moments(s, count, m, coarse, am);
    raw_moments(s, count, 2 * m, fine, am);
    // error relative to the absolute moment: odd moments of symmetric measures
    // cancel to zero while the summands grow with the support radius
    for (int k = 0; k < count; ++k)
        out.quad_error =
            std::max(out.quad_error, std::abs(coarse[k] - fine[k]) / std::max(1.0, am[k]));
    out.moments = std::move(fine);
    out.abs_moments = std::move(am);
    if (out.quad_error > 1e-12)
        throw std::runtime_error("moments: quadrature did not converge to 1e-12");
    return out;
}

}  // namespace starjac

#endif
