#ifndef STARJAC_STIELTJES_HPP
#define STARJAC_STIELTJES_HPP

#include "starjac/ladder.hpp"
#include "starjac/mfunction.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Stieltjes inversion: recover the density Im m(E+i0)/pi and point masses
// lim eps * Im m(E + i eps) from ladder samples of a Borel transform.
// ---------------------------------------------------------------------------

struct MLadderSamples {
    std::vector<real> energies;
    std::vector<real> eps;                 // decreasing
    std::vector<std::vector<cplx>> values; // values[i][j] = m(E_i + i eps_j)
};

template <class MFun>
inline MLadderSamples sample_ladder(MFun&& m, const std::vector<real>& energies,
                                    const std::vector<real>& eps) {
    MLadderSamples s;
    s.energies = energies;
    s.eps = eps;
    for (real E : energies) {
        std::vector<cplx> row;
        row.reserve(eps.size());
        for (real e : eps) row.push_back(m(cplx(E, e)));
        s.values.push_back(std::move(row));
    }
    return s;
}

struct StieltjesResult {
    std::vector<real> density;                  // per grid energy; NaN when divergent there
    std::vector<std::pair<real, real>> atoms;   // (location, weight)
};

struct StieltjesOptions {
    real atom_weight_floor = 1e-4;  // smaller extrapolated masses are noise
    LadderOptions ladder;
};

inline StieltjesResult stieltjes_invert(const MLadderSamples& s, StieltjesOptions o = {}) {
    StieltjesResult out;
    const size_t ne = s.energies.size(), nl = s.eps.size();
    out.density.assign(ne, std::numeric_limits<real>::quiet_NaN());
    std::vector<cplx> seq(nl);
    real best_weight = 0.0, best_loc = 0.0;
    bool in_atom = false;
    for (size_t i = 0; i < ne; ++i) {
        for (size_t j = 0; j < nl; ++j) seq[j] = s.values[i][j].imag() / kPi;
        auto dens = extrapolate_ladder(seq, s.eps, o.ladder);
        if (dens.status == LadderStatus::converged) out.density[i] = dens.limit.real();
        // point-mass detector: eps * Im m converging to a positive limit
        for (size_t j = 0; j < nl; ++j) seq[j] = s.eps[j] * s.values[i][j].imag();
        auto mass = extrapolate_ladder(seq, s.eps, o.ladder);
        real w = mass.status == LadderStatus::converged ? mass.limit.real() : 0.0;
        if (w > o.atom_weight_floor) {
            if (!in_atom || w > best_weight) {
                best_weight = w;
                best_loc = s.energies[i];
            }
            in_atom = true;
        } else if (in_atom) {
            out.atoms.emplace_back(best_loc, best_weight);
            in_atom = false;
            best_weight = 0.0;
        }
    }
    if (in_atom) out.atoms.emplace_back(best_loc, best_weight);
    return out;
}

// Convenience wrapper: sample a Borel transform on a uniform grid, invert, and
// sharpen atom locations by a local golden-section search on eps*Im m.
template <class MFun>
inline StieltjesResult stieltjes_invert(MFun&& m, real lo, real hi, int grid_points,
                                        StieltjesOptions o = {}) {
    std::vector<real> energies;
    for (int i = 0; i <= grid_points; ++i)
        energies.push_back(lo + (hi - lo) * i / grid_points);
    auto samples = sample_ladder(m, energies, epsilon_ladder(o.ladder));
    auto res = stieltjes_invert(samples, o);
    const real eps_min = samples.eps.back();
    const real gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (auto& [loc, w] : res.atoms) {
        // the peak of |m(E + i eps)| has width ~ eps, so the probe height must
        // shrink together with the bracket for the search to see it
        real span = (hi - lo) / grid_points;
        real a = loc - span, b = loc + span;
        real probe = std::max(span, eps_min);
        while (true) {
            auto f = [&](real E) { return -std::abs(m(cplx(E, probe))); };
            real x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            for (int it = 0; it < 24 && b - a > 0.05 * probe; ++it) {
                if (f(x1) < f(x2)) b = x2;
                else a = x1;
                x1 = b - gr * (b - a);
                x2 = a + gr * (b - a);
            }
            if (probe <= eps_min) break;
            probe = std::max(probe / 64, eps_min);
            real mid = 0.5 * (a + b), half = std::max(8 * probe, 0.25 * (b - a));
            a = mid - half;
            b = mid + half;
        }
        loc = 0.5 * (a + b);
        // re-extrapolate the weight at the sharpened location
        std::vector<cplx> seq;
        for (real e : samples.eps) seq.push_back(e * m(cplx(loc, e)).imag());
        auto mass = extrapolate_ladder(seq, samples.eps, o.ladder);
        if (mass.status == LadderStatus::converged) w = mass.limit.real();
    }
    return res;
}

}  // namespace starjac

#endif
