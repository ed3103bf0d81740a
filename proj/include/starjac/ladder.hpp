#ifndef STARJAC_LADDER_HPP
#define STARJAC_LADDER_HPP

#include <vector>

#include "starjac/core.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Boundary values F(E + i0) are approached down a geometric epsilon ladder
// eps_j = 2^-j. Limits are Richardson/Aitken extrapolated; divergence is
// pre-tested by the growth of log|F| against log(1/eps). Rates are unknown in
// general (the theory guarantees limits a.e. but no rates), so everything here
// is a documented heuristic with error estimates attached.
// ---------------------------------------------------------------------------

struct LadderOptions {
    int j_min = 3;
    int j_max = 30;
    real divergence_slope = 0.4;   // log|F| growth exponent in 1/eps
    int fit_window = 8;
};

inline std::vector<real> epsilon_ladder(const LadderOptions& o) {
    std::vector<real> eps;
    for (int j = o.j_min; j <= o.j_max; ++j) eps.push_back(std::ldexp(1.0, -j));
    return eps;
}

enum class LadderStatus { converged, divergent, inconclusive };

struct LadderResult {
    LadderStatus status = LadderStatus::inconclusive;
    cplx limit = 0.0;
    real error = std::numeric_limits<real>::infinity();
    real growth_exponent = 0.0;  // |F| ~ eps^-p when divergent
};

inline LadderResult extrapolate_ladder(const std::vector<cplx>& F, const std::vector<real>& eps,
                                       const LadderOptions& o = {}) {
    LadderResult out;
    const int m = static_cast<int>(F.size());
    if (m < 4 || eps.size() != F.size()) return out;

    // divergence pre-test: least-squares slope of log|F| against log(1/eps)
    int w = std::min(o.fit_window, m);
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = m - w; i < m; ++i) {
        if (std::abs(F[i]) == 0) continue;
        real x = -std::log(eps[i]), y = std::log(std::abs(F[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt >= 3) {
        real slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        if (slope > o.divergence_slope && std::abs(F[m - 1]) > 10.0 * (1.0 + std::abs(F[0]))) {
            out.status = LadderStatus::divergent;
            out.growth_exponent = slope;
            out.limit = F[m - 1];
            return out;
        }
    }

    // Aitken acceleration on the tail; two anchors give an error estimate
    auto aitken = [&](int k) -> std::pair<cplx, bool> {
        cplx d1 = F[k + 1] - F[k], d2 = F[k + 2] - F[k + 1];
        cplx den = d2 - d1;
        if (std::abs(den) < 1e-300) return {F[k + 2], true};  // flat already
        return {F[k + 2] - d2 * d2 / den, true};
    };
    real scale = 1.0 + std::abs(F[m - 1]);
    cplx dlast = F[m - 1] - F[m - 2];
    // already flat: the tail sits inside the evaluation noise floor
    real recent = std::abs(dlast);
    for (int k = m - 2; k >= std::max(1, m - 3); --k)
        recent = std::max(recent, std::abs(F[k] - F[k - 1]));
    if (recent <= 3e-8 * scale) {
        out.status = LadderStatus::converged;
        out.limit = F[m - 1];
        out.error = recent + 1e-14 * scale;
        return out;
    }
    // otherwise require the deltas to be contracting on the tail
    cplx dprev = F[m - 2] - F[m - 3];
    real r = std::abs(dlast) / std::max(std::abs(dprev), 1e-300);
    if (r > 0.97) {
        out.status = LadderStatus::inconclusive;
        out.limit = F[m - 1];
        return out;
    }
    auto [e1, ok1] = aitken(m - 3);
    auto [e2, ok2] = aitken(m - 4);
    out.status = LadderStatus::converged;
    out.limit = e1;
    out.error = std::abs(e1 - e2) + std::abs(dlast) * r / std::max(1.0 - r, 0.05) * 0.5;
    return out;
}

}  // namespace starjac

#endif
