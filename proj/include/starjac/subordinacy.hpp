#ifndef STARJAC_SUBORDINACY_HPP
#define STARJAC_SUBORDINACY_HPP

#include "starjac/mfunction.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Subordinacy detection on a half-line: a solution u_theta is subordinate when
// ||u_theta||_L / ||u_perp||_L -> 0.
//
// Every boundary solution is u_theta = cos(t) u_A + sin(t) u_B with u_A the
// Dirichlet solution (seed (0,1)) and u_B the Neumann-type one (seed (-1,0)).
// With G(L) the 2x2 Gram matrix of truncated inner products of (u_A, u_B),
// the minimum over t of ||u_t||_L / ||u_{t+pi/2}||_L equals
// sqrt(lmin(G)/lmax(G)), attained at the small eigenvector. Minimizing at
// every L removes the resolution plateau a fixed theta grid would have: the
// recorded ratio sequence genuinely decreases when a subordinate solution
// exists.
// ---------------------------------------------------------------------------

enum class SubordinacyKind { subordinate_exists, no_subordinate, inconclusive };

struct SubordinacyOptions {
    real l_max = 1e4;
    real decision_threshold = 1e-2;  // ratio below this at the largest L
    real band_lo = 0.2;              // ratio never below this means no subordinate
    int monotone_window = 5;         // decreasing over this many checkpoints
    int checkpoints_per_decade = 8;
    real gram_floor = 3e-6;          // ratio resolution limit of the Gram determinant
};

struct SubordinacyVerdict {
    real energy = 0.0;
    SubordinacyKind kind = SubordinacyKind::inconclusive;
    std::optional<BoundaryCondition> subordinate_seed;
    std::vector<std::pair<real, real>> evidence;  // (L, min-over-theta norm ratio)
    real decay_exponent = 0.0;  // d log(ratio) / d log(L) over the last resolvable decade
};

namespace detail {

inline std::vector<real> geometric_checkpoints(real l_max, int per_decade) {
    std::vector<real> ls;
    real l = 10.0;
    real f = std::pow(10.0, 1.0 / per_decade);
    while (l < l_max) {
        ls.push_back(l);
        l *= f;
    }
    ls.push_back(l_max);
    return ls;
}

// running 2x2 Gram accumulator with a shared log scale
struct GramAcc {
    real aa = 0, ab = 0, bb = 0;
    real log_scale = 0;

    void add(real la, int sa, real lb, int sb, real weight) {
        real mx = std::max(la, lb);
        if (std::isfinite(mx) && 2 * (mx - log_scale) > 280) {
            real damp = std::exp(-2 * (mx - log_scale));
            aa *= damp;
            bb *= damp;
            ab *= damp;
            log_scale = mx;
        }
        real taa = std::exp(2 * (la - log_scale));
        real tbb = std::exp(2 * (lb - log_scale));
        real tab = sa * sb * std::exp(la + lb - 2 * log_scale);
        aa += weight * taa;
        bb += weight * tbb;
        ab += weight * tab;
        real big = std::max(aa, bb);
        if (big > 1e140) {
            aa /= big;
            bb /= big;
            ab /= big;
            log_scale += 0.5 * std::log(big);
        }
    }
    // sqrt(lmin/lmax) via lmin = det/lmax, stable when det is tiny
    real min_ratio() const {
        real tr = aa + bb;
        real det = aa * bb - ab * ab;
        if (det <= 0) return 0.0;
        real lmax = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4 * det, 0.0)));
        return std::sqrt(det / (lmax * lmax));
    }
    real min_angle() const {  // boundary angle of the small eigenvector, in [0, pi)
        real tr = aa + bb;
        real det = aa * bb - ab * ab;
        real lmax = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4 * det, 0.0)));
        real lmin = lmax > 0 ? det / lmax : 0.0;
        // (G - lmin) q = 0: q ~ (ab, lmin - aa) or (lmin - bb, ab)
        real qx, qy;
        if (std::abs(ab) + std::abs(lmin - aa) > std::abs(lmin - bb) + std::abs(ab)) {
            qx = ab;
            qy = lmin - aa;
        } else {
            qx = lmin - bb;
            qy = ab;
        }
        if (qx == 0 && qy == 0) return 0.0;
        real t = std::atan2(qy, qx);
        if (t < 0) t += kPi;
        if (t >= kPi) t -= kPi;
        return t;
    }
};

}  // namespace detail

inline SubordinacyVerdict detect_subordinate(const HalfLineOperator& op, real E,
                                             SubordinacyOptions o = {},
                                             std::optional<BoundaryCondition> m_candidate = {}) {
    if (o.l_max < 100) throw std::invalid_argument("detect_subordinate: l_max must be >= 100");
    SubordinacyVerdict out;
    out.energy = E;
    const long len = static_cast<long>(std::ceil(o.l_max)) + 2;
    auto uA = iterate_solution(op, E, BoundaryCondition(0.0), len);
    auto uB = iterate_solution(op, E, BoundaryCondition(kPi / 2), len);

    auto ls = detail::geometric_checkpoints(o.l_max, o.checkpoints_per_decade);
    detail::GramAcc G;
    size_t next = 0;
    real last_angle = 0.0;
    for (long n = 1; n <= len && next < ls.size(); ++n) {
        while (next < ls.size() && static_cast<real>(n) > std::floor(ls[next]) + 0.5) {
            // snapshot at checkpoint L in [n-1, n): fractional last term
            real L = ls[next];
            detail::GramAcc snap = G;
            real frac = L - std::floor(L);
            long nf = static_cast<long>(std::floor(L)) + 1;
            if (frac > 0 && nf <= len)
                snap.add(uA.log_abs(nf), uA.sign(nf), uB.log_abs(nf), uB.sign(nf), frac);
            out.evidence.emplace_back(L, snap.min_ratio());
            last_angle = snap.min_angle();
            ++next;
        }
        G.add(uA.log_abs(n), uA.sign(n), uB.log_abs(n), uB.sign(n), 1.0);
    }
    while (next < ls.size()) {  // trailing checkpoints exactly at len
        out.evidence.emplace_back(ls[next], G.min_ratio());
        last_angle = G.min_angle();
        ++next;
    }

    const int m = static_cast<int>(out.evidence.size());
    int last_above = -1;
    for (int i = 0; i < m; ++i)
        if (out.evidence[i].second > o.gram_floor) last_above = i;

    int hi = last_above < 0 ? 0 : last_above;
    int lo = std::max(0, hi - o.checkpoints_per_decade);
    if (hi > lo)
        out.decay_exponent = std::log(out.evidence[hi].second / out.evidence[lo].second) /
                             std::log(out.evidence[hi].first / out.evidence[lo].first);

    bool below = out.evidence.back().second < o.decision_threshold;
    // monotone over the trailing window that is still above the Gram floor
    bool monotone = true;
    if (last_above >= o.monotone_window) {
        for (int i = last_above - o.monotone_window + 1; i <= last_above; ++i)
            if (out.evidence[i].second >= out.evidence[i - 1].second) monotone = false;
    }
    // else: the ratio collapsed below resolution almost immediately
    if (below && monotone) {
        out.kind = SubordinacyKind::subordinate_exists;
        real theta = last_angle;
        // prefer the boundary-value candidate when it agrees with the Gram angle
        if (m_candidate) {
            real d = std::abs(m_candidate->theta - theta);
            d = std::min(d, kPi - d);
            if (d < 5e-2) theta = m_candidate->theta;
        }
        out.subordinate_seed = BoundaryCondition(theta);
        return out;
    }
    bool banded = true;
    for (auto& [L, r] : out.evidence)
        if (r < o.band_lo) banded = false;
    out.kind = banded ? SubordinacyKind::no_subordinate : SubordinacyKind::inconclusive;
    return out;
}

}  // namespace starjac

#endif
