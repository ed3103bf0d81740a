#include <doctest.h>

#include "starjac/subordinacy.hpp"
#include "support.hpp"

using namespace starjac;

TEST_CASE("iterate_solution: free line at E=0 with Dirichlet seed is 1,0,-1,0,...") {
    auto sol = iterate_solution(free_operator(), 0.0, BoundaryCondition(0.0), 12);
    real expect[] = {0, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0};
    for (long n = 0; n <= 12; ++n) CHECK(sol.value(n) == doctest::Approx(expect[n]));
}

TEST_CASE("iterate_solution: free line at E=3 grows like the large root") {
    auto sol = iterate_solution(free_operator(), 3.0, BoundaryCondition(0.0), 4000);
    real lam = (3.0 + std::sqrt(5.0)) / 2.0;
    // growth rate from far-out values; renormalization must not disturb it
    real rate = (sol.log_abs(3500) - sol.log_abs(2500)) / 1000.0;
    CHECK(rate == doctest::Approx(std::log(lam)).epsilon(1e-10));
}

TEST_CASE("iterate_solution: Neumann-type seed at theta = pi/2") {
    auto sol = iterate_solution(free_operator(), 1.3, BoundaryCondition(kPi / 2), 5);
    CHECK(sol.value(0) == doctest::Approx(-1.0));
    CHECK(sol.value(1) == doctest::Approx(0.0));
}

TEST_CASE("recurrence residual stays small relative to local magnitudes") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<real> bd(-2, 2);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<real> b(50), a(50);
        for (auto& x : b) x = bd(rng);
        for (auto& x : a) do { x = bd(rng); } while (std::abs(x) < 0.1);
        auto op = standalone_operator(b, a, ConstantTail{bd(rng), 1.0});
        real E = 3.0 * bd(rng) / 2.0;
        real theta = std::uniform_real_distribution<real>(0, kPi)(rng);
        auto u = iterate_solution(op, E, BoundaryCondition(theta), 2000);
        real mx = std::max({std::abs(E), op.b(1), 2.0});
        for (long n : {5L, 100L, 777L, 1998L}) {
            real base = u.logs[n + 1];
            real un1 = u.mant[n + 1];
            real un = u.mant[n] * std::exp(u.logs[n] - base);
            real um = u.mant[n - 1] * std::exp(u.logs[n - 1] - base);
            real resid = std::abs(op.a(n) * un1 - (E - op.b(n)) * un + op.a(n - 1) * um);
            real scale = (std::abs(um) + std::abs(un) + std::abs(un1)) * mx;
            CHECK(resid <= 1e-12 * scale + 1e-300);
        }
    }
}

TEST_CASE("Wronskian is constant along the line") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<real> bd(-2, 2);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<real> b(20), a(20);
        for (auto& x : b) x = bd(rng);
        for (auto& x : a) do { x = bd(rng); } while (std::abs(x) < 0.1);
        auto op = standalone_operator(b, a, ConstantTail{0.1, 1.1});
        real E = bd(rng);
        auto u = iterate_solution(op, E, BoundaryCondition(0.3), 500);
        auto v = iterate_solution(op, E, BoundaryCondition(2.1), 500);
        real w0 = wronskian(op, u, v, 1);
        for (long n : {2L, 50L, 499L}) {
            // the difference of products cancels; roundoff accumulates like
            // n * eps * (product magnitude), so constancy is meaningful
            // relative to that scale, not to w0 alone
            real prod = std::exp(u.log_abs(n + 1) + v.log_abs(n)) +
                        std::exp(u.log_abs(n) + v.log_abs(n + 1));
            real tol = 1e-10 * std::abs(w0) + 3e-12 * static_cast<real>(n) * prod;
            CHECK(std::abs(wronskian(op, u, v, n) - w0) <= tol);
        }
    }
}

TEST_CASE("truncated_norm: constant sequence and fractional weight") {
    // u == 1 comes from E=2 with the (1,1) seed on the free line
    auto op = free_operator();
    real theta = 3 * kPi / 4;  // seed (-sin, cos) ~ (-0.707, -0.707): constant multiple
    auto u = iterate_solution(op, 2.0, BoundaryCondition(theta), 10);
    for (long n = 1; n <= 4; ++n)
        CHECK(std::abs(u.value(n)) == doctest::Approx(std::cos(theta) == 0 ? 0 : std::abs(std::cos(theta))));
    real unit = std::abs(u.value(1));
    CHECK(truncated_norm(u, 2.5).value() == doctest::Approx(std::sqrt(2.5) * unit));

    auto alt = iterate_solution(op, 0.0, BoundaryCondition(0.0), 10);  // 1,0,-1,0,...
    CHECK(truncated_norm(alt, 4.0).value() == doctest::Approx(std::sqrt(2.0)));
    // integer L has no fractional term
    CHECK(truncated_norm(alt, 3.0).value() == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS(truncated_norm(alt, 100.0));
}

TEST_CASE("detect_subordinate on the free line") {
    auto op = free_operator();
    SUBCASE("band interior: no subordinate solution") {
        auto v = detect_subordinate(op, 0.0);
        CHECK(v.kind == SubordinacyKind::no_subordinate);
        auto v2 = detect_subordinate(op, 0.7);
        CHECK(v2.kind == SubordinacyKind::no_subordinate);
    }
    SUBCASE("E = 3: decaying subordinate solution with the matching seed") {
        auto v = detect_subordinate(op, 3.0);
        REQUIRE(v.kind == SubordinacyKind::subordinate_exists);
        // seed angle must match arccot(m(3+i0)), m(3) = (-3+sqrt5)/2
        real c = (-3 + std::sqrt(5.0)) / 2;
        real expect = std::atan2(1.0, c);
        CHECK(v.subordinate_seed->theta == doctest::Approx(expect).epsilon(1e-4));
        // evidence ratios decrease monotonically until they hit the Gram
        // determinant resolution floor
        for (size_t i = 1; i < v.evidence.size() && v.evidence[i].second > 3e-6; ++i)
            CHECK(v.evidence[i].second < v.evidence[i - 1].second);
        CHECK(v.evidence.back().second < 1e-4);
    }
    SUBCASE("band edge E = 2: constant solution subordinate against linear growth") {
        auto v = detect_subordinate(op, 2.0);
        REQUIRE(v.kind == SubordinacyKind::subordinate_exists);
        CHECK(v.subordinate_seed->theta == doctest::Approx(3 * kPi / 4).epsilon(1e-3));
        CHECK(v.decay_exponent == doctest::Approx(-1.0).epsilon(0.15));
    }
}

TEST_CASE("subordinacy verdict is stable under the complementary-solution choice") {
    // ratio limit should vanish against any independent partner, not just the
    // perpendicular one; spot-check with skewed partners at E = 3
    auto op = free_operator();
    long len = 10001;
    auto sub = iterate_solution(op, 3.0, BoundaryCondition(std::atan2(1.0, (-3 + std::sqrt(5.0)) / 2)), len);
    for (real t : {0.1, 0.9, 2.2}) {
        auto other = iterate_solution(op, 3.0, BoundaryCondition(t), len);
        real lr = truncated_norm(sub, 1e4).ln - truncated_norm(other, 1e4).ln;
        CHECK(std::exp(lr) < 1e-2);
    }
}
