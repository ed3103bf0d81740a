#include <doctest.h>

#include "starjac/classify.hpp"
#include "support.hpp"

using namespace starjac;

TEST_CASE("branch status on the free slice: band interior, exterior, edge behavior") {
    auto [g, c] = testing::free_nline();
    auto slices = make_slices(g, c);
    SUBCASE("interior: finite positive imaginary part") {
        auto st = branch_status(slices[0], 0.7);
        REQUIRE(st.kind == BranchStatusKind::finite_positive);
        CHECK(st.im_limit == doctest::Approx(std::sqrt(4 - 0.49) / 2).epsilon(1e-6));
    }
    SUBCASE("exterior: real limit with the closed-form value") {
        auto st = branch_status(slices[0], 3.0);
        REQUIRE(st.kind == BranchStatusKind::real_limit);
        CHECK(st.real_limit == doctest::Approx((-3 + std::sqrt(5.0)) / 2).epsilon(1e-9));
        CHECK(st.subordinate_theta()->theta ==
              doctest::Approx(std::atan2(1.0, st.real_limit)).epsilon(1e-12));
    }
    SUBCASE("at a pole of the slice m-function: divergent") {
        auto [g2, c2] = testing::free_nline();
        c2.b_compact["o"] = 5.0;  // impurity eigenvalue at exactly 5.2
        auto s2 = make_slices(g2, c2);
        auto st = branch_status(s2[0], 5.2);
        REQUIRE(st.kind == BranchStatusKind::divergent);
        CHECK(st.growth_exponent == doctest::Approx(1.0).epsilon(0.05));
        CHECK(st.subordinate_theta()->theta == 0.0);
    }
}

TEST_CASE("boundary_value on the free N line") {
    auto [g, c] = testing::free_nline();
    SUBCASE("band center: Im M(0+i0) = 1") {
        auto bv = boundary_value(g, c, 0.0);
        REQUIRE(bv.entry(0, 0).status == LadderStatus::converged);
        CHECK(bv.entry(0, 0).limit.imag() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(bv.im_trace.limit.real() == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("off the spectrum: real limit") {
        auto bv = boundary_value(g, c, 3.0);
        REQUIRE(bv.entry(0, 0).status == LadderStatus::converged);
        CHECK(bv.entry(0, 0).limit.real() ==
              doctest::Approx((-3 + std::sqrt(5.0)) / 2).epsilon(1e-9));
        CHECK(std::abs(bv.entry(0, 0).limit.imag()) < 1e-9);
    }
    SUBCASE("point mass: Im tr M blows up like 1/eps") {
        c.b_compact["o"] = 5.0;
        auto bv = boundary_value(g, c, 5.2);
        CHECK(bv.im_trace.status == LadderStatus::divergent);
        CHECK(bv.im_trace.growth_exponent == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("classify_energy on the free star: AC band, singular zone, eigenvalues") {
    auto [g, c] = testing::free_star(3);
    SUBCASE("E = 0.7 is AC-supported, not singular") {
        auto ec = classify_energy(g, c, 0.7);
        REQUIRE(ec.conclusive);
        CHECK(ec.ac_support_member);
        CHECK_FALSE(ec.singular_zone);
        CHECK(ec.kernel_dim == 0);
    }
    SUBCASE("E = 3 lies in the singular zone but carries no global subordinate solution") {
        auto ec = classify_energy(g, c, 3.0);
        REQUIRE(ec.conclusive);
        CHECK_FALSE(ec.ac_support_member);
        CHECK(ec.singular_zone);
        CHECK(ec.kernel_dim == 0);
    }
    SUBCASE("the eigenvalues at +-sqrt(4.5) carry one global subordinate solution each") {
        auto roots = find_kernel_roots(g, c, 2.05, 2.5, 200);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == doctest::Approx(std::sqrt(4.5)).epsilon(1e-10));
        auto ec = classify_energy(g, c, roots[0]);
        CHECK(ec.kernel_dim == 1);
        CHECK(ec.witness_residual < 1e-10);
        // eigenvector proportions: alpha_center / alpha_leaf = 1/(-m(E))
        const auto& basis = ec.kernel.basis[0];
        real mE = (-roots[0] + std::sqrt(roots[0] * roots[0] - 4)) / 2;
        CHECK(basis(1) / basis(0) == doctest::Approx(-mE).epsilon(1e-8));
    }
}

TEST_CASE("scan on the free N line: zone verdicts per the five-point grid") {
    auto [g, c] = testing::free_nline();
    ScanSummary sum;
    auto res = scan(g, c, {-3.0, -1.0, 0.0, 1.0, 3.0}, {}, 2, &sum);
    CHECK(res[0].singular_zone);
    CHECK(res[1].ac_support_member);
    CHECK(res[2].ac_support_member);
    CHECK(res[3].ac_support_member);
    CHECK(res[4].singular_zone);
    CHECK(sum.ac == 3);
    CHECK(sum.singular == 2);
    CHECK(sum.inconclusive == 0);
    // the free half-line has no divergent boundary points, so no kernel hits
    CHECK(sum.kernel_hits == 0);
    // empty grid
    ScanSummary s2;
    auto r2 = scan(g, c, {}, {}, 1, &s2);
    CHECK(r2.empty());
    CHECK(s2.total == 0);
}

TEST_CASE("scan on the free Z line at the band center: AC") {
    auto [g, c] = testing::free_zline();
    auto res = scan(g, c, {0.0});
    REQUIRE(res.size() == 1);
    CHECK(res[0].ac_support_member);
}

TEST_CASE("extend_compact_solution") {
    SUBCASE("N graph at E = 3: extension satisfies the difference equation") {
        auto [g, c] = testing::free_nline();
        Eigen::VectorXd alpha(1);
        alpha << 1.0;
        auto ext = extend_compact_solution(g, c, alpha, 3.0, 500);
        CHECK(assembled_residual(g, c, ext, 3.0, 500) < 1e-12);
        // the forced continuation is the Dirichlet solution: u(2) = E u(1)
        CHECK(ext.branches.at("o").value(2) == doctest::Approx(3.0));
    }
    SUBCASE("zero candidate extends to zero") {
        auto [g, c] = testing::free_triangle();
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(3);
        auto ext = extend_compact_solution(g, c, alpha, 1.234, 50);
        for (auto& [r, b] : ext.branches)
            for (long i = 1; i <= 50; ++i) CHECK(b.value(i) == 0.0);
    }
    SUBCASE("candidate violating the free equation at the star center throws") {
        auto [g, c] = testing::free_star(2);  // center has no half-line
        Eigen::VectorXd alpha(3);
        alpha << 1.0, 0.3, 0.3;  // center equation: l1 + l2 = E * center
        CHECK_THROWS_AS(extend_compact_solution(g, c, alpha, 0.5, 50), std::invalid_argument);
        // a consistent candidate passes: alpha_l1 + alpha_l2 = E
        Eigen::VectorXd ok(3);
        ok << 1.0, 0.2, 0.3;
        auto ext = extend_compact_solution(g, c, ok, 0.5, 50);
        CHECK(assembled_residual(g, c, ext, 0.5, 50) < 1e-12);
    }
}

TEST_CASE("choice of compact component does not change verdicts") {
    auto [g, c] = testing::free_star(3);
    auto [g2, c2] = enlarge_compact(g, c, 3);
    REQUIRE(validate(g2, c2).ok());
    std::vector<real> grid = {-2.5, -1.0, 0.0, 0.8, 2.5, 3.0};
    auto r1 = scan(g, c, grid);
    auto r2 = scan(g2, c2, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(r1[i].ac_support_member == r2[i].ac_support_member);
        CHECK(r1[i].singular_zone == r2[i].singular_zone);
        CHECK(r1[i].kernel_dim == r2[i].kernel_dim);
    }
    // eigenvalue location is also unchanged
    auto roots1 = find_kernel_roots(g, c, 2.05, 2.5, 100);
    auto roots2 = find_kernel_roots(g2, c2, 2.05, 2.5, 100);
    REQUIRE(roots1.size() == 1);
    REQUIRE(roots2.size() == 1);
    CHECK(roots1[0] == doctest::Approx(roots2[0]).epsilon(1e-9));
}

TEST_CASE("random graph with prefix: enlargement keeps classifications") {
    std::mt19937_64 rng(77);
    auto [g, c] = testing::random_graph(rng, 4, 2);
    auto [g2, c2] = enlarge_compact(g, c, 2);
    REQUIRE(validate(g2, c2).ok());
    for (real E : {-3.3, -0.9, 0.4, 3.1}) {
        auto e1 = classify_energy(g, c, E);
        auto e2 = classify_energy(g2, c2, E);
        if (e1.conclusive && e2.conclusive) {
            CHECK(e1.ac_support_member == e2.ac_support_member);
            CHECK(e1.singular_zone == e2.singular_zone);
        }
    }
}
