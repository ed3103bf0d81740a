#include <doctest.h>

#include "starjac/oracle.hpp"
#include "support.hpp"

using namespace starjac;

TEST_CASE("m_k slices: singleton scalar rule and half-line delegation") {
    auto [g, c] = testing::free_star(2);  // center has no half-line
    auto slices = make_slices(g, c);
    // ordering: c, l1, l2
    CHECK(slices[0].kind == HalfLineSlice::Kind::singleton);
    CHECK(slices[0].m(cplx(0, 1)) == cplx(0, 1));  // 1/(0 - i) = i
    CHECK(slices[1].kind == HalfLineSlice::Kind::halfline);
    cplx m = slices[1].m(cplx(0, 1));
    CHECK(m.imag() == doctest::Approx((std::sqrt(5.0) - 1) / 2));
    // singleton with b = q: 1/m = q - z
    auto [g2, c2] = testing::free_star(2);
    c2.b_compact["c"] = 0.7;
    auto s2 = make_slices(g2, c2);
    cplx z(0.3, 1e-7);
    CHECK(std::abs(1.0 / s2[0].m(z) - (0.7 - z)) < 1e-12);
}

TEST_CASE("assemble on the N line reproduces the half-line m-function") {
    auto [g, c] = testing::free_nline();
    auto M = assemble(g, c, cplx(0, 1));
    REQUIRE(M.entries.rows() == 1);
    CHECK(M.entries(0, 0).imag() == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-10));
    CHECK(M.entries(0, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("assemble on the Z line matches the explicit 2x2 inverse and the line Green function") {
    auto [g, c] = testing::free_zline();
    cplx z(0, 1);
    auto M = assemble(g, c, z);
    cplx m((0.0), (std::sqrt(5.0) - 1) / 2);
    Eigen::MatrixXcd K(2, 2);
    K << 1.0 / m, 1.0, 1.0, 1.0 / m;
    Eigen::MatrixXcd expect = K.inverse();
    CHECK((M.entries - expect).cwiseAbs().maxCoeff() < 1e-12);
    // whole-line diagonal Green function at i: -1/sqrt(z^2-4) = i/sqrt(5)
    CHECK(M.entries(0, 0).imag() == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
}

TEST_CASE("assemble equals the finite-section oracle on the examples") {
    auto [g, c] = testing::free_nline();
    cplx z(0, 1);
    CHECK(std::abs(assemble(g, c, z).entries(0, 0) - direct_oracle(g, c, z)(0, 0)) < 1e-8);

    auto [g3, c3] = testing::free_triangle();
    cplx z2(0, 2);
    auto M = assemble(g3, c3, z2);
    auto O = direct_oracle(g3, c3, z2);
    CHECK((M.entries - O).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Schur identity on random graphs: assemble vs oracle, symmetry, Herglotz") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<real> re(-2.5, 2.5), im(0.1, 2.0);
    for (int rep = 0; rep < 12; ++rep) {
        auto [g, c] = testing::random_graph(rng);
        cplx z(re(rng), im(rng));
        auto M = assemble(g, c, z);
        // inverse identity holds by construction
        Eigen::MatrixXcd K = compact_adjacency(g, c).cast<cplx>();
        auto slices = make_slices(g, c);
        for (int k = 0; k < g.n_compact(); ++k) K(k, k) += 1.0 / slices[k].m(z);
        Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(g.n_compact(), g.n_compact());
        CHECK((K * M.entries - I).cwiseAbs().maxCoeff() < 1e-10);
        // against the finite-section elimination
        CHECK((M.entries - direct_oracle(g, c, z)).cwiseAbs().maxCoeff() < 1e-6);
        // symmetry and positive semi-definite imaginary part
        CHECK((M.entries - M.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.herglotz_part());
        CHECK(es.eigenvalues()(0) >= -1e-10);
    }
}

TEST_CASE("direct_oracle enforces its Im z precondition") {
    auto [g, c] = testing::free_nline();
    CHECK_THROWS_AS(direct_oracle(g, c, cplx(1.0, 0.01)), std::invalid_argument);
}

TEST_CASE("Im M PSD at a spec'd sample point on the triangle") {
    auto [g, c] = testing::free_triangle();
    auto M = assemble(g, c, cplx(0.3, 0.01));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.herglotz_part());
    CHECK(es.eigenvalues()(0) >= -1e-12);
}

TEST_CASE("nearest_eigenpair finds an impurity bound state") {
    // N line with b(1) = 5: eigenvector decays like lam^n with lam = E - 5,
    // and lam(E) is the small characteristic root, so E = 5 + 1/5 exactly.
    auto [g, c] = testing::free_nline();
    c.b_compact["o"] = 5.0;
    auto ep = nearest_eigenpair(g, c, 2000, 5.3);
    CHECK(ep.converged);
    CHECK(ep.residual < 1e-9);
    CHECK(ep.eigenvalue == doctest::Approx(5.2).epsilon(1e-10));
    CHECK(ep.window_mass > 0.999);
}
