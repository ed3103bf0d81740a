#include <doctest.h>

#include "starjac/graph.hpp"
#include "support.hpp"

using namespace starjac;

TEST_CASE("validate accepts the free triangle with three half-lines") {
    auto [g, c] = testing::free_triangle();
    auto rep = validate(g, c);
    CHECK(rep.ok());
}

TEST_CASE("validate rejects a zero edge weight and names the edge") {
    auto [g, c] = testing::free_triangle();
    c.a_compact[EdgeKey("v1", "v2")] = 0.0;
    auto rep = validate(g, c);
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (auto& i : rep.issues)
        if (i.code == "zero-weight" && i.where == "v1-v2") found = true;
    CHECK(found);
}

TEST_CASE("validate rejects empty halfline_roots") {
    auto [g, c] = testing::free_triangle();
    g.halfline_roots.clear();
    auto rep = validate(g, c);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.issues[0].code == "no-halfline");
}

TEST_CASE("validate flags duplicate roots, self loops, disconnection") {
    auto [g, c] = testing::free_triangle();
    g.halfline_roots.push_back("v1");
    auto rep = validate(g, c);
    bool dup = false;
    for (auto& i : rep.issues) dup |= i.code == "duplicate-root";
    CHECK(dup);

    StarLikeGraph g2;
    g2.compact_vertices = {"a", "b"};
    g2.halfline_roots = {"a"};
    JacobiCoefficients c2;
    c2.b_compact["a"] = c2.b_compact["b"] = 0.0;
    c2.halflines["a"] = HalfLineCoefficients{};
    auto rep2 = validate(g2, c2);
    bool disc = false;
    for (auto& i : rep2.issues) disc |= i.code == "disconnected";
    CHECK(disc);
}

TEST_CASE("half-line coefficient tails: constant, periodic, generator") {
    HalfLineCoefficients h;
    h.b_prefix = {5.0, 6.0};
    h.a_prefix = {2.0, 3.0};
    h.tail = ConstantTail{0.5, 0.25};
    CHECK(h.b(1) == 5.0);
    CHECK(h.b(2) == 6.0);
    CHECK(h.b(3) == 0.5);
    CHECK(h.b(1000) == 0.5);
    CHECK(h.a(0) == 2.0);
    CHECK(h.a(1) == 3.0);
    CHECK(h.a(2) == 0.25);
    CHECK(h.constant_from() == 3);

    h.tail = PeriodicTail{{1.0, -1.0}, {0.5, 2.0}};
    CHECK(h.b(3) == 1.0);
    CHECK(h.b(4) == -1.0);
    CHECK(h.b(5) == 1.0);
    CHECK(h.a(2) == 0.5);
    CHECK(h.a(3) == 2.0);
    CHECK(h.constant_from() == 0);

    GeneratorTail gt;
    gt.name = "test";
    gt.b = [](long i) { return 1.0 / i; };
    gt.a = [](long i) { return 1.0 + 1.0 / (i + 1); };
    gt.depth_limit = 10;
    h.tail = gt;
    CHECK(h.b(3) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS((void)h.b(11), std::out_of_range);
}

TEST_CASE("coefficient bound covers compact and tails") {
    auto [g, c] = testing::free_triangle();
    c.b_compact["v2"] = -3.5;
    CHECK(c.coefficient_bound() == doctest::Approx(3.5));
}
