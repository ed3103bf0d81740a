#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "starjac/runner.hpp"
#include "support.hpp"

using namespace starjac;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("classify task writes evidence sidecars and ratio-evidence files") {
    auto [g, c] = testing::free_nline();
    RunConfig cfg;
    cfg.task = "classify";
    cfg.graph_config = graph_to_json(g, c);
    cfg.grid_list = {3.0};
    cfg.out_dir = "/tmp/starjac-test-classify";
    auto r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "evidence" / "point_0.json"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "plot_ratio_evidence_o.txt"));
    json ev = json::parse(slurp(fs::path(cfg.out_dir) / "evidence" / "point_0.json"));
    CHECK(ev["roots"]["o"]["status"] == "real");
    CHECK(ev["roots"]["o"]["ladder"].size() >= 20);
}

TEST_CASE("multiplicity task fills rank/dimS/bound columns at a singular energy") {
    auto [g, c] = testing::free_zline();
    c.b_compact["L"] = 5.0;
    auto roots = find_kernel_roots(g, c, 4.0, 6.0, 150);
    REQUIRE(!roots.empty());
    RunConfig cfg;
    cfg.task = "multiplicity";
    cfg.graph_config = graph_to_json(g, c);
    cfg.grid_list = {0.0, roots[0]};
    cfg.out_dir = "/tmp/starjac-test-mult";
    auto r = run(cfg);
    CHECK(r.exit_code == 0);
    std::string csv = slurp(fs::path(cfg.out_dir) / "results.csv");
    // the eigenvalue row carries rank 1, dimS 1, bound 1 and the l2 flag
    CHECK(csv.find(",1,1,1,l2;") != std::string::npos);
    // the band-center row has no multiplicity columns
    CHECK(csv.find("0,L,ac,1,0,0,,,,") != std::string::npos);
}

TEST_CASE("star-overlap task labels rows with the verdict") {
    auto [g, c] = testing::free_star(3);
    RunConfig cfg;
    cfg.task = "star-overlap";
    cfg.graph_config = graph_to_json(g, c);
    cfg.grid_list = {0.4, 3.0};
    cfg.out_dir = "/tmp/starjac-test-star";
    auto r = run(cfg);
    CHECK(r.exit_code == 0);
    std::string csv = slurp(fs::path(cfg.out_dir) / "results.csv");
    CHECK(csv.find("neither") != std::string::npos);
    CHECK(csv.find("S1") != std::string::npos);
}

TEST_CASE("numerical task failures produce error rows and exit code 1") {
    // a generator tail with a tiny depth limit cannot converge inside the band
    StarLikeGraph g;
    g.compact_vertices = {"o"};
    g.halfline_roots = {"o"};
    JacobiCoefficients c;
    c.b_compact["o"] = sqrt_density_b(1);
    HalfLineCoefficients h;
    h.tail = generator_by_name("sqrt-density", 500);
    c.halflines["o"] = h;
    RunConfig cfg;
    cfg.task = "scan";
    cfg.graph_config = graph_to_json(g, c);
    cfg.grid_list = {0.5};
    cfg.out_dir = "/tmp/starjac-test-errrow";
    auto r = run(cfg);
    CHECK(r.exit_code == 1);
    std::string csv = slurp(fs::path(cfg.out_dir) / "results.csv");
    CHECK(csv.find(",error,") != std::string::npos);
}

TEST_CASE("plot kind dispatch rejects unknown kinds") {
    CHECK(plot_kind_from_string("im-trace") == PlotKind::im_trace);
    CHECK(plot_kind_from_string("density") == PlotKind::density);
    CHECK(plot_kind_from_string("ratio-evidence") == PlotKind::ratio_evidence);
    CHECK_THROWS_AS(plot_kind_from_string("waterfall"), std::invalid_argument);
}
