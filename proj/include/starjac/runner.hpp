#ifndef STARJAC_RUNNER_HPP
#define STARJAC_RUNNER_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "starjac/config.hpp"
#include "starjac/example52.hpp"
#include "starjac/oracle.hpp"
#include "starjac/star_overlap.hpp"
#include "starjac/stieltjes.hpp"

namespace starjac {

// ---------------------------------------------------------------------------
// Batch front door. Tasks consume a config tree plus command-line overrides
// and write results.csv, evidence sidecars, a human-readable summary and
// plot-ready column files. Grid points are computed independently and results
// are reduced in grid order, so output bytes do not depend on the job count.
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvVersion = "# starjac-results-v1";
inline constexpr const char* kCsvHeader = "E,root,status,ac,sing,kernel_dim,rank,dimS,bound,flags";

struct RunConfig {
    std::string task = "scan";
    json graph_config;  // the graph/halflines sections, when the task needs one
    std::vector<real> grid_list;
    real grid_min = -3.0, grid_max = 3.0;
    int grid_count = 601;
    LadderOptions ladder;
    BoundaryThresholds thresholds;
    MFunctionOptions mfunction;
    real kernel_svd_threshold = 1e-8;
    real omega_sv_threshold = 1e-5;
    std::string out_dir = "starjac-out";
    int jobs = 1;
    uint64_t seed = 1;
    int selftest_graphs = 50;
    int selftest_z = 10;
    real selftest_tol = 1e-6;

    std::vector<real> grid() const {
        if (!grid_list.empty()) return grid_list;
        std::vector<real> g;
        if (grid_count == 1) return {grid_min};
        for (int i = 0; i < grid_count; ++i)
            g.push_back(grid_min + (grid_max - grid_min) * i / (grid_count - 1));
        return g;
    }
    ClassifyOptions classify_options() const {
        ClassifyOptions o;
        o.ladder = ladder;
        o.thresholds = thresholds;
        o.mfunction = mfunction;
        o.kernel_svd_threshold = kernel_svd_threshold;
        return o;
    }
};

inline RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    if (j.contains("graph")) c.graph_config = j;
    const json r = j.value("run", json::object());
    c.task = r.value("task", c.task);
    if (r.contains("grid")) {
        const json& g = r.at("grid");
        if (g.contains("list")) {
            c.grid_list = g.at("list").get<std::vector<real>>();
        } else {
            c.grid_min = g.value("min", c.grid_min);
            c.grid_max = g.value("max", c.grid_max);
            c.grid_count = g.value("count", c.grid_count);
        }
    }
    if (r.contains("ladder")) {
        c.ladder.j_min = r.at("ladder").value("j_min", c.ladder.j_min);
        c.ladder.j_max = r.at("ladder").value("j_max", c.ladder.j_max);
    }
    if (r.contains("thresholds")) {
        const json& t = r.at("thresholds");
        c.thresholds.im_tol = t.value("im_tol", c.thresholds.im_tol);
        c.thresholds.zero_tol = t.value("zero_tol", c.thresholds.zero_tol);
        c.kernel_svd_threshold = t.value("kernel_svd", c.kernel_svd_threshold);
        c.omega_sv_threshold = t.value("omega_sv", c.omega_sv_threshold);
    }
    c.out_dir = r.value("out", c.out_dir);
    c.jobs = r.value("jobs", c.jobs);
    c.seed = r.value("seed", c.seed);
    c.selftest_graphs = r.value("selftest_graphs", c.selftest_graphs);
    c.selftest_z = r.value("selftest_z", c.selftest_z);
    return c;
}

namespace detail {

inline std::string fmt(real x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct CsvRow {
    std::string energy, root, status;
    int ac = -1, sing = -1;
    int kernel_dim = -2;  // -2 renders empty, -1 renders "?"
    int rank = -2, dimS = -2, bound = -2;
    std::string flags;

    std::string str() const {
        auto num = [](int v) {
            if (v == -2) return std::string();
            if (v == -1) return std::string("?");
            return std::to_string(v);
        };
        std::string s = energy + "," + root + "," + status + ",";
        s += (ac < 0 ? "" : std::to_string(ac)) + ",";
        s += (sing < 0 ? "" : std::to_string(sing)) + ",";
        s += num(kernel_dim) + "," + num(rank) + "," + num(dimS) + "," + num(bound) + "," + flags;
        return s;
    }
};

inline void rows_for_point(const EnergyClassification& ec, std::vector<CsvRow>& out,
                           const StarLikeGraph& g) {
    for (int j = 0; j < g.n_compact(); ++j) {
        if (!g.has_halfline(g.compact_vertices[j])) continue;
        CsvRow r;
        r.energy = fmt(ec.energy);
        r.root = ec.roots[j].vertex;
        r.status = to_string(ec.roots[j].status.kind);
        r.ac = ec.conclusive ? ec.ac_support_member : -1;
        r.sing = ec.conclusive ? ec.singular_zone : -1;
        r.kernel_dim = ec.kernel_dim == -1 ? -1 : ec.kernel_dim;
        r.flags = ec.flags;
        out.push_back(std::move(r));
    }
}

inline json evidence_json(const EnergyClassification& ec) {
    json j;
    j["E"] = ec.energy;
    j["conclusive"] = ec.conclusive;
    j["ac"] = ec.ac_support_member;
    j["sing"] = ec.singular_zone;
    j["kernel_dim"] = ec.kernel_dim;
    for (const auto& rr : ec.roots) {
        json lad = json::array();
        for (const auto& v : rr.status.ladder) lad.push_back({v.real(), v.imag()});
        j["roots"][rr.vertex] = {{"status", to_string(rr.status.kind)},
                                 {"real_limit", rr.status.real_limit},
                                 {"im_limit", rr.status.im_limit},
                                 {"growth_exponent", rr.status.growth_exponent},
                                 {"ladder", lad}};
    }
    return j;
}

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << contents;
}

}  // namespace detail

enum class PlotKind { im_trace, density, ratio_evidence };

inline PlotKind plot_kind_from_string(const std::string& s) {
    if (s == "im-trace") return PlotKind::im_trace;
    if (s == "density") return PlotKind::density;
    if (s == "ratio-evidence") return PlotKind::ratio_evidence;
    throw std::invalid_argument("unknown plot kind: " + s);
}

// two-column plot files for generic plotting tools
inline void write_columns(const std::filesystem::path& p,
                          const std::vector<std::pair<real, real>>& rows) {
    if (rows.empty()) throw std::invalid_argument("emit_plot_data: empty results");
    std::ostringstream os;
    for (auto& [x, y] : rows) os << detail::fmt(x) << " " << detail::fmt(y) << "\n";
    detail::write_file(p, os.str());
}

inline std::vector<std::pair<real, real>> plot_im_trace(const StarLikeGraph& g,
                                                        const JacobiCoefficients& c,
                                                        const std::vector<real>& grid,
                                                        const LadderOptions& lo,
                                                        MFunctionOptions mo = {}) {
    std::vector<std::pair<real, real>> rows;
    real eps_min = std::ldexp(1.0, -lo.j_max);
    auto slices = make_slices(g, c, mo);
    for (real E : grid) {
        real v;
        try {
            v = assemble(g, c, cplx(E, eps_min), slices).entries.trace().imag();
        } catch (const std::exception&) {
            v = std::numeric_limits<real>::quiet_NaN();
        }
        rows.emplace_back(E, v);
    }
    return rows;
}

inline std::vector<std::pair<real, real>> plot_density(const std::vector<real>& grid,
                                                       const StieltjesResult& res) {
    std::vector<std::pair<real, real>> rows;
    for (size_t i = 0; i < grid.size(); ++i) rows.emplace_back(grid[i], res.density[i]);
    return rows;
}

inline std::vector<std::pair<real, real>> plot_ratio_evidence(const SubordinacyVerdict& v) {
    std::vector<std::pair<real, real>> rows;
    for (auto& [L, r] : v.evidence) rows.emplace_back(L, r);
    return rows;
}

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

struct RunResult {
    int exit_code = 0;
    std::string summary;
};

// random star-like graph for the self-test suite: connected compact component
// of up to six vertices, up to four half-lines, coefficients in [-2, 2] with
// |a| >= 0.1, short random prefixes with constant tails
inline void selftest_random_graph(std::mt19937_64& rng, StarLikeGraph& g, JacobiCoefficients& c,
                                  int n_max = 6, int k_max = 4) {
    g = {};
    c = {};
    std::uniform_real_distribution<real> coef(-2.0, 2.0);
    auto nz = [&] {
        real x;
        do
            x = coef(rng);
        while (std::abs(x) < 0.1);
        return x;
    };
    int n = std::uniform_int_distribution<int>(1, n_max)(rng);
    for (int i = 0; i < n; ++i) {
        std::string v = "v" + std::to_string(i);
        g.compact_vertices.push_back(v);
        c.b_compact[v] = coef(rng);
        if (i > 0) {
            int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
            g.compact_edges.push_back({"v" + std::to_string(j), v});
            c.a_compact[EdgeKey("v" + std::to_string(j), v)] = nz();
        }
    }
    for (int t = 0; t < n; ++t) {
        int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
        int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (i == j) continue;
        EdgeKey k("v" + std::to_string(i), "v" + std::to_string(j));
        if (!c.a_compact.count(k) && std::bernoulli_distribution(0.4)(rng)) {
            g.compact_edges.push_back({k.u, k.v});
            c.a_compact[k] = nz();
        }
    }
    int k = std::uniform_int_distribution<int>(1, std::min(k_max, n))(rng);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int t = 0; t < k; ++t) {
        std::string v = "v" + std::to_string(order[t]);
        g.halfline_roots.push_back(v);
        HalfLineCoefficients h;
        int plen = std::uniform_int_distribution<int>(0, 5)(rng);
        for (int i = 0; i < plen; ++i) {
            h.b_prefix.push_back(coef(rng));
            h.a_prefix.push_back(nz());
        }
        h.tail = ConstantTail{coef(rng), nz()};
        c.halflines[v] = std::move(h);
    }
}

namespace detail {

struct PointOutcome {
    std::optional<EnergyClassification> ec;
    std::optional<MultiplicityReport> mult;
    std::optional<StarOverlapReport> star;
    std::string error;
};

template <class F>
inline std::vector<PointOutcome> run_grid(const std::vector<real>& grid, int jobs, F&& f) {
    std::vector<PointOutcome> out(grid.size());
    parallel_for(static_cast<long>(grid.size()), jobs, [&](long i) {
        try {
            f(grid[i], out[i]);
        } catch (const std::exception& e) {
            std::string msg = e.what();
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            out[i].error = msg;
        }
    });
    return out;
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    fs::create_directories(fs::path(cfg.out_dir) / "evidence");
    std::vector<detail::CsvRow> rows;
    std::ostringstream summary;
    int exit_code = 0;
    auto grid = cfg.grid();

    auto write_outputs = [&](const std::vector<detail::PointOutcome>& pts,
                             const StarLikeGraph* g) {
        long errors = 0, ac = 0, sing = 0, inconclusive = 0, kernel_hits = 0;
        for (size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            if (!p.error.empty()) {
                ++errors;
                detail::CsvRow r;
                r.energy = detail::fmt(grid[i]);
                r.root = "-";
                r.status = "error";
                r.flags = p.error;
                rows.push_back(std::move(r));
                continue;
            }
            if (p.ec) {
                const auto& ec = *p.ec;
                if (!ec.conclusive) ++inconclusive;
                else if (ec.ac_support_member) ++ac;
                else ++sing;
                if (ec.kernel_dim > 0) ++kernel_hits;
                size_t base = rows.size();
                detail::rows_for_point(ec, rows, *g);
                if (p.mult) {
                    for (size_t r = base; r < rows.size(); ++r) {
                        rows[r].rank = p.mult->omega_rank;
                        rows[r].dimS = p.mult->dim_subordinate_space;
                        rows[r].bound = p.mult->bound;
                        if (p.mult->eigenvalue_flag) rows[r].flags += "l2;";
                        if (p.mult->sc_bound_applicable) rows[r].flags += "sc-cap;";
                    }
                }
                if (p.star) {
                    for (size_t r = base; r < rows.size(); ++r) {
                        rows[r].flags += to_string(p.star->verdict);
                        rows[r].bound = p.star->bound;
                        rows[r].dimS = p.star->dim_s;
                    }
                }
                if (ec.kernel_dim > 0 || !ec.conclusive || cfg.task == "classify") {
                    auto ej = detail::evidence_json(ec);
                    detail::write_file(fs::path(cfg.out_dir) / "evidence" /
                                           ("point_" + std::to_string(i) + ".json"),
                                       ej.dump(1));
                }
            }
        }
        summary << "points=" << pts.size() << " ac=" << ac << " sing=" << sing
                << " inconclusive=" << inconclusive << " kernel_hits=" << kernel_hits
                << " errors=" << errors << "\n";
        if (errors) exit_code = 1;
    };

    if (cfg.task == "scan" || cfg.task == "classify" || cfg.task == "multiplicity" ||
        cfg.task == "star-overlap") {
        auto [g, c] = graph_from_json(cfg.graph_config);
        auto rep = validate(g, c);
        if (!rep.ok()) {
            std::ostringstream os;
            for (auto& i : rep.issues) os << i.code << " at " << i.where << ": " << i.message << "\n";
            throw std::invalid_argument("invalid graph config:\n" + os.str());
        }
        ClassifyOptions co = cfg.classify_options();
        co.evidence_checks = cfg.task == "classify";
        auto pts = detail::run_grid(grid, cfg.jobs, [&](real E, detail::PointOutcome& out) {
            auto slices = make_slices(g, c, co.mfunction);
            if (cfg.task == "star-overlap") {
                out.star = star_overlap_classify(g, c, E, co);
                out.ec = classify_energy(g, c, E, slices, co);
                return;
            }
            out.ec = classify_energy(g, c, E, slices, co);
            if (cfg.task == "multiplicity" && out.ec->conclusive && out.ec->singular_zone) {
                MultiplicityOptions mo;
                mo.omega.ladder = co.ladder;
                mo.omega.mfunction = co.mfunction;
                mo.omega.sv_threshold = cfg.omega_sv_threshold;
                mo.space.classify = co;
                out.mult = multiplicity_bound(g, c, E);
            }
        });
        write_outputs(pts, &g);
        if (cfg.task == "scan") {
            auto rowsit = plot_im_trace(g, c, grid, cfg.ladder, cfg.mfunction);
            write_columns(fs::path(cfg.out_dir) / "plot_im_trace.txt", rowsit);
        }
        if (cfg.task == "classify" && grid.size() >= 1) {
            // ratio-evidence files for the first grid point's branches
            for (const auto& r : g.halfline_roots) {
                auto v = detect_subordinate(slice_operator(g, c, r), grid.front(), co.subordinacy);
                write_columns(fs::path(cfg.out_dir) / ("plot_ratio_evidence_" + r + ".txt"),
                              plot_ratio_evidence(v));
            }
        }
    } else if (cfg.task == "example-5-2") {
        Example52 ex = build_example_5_2();
        detail::write_file(fs::path(cfg.out_dir) / "example52_graph.json",
                           graph_to_json(ex.graph, ex.coeffs).dump(1));
        ClassifyOptions co = cfg.classify_options();
        auto ec = classify_energy(ex.graph, ex.coeffs, 0.0, co);
        MultiplicityOptions mo;
        mo.space.classify = co;
        auto rep = multiplicity_bound(ex.graph, ex.coeffs, 0.0, mo);
        size_t base = rows.size();
        detail::rows_for_point(ec, rows, ex.graph);
        for (size_t r = base; r < rows.size(); ++r) {
            rows[r].rank = rep.omega_rank;
            rows[r].dimS = rep.dim_subordinate_space;
            rows[r].bound = rep.bound;
            if (rep.eigenvalue_flag) rows[r].flags += "l2;";
        }
        summary << "atom_offset=" << detail::fmt(ex.atom_offset) << "\n";
        summary << "E=0 kernel_dim=" << ec.kernel_dim << " omega_rank=" << rep.omega_rank
                << " dimS=" << rep.dim_subordinate_space << " bound=" << rep.bound
                << " eigenvalue=" << (rep.eigenvalue_flag ? "yes" : "no") << "\n";
        // mu2 density reconstruction for plotting; inside the band the
        // continued fraction needs depth ~ 1/eps, so the ladder stops at 1e-4
        auto raw3 = example52_branch_theta_operator(ex, "v3");
        MFunctionEvaluator ev(raw3, cfg.mfunction);
        std::vector<real> dgrid;
        for (int i = 0; i <= 80; ++i) dgrid.push_back(0.1 + 0.8 * i / 80);
        StieltjesOptions so;
        so.ladder = cfg.ladder;
        so.ladder.j_max = std::min(so.ladder.j_max, 14);
        auto samples = sample_ladder([&](cplx z) { return ev.evaluate(z); }, dgrid,
                                     epsilon_ladder(so.ladder));
        auto dens = stieltjes_invert(samples, so);
        write_columns(fs::path(cfg.out_dir) / "plot_density_mu2.txt", plot_density(dgrid, dens));
        if (ec.kernel_dim != 2 || rep.omega_rank != 1 || !rep.eigenvalue_flag) exit_code = 1;
    } else if (cfg.task == "selftest") {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<real> re(-2.5, 2.5), im(0.1, 2.0);
        real worst = 0.0;
        long failures = 0;
        for (int i = 0; i < cfg.selftest_graphs; ++i) {
            StarLikeGraph g;
            JacobiCoefficients c;
            selftest_random_graph(rng, g, c);
            auto slices = make_slices(g, c, cfg.mfunction);
            for (int t = 0; t < cfg.selftest_z; ++t) {
                cplx z(re(rng), im(rng));
                real dev =
                    (assemble(g, c, z, slices).entries - direct_oracle(g, c, z)).cwiseAbs().maxCoeff();
                worst = std::max(worst, dev);
                if (dev > cfg.selftest_tol) ++failures;
            }
        }
        summary << "selftest graphs=" << cfg.selftest_graphs << " z_per_graph=" << cfg.selftest_z
                << " worst=" << detail::fmt(worst) << " failures=" << failures << "\n";
        if (failures) exit_code = 1;
    } else {
        throw std::invalid_argument("unknown task: " + cfg.task);
    }

    std::ostringstream csv;
    csv << kCsvVersion << "\n" << kCsvHeader << "\n";
    for (auto& r : rows) csv << r.str() << "\n";
    detail::write_file(std::filesystem::path(cfg.out_dir) / "results.csv", csv.str());
    detail::write_file(std::filesystem::path(cfg.out_dir) / "summary.txt", summary.str());
    return {exit_code, summary.str()};
}

}  // namespace starjac

#endif
