// Command-line front end: scans, classifications, multiplicity reports and
// the worked triangle example, driven by a JSON config with flag overrides.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "starjac/runner.hpp"

using namespace starjac;

int main(int argc, char** argv) {
    CLI::App app{"Jacobi matrices on star-like graphs: spectral classification toolkit"};

    std::string config_path, task, grid_spec, out_dir;
    uint64_t seed = 0;
    int jobs = 0;
    double eps_min = 0.0, threshold = 0.0;

    app.add_option("--config", config_path, "JSON config file (graph/halflines/run sections)");
    app.add_option("--task", task,
                   "scan | classify | multiplicity | star-overlap | example-5-2 | selftest");
    app.add_option("--grid", grid_spec, "energy grid as MIN:MAX:COUNT");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed for randomized tasks");
    app.add_option("--jobs", jobs, "parallel workers for grid evaluation");
    app.add_option("--eps-min", eps_min, "smallest ladder epsilon (sets the ladder floor)");
    app.add_option("--threshold", threshold, "kernel SVD threshold");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot open config: " + config_path);
            f >> j;
        }
        cfg = run_config_from_json(j);
        // command line wins over config-file values
        if (!task.empty()) cfg.task = task;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = seed;
        if (jobs) cfg.jobs = jobs;
        if (eps_min > 0) cfg.ladder.j_max = static_cast<int>(std::ceil(std::log2(1.0 / eps_min)));
        if (threshold > 0) cfg.kernel_svd_threshold = threshold;
        if (!grid_spec.empty()) {
            double lo, hi;
            int count;
            if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
                throw std::runtime_error("bad --grid, expected MIN:MAX:COUNT");
            cfg.grid_min = lo;
            cfg.grid_max = hi;
            cfg.grid_count = count;
            cfg.grid_list.clear();
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunResult res = run(cfg);
        std::cout << res.summary;
        std::cout << "results written to " << cfg.out_dir << "\n";
        return res.exit_code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
