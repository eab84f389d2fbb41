// Experiment runner for the semiclassical Heisenberg-evolution laboratory.
// Talks to the core exclusively through the C API in egorovlab.h.

#include "egorovlab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

int die(const char* ctx) {
    std::fprintf(stderr, "eglab: %s: %s\n", ctx, eglab_last_error());
    return 1;
}

struct ConfigHolder {
    eglab_config* cfg = nullptr;
    ~ConfigHolder() { eglab_config_free(cfg); }
};

struct ResultsHolder {
    eglab_results* res = nullptr;
    ~ResultsHolder() { eglab_results_free(res); }
};

int cmd_run(const std::string& path, const std::string& out, int threads, bool verbose) {
    eglab_set_threads(threads);
    ConfigHolder c;
    if (eglab_config_load(path.c_str(), &c.cfg) != EGLAB_OK) return die("config");
    ResultsHolder r;
    if (verbose) std::printf("running sweep from %s\n", path.c_str());
    if (eglab_run_sweep(c.cfg, &r.res) != EGLAB_OK) return die("run");
    if (eglab_results_write(r.res, c.cfg, out.empty() ? nullptr : out.c_str()) != EGLAB_OK)
        return die("write");
    size_t cells = 0;
    int within = 0;
    double alpha = 0;
    eglab_results_cell_count(r.res, &cells);
    eglab_results_all_within_bound(r.res, &within);
    eglab_results_alpha(r.res, &alpha);
    if (verbose)
        std::printf("cells: %zu  alpha: %.6g  held-out bounds: %s\n", cells, alpha,
                    within ? "pass" : "fail");
    return within ? 0 : 2;
}

int cmd_bounds(const std::string& path, const std::string& out, int threads, bool verbose) {
    // Same pipeline; the bounds table is part of the written reports.
    return cmd_run(path, out, threads, verbose);
}

int cmd_calibrate(const std::string& path, int threads, bool verbose) {
    eglab_set_threads(threads);
    ConfigHolder c;
    if (eglab_config_load(path.c_str(), &c.cfg) != EGLAB_OK) return die("config");
    ResultsHolder r;
    if (eglab_run_sweep(c.cfg, &r.res) != EGLAB_OK) return die("run");
    double alpha = 0;
    eglab_results_alpha(r.res, &alpha);
    std::printf("alpha: %.17g\n", alpha);
    if (verbose) std::printf("calibration details are written to summary.txt by `run`\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"egorovlab experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    bool verbose = false;
    app.add_flag("--verbose", verbose, "print progress");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* run = app.add_subcommand("run", "run an (hbar, N, t) sweep and write CSV reports");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");

    auto* bounds = app.add_subcommand("bounds", "evaluate bound tables for a sweep");
    bounds->add_option("config", config_path, "experiment config file")->required();
    bounds->add_option("--out", out_dir, "output directory (overrides config)");

    auto* calib = app.add_subcommand("calibrate", "calibrate (E, F) on the designated cell");
    calib->add_option("config", config_path, "experiment config file")->required();

    app.add_subcommand("selftest", "quick library sanity checks");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("run")) return cmd_run(config_path, out_dir, threads, verbose);
    if (app.got_subcommand("bounds")) return cmd_bounds(config_path, out_dir, threads, verbose);
    if (app.got_subcommand("calibrate")) return cmd_calibrate(config_path, threads, verbose);
    if (app.got_subcommand("selftest")) {
        eglab_set_threads(threads);
        if (eglab_selftest(1) != EGLAB_OK) {
            std::fprintf(stderr, "selftest failed: %s\n", eglab_last_error());
            return 1;
        }
        std::printf("selftest passed\n");
        return 0;
    }
    return 1;
}
