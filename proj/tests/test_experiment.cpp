#include "experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace eglab;

namespace {

const char* kSmallConfig = R"(
# harmonic smoke sweep
[grid]
M = 64
L = 6
[model]
name = harmonic
[observable]
width = 0.5
[sweep]
hbar = 0.3
N = 0, 1
t = 0.5, 1.0
[bounds]
sigma = 0.25
rho = 0.5
[quadrature]
nodes = 6
doublings = 0
[flow]
tol = 1e-11
[output]
dir = /tmp/eglab_test_out
)";

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing, defaults and rejections") {
    ExperimentConfig cfg = parse_config_text(kSmallConfig);
    CHECK(cfg.m == 64);
    CHECK(cfg.extent == 6.0);
    CHECK(cfg.model_name == "harmonic");
    CHECK(cfg.hbars == std::vector<double>{0.3});
    CHECK(cfg.orders == std::vector<int>{0, 1});
    CHECK(cfg.ts == std::vector<double>{0.5, 1.0});
    CHECK(cfg.quad.nodes == 6);
    validate_config(cfg);

    CHECK_THROWS_AS(parse_config_text("[grid]\nbogus = 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("[nonesuch]\nx = 1\n"), DomainError);

    ExperimentConfig unsorted = cfg;
    unsorted.ts = {1.0, 0.5};
    CHECK_THROWS_AS(validate_config(unsorted), DomainError);

    ExperimentConfig badh = cfg;
    badh.hbars = {-0.1};
    CHECK_THROWS_AS(validate_config(badh), DomainError);

    ExperimentConfig inadmissible = cfg;
    inadmissible.hbars = {0.001}; // band cannot cover the observable
    CHECK_THROWS_AS(validate_config(inadmissible), DomainError);

    ExperimentConfig badcal = cfg;
    badcal.calibration.enabled = true;
    badcal.calibration.order_n = 2; // not in the N list
    badcal.calibration.t = 0.5;
    badcal.calibration.hbar = 0.3;
    CHECK_THROWS_AS(validate_config(badcal), DomainError);
}

TEST_CASE("scaling fits recover synthetic slopes") {
    std::vector<ErrorRecord> recs;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        ErrorRecord r;
        r.model = "synthetic";
        r.hbar = h;
        r.order_n = 0;
        r.t = 1.0;
        r.error = h * h; // exact hbar^2
        recs.push_back(r);
    }
    SlopeFit f = fit_hbar_scaling(recs, 0, 1.0);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.residual <= 1e-12);

    std::vector<ErrorRecord> trecs;
    for (double t : {0.5, 1.0, 1.5, 2.0}) {
        ErrorRecord r;
        r.model = "synthetic";
        r.hbar = 0.1;
        r.order_n = 0;
        r.t = t;
        r.error = std::exp(3.0 * t);
        trecs.push_back(r);
    }
    SlopeFit g = fit_time_scaling(trecs, 0, 0.1);
    CHECK(g.slope == doctest::Approx(3.0).epsilon(1e-9));

    CHECK_THROWS_AS(fit_hbar_scaling(recs, 1, 1.0), DomainError); // no matching records
}

TEST_CASE("harmonic sweep: exactness, cell coverage, determinism of reports") {
    ExperimentConfig cfg = parse_config_text(kSmallConfig);
    SweepResult res = run_sweep(cfg);
    CHECK(res.failures.empty());
    CHECK(res.records.size() == 4); // 1 hbar x 2 t x 2 N
    for (const auto& r : res.records) CHECK(r.error <= 1e-6);
    // every configured cell appears exactly once
    for (double t : cfg.ts)
        for (int n : cfg.orders) {
            int count = 0;
            for (const auto& r : res.records)
                if (r.order_n == n && r.t == t) ++count;
            CHECK(count == 1);
        }
    std::filesystem::remove_all("/tmp/eglab_test_out");
    write_reports(res, cfg, "/tmp/eglab_test_out");
    std::string first = slurp("/tmp/eglab_test_out/errors.csv");
    CHECK(first.substr(0, 38) == "model,hbar,N,t,error,bound,within_bound");
    // rerun: byte-identical CSV output
    SweepResult res2 = run_sweep(cfg);
    write_reports(res2, cfg, "/tmp/eglab_test_out");
    CHECK(slurp("/tmp/eglab_test_out/errors.csv") == first);
    std::filesystem::remove_all("/tmp/eglab_test_out");
}

TEST_CASE("empty time list produces an empty table") {
    ExperimentConfig cfg = parse_config_text(kSmallConfig);
    cfg.ts.clear();
    SweepResult res = run_sweep(cfg);
    CHECK(res.records.empty());
    CHECK(res.failures.empty());
    std::filesystem::remove_all("/tmp/eglab_empty_out");
    write_reports(res, cfg, "/tmp/eglab_empty_out");
    std::string errors = slurp("/tmp/eglab_empty_out/errors.csv");
    CHECK(errors == "model,hbar,N,t,error,bound,within_bound\n");
    std::filesystem::remove_all("/tmp/eglab_empty_out");
}

TEST_CASE("library selftest passes") {
    std::ostringstream log;
    CHECK(run_selftest(log));
}
