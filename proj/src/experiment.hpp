#ifndef EGLAB_EXPERIMENT_HPP
#define EGLAB_EXPERIMENT_HPP

#include "bounds.hpp"
#include "egorov.hpp"
#include "quantum.hpp"

#include <iosfwd>
#include <map>

namespace eglab {

struct ObservableSpec {
    double amp = 1.0;
    double width = 0.35;
    double center_x = 0, center_xi = 0;
};

struct CalibrationSpec {
    bool enabled = false;
    int order_n = 2;
    double t = 0.5;
    double hbar = 0.1;
};

struct ExperimentConfig {
    std::string model_name = "gaussian-well";
    std::map<std::string, double> model_params;
    int m = 256;
    double extent = 8.0;
    std::vector<double> hbars;
    std::vector<int> orders;
    std::vector<double> ts;
    ObservableSpec observable;
    double sigma = 0.25, rho = 0.5;
    QuadratureControl quad;
    double flow_tol = 1e-11;
    CalibrationSpec calibration;
    std::string out_dir = "out";
};

// Flat key-value text file with [section] headers; lists are
// comma-separated. Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

struct ErrorRecord {
    std::string model;
    double hbar = 0;
    int order_n = 0;
    double t = 0;
    double error = 0; // ||B_t - B_t^N||
    double bound = 0; // remainder_bound * hbar^{2(N+1)}
    bool within_bound = false;
};

struct TermInfo {
    double hbar = 0, t = 0;
    int j = 0;
    double max_abs = 0;   // grid max norm of b_j^t
    double op_norm = 0;   // ||Op(b_j^t)||
    double l1_bound = 0;  // L1 Fourier bound for b_j^t
    QuadratureReport report;
};

struct CellFailure {
    double hbar = 0;
    double t = 0;
    std::string message;
};

struct SweepResult {
    std::vector<ErrorRecord> records;
    std::vector<TermInfo> terms;
    std::vector<CellFailure> failures;
    BoundContext ctx;
    double alpha = 0;
    double observable_l1 = 0;      // L1 Fourier bound of b
    double observable_norm = 0;    // ||Op(b)||
    bool all_within_bound = true;  // over held-out cells when calibrated
};

SweepResult run_sweep(const ExperimentConfig& cfg);

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0; // rms of fit residuals
    int count = 0;
};

// Least-squares slope of y against x.
SlopeFit fit_line(const std::vector<std::pair<double, double>>& xy);
// log(error) against log(hbar) at fixed (N, t).
SlopeFit fit_hbar_scaling(const std::vector<ErrorRecord>& records, int order_n, double t);
// log(error) against t at fixed (N, hbar).
SlopeFit fit_time_scaling(const std::vector<ErrorRecord>& records, int order_n, double hbar);

// errors.csv, bounds.csv, summary.txt; byte-identical for identical inputs.
void write_reports(const SweepResult& res, const ExperimentConfig& cfg,
                   const std::string& out_dir);

// Quick library sanity checks; prints one line per check.
bool run_selftest(std::ostream& log);

} // namespace eglab

#endif
