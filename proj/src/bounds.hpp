#ifndef EGLAB_BOUNDS_HPP
#define EGLAB_BOUNDS_HPP

#include "common.hpp"

namespace eglab {

// Every constant appearing in the estimates. alpha comes from
// estimate_alpha, Bbar from the strip norm of the observable, A from the
// defect-lemma calibration, E and F from calibrate_constants. delta and d
// are the strip-shrinking increments; when zero, the schedule defaults to
// sigma/(2N), rho/(2N).
struct BoundContext {
    int n = 1;
    double alpha = 0;
    double sigma = 0, rho = 0;
    double bbar = 0;
    double a_const = 1;
    double e_const = 1, f_const = 1;
    double delta = 0, d = 0;
    bool calibrated = false;

    void validate() const;
};

// A bound value carried with its log; overflow keeps the log finite while
// the value saturates to +inf.
struct BoundValue {
    double value = 0;
    double log_value = 0;
    bool overflow = false;
};

BoundValue bound_from_log(double lg);

struct StripSchedule {
    std::vector<double> e;               // e_k = exp(-alpha t k)
    std::vector<double> gamma_recursion; // iterated Gamma_{k+1} = Gamma_k A /((e_k e^{-alpha t})^{6n+3} d^{4n+3} delta^{2n})
    std::vector<double> gamma_printed;   // Gamma_1 (A e_1/(d^{4n+3} delta^{2n}))^{k-1} [exp(alpha k(k-1)/2)]^{6n+3}
};

// Sequences e_k and Gamma_k for k = 1..N. Throws on strip exhaustion
// (N delta >= sigma or N d >= rho).
StripSchedule strip_schedule(const BoundContext& ctx, int order_n, double t);

// ||B_j^t|| <= [e E e^{7 a t} j^{6n+3}]^j (Bbar F / j!) e^{(4n+2) a t}
//              [exp(a j(j-1) t / 2)]^{6n+3}
BoundValue term_bound(const BoundContext& ctx, int j, double t);

// ||S_N^t|| <= [e E e^{7 a t} N^{6n+3} t]^N (Bbar F / N!) e^{(4n+2) a t}
//              [exp(a N(N-1) t / 2)]^{6n+3}
// Stated for N >= 2; N = 1 is the calibrated extension of the same formula.
BoundValue remainder_bound(const BoundContext& ctx, int order_n, double t);

struct EhrenfestTime {
    double value = 0;
    bool unrestricted = false; // alpha = 0: no Ehrenfest restriction
};
// T_N(hbar) = -2 log hbar / (alpha (N-1)).
EhrenfestTime ehrenfest_time(double hbar, int order_n, double alpha);

struct IteratedLogOrder {
    int order_n = 0;
    double t_max = 0; // |log hbar| / log^{[k]}(|log hbar|)
};
// N_k(hbar) = [log^{[k]}(|log hbar|)]; throws on chain collapse.
IteratedLogOrder iterated_log_order(double hbar, int depth_k);

// Eq. (stimaN) evaluated exactly as printed (reporting only; the
// verification suite uses remainder_bound).
BoundValue stimaN_bound(const BoundContext& ctx, int order_n, double hbar);

// Measurements available for calibration: j-term operator norms and
// remainder norms, all taken at the designated calibration cell.
struct CalibrationRecord {
    enum class Kind { term, remainder } kind = Kind::remainder;
    int order = 0; // j or N
    double t = 0;
    double norm = 0; // measured operator norm (remainders pre-divided by hbar^{2(N+1)})
};

// Smallest E with F = 1 such that every supplied measurement satisfies its
// bound; with no measurements the context is returned unchanged (and stays
// uncalibrated).
BoundContext calibrate_constants(const std::vector<CalibrationRecord>& records, BoundContext ctx);

} // namespace eglab

#endif
