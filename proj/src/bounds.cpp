#include "bounds.hpp"

#include <cmath>

namespace eglab {

void BoundContext::validate() const {
    if (n < 1) throw DomainError("BoundContext: n must be >= 1");
    if (alpha < 0) throw DomainError("BoundContext: alpha must be >= 0");
    if (!(sigma > 0) || !(rho > 0)) throw DomainError("BoundContext: sigma, rho must be positive");
    if (!(bbar > 0)) throw DomainError("BoundContext: Bbar must be positive");
    if (!(a_const > 0) || !(e_const > 0) || !(f_const > 0))
        throw DomainError("BoundContext: A, E, F must be positive");
    if (delta < 0 || d < 0) throw DomainError("BoundContext: shrinking increments must be >= 0");
}

BoundValue bound_from_log(double lg) {
    BoundValue v;
    v.log_value = lg;
    if (lg > 700) {
        v.value = std::numeric_limits<double>::infinity();
        v.overflow = true;
    } else {
        v.value = std::exp(lg);
    }
    return v;
}

StripSchedule strip_schedule(const BoundContext& ctx, int order_n, double t) {
    ctx.validate();
    if (order_n < 1) throw DomainError("strip_schedule: N must be >= 1");
    if (t < 0) throw DomainError("strip_schedule: t must be >= 0");
    double del = ctx.delta > 0 ? ctx.delta : ctx.sigma / (2.0 * order_n);
    double dd = ctx.d > 0 ? ctx.d : ctx.rho / (2.0 * order_n);
    if (order_n * del >= ctx.sigma || order_n * dd >= ctx.rho)
        throw DomainError("strip_schedule: shrinking schedule exhausts the strip");
    const double sixn3 = 6.0 * ctx.n + 3;
    const double fourn3 = 4.0 * ctx.n + 3;
    const double at = ctx.alpha * t;
    StripSchedule out;
    out.e.resize(order_n);
    out.gamma_recursion.resize(order_n);
    out.gamma_printed.resize(order_n);
    for (int k = 1; k <= order_n; ++k) out.e[k - 1] = std::exp(-at * k);
    const double lg_step = std::log(ctx.a_const) - fourn3 * std::log(dd) -
                           2.0 * ctx.n * std::log(del);
    // Gamma_1 = A Bbar / (delta^{2n} d^{4n+3}) e_1^{-(6n+3)}
    double lg1 = std::log(ctx.a_const) + std::log(ctx.bbar) - 2.0 * ctx.n * std::log(del) -
                 fourn3 * std::log(dd) + sixn3 * at;
    double lg = lg1;
    out.gamma_recursion[0] = bound_from_log(lg).value;
    for (int k = 2; k <= order_n; ++k) {
        // Gamma_k = Gamma_{k-1} A / ((e_{k-1} e^{-alpha t})^{6n+3} d^{4n+3} delta^{2n})
        lg += lg_step + sixn3 * at * k;
        out.gamma_recursion[k - 1] = bound_from_log(lg).value;
    }
    for (int k = 1; k <= order_n; ++k) {
        double lgp = lg1 + (k - 1) * (lg_step - at) + sixn3 * ctx.alpha * k * (k - 1) / 2.0;
        out.gamma_printed[k - 1] = bound_from_log(lgp).value;
    }
    return out;
}

namespace {

double common_log_factors(const BoundContext& ctx, int order, double t, bool with_time_factor) {
    const double sixn3 = 6.0 * ctx.n + 3;
    const double at = ctx.alpha * t;
    double lg = order * (1.0 + std::log(ctx.e_const) + 7.0 * at + sixn3 * std::log(double(order)));
    if (with_time_factor) {
        if (t == 0) return -std::numeric_limits<double>::infinity();
        lg += order * std::log(t);
    }
    lg += std::log(ctx.bbar * ctx.f_const) - std::lgamma(order + 1.0);
    lg += (4.0 * ctx.n + 2) * at;
    lg += sixn3 * ctx.alpha * order * (order - 1.0) * t / 2.0;
    return lg;
}

} // namespace

BoundValue term_bound(const BoundContext& ctx, int j, double t) {
    ctx.validate();
    if (j < 1) throw DomainError("term_bound: j must be >= 1");
    if (t < 0) throw DomainError("term_bound: t must be >= 0");
    return bound_from_log(common_log_factors(ctx, j, t, false));
}

BoundValue remainder_bound(const BoundContext& ctx, int order_n, double t) {
    ctx.validate();
    if (order_n < 1) throw DomainError("remainder_bound: N must be >= 1");
    if (t < 0) throw DomainError("remainder_bound: t must be >= 0");
    double lg = common_log_factors(ctx, order_n, t, true);
    if (lg == -std::numeric_limits<double>::infinity()) {
        BoundValue v;
        v.value = 0;
        v.log_value = lg;
        return v;
    }
    return bound_from_log(lg);
}

EhrenfestTime ehrenfest_time(double hbar, int order_n, double alpha) {
    if (!(hbar > 0) || !(hbar < 1)) throw DomainError("ehrenfest_time: need 0 < hbar < 1");
    if (order_n < 2) throw DomainError("ehrenfest_time: N must be >= 2");
    if (alpha < 0) throw DomainError("ehrenfest_time: alpha must be >= 0");
    EhrenfestTime out;
    if (alpha == 0) {
        out.value = std::numeric_limits<double>::infinity();
        out.unrestricted = true; // no Ehrenfest restriction
        return out;
    }
    out.value = -2.0 * std::log(hbar) / (alpha * (order_n - 1));
    return out;
}

IteratedLogOrder iterated_log_order(double hbar, int depth_k) {
    if (!(hbar > 0) || !(hbar < 1)) throw DomainError("iterated_log_order: need 0 < hbar < 1");
    if (depth_k < 1) throw DomainError("iterated_log_order: k must be >= 1");
    double x = std::abs(std::log(hbar));
    double chain = x;
    for (int i = 0; i < depth_k; ++i) {
        if (!(chain > 1))
            throw DomainError("iterated_log_order: log chain collapse (intermediate <= 1)");
        chain = std::log(chain);
    }
    // Guard the integer part against roundoff at exact powers.
    double rounded = std::round(chain);
    if (std::abs(chain - rounded) < 1e-12) chain = rounded;
    IteratedLogOrder out;
    out.order_n = static_cast<int>(std::floor(chain));
    out.t_max = x / chain;
    return out;
}

BoundValue stimaN_bound(const BoundContext& ctx, int order_n, double hbar) {
    ctx.validate();
    if (order_n < 2) throw DomainError("stimaN_bound: N must be >= 2");
    if (!(hbar > 0) || !(hbar < 1)) throw DomainError("stimaN_bound: need 0 < hbar < 1");
    if (!(ctx.alpha > 0)) throw DomainError("stimaN_bound: alpha must be positive");
    // (2 e^2 E / alpha)^N N^{(6n+1)N} Bbar F hbar^{2 - 15/alpha - (8n+4)/(alpha N)}
    // (-hbar log hbar)^N, as printed.
    const double lnh = std::log(hbar);
    double lg = order_n * (std::log(2.0) + 2.0 + std::log(ctx.e_const) - std::log(ctx.alpha));
    lg += (6.0 * ctx.n + 1) * order_n * std::log(double(order_n));
    lg += std::log(ctx.bbar * ctx.f_const);
    lg += (2.0 - 15.0 / ctx.alpha - (8.0 * ctx.n + 4) / (ctx.alpha * order_n)) * lnh;
    lg += order_n * std::log(-hbar * lnh);
    return bound_from_log(lg);
}

BoundContext calibrate_constants(const std::vector<CalibrationRecord>& records, BoundContext ctx) {
    if (records.empty()) {
        ctx.calibrated = false; // flagged: uncalibrated
        return ctx;
    }
    ctx.f_const = 1.0;
    const double sixn3 = 6.0 * ctx.n + 3;
    double log_e = -std::numeric_limits<double>::infinity();
    for (const auto& rec : records) {
        if (!(rec.norm > 0))
            throw DomainError("calibrate_constants: measured norms must be positive");
        if (rec.order < 1) throw DomainError("calibrate_constants: order must be >= 1");
        const int j = rec.order;
        const double at = ctx.alpha * rec.t;
        // Invert [e E e^{7at} j^{6n+3} (t)]^j (Bbar F / j!) e^{(4n+2)at} e^{...}
        double lg_rest = std::log(ctx.bbar * ctx.f_const) - std::lgamma(j + 1.0) +
                         (4.0 * ctx.n + 2) * at +
                         sixn3 * ctx.alpha * j * (j - 1.0) * rec.t / 2.0;
        double lg_bracket = (std::log(rec.norm) - lg_rest) / j;
        double lg_e = lg_bracket - 1.0 - 7.0 * at - sixn3 * std::log(double(j));
        if (rec.kind == CalibrationRecord::Kind::remainder) {
            if (!(rec.t > 0))
                throw DomainError("calibrate_constants: remainder records need t > 0");
            lg_e -= std::log(rec.t);
        }
        log_e = std::max(log_e, lg_e);
    }
    if (!std::isfinite(log_e))
        throw NumericError("calibrate_constants: infeasible calibration (no finite E works)");
    ctx.e_const = std::exp(log_e);
    ctx.calibrated = true;
    return ctx;
}

} // namespace eglab
