#include "egorov.hpp"

#include <cmath>

namespace eglab {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gauss_legendre_01: need at least one node");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration from Chebyshev initial guesses on [-1, 1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1 - x * x) * pp * pp);
        nodes[i] = 0.5 * (1 - x);
        nodes[n - 1 - i] = 0.5 * (1 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

RemainderSymbol remainder_r(const Symbol& b, FlowEngine& flow, const std::vector<double>& times,
                            const PullbackOptions& popts) {
    if (times.empty()) throw DomainError("remainder_r: order k must be >= 1");
    for (double u : times)
        if (!(u >= 0)) throw DomainError("remainder_r: pullback durations must be nonnegative");
    RemainderSymbol r;
    r.k = static_cast<int>(times.size());
    r.times = times;
    Symbol g = b;
    for (double u : times) {
        if (is_zero(g)) {
            g = zero_like(g);
            break;
        }
        g = delta_h(pullback(g, *flow.map(u), popts), flow.model());
    }
    r.symbol = std::move(g);
    return r;
}

namespace {

// Recursive evaluation of the nested simplex integral. At each level the
// stick-breaking substitution s = remaining * u maps the Gauss rule on [0,1]
// onto [0, remaining]; the Jacobian factors multiply into the weight.
// Symbols that are exactly zero short-circuit: Delta and pullback of the
// zero symbol are zero, so the whole subtree vanishes identically.
struct SimplexWalker {
    FlowEngine& flow;
    const PullbackOptions& popts;
    const std::vector<double>& u;
    const std::vector<double>& w;
    int depth = 0;

    void walk(const Symbol& g, double remaining, double weight, int level, Symbol& acc) const {
        if (is_zero(g)) return;
        for (std::size_t a = 0; a < u.size(); ++a) {
            const double s = remaining * u[a];
            const double wgt = weight * remaining * w[a];
            Symbol gs = delta_h(pullback(g, *flow.map(s), popts), flow.model());
            if (level + 1 == depth) {
                if (is_zero(gs)) continue;
                Symbol leaf = pullback(gs, *flow.map(remaining - s), popts);
                for (std::size_t i = 0; i < acc.values.size(); ++i)
                    acc.values[i] += wgt * leaf.values[i];
            } else {
                walk(gs, remaining - s, wgt, level + 1, acc);
            }
        }
    }
};

Symbol integrate_term(const Symbol& b, FlowEngine& flow, int j, double t, int nodes,
                      const PullbackOptions& popts) {
    std::vector<double> u, w;
    gauss_legendre_01(nodes, u, w);
    Symbol acc = zero_like(b);
    acc.real_observable = false; // accumulation; retagged by caller
    SimplexWalker walker{flow, popts, u, w, j};
    walker.walk(b, t, 1.0, 0, acc);
    if (b.real_observable)
        for (auto& v : acc.values) v = cdouble(v.real(), 0.0);
    acc.real_observable = b.real_observable;
    return acc;
}

} // namespace

ExpansionTerm expansion_term(const Symbol& b, FlowEngine& flow, int j, double t,
                             const QuadratureControl& quad, const PullbackOptions& popts) {
    if (j < 0) throw DomainError("expansion_term: order must be >= 0");
    if (t < 0) throw DomainError("expansion_term: time must be >= 0");
    ExpansionTerm term;
    term.j = j;
    term.t = t;
    if (j == 0) {
        term.symbol = pullback(b, *flow.map(t), popts);
        term.report.nodes_used = 0;
        term.report.est_error = 0;
        term.report.converged = true;
        return term;
    }
    if (t == 0) {
        term.symbol = zero_like(b); // degenerate simplex
        return term;
    }
    if (flow.model().w_is_zero()) {
        // Delta_hbar vanishes identically for quadratic generators, so every
        // integrand of order j >= 1 is the zero symbol.
        term.symbol = zero_like(b);
        return term;
    }
    int nodes = std::max(quad.nodes, 2);
    Symbol coarse = integrate_term(b, flow, j, t, nodes, popts);
    term.report.nodes_used = nodes;
    Symbol best = coarse;
    for (int d = 0; d < quad.max_doublings; ++d) {
        nodes *= 2;
        Symbol fine = integrate_term(b, flow, j, t, nodes, popts);
        double scale = std::max(max_abs(fine), 1e-300);
        term.report.est_error = max_abs_diff(fine, best) / scale;
        term.report.nodes_used = nodes;
        best = std::move(fine);
        if (term.report.est_error <= quad.rel_tol) break;
    }
    term.report.converged = term.report.est_error <= quad.rel_tol;
    term.symbol = std::move(best);
    return term;
}

Approximant assemble_approximant(const Symbol& b, FlowEngine& flow, int order_n, double t,
                                 const QuadratureControl& quad, SumConvention conv,
                                 const PullbackOptions& popts) {
    if (order_n < 0) throw DomainError("assemble_approximant: order must be >= 0");
    const int jmax = conv == SumConvention::theorem ? order_n : order_n - 1;
    Approximant ap;
    ap.convention = conv;
    Symbol sum = zero_like(b);
    for (int j = 0; j <= jmax; ++j) {
        ExpansionTerm term = expansion_term(b, flow, j, t, quad, popts);
        const double coeff = std::pow(b.hbar, 2 * j);
        for (std::size_t i = 0; i < sum.values.size(); ++i)
            sum.values[i] += coeff * term.symbol.values[i];
        ap.terms.push_back(std::move(term));
    }
    sum.real_observable = b.real_observable;
    if (sum.real_observable)
        for (auto& v : sum.values) v = cdouble(v.real(), 0.0);
    ap.symbol = std::move(sum);
    return ap;
}

namespace {

double simplex_recurse(const std::vector<double>& u, const std::vector<double>& w,
                       double remaining, int level, int depth) {
    double acc = 0;
    for (std::size_t a = 0; a < u.size(); ++a) {
        const double s = remaining * u[a];
        const double wgt = remaining * w[a];
        acc += wgt * (level + 1 == depth ? 1.0 : simplex_recurse(u, w, remaining - s, level + 1, depth));
    }
    return acc;
}

} // namespace

double simplex_volume(int order_n, double t, const QuadratureControl& quad) {
    if (order_n < 1) throw DomainError("simplex_volume: order must be >= 1");
    if (t < 0) throw DomainError("simplex_volume: time must be >= 0");
    std::vector<double> u, w;
    gauss_legendre_01(std::max(quad.nodes, 2), u, w);
    return simplex_recurse(u, w, t, 0, order_n);
}

} // namespace eglab
