#ifndef EGLAB_EGOROV_HPP
#define EGLAB_EGOROV_HPP

#include "flow.hpp"
#include "moyal.hpp"

namespace eglab {

// Expansion terms b_j^t and remainder symbols r_k. The chain alternates
// pullback and defect,
//   g_0 = b,  g_l = Delta_hbar(g_{l-1} o phi^{s_l}),
// and b_j^t integrates g_j o phi^{t - sum s} over the standard simplex
// s_1 + ... + s_j <= t (the s-variable substitution; the increments are the
// pullback durations and sum to t together with the final leg).

struct QuadratureControl {
    int nodes = 12;        // Gauss-Legendre nodes per simplex axis
    int max_doublings = 1; // node-count doublings for the error estimate
    double rel_tol = 1e-8; // target relative quadrature error
};

struct QuadratureReport {
    int nodes_used = 0;
    double est_error = 0; // max-norm difference between the last two levels,
                          // relative to the finer result
    bool converged = true;
};

struct RemainderSymbol {
    int k = 0;
    std::vector<double> times; // pullback increments, all >= 0
    Symbol symbol;
};

struct ExpansionTerm {
    int j = 0;
    double t = 0;
    Symbol symbol;
    QuadratureReport report;
};

// r_1 = Delta(b o phi^{times[0]}), r_{k+1} = Delta(r_k o phi^{times[k]}).
RemainderSymbol remainder_r(const Symbol& b, FlowEngine& flow, const std::vector<double>& times,
                            const PullbackOptions& popts = {});

ExpansionTerm expansion_term(const Symbol& b, FlowEngine& flow, int j, double t,
                             const QuadratureControl& quad = {},
                             const PullbackOptions& popts = {});

enum class SumConvention {
    theorem,  // sum_{j=0}^{N} b_j hbar^{2j}   (Theorem statement)
    corollary // sum_{j=0}^{N-1} b_j hbar^{2j} (Corollary 1.12 convention)
};

struct Approximant {
    Symbol symbol;
    std::vector<ExpansionTerm> terms;
    SumConvention convention = SumConvention::theorem;
};

Approximant assemble_approximant(const Symbol& b, FlowEngine& flow, int order_n, double t,
                                 const QuadratureControl& quad = {},
                                 SumConvention conv = SumConvention::theorem,
                                 const PullbackOptions& popts = {});

// Volume of the nested time-integration domain via the same quadrature
// engine; the closed form t^N/N! is the oracle.
double simplex_volume(int order_n, double t, const QuadratureControl& quad = {});

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace eglab

#endif
