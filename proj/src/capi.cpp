#include "egorovlab.h"

#include "analytic.hpp"
#include "experiment.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace eglab;

namespace {

thread_local std::string g_error;

eglab_status fail(eglab_status code, const char* what) {
    g_error = what;
    return code;
}

template <typename Fn>
eglab_status guarded(Fn&& fn) {
    try {
        fn();
        return EGLAB_OK;
    } catch (const DomainError& e) {
        return fail(EGLAB_ERR_INVALID_ARG, e.what());
    } catch (const GridMismatch& e) {
        return fail(EGLAB_ERR_INVALID_ARG, e.what());
    } catch (const NumericError& e) {
        return fail(EGLAB_ERR_NUMERIC, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(EGLAB_ERR_INVALID_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(EGLAB_ERR_INTERNAL, e.what());
    }
}

std::map<std::string, double> parse_params(const char* params) {
    std::map<std::string, double> out;
    if (!params || !*params) return out;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw DomainError("model params: expected key=value");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

} // namespace

struct eglab_grid {
    PhaseGrid g;
};
struct eglab_symbol {
    Symbol s;
};
struct eglab_model {
    HamiltonianModel m;
};
struct eglab_flow {
    std::unique_ptr<FlowEngine> engine;
};
struct eglab_operator {
    QuantumOperator op;
};
struct eglab_boundctx {
    BoundContext ctx;
};
struct eglab_config {
    ExperimentConfig cfg;
};
struct eglab_results {
    SweepResult res;
};

extern "C" {

const char* eglab_version(void) { return "egorovlab 1.0.0"; }

const char* eglab_last_error(void) { return g_error.c_str(); }

void eglab_set_threads(int n) { set_thread_count(n); }

eglab_status eglab_grid_create(int points_per_axis, double extent, eglab_grid** out) {
    if (!out) return fail(EGLAB_ERR_INVALID_ARG, "null output pointer");
    return guarded([&] {
        PhaseGrid g{1, points_per_axis, extent};
        g.validate();
        *out = new eglab_grid{g};
    });
}

void eglab_grid_free(eglab_grid* g) { delete g; }

eglab_status eglab_symbol_gaussian(const eglab_grid* g, double hbar, double amp, double width,
                                   double cx, double cxi, eglab_symbol** out) {
    if (!g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        AnalyticSymbol a;
        a.amp = amp;
        a.width_x = a.width_xi = width;
        a.center_x = cx;
        a.center_xi = cxi;
        if (!(width > 0)) throw DomainError("gaussian width must be positive");
        *out = new eglab_symbol{sample(a, g->g, hbar)};
    });
}

eglab_status eglab_symbol_quadratic(const eglab_grid* g, double hbar, double c0, double gx,
                                    double gxi, double axx, double axxi, double axixi,
                                    eglab_symbol** out) {
    if (!g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        QuadraticForm q{c0, gx, gxi, axx, axxi, axixi};
        *out = new eglab_symbol{make_quadratic_symbol(g->g, hbar, q)};
    });
}

eglab_status eglab_symbol_from_data(const eglab_grid* g, double hbar, const double* reim,
                                    size_t count, eglab_symbol** out) {
    if (!g || !out || !reim) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        if (count != 2 * g->g.size()) throw DomainError("value count != 2*M^2");
        Symbol s;
        s.grid = g->g;
        s.hbar = hbar;
        s.values.resize(g->g.size());
        for (std::size_t i = 0; i < s.values.size(); ++i)
            s.values[i] = cdouble(reim[2 * i], reim[2 * i + 1]);
        s.validate();
        *out = new eglab_symbol{std::move(s)};
    });
}

eglab_status eglab_symbol_values(const eglab_symbol* s, double* reim, size_t count) {
    if (!s || !reim) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        if (count != 2 * s->s.values.size()) throw DomainError("buffer size != 2*M^2");
        for (std::size_t i = 0; i < s->s.values.size(); ++i) {
            reim[2 * i] = s->s.values[i].real();
            reim[2 * i + 1] = s->s.values[i].imag();
        }
    });
}

eglab_status eglab_symbol_max_abs(const eglab_symbol* s, double* out) {
    if (!s || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = max_abs(s->s); });
}

eglab_status eglab_symbol_save(const eglab_symbol* s, const char* path) {
    if (!s || !path) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] { save_symbol(s->s, path); });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

eglab_status eglab_symbol_load(const char* path, eglab_symbol** out) {
    if (!out || !path) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] { *out = new eglab_symbol{load_symbol(path)}; });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

eglab_status eglab_symbol_write_csv(const eglab_symbol* s, const char* path) {
    if (!s || !path) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        std::ofstream os(path, std::ios::trunc);
        if (!os) throw NumericError(std::string("cannot open ") + path);
        write_symbol_csv(s->s, os);
    });
}

void eglab_symbol_free(eglab_symbol* s) { delete s; }

eglab_status eglab_model_create(const char* name, const char* params, eglab_model** out) {
    if (!name || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_model{make_model(name, parse_params(params))}; });
}

void eglab_model_free(eglab_model* m) { delete m; }

eglab_status eglab_model_alpha(const eglab_model* m, double sigma, double* out) {
    if (!m || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = estimate_alpha(m->m, sigma); });
}

eglab_status eglab_flow_create(const eglab_model* m, const eglab_grid* g, double tol,
                               eglab_flow** out) {
    if (!m || !g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        FlowOptions opts;
        if (tol > 0) opts.tol = tol;
        auto f = new eglab_flow;
        f->engine = std::make_unique<FlowEngine>(m->m, g->g, opts);
        *out = f;
    });
}

void eglab_flow_free(eglab_flow* f) { delete f; }

eglab_status eglab_pullback(eglab_flow* f, const eglab_symbol* b, double t, eglab_symbol** out) {
    if (!f || !b || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_symbol{pullback(b->s, *f->engine->map(t))}; });
}

eglab_status eglab_star_product(const eglab_symbol* f, const eglab_symbol* g,
                                eglab_symbol** out) {
    if (!f || !g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_symbol{star_product(f->s, g->s)}; });
}

eglab_status eglab_moyal_bracket(const eglab_symbol* f, const eglab_symbol* g,
                                 eglab_symbol** out) {
    if (!f || !g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_symbol{moyal_bracket(f->s, g->s)}; });
}

eglab_status eglab_moyal_expansion(const eglab_symbol* f, const eglab_symbol* g, int order,
                                   eglab_symbol** out) {
    if (!f || !g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_symbol{moyal_expansion(f->s, g->s, order)}; });
}

eglab_status eglab_delta_h(const eglab_symbol* b, const eglab_model* m, eglab_symbol** out) {
    if (!b || !m || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_symbol{delta_h(b->s, m->m)}; });
}

eglab_status eglab_expansion_term(const eglab_symbol* b, eglab_flow* f, int j, double t,
                                  int quad_nodes, eglab_symbol** out) {
    if (!b || !f || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        QuadratureControl q;
        if (quad_nodes > 0) q.nodes = quad_nodes;
        *out = new eglab_symbol{expansion_term(b->s, *f->engine, j, t, q).symbol};
    });
}

eglab_status eglab_assemble_approximant(const eglab_symbol* b, eglab_flow* f, int order_n,
                                        double t, int quad_nodes, int convention,
                                        eglab_symbol** out) {
    if (!b || !f || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        QuadratureControl q;
        if (quad_nodes > 0) q.nodes = quad_nodes;
        SumConvention conv = convention == 1 ? SumConvention::corollary : SumConvention::theorem;
        *out = new eglab_symbol{assemble_approximant(b->s, *f->engine, order_n, t, q, conv).symbol};
    });
}

eglab_status eglab_simplex_volume(int order_n, double t, int quad_nodes, double* out) {
    if (!out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        QuadratureControl q;
        if (quad_nodes > 0) q.nodes = quad_nodes;
        *out = simplex_volume(order_n, t, q);
    });
}

eglab_status eglab_weyl_quantize(const eglab_symbol* b, eglab_operator** out) {
    if (!b || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_operator{weyl_quantize(b->s)}; });
}

eglab_status eglab_quantize_model(const eglab_model* m, const eglab_grid* g, double hbar,
                                  eglab_operator** out) {
    if (!m || !g || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        *out = new eglab_operator{quantize_model(m->m, position_grid(g->g, hbar))};
    });
}

eglab_status eglab_propagator(const eglab_operator* h, double t, eglab_operator** out) {
    if (!h || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_operator{propagator(h->op, t)}; });
}

eglab_status eglab_heisenberg_evolve(const eglab_operator* b, const eglab_operator* h, double t,
                                     eglab_operator** out) {
    if (!b || !h || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_operator{heisenberg_evolve(b->op, h->op, t)}; });
}

eglab_status eglab_operator_norm(const eglab_operator* a, double* out) {
    if (!a || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = operator_norm(a->op); });
}

eglab_status eglab_l1_fourier_bound(const eglab_symbol* r, double* out) {
    if (!r || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = l1_fourier_norm_bound(r->s); });
}

eglab_status eglab_operator_sub_norm(const eglab_operator* a, const eglab_operator* b,
                                     double* out) {
    if (!a || !b || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = operator_norm(add(a->op.mat, b->op.mat, -1.0)); });
}

eglab_status eglab_operator_save(const eglab_operator* a, const char* path) {
    if (!a || !path) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] { save_operator(a->op, path); });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

eglab_status eglab_operator_load(const char* path, eglab_operator** out) {
    if (!out || !path) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] { *out = new eglab_operator{load_operator(path)}; });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

void eglab_operator_free(eglab_operator* a) { delete a; }

eglab_status eglab_boundctx_create(int n, double alpha, double sigma, double rho, double bbar,
                                   double a_const, double e_const, double f_const,
                                   eglab_boundctx** out) {
    if (!out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        BoundContext ctx;
        ctx.n = n;
        ctx.alpha = alpha;
        ctx.sigma = sigma;
        ctx.rho = rho;
        ctx.bbar = bbar;
        ctx.a_const = a_const;
        ctx.e_const = e_const;
        ctx.f_const = f_const;
        ctx.validate();
        *out = new eglab_boundctx{ctx};
    });
}

void eglab_boundctx_free(eglab_boundctx* c) { delete c; }

eglab_status eglab_term_bound(const eglab_boundctx* c, int j, double t, double* out) {
    if (!c || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = term_bound(c->ctx, j, t).value; });
}

eglab_status eglab_remainder_bound(const eglab_boundctx* c, int order_n, double t, double* out) {
    if (!c || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = remainder_bound(c->ctx, order_n, t).value; });
}

eglab_status eglab_ehrenfest_time(double hbar, int order_n, double alpha, double* out) {
    if (!out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = ehrenfest_time(hbar, order_n, alpha).value; });
}

eglab_status eglab_iterated_log_order(double hbar, int depth_k, int* n_out, double* tmax_out) {
    if (!n_out || !tmax_out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        auto r = iterated_log_order(hbar, depth_k);
        *n_out = r.order_n;
        *tmax_out = r.t_max;
    });
}

eglab_status eglab_strip_schedule(const eglab_boundctx* c, int order_n, double t, double* e_out,
                                  double* gamma_out) {
    if (!c || !e_out || !gamma_out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] {
        StripSchedule s = strip_schedule(c->ctx, order_n, t);
        for (int k = 0; k < order_n; ++k) {
            e_out[k] = s.e[k];
            gamma_out[k] = s.gamma_recursion[k];
        }
    });
}

eglab_status eglab_config_load(const char* path, eglab_config** out) {
    if (!path || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] { *out = new eglab_config{load_config(path)}; });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

void eglab_config_free(eglab_config* c) { delete c; }

eglab_status eglab_run_sweep(const eglab_config* c, eglab_results** out) {
    if (!c || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    return guarded([&] { *out = new eglab_results{run_sweep(c->cfg)}; });
}

eglab_status eglab_results_write(const eglab_results* r, const eglab_config* c,
                                 const char* out_dir) {
    if (!r || !c) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    auto st = guarded([&] {
        write_reports(r->res, c->cfg, out_dir && *out_dir ? out_dir : c->cfg.out_dir);
    });
    return st == EGLAB_ERR_NUMERIC ? EGLAB_ERR_IO : st;
}

eglab_status eglab_results_cell_count(const eglab_results* r, size_t* out) {
    if (!r || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    *out = r->res.records.size();
    return EGLAB_OK;
}

eglab_status eglab_results_all_within_bound(const eglab_results* r, int* out) {
    if (!r || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    *out = r->res.all_within_bound ? 1 : 0;
    return EGLAB_OK;
}

eglab_status eglab_results_alpha(const eglab_results* r, double* out) {
    if (!r || !out) return fail(EGLAB_ERR_INVALID_ARG, "null pointer");
    *out = r->res.alpha;
    return EGLAB_OK;
}

void eglab_results_free(eglab_results* r) { delete r; }

eglab_status eglab_selftest(int verbose) {
    std::ostringstream sink;
    bool ok = false;
    auto st = guarded([&] { ok = run_selftest(verbose ? std::cout : sink); });
    if (st != EGLAB_OK) return st;
    return ok ? EGLAB_OK : fail(EGLAB_ERR_NUMERIC, "selftest failed");
}

} // extern "C"
