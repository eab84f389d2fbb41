/* egorovlab — C API for the semiclassical Heisenberg-evolution laboratory.
 *
 * All entry points return eglab_status; EGLAB_OK is 0. On failure the
 * thread-local message from eglab_last_error() describes the problem.
 * Objects are opaque handles released with their eglab_*_free function.
 * Handles are not thread-safe individually; distinct handles may be used
 * from distinct threads.
 */
#ifndef EGOROVLAB_H
#define EGOROVLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eglab_status {
    EGLAB_OK = 0,
    EGLAB_ERR_INVALID_ARG = 1, /* bad parameter or domain violation */
    EGLAB_ERR_NUMERIC = 2,     /* numerical failure (integration, eigensolve, ...) */
    EGLAB_ERR_IO = 3,          /* file read/write failure */
    EGLAB_ERR_INTERNAL = 4
} eglab_status;

const char* eglab_version(void);
const char* eglab_last_error(void);
void eglab_set_threads(int n);

typedef struct eglab_grid eglab_grid;         /* phase-space grid */
typedef struct eglab_symbol eglab_symbol;     /* complex grid function + hbar */
typedef struct eglab_model eglab_model;       /* Hamiltonian model */
typedef struct eglab_flow eglab_flow;         /* flow map provider (cached) */
typedef struct eglab_operator eglab_operator; /* dense operator on the position grid */
typedef struct eglab_boundctx eglab_boundctx; /* constants of the estimates */
typedef struct eglab_config eglab_config;     /* experiment configuration */
typedef struct eglab_results eglab_results;   /* sweep results */

/* ---- grids and symbols ---- */

eglab_status eglab_grid_create(int points_per_axis, double extent, eglab_grid** out);
void eglab_grid_free(eglab_grid* g);

/* Gaussian observable amp * exp(-((x-cx)^2 + (xi-cxi)^2) / (2 width^2)). */
eglab_status eglab_symbol_gaussian(const eglab_grid* g, double hbar, double amp, double width,
                                   double cx, double cxi, eglab_symbol** out);
/* Quadratic polynomial c0 + gx x + gxi xi + (axx x^2 + 2 axxi x xi + axixi xi^2)/2
 * (carries the exact-quantization tag). */
eglab_status eglab_symbol_quadratic(const eglab_grid* g, double hbar, double c0, double gx,
                                    double gxi, double axx, double axxi, double axixi,
                                    eglab_symbol** out);
/* Interleaved re,im values, x-major, length 2*M*M. */
eglab_status eglab_symbol_from_data(const eglab_grid* g, double hbar, const double* reim,
                                    size_t count, eglab_symbol** out);
eglab_status eglab_symbol_values(const eglab_symbol* s, double* reim, size_t count);
eglab_status eglab_symbol_max_abs(const eglab_symbol* s, double* out);
eglab_status eglab_symbol_save(const eglab_symbol* s, const char* path);
eglab_status eglab_symbol_load(const char* path, eglab_symbol** out);
eglab_status eglab_symbol_write_csv(const eglab_symbol* s, const char* path);
void eglab_symbol_free(eglab_symbol* s);

/* ---- Hamiltonian models and classical flow ---- */

/* name: "harmonic", "free", "gaussian-well", "pendulum-window";
 * params: "key=value;key=value" (V0, w), may be NULL. */
eglab_status eglab_model_create(const char* name, const char* params, eglab_model** out);
void eglab_model_free(eglab_model* m);
eglab_status eglab_model_alpha(const eglab_model* m, double sigma, double* out);

eglab_status eglab_flow_create(const eglab_model* m, const eglab_grid* g, double tol,
                               eglab_flow** out);
void eglab_flow_free(eglab_flow* f);
/* (b o phi^t); the flow provider caches maps across calls. */
eglab_status eglab_pullback(eglab_flow* f, const eglab_symbol* b, double t, eglab_symbol** out);

/* ---- Moyal calculus ---- */

eglab_status eglab_star_product(const eglab_symbol* f, const eglab_symbol* g, eglab_symbol** out);
eglab_status eglab_moyal_bracket(const eglab_symbol* f, const eglab_symbol* g, eglab_symbol** out);
eglab_status eglab_moyal_expansion(const eglab_symbol* f, const eglab_symbol* g, int order,
                                   eglab_symbol** out);
eglab_status eglab_delta_h(const eglab_symbol* b, const eglab_model* m, eglab_symbol** out);

/* ---- Egorov expansion ---- */

eglab_status eglab_expansion_term(const eglab_symbol* b, eglab_flow* f, int j, double t,
                                  int quad_nodes, eglab_symbol** out);
/* convention: 0 = sum_{j<=N} hbar^{2j} b_j (Theorem), 1 = sum_{j<N} (Corollary). */
eglab_status eglab_assemble_approximant(const eglab_symbol* b, eglab_flow* f, int order_n,
                                        double t, int quad_nodes, int convention,
                                        eglab_symbol** out);
eglab_status eglab_simplex_volume(int order_n, double t, int quad_nodes, double* out);

/* ---- quantum reference ---- */

eglab_status eglab_weyl_quantize(const eglab_symbol* b, eglab_operator** out);
eglab_status eglab_quantize_model(const eglab_model* m, const eglab_grid* g, double hbar,
                                  eglab_operator** out);
eglab_status eglab_propagator(const eglab_operator* h, double t, eglab_operator** out);
eglab_status eglab_heisenberg_evolve(const eglab_operator* b, const eglab_operator* h, double t,
                                     eglab_operator** out);
eglab_status eglab_operator_norm(const eglab_operator* a, double* out);
eglab_status eglab_l1_fourier_bound(const eglab_symbol* r, double* out);
eglab_status eglab_operator_sub_norm(const eglab_operator* a, const eglab_operator* b,
                                     double* out); /* ||A - B|| */
eglab_status eglab_operator_save(const eglab_operator* a, const char* path);
eglab_status eglab_operator_load(const char* path, eglab_operator** out);
void eglab_operator_free(eglab_operator* a);

/* ---- bounds ---- */

eglab_status eglab_boundctx_create(int n, double alpha, double sigma, double rho, double bbar,
                                   double a_const, double e_const, double f_const,
                                   eglab_boundctx** out);
void eglab_boundctx_free(eglab_boundctx* c);
eglab_status eglab_term_bound(const eglab_boundctx* c, int j, double t, double* out);
eglab_status eglab_remainder_bound(const eglab_boundctx* c, int order_n, double t, double* out);
eglab_status eglab_ehrenfest_time(double hbar, int order_n, double alpha, double* out);
/* n_out: integer part of the k-fold iterated log; tmax_out: companion window. */
eglab_status eglab_iterated_log_order(double hbar, int depth_k, int* n_out, double* tmax_out);
/* e_k and Gamma_k (recursion form) for k = 1..N into caller arrays of length N. */
eglab_status eglab_strip_schedule(const eglab_boundctx* c, int order_n, double t, double* e_out,
                                  double* gamma_out);

/* ---- experiments ---- */

eglab_status eglab_config_load(const char* path, eglab_config** out);
void eglab_config_free(eglab_config* c);
eglab_status eglab_run_sweep(const eglab_config* c, eglab_results** out);
/* Writes errors.csv, bounds.csv, summary.txt under out_dir (NULL: config dir). */
eglab_status eglab_results_write(const eglab_results* r, const eglab_config* c,
                                 const char* out_dir);
eglab_status eglab_results_cell_count(const eglab_results* r, size_t* out);
eglab_status eglab_results_all_within_bound(const eglab_results* r, int* out);
eglab_status eglab_results_alpha(const eglab_results* r, double* out);
void eglab_results_free(eglab_results* r);

/* Quick library sanity checks; returns EGLAB_OK when all pass. Prints one
 * line per check to stdout when verbose is nonzero. */
eglab_status eglab_selftest(int verbose);

#ifdef __cplusplus
}
#endif

#endif /* EGOROVLAB_H */
