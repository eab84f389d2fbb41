#include "flow.hpp"

#include "fft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>

namespace eglab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

// Generic per-trajectory adaptive RK45 over a fixed-size state. Scalar is
// double (real flow) or cdouble (holomorphic extension).
template <typename Scalar, int N, typename Rhs>
void rk45_integrate(Rhs&& rhs, Scalar* y, double t0, double t1, double tol, long& steps,
                    long& rejected, int node_index) {
    if (t1 == t0) return;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(0.05, std::abs(t1 - t0));
    Scalar k1[N], k2[N], k3[N], k4[N], k5[N], k6[N], k7[N], ytmp[N], y5[N];
    rhs(y, k1);
    const double hmin = std::abs(t1 - t0) * 1e-15;
    int guard = 0;
    while (dir * (t1 - t) > 0) {
        if (++guard > 1000000) throw NumericError("flow integration stalled at node " +
                                                  std::to_string(node_index));
        if (dir * (t + h - t1) > 0) h = t1 - t;
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * A21 * k1[i];
        rhs(ytmp, k2);
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        rhs(ytmp, k3);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        rhs(ytmp, k4);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        rhs(ytmp, k5);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] +
                      h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        rhs(ytmp, k6);
        for (int i = 0; i < N; ++i)
            y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        rhs(y5, k7);
        double err = 0;
        for (int i = 0; i < N; ++i) {
            double e = std::abs(h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                     E6 * k6[i] + E7 * k7[i]));
            double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, e / sc);
        }
        if (err <= 1.0) {
            t += h;
            for (int i = 0; i < N; ++i) {
                y[i] = y5[i];
                k1[i] = k7[i];
            }
            ++steps;
            double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            ++rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            if (std::abs(h) < hmin)
                throw NumericError("step-size underflow in flow integration at node " +
                                   std::to_string(node_index));
        }
    }
}

struct EnsembleState {
    std::vector<double> x, xi;
    std::vector<double> j11, j12, j21, j22;
    bool with_jac = false;
};

// Advance every trajectory of the ensemble from t0 to t1 in place.
void advance_ensemble(const HamiltonianModel& h, EnsembleState& st, double t0, double t1,
                      double tol, IntegratorReport& rep) {
    if (t1 == t0) return;
    const std::size_t n = st.x.size();
    std::vector<long> steps(thread_count(), 0), rej(thread_count(), 0);
    std::atomic<int> tidx{0};
    std::mutex mtx;
    std::exception_ptr eptr;
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        int slot = tidx.fetch_add(1);
        long s = 0, r = 0;
        try {
            if (!st.with_jac) {
                for (std::size_t i = lo; i < hi; ++i) {
                    double y[2] = {st.x[i], st.xi[i]};
                    auto rhs = [&](const double* v, double* d) {
                        auto f = h.vector_field(v[0], v[1]);
                        d[0] = f[0];
                        d[1] = f[1];
                    };
                    rk45_integrate<double, 2>(rhs, y, t0, t1, tol, s, r, static_cast<int>(i));
                    st.x[i] = y[0];
                    st.xi[i] = y[1];
                }
            } else {
                for (std::size_t i = lo; i < hi; ++i) {
                    double y[6] = {st.x[i],   st.xi[i],  st.j11[i],
                                   st.j12[i], st.j21[i], st.j22[i]};
                    auto rhs = [&](const double* v, double* d) {
                        auto f = h.vector_field(v[0], v[1]);
                        auto H = h.hessian(v[0], v[1]);
                        d[0] = f[0];
                        d[1] = f[1];
                        // dJ/dt = A J, A = [[Hxxi, Hxixi], [-Hxx, -Hxxi]]
                        d[2] = H[1] * v[2] + H[2] * v[4];
                        d[3] = H[1] * v[3] + H[2] * v[5];
                        d[4] = -H[0] * v[2] - H[1] * v[4];
                        d[5] = -H[0] * v[3] - H[1] * v[5];
                    };
                    rk45_integrate<double, 6>(rhs, y, t0, t1, tol, s, r, static_cast<int>(i));
                    st.x[i] = y[0];
                    st.xi[i] = y[1];
                    st.j11[i] = y[2];
                    st.j12[i] = y[3];
                    st.j21[i] = y[4];
                    st.j22[i] = y[5];
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> g(mtx);
            if (!eptr) eptr = std::current_exception();
        }
        if (slot < static_cast<int>(steps.size())) {
            steps[slot] += s;
            rej[slot] += r;
        }
    });
    if (eptr) std::rethrow_exception(eptr);
    for (auto v : steps) rep.steps += v;
    for (auto v : rej) rep.rejected += v;
}

EnsembleState identity_state(const PhaseGrid& g, bool with_jac) {
    EnsembleState st;
    st.with_jac = with_jac;
    const int m = g.m;
    st.x.resize(g.size());
    st.xi.resize(g.size());
    for (int ix = 0; ix < m; ++ix)
        for (int ixi = 0; ixi < m; ++ixi) {
            st.x[static_cast<std::size_t>(ix) * m + ixi] = g.coord(ix);
            st.xi[static_cast<std::size_t>(ix) * m + ixi] = g.coord(ixi);
        }
    if (with_jac) {
        st.j11.assign(g.size(), 1.0);
        st.j12.assign(g.size(), 0.0);
        st.j21.assign(g.size(), 0.0);
        st.j22.assign(g.size(), 1.0);
    }
    return st;
}

FlowMap map_from_state(const PhaseGrid& g, double t, const EnsembleState& st,
                       const IntegratorReport& rep) {
    FlowMap f;
    f.grid = g;
    f.t = t;
    f.x = st.x;
    f.xi = st.xi;
    f.j11 = st.j11;
    f.j12 = st.j12;
    f.j21 = st.j21;
    f.j22 = st.j22;
    f.report = rep;
    return f;
}

void fill_energy_drift(const HamiltonianModel& h, const PhaseGrid& g, FlowMap& f) {
    const int m = g.m;
    double worst = 0;
    int worst_node = -1;
    for (int ix = 0; ix < m; ++ix)
        for (int ixi = 0; ixi < m; ++ixi) {
            std::size_t i = static_cast<std::size_t>(ix) * m + ixi;
            double e0 = h.eval(g.coord(ix), g.coord(ixi));
            double drift = std::abs(h.eval(f.x[i], f.xi[i]) - e0);
            if (drift > worst) {
                worst = drift;
                worst_node = static_cast<int>(i);
            }
        }
    f.report.max_energy_drift = worst;
    f.report.worst_node = worst_node;
}

} // namespace

FlowMap integrate_flow(const HamiltonianModel& h, const PhaseGrid& g, double t, double tol,
                       bool with_jacobian) {
    g.validate();
    if (!(tol > 0)) throw DomainError("integrate_flow: tol must be positive");
    if (!std::isfinite(t)) throw DomainError("integrate_flow: time must be finite");
    EnsembleState st = identity_state(g, with_jacobian);
    IntegratorReport rep;
    rep.tol = tol;
    advance_ensemble(h, st, 0.0, t, tol, rep);
    FlowMap f = map_from_state(g, t, st, rep);
    fill_energy_drift(h, g, f);
    return f;
}

struct FlowEngine::Impl {
    HamiltonianModel model;
    PhaseGrid grid;
    FlowOptions opts;
    std::mutex mtx;
    long built = 0;

    struct Entry {
        std::shared_ptr<const FlowMap> map;
        bool anchor = false;
        std::uint64_t stamp = 0;
    };
    std::map<long long, Entry> cache; // key = round(t / 1e-12)
    std::uint64_t clock = 0;

    static long long key_of(double t) { return llround(t / 1e-12); }

    std::size_t map_bytes() const { return grid.size() * 2 * sizeof(double) + sizeof(FlowMap); }

    void evict_if_needed() {
        std::size_t budget = opts.cache_bytes / std::max<std::size_t>(map_bytes(), 1);
        if (budget < 4) budget = 4;
        while (cache.size() > budget) {
            auto victim = cache.end();
            std::uint64_t oldest = ~0ull;
            for (auto it = cache.begin(); it != cache.end(); ++it) {
                if (it->second.anchor) continue;
                if (it->second.stamp < oldest) {
                    oldest = it->second.stamp;
                    victim = it;
                }
            }
            if (victim == cache.end()) {
                // only anchors left; evict the oldest anchor too
                for (auto it = cache.begin(); it != cache.end(); ++it)
                    if (it->second.stamp < oldest) {
                        oldest = it->second.stamp;
                        victim = it;
                    }
            }
            if (victim == cache.end()) break;
            cache.erase(victim);
        }
    }

    std::shared_ptr<const FlowMap> lookup(long long key) {
        if (!opts.cache_enabled) return nullptr;
        auto it = cache.find(key);
        if (it == cache.end()) return nullptr;
        it->second.stamp = ++clock;
        return it->second.map;
    }

    void store(long long key, std::shared_ptr<const FlowMap> m, bool anchor) {
        if (!opts.cache_enabled) return;
        Entry e;
        e.map = std::move(m);
        e.anchor = anchor;
        e.stamp = ++clock;
        cache[key] = std::move(e);
        evict_if_needed();
    }

    // Anchor index a holds the flow at a*anchor_dt, always built by chaining
    // anchor a-1 -> a. This fixed construction path is what makes cached and
    // uncached runs bit-identical.
    std::shared_ptr<const FlowMap> anchor(long a) {
        if (a == 0) {
            long long key = key_of(0.0);
            if (auto hit = lookup(key)) return hit;
            EnsembleState st = identity_state(grid, false);
            IntegratorReport rep;
            rep.tol = opts.tol;
            auto m = std::make_shared<FlowMap>(map_from_state(grid, 0.0, st, rep));
            fill_energy_drift(model, grid, *m);
            store(key, m, true);
            ++built;
            return m;
        }
        double ta = a * opts.anchor_dt;
        long long key = key_of(ta);
        if (auto hit = lookup(key)) return hit;
        auto prev = anchor(a - 1);
        EnsembleState st;
        st.with_jac = false;
        st.x = prev->x;
        st.xi = prev->xi;
        IntegratorReport rep = prev->report;
        advance_ensemble(model, st, prev->t, ta, opts.tol, rep);
        auto m = std::make_shared<FlowMap>(map_from_state(grid, ta, st, rep));
        fill_energy_drift(model, grid, *m);
        store(key, m, true);
        ++built;
        return m;
    }

    std::shared_ptr<const FlowMap> get(double t) {
        long long key = key_of(t);
        if (auto hit = lookup(key)) return hit;
        std::shared_ptr<const FlowMap> m;
        if (t >= 0) {
            long a = static_cast<long>(std::floor(t / opts.anchor_dt + 1e-12));
            double ta = a * opts.anchor_dt;
            if (key_of(ta) == key) return anchor(a);
            auto base = anchor(a);
            EnsembleState st;
            st.with_jac = false;
            st.x = base->x;
            st.xi = base->xi;
            IntegratorReport rep = base->report;
            advance_ensemble(model, st, base->t, t, opts.tol, rep);
            auto built_map = std::make_shared<FlowMap>(map_from_state(grid, t, st, rep));
            fill_energy_drift(model, grid, *built_map);
            m = built_map;
        } else {
            // negative times are rare (diagnostics); integrate directly
            auto built_map = std::make_shared<FlowMap>(
                integrate_flow(model, grid, t, opts.tol, false));
            m = built_map;
        }
        store(key, m, false);
        ++built;
        return m;
    }
};

FlowEngine::FlowEngine(HamiltonianModel h, PhaseGrid g, FlowOptions opts)
    : impl_(std::make_unique<Impl>()) {
    g.validate();
    impl_->model = std::move(h);
    impl_->grid = g;
    impl_->opts = opts;
}

FlowEngine::~FlowEngine() = default;

std::shared_ptr<const FlowMap> FlowEngine::map(double t) {
    std::lock_guard<std::mutex> g(impl_->mtx);
    return impl_->get(t);
}

const HamiltonianModel& FlowEngine::model() const { return impl_->model; }
const PhaseGrid& FlowEngine::grid() const { return impl_->grid; }
const FlowOptions& FlowEngine::options() const { return impl_->opts; }
long FlowEngine::maps_built() const { return impl_->built; }

namespace {

// Lagrange weights for an np-point stencil at fractional offset u in [0,1)
// measured from stencil node (np/2 - 1).
template <int NP>
void lagrange_weights(double u, double* w) {
    constexpr int off = NP / 2 - 1;
    double xs[NP];
    for (int i = 0; i < NP; ++i) xs[i] = i - off;
    for (int i = 0; i < NP; ++i) {
        double p = 1;
        for (int j = 0; j < NP; ++j) {
            if (i == j) continue;
            p *= (u - xs[j]) / (xs[i] - xs[j]);
        }
        w[i] = p;
    }
}

template <int NP>
cdouble interp_fine(const std::vector<cdouble>& fine, int m2, double ux, double uxi) {
    // ux, uxi: continuous indices on the fine lattice
    int bx = static_cast<int>(std::floor(ux));
    int bxi = static_cast<int>(std::floor(uxi));
    double wx[NP], wxi[NP];
    lagrange_weights<NP>(ux - bx, wx);
    lagrange_weights<NP>(uxi - bxi, wxi);
    constexpr int off = NP / 2 - 1;
    cdouble acc = 0;
    for (int i = 0; i < NP; ++i) {
        int gx = bx - off + i;
        gx = ((gx % m2) + m2) % m2;
        cdouble row = 0;
        const cdouble* base = fine.data() + static_cast<std::size_t>(gx) * m2;
        for (int j = 0; j < NP; ++j) {
            int gxi = bxi - off + j;
            gxi = ((gxi % m2) + m2) % m2;
            row += wxi[j] * base[gxi];
        }
        acc += wx[i] * row;
    }
    return acc;
}

} // namespace

Symbol pullback(const Symbol& b, const FlowMap& flow, const PullbackOptions& opts,
                std::vector<std::uint8_t>* mask) {
    if (b.grid != flow.grid) throw GridMismatch("pullback: symbol and flow grids differ");
    if (flow.t == 0.0) {
        // phi^0 is the identity and the pullback must be bit-exact.
        Symbol out = b;
        if (mask) mask->assign(b.grid.size(), 1);
        return out;
    }
    const int m = b.grid.m;
    const int m2 = 2 * m;
    const double hfine = b.grid.spacing() / 2;
    const double L = b.grid.extent;
    const double pad = opts.padding_fraction * L;
    std::vector<cdouble> fine = upsample2x(b.values, m);
    Symbol out;
    out.grid = b.grid;
    out.hbar = b.hbar;
    out.values.resize(b.grid.size());
    out.real_observable = b.real_observable;
    out.decaying = b.decaying;
    if (mask) mask->assign(b.grid.size(), 0);
    std::atomic<long> escaped{0};
    parallel_for(b.grid.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double X = flow.x[i], XI = flow.xi[i];
            bool inside = X >= -L && X < L && XI >= -L && XI < L;
            if (!inside) {
                if (b.decaying) {
                    out.values[i] = 0; // exponential decay envelope
                } else if (std::abs(X) > L + pad || std::abs(XI) > L + pad) {
                    escaped.fetch_add(1);
                    out.values[i] = 0;
                } else {
                    // inside the padding margin: periodic-stencil extrapolation
                    double ux = (X + L) / hfine, uxi = (XI + L) / hfine;
                    out.values[i] = opts.order == InterpOrder::quintic
                                        ? interp_fine<6>(fine, m2, ux, uxi)
                                        : interp_fine<4>(fine, m2, ux, uxi);
                    if (mask) (*mask)[i] = 1;
                }
                continue;
            }
            double ux = (X + L) / hfine, uxi = (XI + L) / hfine;
            out.values[i] = opts.order == InterpOrder::quintic
                                ? interp_fine<6>(fine, m2, ux, uxi)
                                : interp_fine<4>(fine, m2, ux, uxi);
            if (mask) (*mask)[i] = 1;
        }
    });
    if (escaped.load() > 0 && !b.decaying && !mask)
        throw NumericError("pullback: " + std::to_string(escaped.load()) +
                           " images exited the padded box and the symbol has no decay tag");
    if (b.real_observable)
        for (auto& v : out.values) v = cdouble(v.real(), 0.0);
    return out;
}

std::vector<double> complex_trajectory_im_envelope(const HamiltonianModel& h, cdouble x0,
                                                   cdouble xi0, const std::vector<double>& times,
                                                   double tol) {
    std::vector<double> env;
    env.reserve(times.size());
    cdouble y[2] = {x0, xi0};
    double tcur = 0;
    long steps = 0, rej = 0;
    auto rhs = [&](const cdouble* v, cdouble* d) {
        auto f = h.vector_field(v[0], v[1]);
        d[0] = f[0];
        d[1] = f[1];
    };
    for (double t : times) {
        rk45_integrate<cdouble, 2>(rhs, y, tcur, t, tol, steps, rej, 0);
        tcur = t;
        env.push_back(std::max(std::abs(y[0].imag()), std::abs(y[1].imag())));
    }
    return env;
}

} // namespace eglab
