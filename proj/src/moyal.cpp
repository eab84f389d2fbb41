#include "moyal.hpp"

#include "fft.hpp"

#include <cmath>

namespace eglab {

namespace {

struct Coeff {
    int mx, mxi; // mode numbers
    cdouble v;
};

std::vector<Coeff> significant(const FourierSymbol& fh, double threshold) {
    double gmax = 0;
    for (const auto& v : fh.values) gmax = std::max(gmax, std::abs(v));
    const double cut = threshold * gmax;
    std::vector<Coeff> out;
    const int m = fh.grid.m;
    for (int imx = 0; imx < m; ++imx)
        for (int imxi = 0; imxi < m; ++imxi) {
            cdouble v = fh.values[fh.idx(imx, imxi)];
            if (std::abs(v) > cut) out.push_back({imx - m / 2, imxi - m / 2, v});
        }
    return out;
}

// Twisted double sum: out(k) = (2pi)^{-1} dk^2 sum fhat(p) ghat(s) kern(w),
// k = p + s, w = sym(p, s) = (px*sxi - pxi*sx) dk^2. Deterministic
// accumulation order (single pass over p then s).
template <typename Kern>
FourierSymbol twisted_sum(const Symbol& f, const Symbol& g, const TwistedControl& ctrl,
                          Kern&& kern) {
    require_compatible(f, g);
    FourierSymbol fh = forward_transform(f);
    FourierSymbol gh = forward_transform(g);
    auto fs = significant(fh, ctrl.support_threshold);
    auto gs = significant(gh, ctrl.support_threshold);
    const int m = f.grid.m;
    const double dk = f.grid.dual_spacing();
    const double dk2 = dk * dk;
    FourierSymbol out;
    out.grid = f.grid;
    out.hbar = f.hbar;
    out.values.assign(f.grid.size(), cdouble(0));
    const double scale = dk2 / (2 * pi);
    for (const auto& p : fs) {
        for (const auto& s : gs) {
            int kx = p.mx + s.mx;
            int kxi = p.mxi + s.mxi;
            if (kx < -m / 2 || kx >= m / 2 || kxi < -m / 2 || kxi >= m / 2) continue;
            double w = dk2 * (static_cast<double>(p.mx) * s.mxi -
                              static_cast<double>(p.mxi) * s.mx);
            out.values[out.idx(kx + m / 2, kxi + m / 2)] += scale * p.v * s.v * kern(w);
        }
    }
    return out;
}

// (w - (2/hbar) sin(hbar w/2)) / hbar^2, evaluated stably; tends to w^3/24.
double defect_kernel(double w, double hbar) {
    double u = 0.5 * hbar * w;
    double base;
    if (std::abs(u) < 0.4) {
        double u2 = u * u;
        base = u * u2 *
               (1.0 / 6 + u2 * (-1.0 / 120 + u2 * (1.0 / 5040 + u2 * (-1.0 / 362880 +
                                                                      u2 / 39916800))));
    } else {
        base = u - std::sin(u);
    }
    return 2.0 * base / (hbar * hbar * hbar);
}

void force_real(Symbol& s) {
    for (auto& v : s.values) v = cdouble(v.real(), 0.0);
}

} // namespace

Symbol star_product(const Symbol& f, const Symbol& g, const TwistedControl& ctrl) {
    const double hbar = f.hbar;
    FourierSymbol oh =
        twisted_sum(f, g, ctrl, [hbar](double w) { return std::polar(1.0, -0.5 * hbar * w); });
    Symbol out = inverse_transform(oh);
    out.decaying = f.decaying && g.decaying;
    return out;
}

Symbol moyal_bracket(const Symbol& f, const Symbol& g, const TwistedControl& ctrl) {
    const double hbar = f.hbar;
    FourierSymbol oh = twisted_sum(
        f, g, ctrl, [hbar](double w) { return cdouble(-(2.0 / hbar) * std::sin(0.5 * hbar * w)); });
    Symbol out = inverse_transform(oh);
    out.decaying = f.decaying && g.decaying;
    if (f.real_observable && g.real_observable) {
        force_real(out);
        out.real_observable = true;
    }
    return out;
}

Symbol spectral_derivative(const Symbol& f, int ax, int axi) {
    FourierSymbol fh = forward_transform(f);
    const int m = f.grid.m;
    for (int imx = 0; imx < m; ++imx) {
        cdouble px = std::pow(cdouble(0, f.grid.dual_coord(imx)), ax);
        for (int imxi = 0; imxi < m; ++imxi) {
            cdouble pxi = std::pow(cdouble(0, f.grid.dual_coord(imxi)), axi);
            fh.values[fh.idx(imx, imxi)] *= px * pxi;
        }
    }
    Symbol out = inverse_transform(fh);
    out.decaying = f.decaying;
    if (f.real_observable) {
        force_real(out);
        out.real_observable = true;
    }
    return out;
}

Symbol poisson_bracket(const Symbol& f, const Symbol& g) {
    Symbol fx = spectral_derivative(f, 1, 0);
    Symbol fxi = spectral_derivative(f, 0, 1);
    Symbol gx = spectral_derivative(g, 1, 0);
    Symbol gxi = spectral_derivative(g, 0, 1);
    Symbol out = zero_like(f);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = fx.values[i] * gxi.values[i] - fxi.values[i] * gx.values[i];
    out.decaying = f.decaying && g.decaying;
    out.real_observable = f.real_observable && g.real_observable;
    if (out.real_observable) force_real(out);
    return out;
}

Symbol poisson_bracket(const Symbol& b, const HamiltonianModel& h) {
    Symbol bx = spectral_derivative(b, 1, 0);
    Symbol bxi = spectral_derivative(b, 0, 1);
    Symbol out = zero_like(b);
    const PhaseGrid& g = b.grid;
    const int m = g.m;
    for (int ix = 0; ix < m; ++ix) {
        double x = g.coord(ix);
        for (int ixi = 0; ixi < m; ++ixi) {
            auto grad = h.grad(x, g.coord(ixi));
            std::size_t i = b.idx(ix, ixi);
            out.values[i] = bx.values[i] * grad[1] - bxi.values[i] * grad[0];
        }
    }
    out.decaying = b.decaying;
    out.real_observable = b.real_observable;
    if (out.real_observable) force_real(out);
    return out;
}

Symbol moyal_bracket(const Symbol& b, const HamiltonianModel& h, const TwistedControl& ctrl) {
    // {b, Q}_M = {b, Q} exactly (the sine kernel is linear on quadratics);
    // W enters through the twisted convolution.
    HamiltonianModel quad_only = h;
    quad_only.bumps.clear();
    Symbol out = poisson_bracket(b, quad_only);
    if (!h.w_is_zero()) {
        Symbol w = h.w_symbol(b.grid, b.hbar);
        Symbol mw = moyal_bracket(b, w, ctrl);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += mw.values[i];
    }
    return out;
}

Symbol moyal_expansion(const Symbol& f, const Symbol& g, int order_j) {
    if (order_j < 0 || order_j > 6) throw DomainError("moyal_expansion: order must be in [0, 6]");
    // {f,g}_M = Pi^1 - (hbar^2/24) Pi^3 + (hbar^4/1920) Pi^5 - (hbar^6/322560) Pi^7
    // with Pi^j(f,g) = sum_m (-1)^m C(j,m) (dx^{j-m} dxi^m f)(dxi^{j-m} dx^m g).
    require_compatible(f, g);
    const double hbar = f.hbar;
    Symbol out = zero_like(f);
    const double coeffs[4] = {1.0, -hbar * hbar / 24.0, std::pow(hbar, 4) / 1920.0,
                              -std::pow(hbar, 6) / 322560.0};
    for (int jj = 0; jj <= 3; ++jj) {
        int pi_order = 2 * jj + 1;
        if (pi_order - 1 > order_j) break;
        double binom = 1;
        for (int mm = 0; mm <= pi_order; ++mm) {
            if (mm > 0) binom = binom * (pi_order - mm + 1) / mm;
            double sign = (mm % 2) ? -1.0 : 1.0;
            Symbol df = spectral_derivative(f, pi_order - mm, mm);
            Symbol dg = spectral_derivative(g, mm, pi_order - mm);
            const cdouble c = coeffs[jj] * sign * binom;
            for (std::size_t i = 0; i < out.values.size(); ++i)
                out.values[i] += c * df.values[i] * dg.values[i];
        }
    }
    out.decaying = f.decaying && g.decaying;
    out.real_observable = f.real_observable && g.real_observable;
    if (out.real_observable) force_real(out);
    return out;
}

Symbol delta_h(const Symbol& b, const HamiltonianModel& h, const TwistedControl& ctrl) {
    if (!(b.hbar > 0)) throw DomainError("delta_h: hbar must be positive");
    if (h.w_is_zero()) return zero_like(b); // bracket equality is exact on quadratics
    Symbol w = h.w_symbol(b.grid, b.hbar);
    return delta_h_generic(b, w, ctrl);
}

Symbol delta_h_generic(const Symbol& b, const Symbol& h_symbol, const TwistedControl& ctrl) {
    if (!(b.hbar > 0)) throw DomainError("delta_h: hbar must be positive");
    const double hbar = b.hbar;
    FourierSymbol oh = twisted_sum(b, h_symbol, ctrl, [hbar](double w) {
        return cdouble(-defect_kernel(w, hbar));
    });
    Symbol out = inverse_transform(oh);
    out.decaying = b.decaying && h_symbol.decaying;
    if (b.real_observable && h_symbol.real_observable) {
        force_real(out);
        out.real_observable = true;
    }
    return out;
}

} // namespace eglab
