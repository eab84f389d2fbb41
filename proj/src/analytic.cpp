#include "analytic.hpp"

#include "fft.hpp"

#include <algorithm>
#include <cmath>

namespace eglab {

cdouble AnalyticSymbol::eval(cdouble x, cdouble xi) const {
    const cdouble dx = x - center_x;
    const cdouble dxi = xi - center_xi;
    cdouble v = amp * std::exp(-dx * dx / (2 * width_x * width_x) -
                               dxi * dxi / (2 * width_xi * width_xi));
    if (modulated) v *= std::cos(freq_x * x + freq_xi * xi);
    return v;
}

Symbol sample(const AnalyticSymbol& f, const PhaseGrid& g, double hbar) {
    Symbol b = make_symbol(g, hbar, [&](double x, double xi) { return f.eval(x, xi); });
    b.real_observable = true;
    b.decaying = true;
    return b;
}

namespace {

// sup over x in R^2 of |b(x+iy)| e^{rho |x|_1} for fixed y, by coarse lattice
// plus local refinement. The weighted modulus decays at infinity because the
// Gaussian beats the exponential weight.
double slice_sup(const AnalyticSymbol& b, double y1, double y2, double rho,
                 const StripSampling& ctrl) {
    double ext = ctrl.x_extent;
    if (ext <= 0) {
        double wmax = std::max(b.width_x, b.width_xi);
        double cmax = std::max(std::abs(b.center_x), std::abs(b.center_xi));
        ext = cmax + wmax * (rho * wmax + 10.0);
    }
    auto val = [&](double x1, double x2) {
        return std::abs(b.eval(cdouble(x1, y1), cdouble(x2, y2))) *
               std::exp(rho * (std::abs(x1) + std::abs(x2)));
    };
    const int n = std::max(ctrl.x_points, 9);
    double hx = 2 * ext / (n - 1);
    double best = 0, bx1 = 0, bx2 = 0;
    for (int i = 0; i < n; ++i) {
        double x1 = -ext + i * hx;
        for (int j = 0; j < n; ++j) {
            double x2 = -ext + j * hx;
            double v = val(x1, x2);
            if (v > best) {
                best = v;
                bx1 = x1;
                bx2 = x2;
            }
        }
    }
    double span = hx;
    for (int r = 0; r < ctrl.refine_rounds; ++r) {
        double step = span / 4;
        double cx1 = bx1, cx2 = bx2;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                double v = val(cx1 + i * step, cx2 + j * step);
                if (v > best) {
                    best = v;
                    bx1 = cx1 + i * step;
                    bx2 = cx2 + j * step;
                }
            }
        span = step * 2;
    }
    return best;
}

} // namespace

StripNorm strip_norm(const AnalyticSymbol& b, double sigma, double rho,
                     const StripSampling& ctrl) {
    if (!b.has_complex_extension)
        throw DomainError("strip_norm: symbol has no registered complex extension");
    if (sigma < 0 || rho < 0) throw DomainError("strip_norm: sigma, rho must be nonnegative");
    if (sigma > b.analyticity_radius)
        throw DomainError("strip_norm: sigma exceeds the declared analyticity radius");

    // Imaginary box sample: real slice, then the boundary lattice of
    // [-sigma,sigma]^2 (the modulus is per-variable subharmonic, so the sup
    // over the closed box is attained on the boundary).
    std::vector<std::pair<double, double>> ys;
    ys.emplace_back(0.0, 0.0);
    if (sigma > 0) {
        const int bp = std::max(ctrl.boundary_points, 3);
        for (int i = 0; i < bp; ++i) {
            double s = -sigma + 2 * sigma * i / (bp - 1);
            ys.emplace_back(s, sigma);
            ys.emplace_back(s, -sigma);
            ys.emplace_back(sigma, s);
            ys.emplace_back(-sigma, s);
        }
    }
    double best = 0;
    for (auto [y1, y2] : ys) best = std::max(best, slice_sup(b, y1, y2, rho, ctrl));
    return StripNorm{sigma, rho, best};
}

namespace {

// Evaluate the band-limited continuation of a grid function onto the slice
// Im z = y via a modulated inverse transform, then take the weighted sup.
double continued_slice_sup(const FourierSymbol& bhat, double y1, double y2, double rho_weight) {
    const int m = bhat.grid.m;
    FourierSymbol mod = bhat;
    for (int imx = 0; imx < m; ++imx) {
        double k1 = bhat.grid.dual_coord(imx);
        for (int imxi = 0; imxi < m; ++imxi) {
            double k2 = bhat.grid.dual_coord(imxi);
            mod.values[mod.idx(imx, imxi)] *= std::exp(-(k1 * y1 + k2 * y2));
        }
    }
    Symbol slice = inverse_transform(mod);
    double best = 0;
    for (int ix = 0; ix < m; ++ix) {
        double w1 = std::abs(slice.grid.coord(ix));
        for (int ixi = 0; ixi < m; ++ixi) {
            double w = std::exp(rho_weight * (w1 + std::abs(slice.grid.coord(ixi))));
            best = std::max(best, std::abs(slice.at(ix, ixi)) * w);
        }
    }
    return best;
}

std::vector<std::pair<double, double>> boundary_lattice(double half_width, int bp) {
    std::vector<std::pair<double, double>> ys;
    ys.emplace_back(0.0, 0.0);
    if (half_width > 0) {
        bp = std::max(bp, 3);
        for (int i = 0; i < bp; ++i) {
            double s = -half_width + 2 * half_width * i / (bp - 1);
            ys.emplace_back(s, half_width);
            ys.emplace_back(s, -half_width);
            ys.emplace_back(half_width, s);
            ys.emplace_back(-half_width, s);
        }
    }
    return ys;
}

} // namespace

double fourier_strip_norm(const FourierSymbol& bhat, double sigma, double rho, double delta,
                          int boundary_points) {
    if (!(delta > 0) || !(delta < rho))
        throw DomainError("fourier_strip_norm: need 0 < delta < rho");
    // |bhat|_{rho-delta, sigma}: contour shifts of the transform are Fourier
    // transforms of b(z) e^{<k2, z>}; equivalently, modulated inverse
    // transforms of bhat give b, so work from b directly.
    Symbol b = inverse_transform(bhat);
    const int m = b.grid.m;
    double best = 0;
    for (auto [y1, y2] : boundary_lattice(rho - delta, boundary_points)) {
        Symbol mod = b;
        for (int ix = 0; ix < m; ++ix) {
            double x = b.grid.coord(ix);
            for (int ixi = 0; ixi < m; ++ixi) {
                mod.values[mod.idx(ix, ixi)] *= std::exp(y1 * x + y2 * b.grid.coord(ixi));
            }
        }
        FourierSymbol shifted = forward_transform(mod);
        for (int imx = 0; imx < m; ++imx) {
            double w1 = std::abs(shifted.grid.dual_coord(imx));
            for (int imxi = 0; imxi < m; ++imxi) {
                double w = std::exp(sigma * (w1 + std::abs(shifted.grid.dual_coord(imxi))));
                best = std::max(best, std::abs(shifted.values[shifted.idx(imx, imxi)]) * w);
            }
        }
    }
    return best;
}

double grid_strip_norm(const Symbol& b, double sigma_p, double rho_p, int boundary_points) {
    if (sigma_p < 0 || rho_p < 0) throw DomainError("grid_strip_norm: negative parameters");
    FourierSymbol bhat = forward_transform(b);
    double best = 0;
    for (auto [y1, y2] : boundary_lattice(sigma_p, boundary_points))
        best = std::max(best, continued_slice_sup(bhat, y1, y2, rho_p));
    return best;
}

} // namespace eglab
