#include "hamiltonian.hpp"

#include <cmath>

namespace eglab {

double HamiltonianModel::w_eval(double x) const {
    double s = 0;
    for (const auto& b : bumps) {
        double u = (x - b.x0) / b.w;
        s += b.v0 * std::exp(-u * u);
    }
    return s;
}

double HamiltonianModel::w_d1(double x) const {
    double s = 0;
    for (const auto& b : bumps) {
        double u = (x - b.x0) / b.w;
        s += b.v0 * std::exp(-u * u) * (-2 * u / b.w);
    }
    return s;
}

double HamiltonianModel::w_d2(double x) const {
    double s = 0;
    for (const auto& b : bumps) {
        double u = (x - b.x0) / b.w;
        s += b.v0 * std::exp(-u * u) * (4 * u * u - 2) / (b.w * b.w);
    }
    return s;
}

cdouble HamiltonianModel::w_eval(cdouble x) const {
    cdouble s = 0;
    for (const auto& b : bumps) {
        cdouble u = (x - b.x0) / b.w;
        s += b.v0 * std::exp(-u * u);
    }
    return s;
}

cdouble HamiltonianModel::w_d2(cdouble x) const {
    cdouble s = 0;
    for (const auto& b : bumps) {
        cdouble u = (x - b.x0) / b.w;
        s += b.v0 * std::exp(-u * u) * (4.0 * u * u - 2.0) / (b.w * b.w);
    }
    return s;
}

std::array<double, 2> HamiltonianModel::grad(double x, double xi) const {
    return {quad.gx + quad.axx * x + quad.axxi * xi + w_d1(x),
            quad.gxi + quad.axxi * x + quad.axixi * xi};
}

std::array<cdouble, 2> HamiltonianModel::grad(cdouble x, cdouble xi) const {
    cdouble wd1 = 0;
    for (const auto& b : bumps) {
        cdouble u = (x - b.x0) / b.w;
        wd1 += b.v0 * std::exp(-u * u) * (-2.0 * u / b.w);
    }
    return {quad.gx + quad.axx * x + quad.axxi * xi + wd1,
            quad.gxi + quad.axxi * x + quad.axixi * xi};
}

std::array<double, 3> HamiltonianModel::hessian(double x, double) const {
    return {quad.axx + w_d2(x), quad.axxi, quad.axixi};
}

std::array<cdouble, 3> HamiltonianModel::hessian(cdouble x, cdouble) const {
    return {quad.axx + w_d2(x), cdouble(quad.axxi), cdouble(quad.axixi)};
}

std::array<double, 2> HamiltonianModel::vector_field(double x, double xi) const {
    auto g = grad(x, xi);
    return {g[1], -g[0]};
}

std::array<cdouble, 2> HamiltonianModel::vector_field(cdouble x, cdouble xi) const {
    auto g = grad(x, xi);
    return {g[1], -g[0]};
}

Symbol HamiltonianModel::w_symbol(const PhaseGrid& g, double hbar) const {
    Symbol w = make_symbol(g, hbar, [&](double x, double) { return cdouble(w_eval(x)); });
    w.real_observable = true;
    w.decaying = true;
    return w;
}

HamiltonianModel make_model(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    for (const auto& [k, v] : params) {
        (void)v;
        if (k != "V0" && k != "w") throw DomainError("make_model: unknown parameter " + k);
    }
    HamiltonianModel h;
    h.name = name;
    if (name == "harmonic") {
        if (!params.empty()) throw DomainError("harmonic model takes no parameters");
        h.quad.axx = 1;
        h.quad.axixi = 1;
    } else if (name == "free") {
        if (!params.empty()) throw DomainError("free model takes no parameters");
        h.quad.axixi = 1;
    } else if (name == "gaussian-well") {
        h.quad.axixi = 1;
        h.bumps.push_back({get("V0", 0.25), 0.0, get("w", 1.0)});
    } else if (name == "pendulum-window") {
        h.quad.axixi = 1;
        h.bumps.push_back({-get("V0", 0.5), 0.0, get("w", 1.0)});
    } else {
        throw DomainError("make_model: unknown model '" + name + "'");
    }
    return h;
}

namespace {

// Spectral norm of J d2H at a complex point. For our models
// J d2H = [[hxxi, hxixi], [-hxx, -hxxi]]; use the exact 2x2 singular value.
double jd2h_norm(const HamiltonianModel& h, cdouble x, cdouble xi) {
    auto H = h.hessian(x, xi);
    const cdouble a = H[1], b = H[2], c = -H[0], d = -H[1];
    // Largest singular value of [[a,b],[c,d]] with complex entries.
    double n2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    cdouble det = a * d - b * c;
    double disc = n2 * n2 - 4 * std::norm(det);
    if (disc < 0) disc = 0;
    return std::sqrt(0.5 * (n2 + std::sqrt(disc)));
}

} // namespace

double estimate_alpha(const HamiltonianModel& h, double sigma, const AlphaControl& ctrl) {
    if (sigma < 0) throw DomainError("estimate_alpha: sigma must be nonnegative");
    if (sigma > h.declared_sigma)
        throw DomainError("estimate_alpha: sigma exceeds the declared analyticity radius");
    double ext = ctrl.x_extent;
    if (ext <= 0) {
        ext = 1.0;
        for (const auto& b : h.bumps) ext = std::max(ext, std::abs(b.x0) + 8 * b.w);
    }
    // The Hessian of W depends on x alone and the quadratic part is constant,
    // so the supremum runs over a 1-D complex strip sample.
    auto sup_on = [&](int nx, int ny) {
        double best = 0;
        for (int i = 0; i < nx; ++i) {
            double x = -ext + 2 * ext * i / (nx - 1);
            for (int j = 0; j < ny; ++j) {
                double y = ny == 1 ? 0.0 : -sigma + 2 * sigma * j / (ny - 1);
                best = std::max(best, jd2h_norm(h, cdouble(x, y), cdouble(0)));
            }
        }
        return best;
    };
    int nx = std::max(ctrl.x_points, 9);
    int ny = sigma > 0 ? std::max(ctrl.y_points, 3) : 1;
    double prev = sup_on(nx, ny);
    for (int r = 0; r < ctrl.refine_rounds; ++r) {
        nx = 2 * nx - 1;
        ny = sigma > 0 ? 2 * ny - 1 : 1;
        double cur = sup_on(nx, ny);
        bool stable = std::abs(cur - prev) <= ctrl.rel_tol * std::max(cur, 1e-30);
        prev = cur;
        if (stable) break;
    }
    return prev;
}

A2Fit check_a2_growth(const HamiltonianModel& h, double sigma, double extent, int points) {
    // Sample |J dH(z+iy)|_inf against A1 + A2 |z|_inf and fit the smallest
    // admissible constants: A2 from the asymptotic slope, then A1 as the
    // smallest offset covering every sample.
    std::vector<std::pair<double, double>> samples; // (|z|, |JdH|)
    for (int i = 0; i < points; ++i) {
        double x = -extent + 2 * extent * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            double xi = -extent + 2 * extent * j / (points - 1);
            double r = std::max(std::abs(x), std::abs(xi));
            for (double y1 : {-sigma, 0.0, sigma})
                for (double y2 : {-sigma, 0.0, sigma}) {
                    auto f = h.vector_field(cdouble(x, y1), cdouble(xi, y2));
                    double v = std::max(std::abs(f[0]), std::abs(f[1]));
                    samples.emplace_back(r, v);
                }
        }
    }
    double rmax = 0;
    for (auto& s : samples) rmax = std::max(rmax, s.first);
    double a2 = 0;
    for (auto& s : samples)
        if (s.first > 0.5 * rmax) a2 = std::max(a2, s.second / s.first);
    double a1 = 0;
    for (auto& s : samples) a1 = std::max(a1, s.second - a2 * s.first);
    A2Fit fit;
    fit.a1 = a1;
    fit.a2 = a2;
    fit.max_violation = 0;
    for (auto& s : samples)
        fit.max_violation = std::max(fit.max_violation, s.second - (a1 + a2 * s.first));
    return fit;
}

double max_gradient_fd_error(const HamiltonianModel& h, double extent, int points) {
    double worst = 0;
    const double d = 1e-5 * std::max(1.0, extent);
    for (int i = 0; i < points; ++i) {
        double x = -extent + 2 * extent * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            double xi = -extent + 2 * extent * j / (points - 1);
            auto g = h.grad(x, xi);
            double fdx = (h.eval(x + d, xi) - h.eval(x - d, xi)) / (2 * d);
            double fdxi = (h.eval(x, xi + d) - h.eval(x, xi - d)) / (2 * d);
            double scale = std::max({1.0, std::abs(g[0]), std::abs(g[1])});
            worst = std::max(worst, std::max(std::abs(g[0] - fdx), std::abs(g[1] - fdxi)) / scale);
        }
    }
    return worst;
}

double max_hessian_fd_error(const HamiltonianModel& h, double extent, int points) {
    double worst = 0;
    const double d = 1e-4 * std::max(1.0, extent);
    for (int i = 0; i < points; ++i) {
        double x = -extent + 2 * extent * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            double xi = -extent + 2 * extent * j / (points - 1);
            auto H = h.hessian(x, xi);
            double fxx = (h.grad(x + d, xi)[0] - h.grad(x - d, xi)[0]) / (2 * d);
            double fxxi = (h.grad(x, xi + d)[0] - h.grad(x, xi - d)[0]) / (2 * d);
            double fxixi = (h.grad(x, xi + d)[1] - h.grad(x, xi - d)[1]) / (2 * d);
            double scale = std::max({1.0, std::abs(H[0]), std::abs(H[1]), std::abs(H[2])});
            double e = std::max({std::abs(H[0] - fxx), std::abs(H[1] - fxxi),
                                 std::abs(H[2] - fxixi)});
            worst = std::max(worst, e / scale);
        }
    }
    return worst;
}

double max_imag_on_real_slice(const HamiltonianModel& h, double extent, int points) {
    double worst = 0;
    for (int i = 0; i < points; ++i) {
        double x = -extent + 2 * extent * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            double xi = -extent + 2 * extent * j / (points - 1);
            worst = std::max(worst, std::abs(h.eval(cdouble(x), cdouble(xi)).imag()));
        }
    }
    return worst;
}

} // namespace eglab
