#ifndef EGLAB_HAMILTONIAN_HPP
#define EGLAB_HAMILTONIAN_HPP

#include "symbol.hpp"

#include <array>
#include <map>
#include <string>

namespace eglab {

// One decaying potential term V0 * exp(-((x - x0)/w)^2).
struct XGaussianBump {
    double v0 = 0, x0 = 0, w = 1;
};

// Closed-form Hamiltonian split as H = Q(z) + W(x) with Q a polynomial of
// degree <= 2 and W a sum of Gaussian bumps. The split mirrors Assumption A3:
// the Fourier transform of H is a distribution supported at the origin plus
// an exponentially decaying part, and every nonlocal operation treats the two
// pieces by their own exact rule.
struct HamiltonianModel {
    std::string name;
    QuadraticForm quad;
    std::vector<XGaussianBump> bumps;
    double declared_nu = 1e300;    // A1 analyticity half-width (entire models)
    double declared_sigma = 1e300; // A2/A3 strip
    double declared_rho = 1.0;     // A3 Fourier decay rate (nominal)

    bool w_is_zero() const { return bumps.empty(); }

    double w_eval(double x) const;
    double w_d1(double x) const;
    double w_d2(double x) const;
    cdouble w_eval(cdouble x) const;
    cdouble w_d2(cdouble x) const;

    double eval(double x, double xi) const { return quad.eval(x, xi) + w_eval(x); }
    cdouble eval(cdouble x, cdouble xi) const { return quad.eval(x, xi) + w_eval(x); }

    // gradient (dH/dx, dH/dxi)
    std::array<double, 2> grad(double x, double xi) const;
    std::array<cdouble, 2> grad(cdouble x, cdouble xi) const;
    // hessian (Hxx, Hxxi, Hxixi)
    std::array<double, 3> hessian(double x, double xi) const;
    std::array<cdouble, 3> hessian(cdouble x, cdouble xi) const;

    // symplectic vector field f = J dH = (dH/dxi, -dH/dx)
    std::array<double, 2> vector_field(double x, double xi) const;
    std::array<cdouble, 2> vector_field(cdouble x, cdouble xi) const;

    // W part sampled as a decaying Symbol (the only piece that ever enters a
    // Fourier-side operation).
    Symbol w_symbol(const PhaseGrid& g, double hbar) const;
};

// Built-in catalog: "harmonic", "free", "gaussian-well" (params V0, w),
// "pendulum-window" (params V0, w). Unknown names or parameters are rejected.
HamiltonianModel make_model(const std::string& name,
                            const std::map<std::string, double>& params = {});

struct AlphaControl {
    int x_points = 1201;
    double x_extent = 0; // 0 = automatic
    int y_points = 17;
    int refine_rounds = 30; // refine until stable to rel_tol
    double rel_tol = 0.01;
};

// Assumption A2 constant: sampled supremum over the strip |Im z| <= sigma of
// the spectral norm of J d2H, refined until stable to 1%. When sigma = 0 the
// result is the real-slice supremum (a lower estimate; callers label it).
double estimate_alpha(const HamiltonianModel& h, double sigma, const AlphaControl& ctrl = {});

// A2 linear-growth fit |J dH(z+iy)| <= A1 + A2 |z| on a sampled strip.
struct A2Fit {
    double a1 = 0, a2 = 0;
    double max_violation = 0; // max over samples of |JdH| - (A1 + A2 |z|)
};
A2Fit check_a2_growth(const HamiltonianModel& h, double sigma, double extent, int points = 401);

// Finite-difference validation helpers (used by the model self-checks).
double max_gradient_fd_error(const HamiltonianModel& h, double extent, int points = 41);
double max_hessian_fd_error(const HamiltonianModel& h, double extent, int points = 41);
double max_imag_on_real_slice(const HamiltonianModel& h, double extent, int points = 101);

} // namespace eglab

#endif
