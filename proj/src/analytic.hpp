#ifndef EGLAB_ANALYTIC_HPP
#define EGLAB_ANALYTIC_HPP

#include "symbol.hpp"

namespace eglab {

// Closed-form test symbols with a registered complex extension:
//   f(z) = amp * [cos(<freq, z>)] * exp(-sum_i (z_i - c_i)^2 / (2 w_i^2)).
// Strip norms are evaluated only on this library; no numerical analytic
// continuation from grid data is attempted.
struct AnalyticSymbol {
    double amp = 1.0;
    double center_x = 0, center_xi = 0;
    double width_x = 1, width_xi = 1;
    bool modulated = false;
    double freq_x = 0, freq_xi = 0;
    bool has_complex_extension = true;
    double analyticity_radius = 1e300; // entire by construction

    cdouble eval(cdouble x, cdouble xi) const;
    double eval_real(double x, double xi) const { return eval(cdouble(x), cdouble(xi)).real(); }
};

Symbol sample(const AnalyticSymbol& f, const PhaseGrid& g, double hbar);

// |b|_{sigma,rho} of Eq. (n.1): sup over the strip |Im z|_inf <= sigma of
// |b(x+iy)| e^{rho * |x|_1}. The imaginary box is sampled on its boundary
// lattice (plus the real slice); the x maximization runs on a coarse lattice
// with local refinement.
struct StripNorm {
    double sigma = 0, rho = 0;
    double value = 0;
};

struct StripSampling {
    int x_points = 801;       // coarse lattice points per axis
    double x_extent = 0;      // 0 = automatic from decay
    int boundary_points = 9;  // per edge of the imaginary box
    int refine_rounds = 6;    // local 9x9 refinements around the maximum
};

StripNorm strip_norm(const AnalyticSymbol& b, double sigma, double rho,
                     const StripSampling& ctrl = {});

// Measured |bhat|_{rho-delta, sigma} of Lemma "hat": the transform is
// continued onto shifted contours Im k = k2 by transforming b(z) e^{<k2,z>},
// then weighted by e^{sigma |Re k|_1}. Requires 0 < delta < rho.
double fourier_strip_norm(const FourierSymbol& bhat, double sigma, double rho, double delta,
                          int boundary_points = 5);

// Same band-limited continuation applied to a grid symbol itself: an upper
// estimate of |b|_{sigma_p, rho_p} for symbols produced by the calculus
// (used by the Lemma "delta" constant calibration).
double grid_strip_norm(const Symbol& b, double sigma_p, double rho_p, int boundary_points = 5);

} // namespace eglab

#endif
