#ifndef EGLAB_GRID_HPP
#define EGLAB_GRID_HPP

#include "common.hpp"

namespace eglab {

// Rectangular phase-space grid for one degree of freedom: an M x M lattice on
// [-L, L)^2 with coordinates z = (x, xi). Index layout is x-major:
// idx = ix*M + ixi.
struct PhaseGrid {
    int dof = 1;      // degrees of freedom; numerics are exercised at 1
    int m = 0;        // points per axis, power of two, >= 8
    double extent = 0; // half-width L per axis

    double spacing() const { return 2.0 * extent / m; }
    double dual_spacing() const { return pi / extent; }
    double nyquist() const { return pi * m / (2.0 * extent); }
    double coord(int i) const { return -extent + i * spacing(); }
    // Dual node for math-order index im in [0, M): mode number im - M/2.
    int mode(int im) const { return im - m / 2; }
    double dual_coord(int im) const { return mode(im) * dual_spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(m) * m; }

    void validate() const;
    bool operator==(const PhaseGrid& o) const {
        return dof == o.dof && m == o.m && extent == o.extent;
    }
    bool operator!=(const PhaseGrid& o) const { return !(*this == o); }
};

// Position grid on [-L, L) shared with the PhaseGrid it derives from.
struct PositionGrid {
    int m = 0;
    double extent = 0;
    double hbar = 0;

    double spacing() const { return 2.0 * extent / m; }
    double coord(int i) const { return -extent + i * spacing(); }
    // Spectral wavenumbers kappa_r = r*pi/L, r in [-M/2, M/2); momentum = hbar*kappa.
    double wavenumber(int ir) const { return (ir - m / 2) * pi / extent; }
    double momentum_band() const { return hbar * pi * m / (2.0 * extent); }

    void validate() const;
    bool operator==(const PositionGrid& o) const {
        return m == o.m && extent == o.extent && hbar == o.hbar;
    }
};

PositionGrid position_grid(const PhaseGrid& g, double hbar);

} // namespace eglab

#endif
