#ifndef EGLAB_SYMBOL_HPP
#define EGLAB_SYMBOL_HPP

#include "grid.hpp"

#include <functional>
#include <iosfwd>
#include <optional>

namespace eglab {

// Real quadratic polynomial on phase space:
// q(z) = c0 + gx*x + gxi*xi + (axx*x^2 + 2*axxi*x*xi + axixi*xi^2)/2.
struct QuadraticForm {
    double c0 = 0, gx = 0, gxi = 0, axx = 0, axxi = 0, axixi = 0;

    double eval(double x, double xi) const {
        return c0 + gx * x + gxi * xi + 0.5 * (axx * x * x + 2 * axxi * x * xi + axixi * xi * xi);
    }
    cdouble eval(cdouble x, cdouble xi) const {
        return c0 + gx * x + gxi * xi + 0.5 * (axx * x * x + 2.0 * axxi * x * xi + axixi * xi * xi);
    }
    bool is_zero() const {
        return c0 == 0 && gx == 0 && gxi == 0 && axx == 0 && axxi == 0 && axixi == 0;
    }
};

// Complex-valued observable on a PhaseGrid. The universal currency of the
// calculus: grid metadata, one complex value per node, and the semiclassical
// parameter hbar.
struct Symbol {
    PhaseGrid grid;
    double hbar = 0;
    std::vector<cdouble> values; // x-major, idx = ix*M + ixi
    bool real_observable = false;
    bool decaying = true; // exponential-decay tag; enables the zero envelope off-grid
    std::optional<QuadraticForm> quad; // set when built from a polynomial of degree <= 2

    std::size_t idx(int ix, int ixi) const { return static_cast<std::size_t>(ix) * grid.m + ixi; }
    cdouble at(int ix, int ixi) const { return values[idx(ix, ixi)]; }
    void validate() const;
};

// Discrete Fourier data of a Symbol under the unitary-angular convention
//   bhat(k) = (2pi)^{-n} \int b(z) e^{-i<k,z>} dz,  n = 1, z in R^2.
// Stored in math order: idx = (mx + M/2)*M + (mxi + M/2), k = mode * pi/L.
struct FourierSymbol {
    PhaseGrid grid; // dual metadata is derived from the primal grid
    double hbar = 0;
    std::vector<cdouble> values;
    static constexpr const char* convention = "unitary-angular";

    std::size_t idx(int imx, int imxi) const {
        return static_cast<std::size_t>(imx) * grid.m + imxi;
    }
};

Symbol make_symbol(const PhaseGrid& g, double hbar,
                   const std::function<cdouble(double, double)>& f);

// Polynomial constructors; these carry the QuadraticForm tag so that
// quantization can use the exact multiplier path.
Symbol make_quadratic_symbol(const PhaseGrid& g, double hbar, const QuadraticForm& q);
Symbol make_constant_symbol(const PhaseGrid& g, double hbar, double c);

FourierSymbol forward_transform(const Symbol& b);
Symbol inverse_transform(const FourierSymbol& bh);

double max_abs(const Symbol& b);
double max_abs_diff(const Symbol& a, const Symbol& b);
double max_imag(const Symbol& b);
double l2_grid_norm(const Symbol& b);       // sqrt(h^2 sum |b|^2)
double l2_grid_norm(const FourierSymbol& b); // sqrt(dk^2 sum |bhat|^2)

Symbol axpy(cdouble alpha, const Symbol& x, const Symbol& y); // alpha*x + y
Symbol scaled(const Symbol& x, cdouble alpha);
Symbol zero_like(const Symbol& x);
bool is_zero(const Symbol& x);

void require_compatible(const Symbol& a, const Symbol& b);

// Binary container: header (magic, version, n, M, L, hbar, convention tag),
// payload row-major complex doubles. CSV: node coordinates + re/im.
void save_symbol(const Symbol& b, const std::string& path);
Symbol load_symbol(const std::string& path);
void write_symbol_csv(const Symbol& b, std::ostream& os);

} // namespace eglab

#endif
