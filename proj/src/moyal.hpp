#ifndef EGLAB_MOYAL_HPP
#define EGLAB_MOYAL_HPP

#include "hamiltonian.hpp"

namespace eglab {

// Star product, Moyal bracket, truncated derivative expansion, and the
// defect operator Delta_hbar. Generic symbol-symbol routines evaluate the
// twisted convolution in Fourier space and require both factors to decay;
// Hamiltonian-aware routines split H = Q + W and treat the quadratic part by
// the exact Poisson rule (the bracket kernel is linear on quadratics).

struct TwistedControl {
    // Relative magnitude below which Fourier coefficients are dropped from
    // the double sum; 0 disables truncation.
    double support_threshold = 1e-17;
};

// f # g via (f#g)^(k) = (2pi)^{-n} sum_s fhat(k-s) ghat(s) e^{-i hbar sym(k-s,s)/2},
// sym(a,b) = a_x b_xi - a_xi b_x. Phase sign locked by the quantization
// homomorphism property.
Symbol star_product(const Symbol& f, const Symbol& g, const TwistedControl& ctrl = {});

// {f,g}_M = (f#g - g#f)/(i hbar), evaluated in the single-integral sine form;
// tends to the Poisson bracket as hbar -> 0.
Symbol moyal_bracket(const Symbol& f, const Symbol& g, const TwistedControl& ctrl = {});

// Poisson bracket with spectral derivatives (both arguments decaying).
Symbol poisson_bracket(const Symbol& f, const Symbol& g);

// Hamiltonian-aware brackets: {b,Q} is computed with analytic derivatives of
// the quadratic part (no Fourier data of a growing symbol is ever formed).
Symbol poisson_bracket(const Symbol& b, const HamiltonianModel& h);
Symbol moyal_bracket(const Symbol& b, const HamiltonianModel& h, const TwistedControl& ctrl = {});

// Truncated derivative expansion of the Moyal bracket through total order
// hbar^J (J <= 6, even): Pi^1 - (hbar^2/24) Pi^3 + (hbar^4/1920) Pi^5, where
// Pi^j is the j-th power of the Poisson bidifferential. Derivatives are
// spectral. Serves as the independent oracle for moyal_bracket and delta_h.
Symbol moyal_expansion(const Symbol& f, const Symbol& g, int order_j);

// Defect Delta_hbar b = ({b,H} - {b,H}_M)/hbar^2. The quadratic part of H
// cancels identically; only W contributes, through the kernel
// (w - (2/hbar) sin(hbar w / 2))/hbar^2 which tends to w^3/24.
Symbol delta_h(const Symbol& b, const HamiltonianModel& h, const TwistedControl& ctrl = {});

// Generic-pair defect (both symbols decaying), for oracle tests.
Symbol delta_h_generic(const Symbol& b, const Symbol& h_symbol, const TwistedControl& ctrl = {});

// Spectral partial derivative d^(ax)_x d^(axi)_xi f.
Symbol spectral_derivative(const Symbol& f, int ax, int axi);

} // namespace eglab

#endif
