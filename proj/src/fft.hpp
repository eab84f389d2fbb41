#ifndef EGLAB_FFT_HPP
#define EGLAB_FFT_HPP

#include "common.hpp"

namespace eglab {

// Thin FFTW wrappers. All transforms are unnormalized DFTs; normalization and
// mode bookkeeping live with the callers. Plan creation is serialized
// internally, execution through these entry points is thread-safe.

// In-place 2-D DFT of an n0 x n1 row-major complex array. sign = -1 forward.
void dft_2d(cdouble* data, int n0, int n1, int sign);

// In-place 1-D DFT of length n. sign = -1 forward.
void dft_1d(cdouble* data, int n, int sign);

// Batched 1-D DFT over the rows of an n0 x n1 row-major array (transform
// length n1, n0 independent rows).
void dft_rows(cdouble* data, int n0, int n1, int sign);

// Spectral 2x upsampling of an M x M periodic array (zero-padding in Fourier
// space); returns a 2M x 2M array sampling the trigonometric interpolant on
// the half-step lattice.
std::vector<cdouble> upsample2x(const std::vector<cdouble>& values, int m);

} // namespace eglab

#endif
