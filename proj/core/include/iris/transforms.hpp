#pragma once

#include <complex>
#include <span>
#include <vector>

#include "iris/mat.hpp"

namespace iris {

// Single-level orthonormal 2-D Haar decomposition. Each 2x2 block
// {a b; c d} maps to approx (a+b+c+d)/2, detail_h (a+b-c-d)/2,
// detail_v (a-b+c-d)/2, detail_d (a-b-c+d)/2, so total energy is preserved.
// Input dims must be even and non-zero (Errc::odd_dimensions /
// Errc::degenerate_input); each band is rows/2 x cols/2.
struct Haar2D {
  MatD approx;
  MatD detail_h;
  MatD detail_v;
  MatD detail_d;
};
Haar2D haar2d(const MatD& input);

// Discrete analytic signal of a real vector via the DFT: keep the DC bin (and
// the Nyquist bin for even lengths), double strictly-positive-frequency bins,
// zero the rest, inverse-transform. The real part reproduces the input; the
// imaginary part is the discrete Hilbert transform. Length must be >= 2
// (Errc::degenerate_input).
std::vector<std::complex<double>> hilbert_analytic(std::span<const double> x);

struct LogGaborParams {
  double f0 = 1.0 / 18.0;    // center frequency, cycles/sample, in (0, 0.5]
  double sigma_ratio = 0.5;  // bandwidth ratio sigma/f0, in (0, 1)
};

// Frequency response exp(-ln^2(f/f0) / (2 ln^2(sigma_ratio))); zero at f = 0.
double log_gabor_gain(double f, const LogGaborParams& params);

// Filters one periodic row: forward DFT, multiply positive-frequency bins
// k = 1..floor(n/2) by the gain at f = k/n, zero DC and negative bins,
// inverse DFT. The complex result carries the even (real) and odd (imag)
// responses whose signs form code bits. Length must be >= 4
// (Errc::degenerate_input).
std::vector<std::complex<double>> log_gabor_filter_row(std::span<const double> row,
                                                       const LogGaborParams& params);

}  // namespace iris
