#pragma once

#include <complex>
#include <span>
#include <vector>

namespace iris::detail {

// Unnormalized complex DFT (forward: exp(-2*pi*i*k*n/N); inverse: exp(+...)).
// Callers divide by N after the inverse. Thread-safe; plans are cached per
// (length, direction).
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool inverse);

std::vector<std::complex<double>> dft_real(std::span<const double> x);

}  // namespace iris::detail
