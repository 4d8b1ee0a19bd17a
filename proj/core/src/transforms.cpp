#include "iris/transforms.hpp"

#include <cmath>

#include "dft.hpp"
#include "iris/errors.hpp"

namespace iris {

Haar2D haar2d(const MatD& input) {
  if (input.empty()) throw Error(Errc::degenerate_input, "haar2d of empty matrix");
  if (input.rows % 2 != 0 || input.cols % 2 != 0)
    throw Error(Errc::odd_dimensions, "haar2d input dims must be even");

  const std::size_t hr = input.rows / 2, hc = input.cols / 2;
  Haar2D out{MatD(hr, hc), MatD(hr, hc), MatD(hr, hc), MatD(hr, hc)};
  for (std::size_t r = 0; r < hr; ++r) {
    for (std::size_t c = 0; c < hc; ++c) {
      const double a = input(2 * r, 2 * c);
      const double b = input(2 * r, 2 * c + 1);
      const double cc = input(2 * r + 1, 2 * c);
      const double d = input(2 * r + 1, 2 * c + 1);
      out.approx(r, c) = 0.5 * (a + b + cc + d);
      out.detail_h(r, c) = 0.5 * (a + b - cc - d);
      out.detail_v(r, c) = 0.5 * (a - b + cc - d);
      out.detail_d(r, c) = 0.5 * (a - b - cc + d);
    }
  }
  return out;
}

std::vector<std::complex<double>> hilbert_analytic(std::span<const double> x) {
  if (x.size() < 2)
    throw Error(Errc::degenerate_input, "analytic signal needs length >= 2");
  const std::size_t n = x.size();
  auto spectrum = detail::dft_real(x);

  // Analytic-signal spectrum: DC kept, strictly positive frequencies doubled,
  // Nyquist (even n) kept, negative frequencies zeroed.
  const std::size_t half = n / 2;
  if (n % 2 == 0) {
    for (std::size_t k = 1; k < half; ++k) spectrum[k] *= 2.0;
    for (std::size_t k = half + 1; k < n; ++k) spectrum[k] = 0.0;
  } else {
    for (std::size_t k = 1; k <= half; ++k) spectrum[k] *= 2.0;
    for (std::size_t k = half + 1; k < n; ++k) spectrum[k] = 0.0;
  }

  auto y = detail::dft(spectrum, /*inverse=*/true);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : y) v *= inv_n;
  return y;
}

double log_gabor_gain(double f, const LogGaborParams& params) {
  if (!(params.f0 > 0.0) || !(params.f0 <= 0.5))
    throw Error(Errc::bad_config, "log-Gabor f0 must be in (0, 0.5]");
  if (!(params.sigma_ratio > 0.0) || !(params.sigma_ratio < 1.0))
    throw Error(Errc::bad_config, "log-Gabor sigma_ratio must be in (0, 1)");
  if (f <= 0.0) return 0.0;
  const double num = std::log(f / params.f0);
  const double den = std::log(params.sigma_ratio);
  return std::exp(-(num * num) / (2.0 * den * den));
}

std::vector<std::complex<double>> log_gabor_filter_row(std::span<const double> row,
                                                       const LogGaborParams& params) {
  if (row.size() < 4)
    throw Error(Errc::degenerate_input, "log-Gabor row needs length >= 4");
  // Validate parameters up front (log_gabor_gain throws on bad values).
  (void)log_gabor_gain(params.f0, params);

  const std::size_t n = row.size();
  auto spectrum = detail::dft_real(row);
  std::vector<std::complex<double>> shaped(n, {0.0, 0.0});
  // Positive-frequency bins only (k = 1..floor(n/2)); DC and negative bins
  // stay zero, making the inverse transform the complex-valued analytic
  // response whose real/imag signs are the code bits.
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    shaped[k] = spectrum[k] * log_gabor_gain(f, params);
  }

  auto y = detail::dft(shaped, /*inverse=*/true);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : y) v *= inv_n;
  return y;
}

}  // namespace iris
