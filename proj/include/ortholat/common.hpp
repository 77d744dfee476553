#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace ortholat {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pairwise (cascade) summation. Deterministic for a fixed element order and
// keeps the rounding error O(log n) instead of O(n), which matters for the
// spectral-accuracy contracts on large grids.
template <typename T>
T pairwise_sum(std::span<const T> terms) {
  const std::size_t n = terms.size();
  if (n <= 8) {
    T acc{};
    for (const T& t : terms) acc += t;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& terms) {
  return pairwise_sum(std::span<const T>(terms));
}

// Evaluates the trigonometric polynomial sum_{l=-K..K} coeff[l+K] e^{ipl}
// by a Horner recurrence in e^{ip}.
inline cplx trig_poly_eval(std::span<const cplx> coeffs, double p) {
  const int k = static_cast<int>(coeffs.size() - 1) / 2;
  const cplx w = std::polar(1.0, p);
  cplx acc{0.0, 0.0};
  for (int l = 2 * k; l >= 0; --l) acc = acc * w + coeffs[l];
  cplx w_back{1.0, 0.0};
  const cplx wc = std::conj(w);
  for (int i = 0; i < k; ++i) w_back *= wc;
  return acc * w_back;
}

}  // namespace ortholat
