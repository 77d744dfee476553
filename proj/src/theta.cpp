#include "ortholat/theta.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ortholat {

ThetaArg ThetaArg::make(cplx z, double nome) {
  if (!(nome > 0.0) || !(nome < 1.0)) {
    throw std::invalid_argument("theta3 nome must lie in (0, 1)");
  }
  const double beta = std::abs(z.imag());
  if (!(nome * std::exp(2.0 * beta) < 1.0)) {
    throw std::domain_error(
        "theta3 argument violates the decay condition q e^{2|Im z|} < 1");
  }
  const double mu = -std::log(nome);
  // smallest n with mu n^2 - 2 beta n > 35 (tail below 1e-15 of the n=0 term)
  const int tail =
      static_cast<int>(std::ceil((beta + std::sqrt(beta * beta + 35.0 * mu)) / mu)) + 1;
  return ThetaArg{z, nome, tail};
}

cplx theta3(const ThetaArg& arg) {
  if (!(arg.nome > 0.0) || !(arg.nome < 1.0) ||
      !(arg.nome * std::exp(2.0 * std::abs(arg.z.imag())) < 1.0)) {
    throw std::domain_error("theta3 argument out of domain");
  }
  const double mu = -std::log(arg.nome);
  cplx sum{1.0, 0.0};  // n = 0
  for (int n = 1; n <= arg.tail_terms; ++n) {
    const double g_pos = -mu * n * n - 2.0 * n * arg.z.imag();
    const double g_neg = -mu * n * n + 2.0 * n * arg.z.imag();
    const double phase = 2.0 * n * arg.z.real();
    sum += std::exp(g_pos) * cplx{std::cos(phase), std::sin(phase)};
    sum += std::exp(g_neg) * cplx{std::cos(phase), -std::sin(phase)};
  }
  return sum;
}

namespace detail {

cplx theta3_sum(double re_z, double im_z, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("theta3_sum needs mu > 0");
  // Term magnitude exp(-mu n^2 - 2 n im_z) peaks at n* = -im_z / mu.
  const double peak = -im_z / mu;
  const int n_max = static_cast<int>(
      std::ceil(std::abs(peak) + std::sqrt(40.0 / mu))) + 2;
  cplx sum{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) {
    const double g = -mu * n * n - 2.0 * n * im_z;
    const double phase = 2.0 * n * re_z;
    sum += std::exp(g) * cplx{std::cos(phase), std::sin(phase)};
  }
  return sum;
}

}  // namespace detail

}  // namespace ortholat
