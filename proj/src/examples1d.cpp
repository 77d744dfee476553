#include "ortholat/examples1d.hpp"

#include <cmath>
#include <stdexcept>

namespace ortholat {

OverlapSequence1D box_overlaps(const BoxSeed& seed) {
  const double a = seed.width;
  if (!(a > 0.0)) throw std::invalid_argument("box width must be positive");
  const int j_max = static_cast<int>(std::ceil(a)) - 1;
  OverlapSequence1D out;
  out.half_width = j_max;
  out.values.resize(static_cast<std::size_t>(2 * j_max + 1));
  for (int j = -j_max; j <= j_max; ++j) {
    out.values[static_cast<std::size_t>(j + j_max)] =
        std::max(0.0, a - std::abs(j));
  }
  return out;
}

OverlapSequence1D dilation_overlaps(const DilationSeed& seed) {
  if (seed.half_width < 1) {
    throw std::invalid_argument("dilation truncation J must be >= 1");
  }
  OverlapSequence1D out;
  out.half_width = seed.half_width;
  out.values.resize(static_cast<std::size_t>(2 * seed.half_width + 1));
  for (int j = -seed.half_width; j <= seed.half_width; ++j) {
    out.values[static_cast<std::size_t>(j + seed.half_width)] =
        std::exp2(-0.5 * std::abs(j));
  }
  return out;
}

double dilation_density_closed(double p) {
  return 1.0 / (3.0 - std::pow(2.0, 1.5) * std::cos(p));
}

}  // namespace ortholat
