#pragma once

#include "ortholat/core1d.hpp"

namespace ortholat {

/// Characteristic function of [0, a) translated by integers.
struct BoxSeed {
  double width = 1.0;  // a > 0
};

/// Box seed acted on by the dyadic dilation (A h)(x) = sqrt(2) h(2x),
/// truncated at |j| <= J where the overlaps fall below round-off.
struct DilationSeed {
  int half_width = 96;  // J; default keeps the geometric tail below 1e-14
};

/// a_j = max(0, a - |j|): the measure of [0,a) intersected with [j, j+a).
/// Raw overlaps; a_0 = a, so the sequence is unnormalized unless a = 1.
OverlapSequence1D box_overlaps(const BoxSeed& seed);

/// a_j = 2^{-|j|/2}, |j| <= J.
OverlapSequence1D dilation_overlaps(const DilationSeed& seed);

/// Closed-form spectral density of the dilation overlaps:
/// alpha(p) = 1 / (3 - 2^{3/2} cos p).
double dilation_density_closed(double p);

}  // namespace ortholat
