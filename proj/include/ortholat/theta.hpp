#pragma once

#include "ortholat/common.hpp"

namespace ortholat {

/// Argument bundle for theta3 in the convention
///   theta3(z, q) = sum_{n in Z} q^{n^2} e^{2 i n z},  0 < q < 1.
/// Terms have magnitude q^{n^2} e^{-2 n Im z}; the constructor requires
/// q e^{2 |Im z|} < 1 so the terms decay monotonically from |n| = 1, and
/// picks tail_terms so the neglected tail is below 1e-15 of the n = 0 term.
struct ThetaArg {
  cplx z;
  double nome = 0.0;   // q
  int tail_terms = 0;  // symmetric truncation index

  static ThetaArg make(cplx z, double nome);
};

/// Truncated symmetric sum of the theta3 series.
cplx theta3(const ThetaArg& arg);

namespace detail {

/// sum_n exp(-mu n^2 - 2 n im_z) e^{2 i n re_z}, mu = -ln q > 0.
///
/// Exponents are combined before exponentiating, so the evaluation stays
/// finite even at the boundary q e^{2|im_z|} = 1 where the naive product
/// q^{n^2} e^{2 i n z} pairs an overflow with an underflow.  The truncation
/// index comes from the peak of the term-magnitude parabola.
cplx theta3_sum(double re_z, double im_z, double mu);

}  // namespace detail

}  // namespace ortholat
