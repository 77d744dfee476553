#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ortholat/lattice2d.hpp"

namespace ortholat {

inline constexpr int kZakGridDefault = 256;

/// Fundamental cell [0, 2pi/A) x [0, a) of the kq-representation built from
/// the comb family Phi_{k,q}.  The commuting pair uses a b = 2 pi L; A is an
/// independent cell parameter that by default coincides with a.
struct KqBox {
  double A = 0.0;
  double a = 0.0;
  int L = 1;
  int grid_k = kZakGridDefault;
  int grid_q = kZakGridDefault;

  static KqBox for_lattice(int L, int grid = kZakGridDefault);

  double k_at(int i) const { return (kTwoPi / A) * i / grid_k; }
  double q_at(int j) const { return a * j / grid_q; }
  double cell_measure() const { return (kTwoPi / A) * a; }
  double cell_weight() const {
    return cell_measure() / (static_cast<double>(grid_k) * grid_q);
  }
};

/// Samples of <v, Phi_{k,q}> on the box grid.  With this slot convention the
/// lattice translates act diagonally:
///   <T1^{n1} T2^{n2} v, Phi_{k,q}> = e^{-i q a n1 + i k A n2} <v, Phi_{k,q}>.
struct ZakSample {
  KqBox box;
  std::vector<cplx> samples;  // row-major samples[i * grid_q + j]
  std::string provenance;

  cplx at(int i, int j) const {
    return samples[static_cast<std::size_t>(i) * box.grid_q + j];
  }
};

/// Truncation count so that the Gaussian comb tail e^{-(q + tail a)^2 / 2}
/// stays below 1e-16 over the whole q range.
int gaussian_tail_terms(const KqBox& box);

/// Zak transform of the vacuum phi_0(x) = pi^{-1/4} e^{-x^2/2}:
/// sample(k,q) = sqrt(A/2pi) sum_{|l|<=tail} e^{i k l A} phi_0(q + l a).
/// (The delta comb reduces the pairing to a lattice sum of Gaussian samples.)
ZakSample zak_gaussian(const KqBox& box, int tail = 0);

/// Trapezoid estimate of the double integral of |sample|^2 over the box;
/// equals the squared norm of the transformed vector (unitarity).
double zak_resolution_check(const ZakSample& sample);

/// Zak transform of Psi_0 = sum_k c_k phi_k: translations act diagonally, so
/// sample = sum_k conj(c_k) e^{-i q a k1 + i k A k2} . zak_gaussian.
/// For the real symmetric coefficient sets produced by the pipeline the
/// conjugation is a no-op.
ZakSample zak_psi(const CoefficientSet2D& coeffs, const KqBox& box,
                  int tail = 0);

/// Trapezoid estimate of the pairing integral
///   integral e^{i q a n1 - i k A n2} |sample(k,q)|^2 dk dq,
/// which equals <Psi_n, Psi_0> up to index reflection: delta_{n,0} for the
/// generator of an orthonormal family.
cplx zak_orthogonality_integral(const ZakSample& sample, int n1, int n2);

/// max over ||n||_inf <= n_max of |<s, e_n>| for the witness s(k,q) =
/// e^{i q a / L} against the lattice exponentials e_n = e^{-iqan1 + ikAn2}.
/// Zero for every n when L > 1 (the witness certifies incompleteness); for
/// L = 1 the witness coincides with the member at n = (-1, 0) and the
/// pairing returns the full cell measure.
double incompleteness_witness(int L, const KqBox& box, int n_max);

/// |<Phi, Psi>|^2 candidate profile with value A L / (2 pi a j) on
/// [0, 2pi/A) x [0, a j / L) and zero elsewhere, for j = 1..L.
ZakSample box_profile_candidate(const KqBox& box, int j);

/// Closed-form integral of the candidate profile over the box:
/// value times support measure, identically 1.
double profile_closed_form_integral(const KqBox& box, int j);

/// Grid L2 distance between |sample|^2 and a candidate intensity profile.
double intensity_distance(const ZakSample& sample, const ZakSample& profile);

/// CSV rows "k,q,re,im" at full round-trip precision.
void write_csv(const ZakSample& sample, std::ostream& out);

/// JSON grid {"A", "a", "L", "grid_k", "grid_q", "provenance", "re", "im"}
/// (row-major over the k index) for plotting by external tools.
nlohmann::ordered_json to_json(const ZakSample& sample);

}  // namespace ortholat
