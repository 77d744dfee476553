#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ortholat/common.hpp"
#include "ortholat/core1d.hpp"
#include "ortholat/theta.hpp"

namespace ortholat {

// Defaults for the coherent-state lattice pipeline.  F_L is entire and close
// to 1 for L >= 2, so modest grids are spectrally converged; the larger grid
// is for bound certification.
inline constexpr int kOverlapRadiusDefault = 6;   // e^{-(pi/2) L R^2} < 1e-16
inline constexpr int kCoeffGridDefault = 64;      // M
inline constexpr int kCoeffRadiusDefault = 6;     // K
inline constexpr int kBoundGridDefault = 512;

/// Square lattice of unitary translates with cell area a^2 = 2 pi L.
/// Carries the overlap truncation radius and caches the overlaps I_n on the
/// index square.
struct LatticeModel2D {
  int L = 2;
  int radius = kOverlapRadiusDefault;  // truncation for index sums

  static LatticeModel2D make(int L, int radius = kOverlapRadiusDefault);

  double lattice_constant() const;  // a = sqrt(2 pi L)
  double overlap(int n1, int n2) const;  // cached I_n; 0 outside the square

 private:
  std::vector<double> cache_;  // filled by make()
};

/// I_n = <phi_n, phi_0> = (-1)^{L n1 n2} e^{-(pi/2) L (n1^2 + n2^2)}.
/// Real by inspection; the sign factor is kept verbatim even when L is even.
double coherent_overlap(int n1, int n2, int L);

/// Complex samples on the M x M grid over [0, 2pi)^2.
/// Row-major: samples[i * M + j] at (P_i, P_j), P_m = 2pi (m + offset/2) / M.
struct TorusFunction2D {
  int grid_size = 0;
  bool offset = false;
  std::vector<cplx> samples;

  double point(int m) const {
    return kTwoPi * (m + (offset ? 0.5 : 0.0)) / grid_size;
  }
  cplx at(int i, int j) const {
    return samples[static_cast<std::size_t>(i) * grid_size + j];
  }
};

/// F_L(P) by direct lattice sum over the index square ||m||_inf <= radius.
double f_direct(double p1, double p2, int L, int radius = kOverlapRadiusDefault);

/// F_L(P) as a combination of four theta3 factors (split of the lattice sum
/// by the parity of the second index).  The factor with complex argument
/// P2 + i pi L sits exactly on the decay boundary of the theta3 series and is
/// evaluated with grouped exponents.
cplx f_theta(double p1, double p2, int L);

/// F_L(P) as the term-wise phase action (-1)^{L n m} on the double theta3
/// product: the operator e^{i pi L D} acting on Fourier coefficients.  Terms
/// are grouped in swap-symmetric pairs, so the P1 <-> P2 exchange invariance
/// holds bit-exactly.
double f_phase_product(double p1, double p2, int L,
                       int radius = kOverlapRadiusDefault);

/// Samples F_L on an M x M grid through f_direct.
TorusFunction2D f_grid(int L, int grid_size, bool offset = false,
                       int radius = kOverlapRadiusDefault);

/// Direct coefficients c_k (Fourier modes of F_L^{-1/2}) and dual
/// coefficients (modes of F_L^{+1/2}) on the index square ||k||_inf <= K.
struct CoefficientSet2D {
  int L = 0;
  int radius = 0;       // K
  std::vector<cplx> c;  // row-major over (k1 + K) * (2K+1) + (k2 + K)
  std::vector<cplx> dual;
  bool nonconvergent = false;  // set when produced under the L = 1 override

  int side() const { return 2 * radius + 1; }
  cplx c_at(int k1, int k2) const { return part_at(c, k1, k2); }
  cplx dual_at(int k1, int k2) const { return part_at(dual, k1, k2); }

  double sum_sq(CoefficientKind kind) const;
  double sum_abs(CoefficientKind kind) const;

  // Wire format: {"L": int, "K": int, "re": [...], "im": [...]} row-major.
  static CoefficientSet2D from_json(const nlohmann::json& doc,
                                    CoefficientKind kind = CoefficientKind::direct);
  nlohmann::ordered_json to_json(CoefficientKind kind) const;

 private:
  cplx part_at(const std::vector<cplx>& v, int k1, int k2) const {
    if (v.empty() || std::abs(k1) > radius || std::abs(k2) > radius) return {};
    return v[static_cast<std::size_t>(k1 + radius) * side() + (k2 + radius)];
  }
};

/// Raised when coefficient extraction meets the L = 1 zero of F_1 at
/// (pi, pi).
class density_zero_error : public std::domain_error {
 public:
  density_zero_error()
      : std::domain_error("F_1 has a zero at (pi, pi); the coefficient "
                          "integral does not converge for L = 1") {}
};

/// c_k = (1/M^2) sum_m e^{-i P_m . k} / sqrt(F_L(P_m)).
/// Refuses L = 1 unless l1_override is set; the override switches to an
/// offset grid (sample points avoid the zero) and flags the result
/// non-convergent.
CoefficientSet2D direct_coefficients_2d(int L, int grid_size = kCoeffGridDefault,
                                        int radius = kCoeffRadiusDefault,
                                        bool l1_override = false);

/// dual_k = (1/M^2) sum_m e^{-i P_m . k} sqrt(F_L(P_m)); defined for all L.
CoefficientSet2D dual_coefficients_2d(int L, int grid_size = kCoeffGridDefault,
                                      int radius = kCoeffRadiusDefault);

/// Merges the c part of one extraction and the dual part of another.
CoefficientSet2D merge_coefficients(const CoefficientSet2D& direct,
                                    const CoefficientSet2D& dual);

/// <Psi_n, Psi_0> = sum_{l,s} conj(c_l) c_s I_{l+n-s} over ||n||_inf <= n_max.
struct Gram2D {
  int n_max = 0;
  std::vector<cplx> entries;  // row-major over (n1 + n_max, n2 + n_max)

  cplx at(int n1, int n2) const {
    return entries[static_cast<std::size_t>(n1 + n_max) * (2 * n_max + 1) +
                   (n2 + n_max)];
  }
  cplx center() const { return at(0, 0); }
  double max_off_center() const;
};

Gram2D gram_2d(const CoefficientSet2D& coeffs, int L, int n_max);

/// ||Psi_0||^2 = sum_{k,s} (-1)^{L(k1-s1)(k2-s2)} e^{-(pi/2)L(...)}
///               conj(c_k) c_s; equals the Gram center entry.
double norm_condition(const CoefficientSet2D& coeffs, int L);

/// sum_k conj(dual_k) c_k; equals 1 for matched pipelines with L > 1.
cplx sum_rule_2d(const CoefficientSet2D& c, const CoefficientSet2D& dual);

/// First-order coefficients: c_0 = 1 and
/// c_k = -1/2 (-1)^{L k1 k2} e^{-(pi/2) L (k1^2+k2^2)} on the cross
/// Gamma = {(+-1,0),(0,+-1)}; the dual part carries the matching first-order
/// inverse (+1/2 on Gamma).  Radius 1, exactly 5 nonzero entries per part.
CoefficientSet2D perturbative_coeffs(int L);

struct PerturbativeDiagnostics {
  int L = 0;
  double norm_sq = 0.0;           // ||Psi_0^approx||^2, exact double sum
  double neighbor_overlap = 0.0;  // |<Psi_0, Psi_(1,0)>| at first order
  double inverse_residual = 0.0;  // sup |x_L(P) y_L(P) - 1|
  bool conclusive = false;        // false for L = 1 (residual bound 0.17285)
};

/// Diagnostics of the first-order construction.  norm_sq is the exact double
/// sum over the 5-point coefficient set; neighbor_overlap is evaluated at
/// first order in the off-center coefficients (the consistent order of the
/// approximation); inverse_residual is the symbol residual of the pair
/// 1 -+ 1/2 e^{-pi L/2} K_L with K_L = T1 + T1^{-1} + T2 + T2^{-1}.
PerturbativeDiagnostics perturbative_diagnostics(int L);

/// sup over the grid of |C_L(P) G_L(P) - 1| with C_L, G_L the trigonometric
/// polynomials of the direct and dual coefficients: the computable form of
/// "X_L admits a bounded inverse" on the algebra generated by T1, T2.
double xl_symbol_residual(const CoefficientSet2D& c,
                          const CoefficientSet2D& dual,
                          int grid_size = kCoeffGridDefault);

struct BreakdownRow {
  int grid_size = 0;
  double sum_abs = 0.0;  // sum |c_k| over all grid modes
  double sum_sq = 0.0;   // sum |c_k|^2 over all grid modes
  double f_min = 0.0;    // min of F_L over the offset grid
};

/// Partial sums of the coefficient integrals on refining offset grids.
/// For L = 1 the sums grow without bound (the F_1 zero); for L >= 2 they are
/// stable: the numerical witness of the L = 1 breakdown.
std::vector<BreakdownRow> l1_breakdown_report(const std::vector<int>& grid_sizes,
                                              int L = 1);

}  // namespace ortholat
