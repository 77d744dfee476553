#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ortholat/common.hpp"

namespace ortholat {

/// Finitely supported Hermitian overlap sequence a_j = <A^j f0, f0>, j = -J..J.
///
/// The canonical convention is a_0 = 1 (normalized seed).  Generators for
/// unnormalized seeds (box translates with width != 1) emit raw overlaps with
/// a_0 = ||f0||^2; divide through with normalized() when the unit-norm
/// convention is needed.
struct OverlapSequence1D {
  int half_width = 0;        // J
  std::vector<cplx> values;  // a_j ordered j = -J..J, size 2J+1

  cplx at(int j) const {
    if (j < -half_width || j > half_width) return {0.0, 0.0};
    return values[static_cast<std::size_t>(j + half_width)];
  }

  // max_j |a_{-j} - conj(a_j)|
  double hermitian_defect() const;
  bool is_normalized(double tol = 1e-12) const;
  OverlapSequence1D normalized() const;

  // Wire format: {"J": int, "re": [...], "im": [...]} ordered j = -J..J.
  static OverlapSequence1D from_json(const nlohmann::json& doc);
  nlohmann::ordered_json to_json() const;
};

/// Complex samples of a 2pi-periodic function at p_m = 2pi m / M,
/// or p_m = 2pi (m + 1/2) / M when offset is set.
struct TorusFunction1D {
  int grid_size = 0;  // M
  bool offset = false;
  std::vector<cplx> samples;

  double point(int m) const {
    return kTwoPi * (m + (offset ? 0.5 : 0.0)) / grid_size;
  }
};

enum class PositivityStatus { strictly_positive, has_zero, indefinite };

std::string to_string(PositivityStatus status);

/// Grid min/max of a real density, with the minimum refined by one step of
/// three-point parabolic interpolation.  zero_tolerance is 1e-9 relative to
/// max_value.
struct PositivityReport {
  double min_value = 0.0;
  double argmin = 0.0;  // in [0, 2pi)
  double max_value = 0.0;
  PositivityStatus status = PositivityStatus::indefinite;

  nlohmann::ordered_json to_json() const;
};

/// Raised when a pipeline stage needs a strictly positive spectral density
/// but the input has a zero (the a=2 box / L=1 coherent failure channel)
/// or is indefinite.
class positivity_error : public std::domain_error {
 public:
  explicit positivity_error(const PositivityReport& report);
  const PositivityReport& report() const { return report_; }

 private:
  PositivityReport report_;
};

/// Direct (c) and dual (d) coefficient arrays indexed l = -K..K.
/// c_l are the Fourier coefficients of alpha^{-1/2}, d_l of alpha^{+1/2},
/// both with the positive real square-root branch.
struct CoefficientSet1D {
  int half_width = 0;   // K
  std::vector<cplx> c;  // empty until filled by direct_coefficients
  std::vector<cplx> d;  // empty until filled by dual_coefficients

  // Tail estimates from the last computed shell: sum_{|l|=K} |x_l|^2.
  double c_tail_estimate = 0.0;
  double d_tail_estimate = 0.0;

  cplx c_at(int l) const { return part_at(c, l); }
  cplx d_at(int l) const { return part_at(d, l); }

  double sum_sq_c() const;
  double sum_sq_d() const;

 private:
  cplx part_at(const std::vector<cplx>& v, int l) const {
    if (v.empty() || l < -half_width || l > half_width) return {0.0, 0.0};
    return v[static_cast<std::size_t>(l + half_width)];
  }
};

enum class CoefficientKind { direct, dual };

struct GramRow {
  int n_max = 0;
  std::vector<cplx> entries;  // <phi_n, phi_0>, n = -n_max..n_max
  bool truncated_overlaps = false;  // some a_{k+n-l} fell outside the support

  cplx at(int n) const { return entries[static_cast<std::size_t>(n + n_max)]; }
  cplx center() const { return at(0); }
  double max_off_center() const;
};

struct DecayProfile {
  std::vector<int> index;         // l = -K..K
  std::vector<double> magnitude;  // |c_l|
  std::optional<double> log_slope;  // least-squares slope of log|c_l| vs l
                                    // over the outer half of the usable range
                                    // (magnitudes above the 1e-14 relative
                                    // round-off floor)
};

/// alpha(p_m) = sum_{|j|<=J} a_j e^{i p_m j}.  Requires M >= 4(2J+1) and a
/// Hermitian input; the result then has vanishing imaginary part up to
/// round-off.
TorusFunction1D spectral_density(const OverlapSequence1D& a, int grid_size,
                                 bool offset = false);

PositivityReport check_positivity(const TorusFunction1D& alpha);

/// c_l = (1/M) sum_m e^{-i p_m l} / sqrt(alpha(p_m)), l = -K..K.
/// Trapezoid discretization of the Fourier integral; spectrally accurate for
/// smooth periodic densities.  Throws positivity_error unless the density is
/// strictly positive; requires K <= M/4.
CoefficientSet1D direct_coefficients(const TorusFunction1D& alpha,
                                     int half_width);

/// d_l = (1/M) sum_m e^{-i p_m l} sqrt(alpha(p_m)).  Zeros of alpha are
/// tolerated (sqrt is continuous); indefinite densities are rejected.
CoefficientSet1D dual_coefficients(const TorusFunction1D& alpha,
                                   int half_width);

/// <phi_n, phi_0> = sum_{k,l} conj(c_k) c_l a_{k+n-l} for n = -n_max..n_max.
/// Out-of-support overlaps count as zero and set the truncation flag.
GramRow gram_row(const CoefficientSet1D& coeffs, const OverlapSequence1D& a,
                 int n_max);

/// sum_n conj(c_n) d_n; equals 1 for matched pipelines.
cplx sum_rule_1d(const CoefficientSet1D& c, const CoefficientSet1D& d);

/// sup over the grid of |C(p) D(p) - 1|.  Since X and X^{-1} are functions of
/// the single unitary A, this is the operator norm of X X^{-1} - 1 on the
/// generated subspace: the computable form of the bounded-inverse criterion.
double symbol_inverse_residual(const CoefficientSet1D& c,
                               const CoefficientSet1D& d, int grid_size);

/// Magnitudes |c_l| plus the fitted log-slope over the outer half of the
/// index range.  Requires K >= 8.  The slope is absent when fewer than two
/// usable (nonzero) magnitudes remain.
DecayProfile decay_profile(const CoefficientSet1D& coeffs,
                           CoefficientKind kind = CoefficientKind::direct);

/// Partial sums sum |c_l|^2 over all grid modes, for each grid size, on
/// offset grids (sample points never hit a zero of alpha exactly).  Computed
/// through the discrete Parseval identity sum |c_l|^2 = mean(1/alpha).
/// Densities with a zero produce sums growing without bound; strictly
/// positive densities produce convergent values.
std::vector<double> divergence_probe(const OverlapSequence1D& a,
                                     const std::vector<int>& grid_sizes);

}  // namespace ortholat
