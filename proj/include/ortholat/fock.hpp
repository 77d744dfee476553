#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ortholat/lattice2d.hpp"

namespace ortholat {

// Coefficient radius for the truncated-Fock pipeline.  The 2-D coefficients
// decay by roughly a factor e^{-pi} per shell (shell 4 is ~1e-6 for L = 2);
// radius 4 keeps the operator-truncation part of the eigenrelation residual
// below 1e-5 at N = 140.
inline constexpr int kFockCoeffRadius = 4;
inline constexpr int kFockDimDefault = 140;

struct FockVector {
  Eigen::VectorXcd amp;  // number-basis amplitudes 0..N-1

  int dim() const { return static_cast<int>(amp.size()); }
  double norm() const { return amp.norm(); }
};

struct FockOperator {
  Eigen::MatrixXcd mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  FockOperator adjoint() const { return {mat.adjoint()}; }
};

/// b with b|k> = sqrt(k) |k-1>: entries sqrt(k) on the superdiagonal.
FockOperator annihilator(int dim);

/// Smallest safe truncation for a coherent state of squared modulus |z|^2
/// (Poisson tail rule): |z|^2 + 12 sqrt(|z|^2 + 1).
double coherent_tail_dimension(double abs_z_sq);

/// Amplitudes e^{-|z|^2/2} z^k / sqrt(k!).  Rejects dimensions below the
/// tail rule.
FockVector coherent_vector(cplx z, int dim);

/// exp(z b^dag - conj(z) b) by dense matrix exponential
/// (scaling-and-squaring).
FockOperator displacement(cplx z, int dim);

/// || (U^dag U - 1) restricted to the leading block ||, largest singular
/// value; the truncation-unitarity diagnostic for displacement constructors.
double unitarity_defect(const FockOperator& op, int block);

/// z_n = (a / sqrt(2)) (n2 + i n1) with a = sqrt(2 pi L).
cplx lattice_point(int n1, int n2, int L);

/// T1^{k1} T2^{k2} = (-1)^{L k1 k2} D(z_k) on the truncated space.
FockOperator translation_product(int k1, int k2, int L, int dim);

/// X = sum_k c_k T1^{k1} T2^{k2} (direct part) or the same sum over the dual
/// part, which realizes X^{-1}.
FockOperator build_X(const CoefficientSet2D& coeffs, CoefficientKind kind,
                     int dim);

/// Builds X and X^{-1} together, sharing one displacement per lattice index.
std::pair<FockOperator, FockOperator> build_X_pair(
    const CoefficientSet2D& coeffs, int dim);

/// B = X b X^{-1}; Psi_n is then an eigenvector with eigenvalue z_n.
FockOperator build_B(const FockOperator& x, const FockOperator& x_inv);

/// Psi_n = X T1^{n1} T2^{n2} |vacuum>.
FockVector lattice_state(const FockOperator& x, int n1, int n2, int L);

struct UncertaintyReport {
  double dq = 0.0;  // Delta Q_L on the normalized state
  double dp = 0.0;  // Delta P_L
  double half_commutator_expectation = 0.0;  // 1/2 <[B, B^dag]>
  double product = 0.0;                      // dq * dp
  double bdagger_identity = 0.0;  // 1/2 (||B^dag Psi||^2 - |z_n|^2)
};

/// Quadrature variances of Q_L = (B + B^dag)/sqrt(2), P_L = i(B^dag - B)/sqrt(2)
/// on the normalized Psi_n.  The modified uncertainty relation is
/// dq * dp = 1/2 |<[B, B^dag]>| with both variances equal to
/// 1/2 (||B^dag Psi||^2 - |z_n|^2).
UncertaintyReport uncertainty_report(const FockOperator& x,
                                     const FockOperator& x_inv, int n1, int n2,
                                     int L);

/// Convenience overload running the default extraction pipeline.
UncertaintyReport uncertainty_report(int n1, int n2, int L,
                                     int dim = kFockDimDefault);

/// Largest singular value of ([B, B^dag] - 1) restricted to the leading
/// block (default dim/2), away from the truncation edge.
double commutator_deviation(const FockOperator& b, int block);
double commutator_deviation(int L, int dim = kFockDimDefault, int block = 0);

/// <Psi_n, Psi_m> for ||n||_inf, ||m||_inf <= n_max, flattened row-major over
/// ((n1+n_max)(2n_max+1) + n2+n_max).
struct FockGram {
  int n_max = 0;
  Eigen::MatrixXcd entries;

  cplx at(int n1, int n2, int m1, int m2) const {
    const int side = 2 * n_max + 1;
    return entries((n1 + n_max) * side + (n2 + n_max),
                   (m1 + n_max) * side + (m2 + n_max));
  }
};

FockGram fock_gram(const FockOperator& x, int L, int n_max);

}  // namespace ortholat
