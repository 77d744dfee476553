#include "ortholat/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace ortholat {

namespace {

Eigen::MatrixXcd displacement_generator(cplx z, int dim) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) {
    const double root = std::sqrt(static_cast<double>(k));
    gen(k, k - 1) = z * root;           // z b^dag
    gen(k - 1, k) = -std::conj(z) * root;  // -conj(z) b
  }
  return gen;
}

FockVector vacuum(int dim) {
  FockVector v;
  v.amp = Eigen::VectorXcd::Zero(dim);
  v.amp(0) = 1.0;
  return v;
}

cplx expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& state) {
  return state.dot(op * state);  // Eigen's dot conjugates the first factor
}

}  // namespace

FockOperator annihilator(int dim) {
  if (dim < 2) throw std::invalid_argument("annihilator needs dim >= 2");
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) {
    b(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  return {std::move(b)};
}

double coherent_tail_dimension(double abs_z_sq) {
  return abs_z_sq + 12.0 * std::sqrt(abs_z_sq + 1.0);
}

FockVector coherent_vector(cplx z, int dim) {
  const double zz = std::norm(z);
  if (dim < coherent_tail_dimension(zz)) {
    throw std::invalid_argument(
        "truncation dim " + std::to_string(dim) +
        " below the coherent tail rule for |z|^2 = " + std::to_string(zz));
  }
  FockVector v;
  v.amp.resize(dim);
  v.amp(0) = std::exp(-0.5 * zz);
  for (int k = 1; k < dim; ++k) {
    v.amp(k) = v.amp(k - 1) * z / std::sqrt(static_cast<double>(k));
  }
  return v;
}

FockOperator displacement(cplx z, int dim) {
  if (dim < 2) throw std::invalid_argument("displacement needs dim >= 2");
  return {displacement_generator(z, dim).exp()};
}

double unitarity_defect(const FockOperator& op, int block) {
  const Eigen::MatrixXcd defect =
      (op.mat.adjoint() * op.mat - Eigen::MatrixXcd::Identity(op.dim(), op.dim()))
          .topLeftCorner(block, block);
  return defect.jacobiSvd().singularValues()(0);
}

cplx lattice_point(int n1, int n2, int L) {
  const double a = std::sqrt(kTwoPi * L);
  return (a / std::sqrt(2.0)) * cplx(static_cast<double>(n2),
                                     static_cast<double>(n1));
}

FockOperator translation_product(int k1, int k2, int L, int dim) {
  const FockOperator d = displacement(lattice_point(k1, k2, L), dim);
  const long long parity = static_cast<long long>(L) * k1 * k2;
  if (parity % 2 == 0) return d;
  return {-d.mat};
}

FockOperator build_X(const CoefficientSet2D& coeffs, CoefficientKind kind,
                     int dim) {
  const std::vector<cplx>& v =
      (kind == CoefficientKind::direct) ? coeffs.c : coeffs.dual;
  if (v.empty()) throw std::invalid_argument("build_X: empty coefficient part");
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim, dim);
  const int k_max = coeffs.radius;
  for (int k1 = -k_max; k1 <= k_max; ++k1) {
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      const cplx w = v[static_cast<std::size_t>(k1 + k_max) * coeffs.side() +
                       (k2 + k_max)];
      if (w == cplx{0.0, 0.0}) continue;
      x += w * translation_product(k1, k2, coeffs.L, dim).mat;
    }
  }
  return {std::move(x)};
}

std::pair<FockOperator, FockOperator> build_X_pair(
    const CoefficientSet2D& coeffs, int dim) {
  if (coeffs.c.empty() || coeffs.dual.empty()) {
    throw std::invalid_argument("build_X_pair needs both coefficient parts");
  }
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd x_inv = Eigen::MatrixXcd::Zero(dim, dim);
  const int k_max = coeffs.radius;
  // One exponential per index pair: T(-k) is exactly T(k)^dag (the generator
  // is anti-Hermitian and the sign factor is even in k).
  for (int k1 = 0; k1 <= k_max; ++k1) {
    for (int k2 = (k1 == 0) ? 0 : -k_max; k2 <= k_max; ++k2) {
      const Eigen::MatrixXcd t = translation_product(k1, k2, coeffs.L, dim).mat;
      const cplx cw = coeffs.c_at(k1, k2);
      const cplx dw = coeffs.dual_at(k1, k2);
      if (cw != cplx{0.0, 0.0}) x += cw * t;
      if (dw != cplx{0.0, 0.0}) x_inv += dw * t;
      if (k1 == 0 && k2 == 0) continue;
      const Eigen::MatrixXcd t_mirror = t.adjoint();
      const cplx cm = coeffs.c_at(-k1, -k2);
      const cplx dm = coeffs.dual_at(-k1, -k2);
      if (cm != cplx{0.0, 0.0}) x += cm * t_mirror;
      if (dm != cplx{0.0, 0.0}) x_inv += dm * t_mirror;
    }
  }
  return {FockOperator{std::move(x)}, FockOperator{std::move(x_inv)}};
}

FockOperator build_B(const FockOperator& x, const FockOperator& x_inv) {
  const int dim = x.dim();
  if (x_inv.dim() != dim) {
    throw std::invalid_argument("build_B: dimension mismatch");
  }
  return {x.mat * annihilator(dim).mat * x_inv.mat};
}

FockVector lattice_state(const FockOperator& x, int n1, int n2, int L) {
  const int dim = x.dim();
  const FockOperator t = translation_product(n1, n2, L, dim);
  FockVector v;
  v.amp = x.mat * (t.mat * vacuum(dim).amp);
  return v;
}

UncertaintyReport uncertainty_report(const FockOperator& x,
                                     const FockOperator& x_inv, int n1, int n2,
                                     int L) {
  const FockOperator b_op = build_B(x, x_inv);
  FockVector psi = lattice_state(x, n1, n2, L);
  psi.amp /= psi.norm();

  const Eigen::MatrixXcd& b = b_op.mat;
  const Eigen::MatrixXcd bd = b.adjoint();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd q = inv_sqrt2 * (b + bd);
  const Eigen::MatrixXcd p = cplx{0.0, 1.0} * inv_sqrt2 * (bd - b);

  UncertaintyReport rep;
  const double q_mean = expectation(q, psi.amp).real();
  const double q_sq = expectation(q * q, psi.amp).real();
  const double p_mean = expectation(p, psi.amp).real();
  const double p_sq = expectation(p * p, psi.amp).real();
  rep.dq = std::sqrt(std::max(0.0, q_sq - q_mean * q_mean));
  rep.dp = std::sqrt(std::max(0.0, p_sq - p_mean * p_mean));
  rep.product = rep.dq * rep.dp;
  rep.half_commutator_expectation =
      0.5 * expectation(b * bd - bd * b, psi.amp).real();
  const double bd_norm_sq = (bd * psi.amp).squaredNorm();
  rep.bdagger_identity =
      0.5 * (bd_norm_sq - std::norm(lattice_point(n1, n2, L)));
  return rep;
}

UncertaintyReport uncertainty_report(int n1, int n2, int L, int dim) {
  const CoefficientSet2D coeffs = merge_coefficients(
      direct_coefficients_2d(L, kCoeffGridDefault, kFockCoeffRadius),
      dual_coefficients_2d(L, kCoeffGridDefault, kFockCoeffRadius));
  const auto [x, x_inv] = build_X_pair(coeffs, dim);
  return uncertainty_report(x, x_inv, n1, n2, L);
}

double commutator_deviation(const FockOperator& b, int block) {
  const int dim = b.dim();
  if (block <= 0 || block > dim) block = dim / 2;
  const Eigen::MatrixXcd comm = b.mat * b.mat.adjoint() - b.mat.adjoint() * b.mat;
  const Eigen::MatrixXcd dev =
      (comm - Eigen::MatrixXcd::Identity(dim, dim)).topLeftCorner(block, block);
  return dev.bdcSvd().singularValues()(0);
}

double commutator_deviation(int L, int dim, int block) {
  const CoefficientSet2D coeffs = merge_coefficients(
      direct_coefficients_2d(L, kCoeffGridDefault, kFockCoeffRadius),
      dual_coefficients_2d(L, kCoeffGridDefault, kFockCoeffRadius));
  const auto [x, x_inv] = build_X_pair(coeffs, dim);
  return commutator_deviation(build_B(x, x_inv), block);
}

FockGram fock_gram(const FockOperator& x, int L, int n_max) {
  const int side = 2 * n_max + 1;
  const int count = side * side;
  std::vector<FockVector> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    for (int n2 = -n_max; n2 <= n_max; ++n2) {
      states.push_back(lattice_state(x, n1, n2, L));
    }
  }
  FockGram gram;
  gram.n_max = n_max;
  gram.entries.resize(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      gram.entries(i, j) =
          states[static_cast<std::size_t>(i)].amp.dot(
              states[static_cast<std::size_t>(j)].amp);
    }
  }
  return gram;
}

}  // namespace ortholat
