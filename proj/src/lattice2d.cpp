#include "ortholat/lattice2d.hpp"

#include <algorithm>
#include <cmath>

namespace ortholat {

namespace {

// e^{ip m} for m = -radius..radius, by iterated multiplication; the negative
// side is the exact conjugate of the positive side.
std::vector<cplx> axis_powers(double p, int radius) {
  std::vector<cplx> u(static_cast<std::size_t>(2 * radius + 1));
  u[static_cast<std::size_t>(radius)] = cplx{1.0, 0.0};
  const cplx w = std::polar(1.0, p);
  for (int m = 1; m <= radius; ++m) {
    u[static_cast<std::size_t>(radius + m)] =
        u[static_cast<std::size_t>(radius + m - 1)] * w;
    u[static_cast<std::size_t>(radius - m)] =
        std::conj(u[static_cast<std::size_t>(radius + m)]);
  }
  return u;
}

// Gaussian lattice weights I_m over the index square, flattened row-major.
std::vector<double> overlap_weights(int L, int radius) {
  const int side = 2 * radius + 1;
  std::vector<double> w(static_cast<std::size_t>(side) * side);
  for (int m1 = -radius; m1 <= radius; ++m1) {
    for (int m2 = -radius; m2 <= radius; ++m2) {
      w[static_cast<std::size_t>(m1 + radius) * side + (m2 + radius)] =
          coherent_overlap(m1, m2, L);
    }
  }
  return w;
}

cplx f_direct_from_powers(const std::vector<double>& weights,
                          const std::vector<cplx>& u1,
                          const std::vector<cplx>& u2, int radius) {
  const int side = 2 * radius + 1;
  cplx acc{0.0, 0.0};
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      acc += weights[static_cast<std::size_t>(i) * side + j] *
             (u1[static_cast<std::size_t>(i)] * u2[static_cast<std::size_t>(j)]);
    }
  }
  return acc;
}

// C(P) = sum_k v_k e^{i P . k} from per-axis power tables.
cplx trig_poly_eval2(const std::vector<cplx>& v, int radius,
                     const std::vector<cplx>& u1, const std::vector<cplx>& u2) {
  const int side = 2 * radius + 1;
  cplx acc{0.0, 0.0};
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      acc += v[static_cast<std::size_t>(i) * side + j] *
             (u1[static_cast<std::size_t>(i)] * u2[static_cast<std::size_t>(j)]);
    }
  }
  return acc;
}

// Checks that F sampled on the grid is usable for the square-root transforms.
void require_positive_grid(const TorusFunction2D& f, int L) {
  for (const cplx& s : f.samples) {
    if (!(s.real() > 0.0)) {
      if (L == 1) throw density_zero_error();
      throw std::domain_error("F_L is not positive on the sampling grid");
    }
  }
}

// exponent is -1/2 for the direct coefficients, +1/2 for the dual ones.
CoefficientSet2D sqrt_transform(int L, int grid_size, int radius, bool offset,
                                double exponent) {
  if (radius < 1 || 2 * radius >= grid_size) {
    throw std::invalid_argument("coefficient radius must satisfy 2K < M");
  }
  const TorusFunction2D f = f_grid(L, grid_size, offset);
  require_positive_grid(f, L);

  std::vector<double> g(f.samples.size());
  std::transform(f.samples.begin(), f.samples.end(), g.begin(),
                 [exponent](const cplx& s) { return std::pow(s.real(), exponent); });

  const int m_count = grid_size;
  const int side = 2 * radius + 1;
  std::vector<cplx> phases(static_cast<std::size_t>(side) * m_count);
  for (int k = -radius; k <= radius; ++k) {
    for (int m = 0; m < m_count; ++m) {
      phases[static_cast<std::size_t>(k + radius) * m_count + m] =
          std::polar(1.0, -f.point(m) * k);
    }
  }

  // Two-pass separable transform: rows first, then columns.
  std::vector<cplx> partial(static_cast<std::size_t>(side) * m_count);
  for (int k1 = -radius; k1 <= radius; ++k1) {
    for (int m2 = 0; m2 < m_count; ++m2) {
      cplx acc{0.0, 0.0};
      for (int m1 = 0; m1 < m_count; ++m1) {
        acc += phases[static_cast<std::size_t>(k1 + radius) * m_count + m1] *
               g[static_cast<std::size_t>(m1) * m_count + m2];
      }
      partial[static_cast<std::size_t>(k1 + radius) * m_count + m2] = acc;
    }
  }
  std::vector<cplx> coeffs(static_cast<std::size_t>(side) * side);
  const double inv_mm = 1.0 / (static_cast<double>(m_count) * m_count);
  for (int k1 = -radius; k1 <= radius; ++k1) {
    for (int k2 = -radius; k2 <= radius; ++k2) {
      cplx acc{0.0, 0.0};
      for (int m2 = 0; m2 < m_count; ++m2) {
        acc += phases[static_cast<std::size_t>(k2 + radius) * m_count + m2] *
               partial[static_cast<std::size_t>(k1 + radius) * m_count + m2];
      }
      coeffs[static_cast<std::size_t>(k1 + radius) * side + (k2 + radius)] =
          acc * inv_mm;
    }
  }

  CoefficientSet2D out;
  out.L = L;
  out.radius = radius;
  if (exponent < 0.0) {
    out.c = std::move(coeffs);
  } else {
    out.dual = std::move(coeffs);
  }
  return out;
}

}  // namespace

LatticeModel2D LatticeModel2D::make(int L, int radius) {
  if (L < 1 || radius < 1) {
    throw std::invalid_argument("lattice model needs L >= 1 and radius >= 1");
  }
  LatticeModel2D model;
  model.L = L;
  model.radius = radius;
  model.cache_ = overlap_weights(L, radius);
  return model;
}

double LatticeModel2D::lattice_constant() const {
  return std::sqrt(kTwoPi * L);
}

double LatticeModel2D::overlap(int n1, int n2) const {
  if (std::abs(n1) > radius || std::abs(n2) > radius) return 0.0;
  if (cache_.empty()) return coherent_overlap(n1, n2, L);
  const int side = 2 * radius + 1;
  return cache_[static_cast<std::size_t>(n1 + radius) * side + (n2 + radius)];
}

double coherent_overlap(int n1, int n2, int L) {
  const double gauss = std::exp(-0.5 * kPi * L *
                                (static_cast<double>(n1) * n1 +
                                 static_cast<double>(n2) * n2));
  const long long parity = static_cast<long long>(L) * n1 * n2;
  return (parity % 2 == 0) ? gauss : -gauss;
}

double f_direct(double p1, double p2, int L, int radius) {
  const std::vector<double> w = overlap_weights(L, radius);
  const cplx val = f_direct_from_powers(w, axis_powers(p1, radius),
                                        axis_powers(p2, radius), radius);
  return val.real();
}

cplx f_theta(double p1, double p2, int L) {
  const double mu1 = 0.5 * kPi * L;
  const double mu2 = 2.0 * kPi * L;
  const cplx even_part = detail::theta3_sum(0.5 * p1, 0.0, mu1) *
                         detail::theta3_sum(p2, 0.0, mu2);
  const cplx odd_prefactor =
      std::exp(-0.5 * kPi * L) * cplx{std::cos(p2), std::sin(p2)};
  const cplx odd_part = odd_prefactor *
                        detail::theta3_sum(0.5 * (p1 + kPi * L), 0.0, mu1) *
                        detail::theta3_sum(p2, kPi * L, mu2);
  return even_part + odd_part;
}

double f_phase_product(double p1, double p2, int L, int radius) {
  const std::vector<double> w = overlap_weights(L, radius);
  const std::vector<cplx> u1 = axis_powers(p1, radius);
  const std::vector<cplx> u2 = axis_powers(p2, radius);
  const int side = 2 * radius + 1;
  const auto weight = [&](int i, int j) {
    return w[static_cast<std::size_t>(i) * side + j];
  };
  // Diagonal terms first, then off-diagonal pairs grouped as t(n,m) + t(m,n):
  // each group is invariant under the P1 <-> P2 exchange at the bit level.
  cplx acc{0.0, 0.0};
  for (int i = 0; i < side; ++i) {
    acc += weight(i, i) * (u1[static_cast<std::size_t>(i)] *
                           u2[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < side; ++i) {
    for (int j = i + 1; j < side; ++j) {
      const cplx t_ij = weight(i, j) * (u1[static_cast<std::size_t>(i)] *
                                        u2[static_cast<std::size_t>(j)]);
      const cplx t_ji = weight(j, i) * (u1[static_cast<std::size_t>(j)] *
                                        u2[static_cast<std::size_t>(i)]);
      acc += t_ij + t_ji;
    }
  }
  return acc.real();
}

TorusFunction2D f_grid(int L, int grid_size, bool offset, int radius) {
  TorusFunction2D out;
  out.grid_size = grid_size;
  out.offset = offset;
  out.samples.resize(static_cast<std::size_t>(grid_size) * grid_size);
  const std::vector<double> w = overlap_weights(L, radius);
  std::vector<std::vector<cplx>> powers(static_cast<std::size_t>(grid_size));
  for (int m = 0; m < grid_size; ++m) {
    powers[static_cast<std::size_t>(m)] = axis_powers(out.point(m), radius);
  }
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      out.samples[static_cast<std::size_t>(i) * grid_size + j] =
          f_direct_from_powers(w, powers[static_cast<std::size_t>(i)],
                               powers[static_cast<std::size_t>(j)], radius);
    }
  }
  return out;
}

double CoefficientSet2D::sum_sq(CoefficientKind kind) const {
  const std::vector<cplx>& v = (kind == CoefficientKind::direct) ? c : dual;
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

double CoefficientSet2D::sum_abs(CoefficientKind kind) const {
  const std::vector<cplx>& v = (kind == CoefficientKind::direct) ? c : dual;
  double s = 0.0;
  for (const cplx& x : v) s += std::abs(x);
  return s;
}

CoefficientSet2D CoefficientSet2D::from_json(const nlohmann::json& doc,
                                             CoefficientKind kind) {
  CoefficientSet2D out;
  out.L = doc.at("L").get<int>();
  out.radius = doc.at("K").get<int>();
  if (out.L < 1 || out.radius < 0) {
    throw std::invalid_argument("coefficient set needs L >= 1 and K >= 0");
  }
  const std::size_t n = static_cast<std::size_t>(out.side()) * out.side();
  const auto& re = doc.at("re");
  const auto& im = doc.at("im");
  if (re.size() != n || im.size() != n) {
    throw std::invalid_argument("re/im arrays must have length (2K+1)^2");
  }
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = cplx(re[i].get<double>(), im[i].get<double>());
  }
  if (kind == CoefficientKind::direct) {
    out.c = std::move(v);
  } else {
    out.dual = std::move(v);
  }
  return out;
}

nlohmann::ordered_json CoefficientSet2D::to_json(CoefficientKind kind) const {
  const std::vector<cplx>& v = (kind == CoefficientKind::direct) ? c : dual;
  nlohmann::ordered_json doc;
  doc["L"] = L;
  doc["K"] = radius;
  std::vector<double> re, im;
  re.reserve(v.size());
  im.reserve(v.size());
  for (const cplx& x : v) {
    re.push_back(x.real());
    im.push_back(x.imag());
  }
  doc["re"] = re;
  doc["im"] = im;
  return doc;
}

CoefficientSet2D direct_coefficients_2d(int L, int grid_size, int radius,
                                        bool l1_override) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (L == 1 && !l1_override) throw density_zero_error();
  const bool offset = (L == 1);
  CoefficientSet2D out = sqrt_transform(L, grid_size, radius, offset, -0.5);
  out.nonconvergent = (L == 1);
  return out;
}

CoefficientSet2D dual_coefficients_2d(int L, int grid_size, int radius) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const bool offset = (L == 1);
  CoefficientSet2D out = sqrt_transform(L, grid_size, radius, offset, 0.5);
  out.nonconvergent = false;
  return out;
}

CoefficientSet2D merge_coefficients(const CoefficientSet2D& direct,
                                    const CoefficientSet2D& dual) {
  if (direct.L != dual.L || direct.radius != dual.radius) {
    throw std::invalid_argument("cannot merge coefficient sets of different shape");
  }
  CoefficientSet2D out = direct;
  out.dual = dual.dual;
  out.nonconvergent = direct.nonconvergent || dual.nonconvergent;
  return out;
}

double Gram2D::max_off_center() const {
  double mx = 0.0;
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    for (int n2 = -n_max; n2 <= n_max; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      mx = std::max(mx, std::abs(at(n1, n2)));
    }
  }
  return mx;
}

Gram2D gram_2d(const CoefficientSet2D& coeffs, int L, int n_max) {
  if (coeffs.c.empty()) {
    throw std::invalid_argument("gram_2d needs direct coefficients");
  }
  const int k_max = coeffs.radius;
  const int d_max = 2 * k_max + n_max;
  const int d_side = 2 * d_max + 1;
  std::vector<double> overlap_table(static_cast<std::size_t>(d_side) * d_side);
  for (int d1 = -d_max; d1 <= d_max; ++d1) {
    for (int d2 = -d_max; d2 <= d_max; ++d2) {
      overlap_table[static_cast<std::size_t>(d1 + d_max) * d_side + (d2 + d_max)] =
          coherent_overlap(d1, d2, L);
    }
  }
  const auto overlap_at = [&](int d1, int d2) {
    return overlap_table[static_cast<std::size_t>(d1 + d_max) * d_side +
                         (d2 + d_max)];
  };

  Gram2D gram;
  gram.n_max = n_max;
  gram.entries.assign(static_cast<std::size_t>(2 * n_max + 1) * (2 * n_max + 1),
                      cplx{});
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    for (int n2 = -n_max; n2 <= n_max; ++n2) {
      cplx entry{0.0, 0.0};
      for (int l1 = -k_max; l1 <= k_max; ++l1) {
        for (int l2 = -k_max; l2 <= k_max; ++l2) {
          const cplx cl = std::conj(coeffs.c_at(l1, l2));
          if (cl == cplx{0.0, 0.0}) continue;
          for (int s1 = -k_max; s1 <= k_max; ++s1) {
            for (int s2 = -k_max; s2 <= k_max; ++s2) {
              entry += cl * coeffs.c_at(s1, s2) *
                       overlap_at(l1 + n1 - s1, l2 + n2 - s2);
            }
          }
        }
      }
      gram.entries[static_cast<std::size_t>(n1 + n_max) * (2 * n_max + 1) +
                   (n2 + n_max)] = entry;
    }
  }
  return gram;
}

double norm_condition(const CoefficientSet2D& coeffs, int L) {
  if (coeffs.c.empty()) {
    throw std::invalid_argument("norm_condition needs direct coefficients");
  }
  const int k_max = coeffs.radius;
  cplx acc{0.0, 0.0};
  for (int k1 = -k_max; k1 <= k_max; ++k1) {
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      const cplx ck = std::conj(coeffs.c_at(k1, k2));
      if (ck == cplx{0.0, 0.0}) continue;
      for (int s1 = -k_max; s1 <= k_max; ++s1) {
        for (int s2 = -k_max; s2 <= k_max; ++s2) {
          acc += ck * coeffs.c_at(s1, s2) *
                 coherent_overlap(k1 - s1, k2 - s2, L);
        }
      }
    }
  }
  return acc.real();
}

cplx sum_rule_2d(const CoefficientSet2D& c, const CoefficientSet2D& dual) {
  if (c.c.empty() || dual.dual.empty()) {
    throw std::invalid_argument("sum_rule_2d needs direct and dual parts");
  }
  if (c.radius != dual.radius) {
    throw std::invalid_argument("sum_rule_2d needs matching radii");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < c.c.size(); ++i) {
    acc += std::conj(dual.dual[i]) * c.c[i];
  }
  return acc;
}

CoefficientSet2D perturbative_coeffs(int L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const double eps = std::exp(-0.5 * kPi * L);
  CoefficientSet2D out;
  out.L = L;
  out.radius = 1;
  out.c.assign(9, cplx{});
  out.dual.assign(9, cplx{});
  const auto put = [&](std::vector<cplx>& v, int k1, int k2, double value) {
    v[static_cast<std::size_t>(k1 + 1) * 3 + (k2 + 1)] = value;
  };
  put(out.c, 0, 0, 1.0);
  put(out.dual, 0, 0, 1.0);
  for (const auto& [g1, g2] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    put(out.c, g1, g2, -0.5 * eps);
    put(out.dual, g1, g2, 0.5 * eps);
  }
  out.nonconvergent = (L == 1);
  return out;
}

PerturbativeDiagnostics perturbative_diagnostics(int L) {
  const CoefficientSet2D pert = perturbative_coeffs(L);
  PerturbativeDiagnostics diag;
  diag.L = L;
  diag.norm_sq = norm_condition(pert, L);

  // <Psi_0, Psi_n> at n = (1,0), kept to first order in the Gamma
  // coefficients, the consistent order of the expansion:
  //   I_n + sum_{g in Gamma} c_g (I_{g+n} + I_{g-n}).
  const int n1 = 1, n2 = 0;
  double overlap = coherent_overlap(n1, n2, L);
  for (const auto& [g1, g2] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    const double cg = pert.c_at(g1, g2).real();
    overlap += cg * (coherent_overlap(g1 + n1, g2 + n2, L) +
                     coherent_overlap(g1 - n1, g2 - n2, L));
  }
  diag.neighbor_overlap = std::abs(overlap);

  diag.inverse_residual = xl_symbol_residual(pert, pert);
  diag.conclusive = (L >= 2);
  return diag;
}

double xl_symbol_residual(const CoefficientSet2D& c,
                          const CoefficientSet2D& dual, int grid_size) {
  if (c.c.empty() || dual.dual.empty()) {
    throw std::invalid_argument("symbol residual needs direct and dual parts");
  }
  if (c.radius != dual.radius) {
    throw std::invalid_argument("symbol residual needs matching radii");
  }
  const int radius = c.radius;
  std::vector<std::vector<cplx>> powers(static_cast<std::size_t>(grid_size));
  for (int m = 0; m < grid_size; ++m) {
    powers[static_cast<std::size_t>(m)] =
        axis_powers(kTwoPi * m / grid_size, radius);
  }
  double sup = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      const cplx prod =
          trig_poly_eval2(c.c, radius, powers[static_cast<std::size_t>(i)],
                          powers[static_cast<std::size_t>(j)]) *
          trig_poly_eval2(dual.dual, radius, powers[static_cast<std::size_t>(i)],
                          powers[static_cast<std::size_t>(j)]);
      sup = std::max(sup, std::abs(prod - 1.0));
    }
  }
  return sup;
}

std::vector<BreakdownRow> l1_breakdown_report(const std::vector<int>& grid_sizes,
                                              int L) {
  std::vector<BreakdownRow> rows;
  rows.reserve(grid_sizes.size());
  for (int m_count : grid_sizes) {
    const TorusFunction2D f = f_grid(L, m_count, /*offset=*/true);
    BreakdownRow row;
    row.grid_size = m_count;
    row.f_min = f.samples[0].real();
    std::vector<double> g(f.samples.size());
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      const double v = f.samples[i].real();
      row.f_min = std::min(row.f_min, v);
      g[i] = 1.0 / std::sqrt(v);
    }

    // All M^2 grid modes, k in [-M/2, M/2) per axis, via two separable passes.
    const int k_lo = -m_count / 2;
    std::vector<cplx> phases(static_cast<std::size_t>(m_count) * m_count);
    for (int ki = 0; ki < m_count; ++ki) {
      for (int m = 0; m < m_count; ++m) {
        phases[static_cast<std::size_t>(ki) * m_count + m] =
            std::polar(1.0, -f.point(m) * (k_lo + ki));
      }
    }
    std::vector<cplx> partial(static_cast<std::size_t>(m_count) * m_count);
    for (int ki = 0; ki < m_count; ++ki) {
      for (int m2 = 0; m2 < m_count; ++m2) {
        cplx acc{0.0, 0.0};
        for (int m1 = 0; m1 < m_count; ++m1) {
          acc += phases[static_cast<std::size_t>(ki) * m_count + m1] *
                 g[static_cast<std::size_t>(m1) * m_count + m2];
        }
        partial[static_cast<std::size_t>(ki) * m_count + m2] = acc;
      }
    }
    const double inv_mm = 1.0 / (static_cast<double>(m_count) * m_count);
    double sum_abs = 0.0, sum_sq = 0.0;
    for (int ki = 0; ki < m_count; ++ki) {
      for (int kj = 0; kj < m_count; ++kj) {
        cplx acc{0.0, 0.0};
        for (int m2 = 0; m2 < m_count; ++m2) {
          acc += phases[static_cast<std::size_t>(kj) * m_count + m2] *
                 partial[static_cast<std::size_t>(ki) * m_count + m2];
        }
        const cplx coeff = acc * inv_mm;
        sum_abs += std::abs(coeff);
        sum_sq += std::norm(coeff);
      }
    }
    row.sum_abs = sum_abs;
    row.sum_sq = sum_sq;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ortholat
