#include "ortholat/core1d.hpp"

#include <algorithm>
#include <cmath>

namespace ortholat {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kRelativeZeroTol = 1e-9;  // relative to max_value

std::vector<double> real_parts_checked(const TorusFunction1D& f) {
  double max_re = 0.0, max_im = 0.0;
  for (const cplx& s : f.samples) {
    max_re = std::max(max_re, std::abs(s.real()));
    max_im = std::max(max_im, std::abs(s.imag()));
  }
  if (max_im > 1e-8 * (1.0 + max_re)) {
    throw std::invalid_argument(
        "density samples have non-negligible imaginary part (max |Im| = " +
        std::to_string(max_im) + ")");
  }
  std::vector<double> re(f.samples.size());
  std::transform(f.samples.begin(), f.samples.end(), re.begin(),
                 [](const cplx& s) { return s.real(); });
  return re;
}

// (1/M) sum_m g_m e^{-i p_m l} for l = -K..K, pairwise-summed per coefficient.
std::vector<cplx> fourier_coefficients(const std::vector<double>& g,
                                       const TorusFunction1D& grid,
                                       int half_width) {
  const int m_count = grid.grid_size;
  std::vector<cplx> out(2 * half_width + 1);
  std::vector<cplx> terms(static_cast<std::size_t>(m_count));
  for (int l = -half_width; l <= half_width; ++l) {
    for (int m = 0; m < m_count; ++m) {
      terms[static_cast<std::size_t>(m)] =
          g[static_cast<std::size_t>(m)] * std::polar(1.0, -grid.point(m) * l);
    }
    out[static_cast<std::size_t>(l + half_width)] =
        pairwise_sum(terms) / static_cast<double>(m_count);
  }
  return out;
}

double shell_tail_estimate(const std::vector<cplx>& coeffs) {
  const double lo = std::norm(coeffs.front());
  const double hi = std::norm(coeffs.back());
  return lo + hi;
}

// Pointwise evaluation of alpha on the grid.  The aliasing floor of
// spectral_density is a coefficient-extraction concern; pointwise sums of the
// finitely supported sequence are exact at any grid size.
TorusFunction1D sample_density(const OverlapSequence1D& a, int grid_size,
                               bool offset) {
  if (a.values.size() != static_cast<std::size_t>(2 * a.half_width + 1)) {
    throw std::invalid_argument("overlap value array has wrong length");
  }
  if (a.hermitian_defect() > kHermitianTol) {
    throw std::invalid_argument("overlap sequence is not Hermitian");
  }
  TorusFunction1D out;
  out.grid_size = grid_size;
  out.offset = offset;
  out.samples.resize(static_cast<std::size_t>(grid_size));
  std::vector<cplx> terms(a.values.size());
  for (int m = 0; m < grid_size; ++m) {
    const double p = out.point(m);
    for (int j = -a.half_width; j <= a.half_width; ++j) {
      terms[static_cast<std::size_t>(j + a.half_width)] =
          a.at(j) * std::polar(1.0, p * j);
    }
    out.samples[static_cast<std::size_t>(m)] = pairwise_sum(terms);
  }
  return out;
}

}  // namespace

double OverlapSequence1D::hermitian_defect() const {
  double defect = 0.0;
  for (int j = 0; j <= half_width; ++j) {
    defect = std::max(defect, std::abs(at(-j) - std::conj(at(j))));
  }
  return defect;
}

bool OverlapSequence1D::is_normalized(double tol) const {
  return std::abs(at(0) - 1.0) <= tol;
}

OverlapSequence1D OverlapSequence1D::normalized() const {
  const double a0 = at(0).real();
  if (a0 <= 0.0 || std::abs(at(0).imag()) > kHermitianTol) {
    throw std::invalid_argument("cannot normalize: a_0 is not real positive");
  }
  OverlapSequence1D out = *this;
  for (cplx& v : out.values) v /= a0;
  return out;
}

OverlapSequence1D OverlapSequence1D::from_json(const nlohmann::json& doc) {
  OverlapSequence1D out;
  out.half_width = doc.at("J").get<int>();
  if (out.half_width < 0) throw std::invalid_argument("J must be >= 0");
  const auto& re = doc.at("re");
  const auto& im = doc.at("im");
  const std::size_t n = static_cast<std::size_t>(2 * out.half_width + 1);
  if (re.size() != n || im.size() != n) {
    throw std::invalid_argument("re/im arrays must have length 2J+1");
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = cplx(re[i].get<double>(), im[i].get<double>());
  }
  return out;
}

nlohmann::ordered_json OverlapSequence1D::to_json() const {
  nlohmann::ordered_json doc;
  doc["J"] = half_width;
  std::vector<double> re, im;
  re.reserve(values.size());
  im.reserve(values.size());
  for (const cplx& v : values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  doc["re"] = re;
  doc["im"] = im;
  return doc;
}

std::string to_string(PositivityStatus status) {
  switch (status) {
    case PositivityStatus::strictly_positive: return "strictly_positive";
    case PositivityStatus::has_zero: return "has_zero";
    case PositivityStatus::indefinite: return "indefinite";
  }
  return "unknown";
}

nlohmann::ordered_json PositivityReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["min_value"] = min_value;
  doc["argmin"] = argmin;
  doc["max_value"] = max_value;
  doc["status"] = to_string(status);
  return doc;
}

positivity_error::positivity_error(const PositivityReport& report)
    : std::domain_error("spectral density is not strictly positive: " +
                        to_string(report.status) + " with min " +
                        std::to_string(report.min_value) + " near p = " +
                        std::to_string(report.argmin)),
      report_(report) {}

double CoefficientSet1D::sum_sq_c() const {
  double s = 0.0;
  for (const cplx& v : c) s += std::norm(v);
  return s;
}

double CoefficientSet1D::sum_sq_d() const {
  double s = 0.0;
  for (const cplx& v : d) s += std::norm(v);
  return s;
}

double GramRow::max_off_center() const {
  double mx = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (n != 0) mx = std::max(mx, std::abs(at(n)));
  }
  return mx;
}

TorusFunction1D spectral_density(const OverlapSequence1D& a, int grid_size,
                                 bool offset) {
  const int min_grid = 4 * (2 * a.half_width + 1);
  if (grid_size < min_grid) {
    throw std::invalid_argument("grid size " + std::to_string(grid_size) +
                                " below aliasing floor 4(2J+1) = " +
                                std::to_string(min_grid));
  }
  return sample_density(a, grid_size, offset);
}

PositivityReport check_positivity(const TorusFunction1D& alpha) {
  const std::vector<double> re = real_parts_checked(alpha);
  const int m_count = alpha.grid_size;

  int arg = 0;
  PositivityReport rep;
  rep.min_value = re[0];
  rep.max_value = re[0];
  for (int m = 1; m < m_count; ++m) {
    const double v = re[static_cast<std::size_t>(m)];
    if (v < rep.min_value) {
      rep.min_value = v;
      arg = m;
    }
    rep.max_value = std::max(rep.max_value, v);
  }
  rep.argmin = alpha.point(arg);

  // One step of three-point parabolic refinement with periodic neighbors.
  const double f1 = re[static_cast<std::size_t>((arg - 1 + m_count) % m_count)];
  const double f2 = re[static_cast<std::size_t>(arg)];
  const double f3 = re[static_cast<std::size_t>((arg + 1) % m_count)];
  const double curvature = f1 - 2.0 * f2 + f3;
  if (curvature > 0.0) {
    const double h = kTwoPi / m_count;
    double shift = 0.5 * h * (f1 - f3) / curvature;
    shift = std::clamp(shift, -h, h);
    rep.argmin = std::fmod(rep.argmin + shift + kTwoPi, kTwoPi);
    const double vertex = f2 - (f3 - f1) * (f3 - f1) / (8.0 * curvature);
    rep.min_value = std::min(rep.min_value, vertex);
  }

  const double tol = kRelativeZeroTol * std::max(rep.max_value, 0.0);
  if (rep.min_value > tol) {
    rep.status = PositivityStatus::strictly_positive;
  } else if (rep.min_value < -tol) {
    rep.status = PositivityStatus::indefinite;
  } else {
    rep.status = PositivityStatus::has_zero;
  }
  return rep;
}

CoefficientSet1D direct_coefficients(const TorusFunction1D& alpha,
                                     int half_width) {
  if (half_width < 0 || 4 * half_width > alpha.grid_size) {
    throw std::invalid_argument("coefficient half-width must satisfy K <= M/4");
  }
  const PositivityReport rep = check_positivity(alpha);
  if (rep.status != PositivityStatus::strictly_positive) {
    throw positivity_error(rep);
  }
  std::vector<double> g(alpha.samples.size());
  std::transform(alpha.samples.begin(), alpha.samples.end(), g.begin(),
                 [](const cplx& s) { return 1.0 / std::sqrt(s.real()); });
  CoefficientSet1D out;
  out.half_width = half_width;
  out.c = fourier_coefficients(g, alpha, half_width);
  out.c_tail_estimate = shell_tail_estimate(out.c);
  return out;
}

CoefficientSet1D dual_coefficients(const TorusFunction1D& alpha,
                                   int half_width) {
  if (half_width < 0 || 4 * half_width > alpha.grid_size) {
    throw std::invalid_argument("coefficient half-width must satisfy K <= M/4");
  }
  const PositivityReport rep = check_positivity(alpha);
  if (rep.status == PositivityStatus::indefinite) {
    throw positivity_error(rep);
  }
  std::vector<double> g(alpha.samples.size());
  std::transform(alpha.samples.begin(), alpha.samples.end(), g.begin(),
                 [](const cplx& s) { return std::sqrt(std::max(s.real(), 0.0)); });
  CoefficientSet1D out;
  out.half_width = half_width;
  out.d = fourier_coefficients(g, alpha, half_width);
  out.d_tail_estimate = shell_tail_estimate(out.d);
  return out;
}

GramRow gram_row(const CoefficientSet1D& coeffs, const OverlapSequence1D& a,
                 int n_max) {
  if (coeffs.c.empty()) {
    throw std::invalid_argument("gram_row needs direct coefficients");
  }
  const int k_max = coeffs.half_width;
  GramRow row;
  row.n_max = n_max;
  row.entries.assign(static_cast<std::size_t>(2 * n_max + 1), cplx{});
  for (int n = -n_max; n <= n_max; ++n) {
    cplx entry{0.0, 0.0};
    for (int k = -k_max; k <= k_max; ++k) {
      const cplx ck = std::conj(coeffs.c_at(k));
      for (int l = -k_max; l <= k_max; ++l) {
        const int j = k + n - l;
        if (j < -a.half_width || j > a.half_width) {
          row.truncated_overlaps = true;
          continue;
        }
        entry += ck * coeffs.c_at(l) * a.at(j);
      }
    }
    row.entries[static_cast<std::size_t>(n + n_max)] = entry;
  }
  return row;
}

cplx sum_rule_1d(const CoefficientSet1D& c, const CoefficientSet1D& d) {
  if (c.c.empty() || d.d.empty()) {
    throw std::invalid_argument("sum_rule_1d needs c and d coefficients");
  }
  if (c.half_width != d.half_width) {
    throw std::invalid_argument("sum_rule_1d needs matching half-widths");
  }
  cplx s{0.0, 0.0};
  for (int l = -c.half_width; l <= c.half_width; ++l) {
    s += std::conj(c.c_at(l)) * d.d_at(l);
  }
  return s;
}

double symbol_inverse_residual(const CoefficientSet1D& c,
                               const CoefficientSet1D& d, int grid_size) {
  if (c.c.empty() || d.d.empty()) {
    throw std::invalid_argument("symbol residual needs c and d coefficients");
  }
  double sup = 0.0;
  for (int m = 0; m < grid_size; ++m) {
    const double p = kTwoPi * m / grid_size;
    const cplx prod = trig_poly_eval(c.c, p) * trig_poly_eval(d.d, p);
    sup = std::max(sup, std::abs(prod - 1.0));
  }
  return sup;
}

DecayProfile decay_profile(const CoefficientSet1D& coeffs,
                           CoefficientKind kind) {
  const std::vector<cplx>& v =
      (kind == CoefficientKind::direct) ? coeffs.c : coeffs.d;
  if (v.empty()) throw std::invalid_argument("decay_profile: empty coefficients");
  const int k_max = coeffs.half_width;
  if (k_max < 8) throw std::invalid_argument("decay_profile requires K >= 8");

  DecayProfile out;
  for (int l = -k_max; l <= k_max; ++l) {
    out.index.push_back(l);
    out.magnitude.push_back(std::abs(v[static_cast<std::size_t>(l + k_max)]));
  }

  // Least-squares fit of log|c_l| vs l over the outer half of the usable
  // range.  Usable means above the double-precision quadrature floor of
  // 1e-14 relative to the largest magnitude; beyond it the computed values
  // are round-off plateau, not decay.
  double peak = 0.0;
  for (double m : out.magnitude) peak = std::max(peak, m);
  const double floor_mag = 1e-14 * peak;
  int usable_max = -1;
  for (int l = 0; l <= k_max; ++l) {
    if (out.magnitude[static_cast<std::size_t>(l + k_max)] > floor_mag) {
      usable_max = l;
    }
  }
  if (usable_max >= 1) {
    const int l_start = (usable_max + 1) / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int l = l_start; l <= usable_max; ++l) {
      const double mag = out.magnitude[static_cast<std::size_t>(l + k_max)];
      if (mag <= floor_mag) continue;
      const double y = std::log(mag);
      sx += l; sy += y; sxx += static_cast<double>(l) * l; sxy += l * y;
      ++count;
    }
    if (count >= 2) {
      const double denom = count * sxx - sx * sx;
      if (denom > 0.0) out.log_slope = (count * sxy - sx * sy) / denom;
    }
  }
  return out;
}

std::vector<double> divergence_probe(const OverlapSequence1D& a,
                                     const std::vector<int>& grid_sizes) {
  std::vector<double> sums;
  sums.reserve(grid_sizes.size());
  for (int m_count : grid_sizes) {
    const TorusFunction1D alpha = sample_density(a, m_count, /*offset=*/true);
    // Discrete Parseval: sum over all M modes of |c_l|^2 = (1/M) sum 1/alpha.
    std::vector<double> terms(alpha.samples.size());
    std::transform(alpha.samples.begin(), alpha.samples.end(), terms.begin(),
                   [](const cplx& s) { return 1.0 / s.real(); });
    sums.push_back(pairwise_sum(terms) / m_count);
  }
  return sums;
}

}  // namespace ortholat
