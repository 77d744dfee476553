#include "ortholat/zak.hpp"

#include <cstdio>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ortholat {

namespace {

double vacuum_wavefunction(double x) {
  return std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
}

}  // namespace

KqBox KqBox::for_lattice(int L, int grid) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (grid < 2) throw std::invalid_argument("grid must be >= 2");
  KqBox box;
  box.L = L;
  box.a = std::sqrt(kTwoPi * L);
  box.A = box.a;
  box.grid_k = grid;
  box.grid_q = grid;
  return box;
}

int gaussian_tail_terms(const KqBox& box) {
  // need (q + l a)^2 / 2 > 38 at the worst grid q, i.e. |l| a - a > 8.8
  return static_cast<int>(std::ceil(8.8 / box.a)) + 2;
}

ZakSample zak_gaussian(const KqBox& box, int tail) {
  if (tail <= 0) tail = gaussian_tail_terms(box);
  ZakSample out;
  out.box = box;
  out.provenance = "vacuum";
  out.samples.resize(static_cast<std::size_t>(box.grid_k) * box.grid_q);
  const double scale = std::sqrt(box.A / kTwoPi);
  for (int i = 0; i < box.grid_k; ++i) {
    const double k = box.k_at(i);
    for (int j = 0; j < box.grid_q; ++j) {
      const double q = box.q_at(j);
      cplx acc{0.0, 0.0};
      for (int l = -tail; l <= tail; ++l) {
        acc += std::polar(vacuum_wavefunction(q + l * box.a), k * l * box.A);
      }
      out.samples[static_cast<std::size_t>(i) * box.grid_q + j] = scale * acc;
    }
  }
  return out;
}

double zak_resolution_check(const ZakSample& sample) {
  double acc = 0.0;
  for (const cplx& s : sample.samples) acc += std::norm(s);
  return acc * sample.box.cell_weight();
}

ZakSample zak_psi(const CoefficientSet2D& coeffs, const KqBox& box, int tail) {
  if (coeffs.c.empty()) throw std::invalid_argument("zak_psi needs direct coefficients");
  if (coeffs.L != box.L) {
    throw std::invalid_argument("coefficient set and box disagree on L");
  }
  const ZakSample base = zak_gaussian(box, tail);
  ZakSample out;
  out.box = box;
  out.provenance = "psi0";
  out.samples.resize(base.samples.size());
  const int k_max = coeffs.radius;
  for (int i = 0; i < box.grid_k; ++i) {
    const double k = box.k_at(i);
    for (int j = 0; j < box.grid_q; ++j) {
      const double q = box.q_at(j);
      cplx acc{0.0, 0.0};
      for (int k1 = -k_max; k1 <= k_max; ++k1) {
        for (int k2 = -k_max; k2 <= k_max; ++k2) {
          const cplx w = coeffs.c_at(k1, k2);
          if (w == cplx{0.0, 0.0}) continue;
          acc += std::conj(w) *
                 std::polar(1.0, -q * box.a * k1 + k * box.A * k2);
        }
      }
      out.samples[static_cast<std::size_t>(i) * box.grid_q + j] =
          acc * base.samples[static_cast<std::size_t>(i) * box.grid_q + j];
    }
  }
  return out;
}

cplx zak_orthogonality_integral(const ZakSample& sample, int n1, int n2) {
  const KqBox& box = sample.box;
  cplx acc{0.0, 0.0};
  for (int i = 0; i < box.grid_k; ++i) {
    const double k = box.k_at(i);
    for (int j = 0; j < box.grid_q; ++j) {
      const double q = box.q_at(j);
      acc += std::polar(std::norm(sample.at(i, j)),
                        q * box.a * n1 - k * box.A * n2);
    }
  }
  return acc * box.cell_weight();
}

double incompleteness_witness(int L, const KqBox& box, int n_max) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  double worst = 0.0;
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    for (int n2 = -n_max; n2 <= n_max; ++n2) {
      // <s, e_n> with s = e^{i q a / L}, e_n = e^{-i q a n1 + i k A n2}:
      // integrand e^{-i q a (n1 + 1/L) + i k A n2}.
      cplx acc{0.0, 0.0};
      for (int i = 0; i < box.grid_k; ++i) {
        const double k = box.k_at(i);
        for (int j = 0; j < box.grid_q; ++j) {
          const double q = box.q_at(j);
          acc += std::polar(1.0, -q * box.a * (n1 + 1.0 / L) + k * box.A * n2);
        }
      }
      worst = std::max(worst, std::abs(acc) * box.cell_weight());
    }
  }
  return worst;
}

ZakSample box_profile_candidate(const KqBox& box, int j) {
  if (j < 1 || j > box.L) {
    throw std::invalid_argument("profile index j must lie in 1..L");
  }
  ZakSample out;
  out.box = box;
  out.provenance = "profile_j" + std::to_string(j);
  out.samples.assign(static_cast<std::size_t>(box.grid_k) * box.grid_q,
                     cplx{0.0, 0.0});
  const double value = box.A * box.L / (kTwoPi * box.a * j);
  const double q_support = box.a * j / box.L;
  for (int i = 0; i < box.grid_k; ++i) {
    for (int jq = 0; jq < box.grid_q; ++jq) {
      if (box.q_at(jq) < q_support) {
        out.samples[static_cast<std::size_t>(i) * box.grid_q + jq] = value;
      }
    }
  }
  return out;
}

double profile_closed_form_integral(const KqBox& box, int j) {
  if (j < 1 || j > box.L) {
    throw std::invalid_argument("profile index j must lie in 1..L");
  }
  const double value = box.A * box.L / (kTwoPi * box.a * j);
  const double support = (kTwoPi / box.A) * (box.a * j / box.L);
  return value * support;
}

double intensity_distance(const ZakSample& sample, const ZakSample& profile) {
  if (sample.samples.size() != profile.samples.size()) {
    throw std::invalid_argument("intensity_distance needs matching grids");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.samples.size(); ++i) {
    const double diff = std::norm(sample.samples[i]) - profile.samples[i].real();
    acc += diff * diff;
  }
  return std::sqrt(acc * sample.box.cell_weight());
}

nlohmann::ordered_json to_json(const ZakSample& sample) {
  nlohmann::ordered_json doc;
  doc["A"] = sample.box.A;
  doc["a"] = sample.box.a;
  doc["L"] = sample.box.L;
  doc["grid_k"] = sample.box.grid_k;
  doc["grid_q"] = sample.box.grid_q;
  doc["provenance"] = sample.provenance;
  std::vector<double> re, im;
  re.reserve(sample.samples.size());
  im.reserve(sample.samples.size());
  for (const cplx& v : sample.samples) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  doc["re"] = re;
  doc["im"] = im;
  return doc;
}

void write_csv(const ZakSample& sample, std::ostream& out) {
  out << "k,q,re,im\n";
  char line[128];
  for (int i = 0; i < sample.box.grid_k; ++i) {
    for (int j = 0; j < sample.box.grid_q; ++j) {
      const cplx v = sample.at(i, j);
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                    sample.box.k_at(i), sample.box.q_at(j), v.real(), v.imag());
      out << line;
    }
  }
}

}  // namespace ortholat
