#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle_quadrature.hpp"
#include "ortholat/core1d.hpp"
#include "ortholat/examples1d.hpp"

using namespace ortholat;

namespace {

OverlapSequence1D delta_sequence() {
  OverlapSequence1D a;
  a.half_width = 0;
  a.values = {cplx{1.0, 0.0}};
  return a;
}

OverlapSequence1D constant_density_sequence(double a0) {
  OverlapSequence1D a;
  a.half_width = 0;
  a.values = {cplx{a0, 0.0}};
  return a;
}

double box32_density(double p) { return 1.5 + std::cos(p); }

}  // namespace

TEST_CASE("spectral density of the orthonormal seed is constant 1") {
  const TorusFunction1D alpha = spectral_density(delta_sequence(), 64);
  for (const cplx& s : alpha.samples) {
    CHECK(std::abs(s - 1.0) < 1e-15);
    CHECK(std::abs(s.imag()) < 1e-10);
  }
}

TEST_CASE("box a=3/2 raw density equals 3/2 + cos p on the grid") {
  const OverlapSequence1D a = box_overlaps({1.5});
  CHECK(a.at(0).real() == doctest::Approx(1.5));
  CHECK(a.at(1).real() == doctest::Approx(0.5));
  const TorusFunction1D alpha = spectral_density(a, 256);
  for (int m = 0; m < alpha.grid_size; ++m) {
    CHECK(std::abs(alpha.samples[m] - box32_density(alpha.point(m))) < 1e-13);
  }
}

TEST_CASE("dilation density matches the closed form within the tail bound") {
  for (int j_max : {20, 40, 60}) {
    const OverlapSequence1D a = dilation_overlaps({j_max});
    const TorusFunction1D alpha = spectral_density(a, 512);
    const double bound =
        2.0 * std::exp2(-0.5 * j_max) / (1.0 - std::exp2(-0.5));
    for (int m = 0; m < alpha.grid_size; ++m) {
      CHECK(std::abs(alpha.samples[m].real() -
                     dilation_density_closed(alpha.point(m))) <= bound);
    }
  }
  // at the default truncation the tail is below round-off scale
  const TorusFunction1D alpha = spectral_density(dilation_overlaps({}), 1024);
  for (int m = 0; m < alpha.grid_size; ++m) {
    CHECK(std::abs(alpha.samples[m].real() -
                   dilation_density_closed(alpha.point(m))) < 1e-12);
  }
}

TEST_CASE("spectral density input validation") {
  CHECK_THROWS_AS(spectral_density(box_overlaps({1.5}), 8),
                  std::invalid_argument);  // below 4(2J+1)
  OverlapSequence1D bad;
  bad.half_width = 1;
  bad.values = {cplx{0.5, 0.1}, cplx{1.0, 0.0}, cplx{0.5, 0.0}};
  CHECK_THROWS_AS(spectral_density(bad, 64), std::invalid_argument);
}

TEST_CASE("positivity report for the three reference densities") {
  SUBCASE("3/2 + cos p has minimum 1/2 at pi") {
    const auto rep =
        check_positivity(spectral_density(box_overlaps({1.5}), 4096));
    CHECK(rep.status == PositivityStatus::strictly_positive);
    CHECK(rep.min_value == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.argmin == doctest::Approx(M_PI).epsilon(1e-6));
    CHECK(rep.max_value == doctest::Approx(2.5).epsilon(1e-8));
  }
  SUBCASE("2 + 2 cos p has a zero at pi") {
    const auto rep =
        check_positivity(spectral_density(box_overlaps({2.0}), 4096));
    CHECK(rep.status == PositivityStatus::has_zero);
    CHECK(rep.argmin == doctest::Approx(M_PI).epsilon(1e-6));
  }
  SUBCASE("constant density") {
    const auto rep =
        check_positivity(spectral_density(constant_density_sequence(1.0), 64));
    CHECK(rep.status == PositivityStatus::strictly_positive);
    CHECK(rep.min_value == doctest::Approx(1.0));
    CHECK(rep.max_value == doctest::Approx(1.0));
  }
  SUBCASE("indefinite input is flagged") {
    OverlapSequence1D osc;
    osc.half_width = 1;
    osc.values = {cplx{0.5, 0.0}, cplx{0.0, 0.0}, cplx{0.5, 0.0}};
    const auto rep = check_positivity(spectral_density(osc, 64));
    CHECK(rep.status == PositivityStatus::indefinite);
  }
}

TEST_CASE("direct coefficients: identity and constant densities") {
  const auto id = direct_coefficients(spectral_density(delta_sequence(), 64), 8);
  CHECK(std::abs(id.c_at(0) - 1.0) < 1e-14);
  for (int l = 1; l <= 8; ++l) CHECK(std::abs(id.c_at(l)) < 1e-14);

  // box a < 1: alpha = a, c_l = a^{-1/2} delta_l
  const auto narrow =
      direct_coefficients(spectral_density(box_overlaps({0.5}), 64), 8);
  CHECK(std::abs(narrow.c_at(0) - 1.0 / std::sqrt(0.5)) < 1e-13);
  for (int l = 1; l <= 8; ++l) CHECK(std::abs(narrow.c_at(l)) < 1e-14);
}

TEST_CASE("box a=3/2 coefficients against the quadrature oracle") {
  const TorusFunction1D alpha = spectral_density(box_overlaps({1.5}), 4096);
  const auto cs = direct_coefficients(alpha, 64);
  const auto ds = dual_coefficients(alpha, 64);

  CHECK(cs.sum_sq_c() == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-9));

  for (int l : {0, 1, 2, 3, 5, 8}) {
    const cplx c_ref = oracle::fourier_mode(
        [](double p) { return 1.0 / std::sqrt(box32_density(p)); }, l);
    const cplx d_ref = oracle::fourier_mode(
        [](double p) { return std::sqrt(box32_density(p)); }, l);
    CHECK(std::abs(cs.c_at(l) - c_ref) < 1e-9);
    CHECK(std::abs(ds.d_at(l) - d_ref) < 1e-9);
  }
}

TEST_CASE("constant densities against the quadrature oracle") {
  for (double a0 : {1.0, 0.5}) {
    const auto cs =
        direct_coefficients(spectral_density(constant_density_sequence(a0), 64),
                            8);
    for (int l : {0, 1, 4}) {
      const cplx ref = oracle::fourier_mode(
          [a0](double) { return 1.0 / std::sqrt(a0); }, l);
      CHECK(std::abs(cs.c_at(l) - ref) < 1e-9);
    }
  }
}

TEST_CASE("dual coefficients: trivial cases and Parseval") {
  const auto id = dual_coefficients(spectral_density(delta_sequence(), 64), 8);
  CHECK(std::abs(id.d_at(0) - 1.0) < 1e-14);

  const auto narrow =
      dual_coefficients(spectral_density(box_overlaps({0.5}), 64), 8);
  CHECK(std::abs(narrow.d_at(0) - std::sqrt(0.5)) < 1e-14);

  // raw pipeline: sum |d_l|^2 = ||f_0||^2 = a_0;
  // normalized pipeline: sum |d_l|^2 = 1.
  const OverlapSequence1D raw = box_overlaps({1.5});
  const auto d_raw = dual_coefficients(spectral_density(raw, 4096), 64);
  CHECK(d_raw.sum_sq_d() == doctest::Approx(1.5).epsilon(1e-8));
  const auto d_norm =
      dual_coefficients(spectral_density(raw.normalized(), 4096), 64);
  CHECK(d_norm.sum_sq_d() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("non-positive density is refused with the argmin diagnostic") {
  const TorusFunction1D alpha = spectral_density(box_overlaps({2.0}), 4096);
  CHECK_THROWS_AS(direct_coefficients(alpha, 64), positivity_error);
  try {
    direct_coefficients(alpha, 64);
  } catch (const positivity_error& err) {
    CHECK(err.report().status == PositivityStatus::has_zero);
    CHECK(err.report().argmin == doctest::Approx(M_PI).epsilon(1e-6));
  }
  // dual side tolerates the zero
  CHECK_NOTHROW(dual_coefficients(alpha, 64));
}

TEST_CASE("coefficient half-width precondition") {
  const TorusFunction1D alpha = spectral_density(delta_sequence(), 64);
  CHECK_THROWS_AS(direct_coefficients(alpha, 17), std::invalid_argument);
  CHECK_NOTHROW(direct_coefficients(alpha, 16));
}

TEST_CASE("gram row: identity case is exact") {
  CoefficientSet1D delta_coeffs;
  delta_coeffs.half_width = 0;
  delta_coeffs.c = {cplx{1.0, 0.0}};
  const GramRow row = gram_row(delta_coeffs, delta_sequence(), 3);
  CHECK(row.center() == cplx{1.0, 0.0});
  CHECK(row.max_off_center() == 0.0);
}

TEST_CASE("gram row: both worked pipelines orthonormalize") {
  SUBCASE("box a=3/2") {
    const OverlapSequence1D a = box_overlaps({1.5});
    const auto cs = direct_coefficients(spectral_density(a, 4096), 64);
    const GramRow row = gram_row(cs, a, 8);
    CHECK(std::abs(row.center() - 1.0) < 1e-8);
    CHECK(row.max_off_center() < 1e-8);
  }
  SUBCASE("dyadic dilation") {
    const OverlapSequence1D a = dilation_overlaps({});
    const auto cs = direct_coefficients(spectral_density(a, 4096), 64);
    const GramRow row = gram_row(cs, a, 8);
    CHECK(std::abs(row.center() - 1.0) < 1e-8);
    CHECK(row.max_off_center() < 1e-8);
  }
}

TEST_CASE("sum rule c.d = 1 for matched pipelines") {
  CoefficientSet1D lhs, rhs;
  lhs.half_width = rhs.half_width = 0;
  lhs.c = {cplx{1.0, 0.0}};
  rhs.d = {cplx{1.0, 0.0}};
  CHECK(sum_rule_1d(lhs, rhs) == cplx{1.0, 0.0});

  for (const OverlapSequence1D& a :
       {box_overlaps({1.5}), dilation_overlaps({})}) {
    const TorusFunction1D alpha = spectral_density(a, 4096);
    const auto cs = direct_coefficients(alpha, 64);
    const auto ds = dual_coefficients(alpha, 64);
    CHECK(std::abs(sum_rule_1d(cs, ds) - 1.0) < 1e-8);
  }
}

TEST_CASE("symbol inverse residual") {
  CoefficientSet1D lhs, rhs;
  lhs.half_width = rhs.half_width = 0;
  lhs.c = {cplx{1.0, 0.0}};
  rhs.d = {cplx{1.0, 0.0}};
  CHECK(symbol_inverse_residual(lhs, rhs, 128) == 0.0);

  const TorusFunction1D alpha = spectral_density(box_overlaps({1.5}), 4096);
  const auto cs = direct_coefficients(alpha, 64);
  const auto ds = dual_coefficients(alpha, 64);
  CHECK(symbol_inverse_residual(cs, ds, 4096) < 1e-8);

  // truncating the dilation pipeline hard degrades the residual monotonically
  const TorusFunction1D dil = spectral_density(dilation_overlaps({}), 4096);
  const double coarse = symbol_inverse_residual(direct_coefficients(dil, 2),
                                                dual_coefficients(dil, 2), 512);
  const double fine = symbol_inverse_residual(direct_coefficients(dil, 64),
                                              dual_coefficients(dil, 64), 512);
  CHECK(coarse > fine);
  CHECK(fine < 1e-8);
}

TEST_CASE("decay profile magnitudes and slope") {
  const TorusFunction1D alpha = spectral_density(box_overlaps({1.5}), 4096);
  const auto cs = direct_coefficients(alpha, 64);
  const auto ds = dual_coefficients(alpha, 64);

  const DecayProfile pc = decay_profile(cs, CoefficientKind::direct);
  const double c5 = pc.magnitude[5 + 64];
  CHECK(c5 > 5e-4);
  CHECK(c5 < 2e-3);
  // geometric decay rate arccosh(3/2) ~ 0.962
  REQUIRE(pc.log_slope.has_value());
  CHECK(*pc.log_slope == doctest::Approx(-std::acosh(1.5)).epsilon(0.05));

  const DecayProfile pd = decay_profile(ds, CoefficientKind::dual);
  const double d5 = pd.magnitude[5 + 64];
  CHECK(d5 > 1e-4);
  CHECK(d5 < 4e-4);

  // delta coefficients: all off-center magnitudes vanish, no usable fit
  CoefficientSet1D delta_coeffs;
  delta_coeffs.half_width = 64;
  delta_coeffs.c.assign(129, cplx{0.0, 0.0});
  delta_coeffs.c[64] = 1.0;
  const DecayProfile p0 = decay_profile(delta_coeffs, CoefficientKind::direct);
  for (int l = 1; l <= 64; ++l) CHECK(p0.magnitude[l + 64] == 0.0);
  CHECK_FALSE(p0.log_slope.has_value());

  CHECK_THROWS_AS(decay_profile(direct_coefficients(alpha, 4)),
                  std::invalid_argument);
}

TEST_CASE("divergence probe separates the a=2 box from convergent cases") {
  const std::vector<int> grids = {256, 1024, 4096};

  const auto diverging = divergence_probe(box_overlaps({2.0}), grids);
  CHECK(diverging[0] < diverging[1]);
  CHECK(diverging[1] < diverging[2]);
  CHECK(diverging[2] > 10.0);

  const auto stable = divergence_probe(box_overlaps({1.5}), grids);
  for (double v : stable) {
    CHECK(v == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-6));
  }

  const auto dil = divergence_probe(dilation_overlaps({}), grids);
  for (double v : dil) CHECK(v == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("divergence probe partial sums equal explicit coefficient sums") {
  // the implementation uses the discrete Parseval identity; verify it against
  // an explicit DFT over all modes at a small grid size
  const OverlapSequence1D a = box_overlaps({1.7});
  const int m_count = 64;
  const auto probe = divergence_probe(a, {m_count});

  const TorusFunction1D alpha = spectral_density(a, m_count, true);
  double explicit_sum = 0.0;
  for (int l = -m_count / 2; l < m_count / 2; ++l) {
    cplx coeff{0.0, 0.0};
    for (int m = 0; m < m_count; ++m) {
      coeff += std::polar(1.0, -alpha.point(m) * l) /
               std::sqrt(alpha.samples[m].real());
    }
    explicit_sum += std::norm(coeff / static_cast<double>(m_count));
  }
  CHECK(probe[0] == doctest::Approx(explicit_sum).epsilon(1e-12));
}

TEST_CASE("grid refinement changes coefficients below 1e-10") {
  for (const OverlapSequence1D& a :
       {box_overlaps({1.5}), dilation_overlaps({})}) {
    const auto coarse = direct_coefficients(spectral_density(a, 4096), 64);
    const auto fine = direct_coefficients(spectral_density(a, 8192), 64);
    for (int l = -64; l <= 64; ++l) {
      CHECK(std::abs(coarse.c_at(l) - fine.c_at(l)) < 1e-10);
    }
  }
}

TEST_CASE("property: random positive densities give symmetric orthonormalizing c") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    OverlapSequence1D a;
    a.half_width = 3;
    a.values.assign(7, cplx{0.0, 0.0});
    a.values[3] = 1.0;
    double budget = 0.4;
    for (int j = 1; j <= 3; ++j) {
      const double v = unif(rng) * budget / 3.0;
      a.values[3 + j] = v;
      a.values[3 - j] = v;  // real even, hence Hermitian
    }
    const TorusFunction1D alpha = spectral_density(a, 2048);
    REQUIRE(check_positivity(alpha).status ==
            PositivityStatus::strictly_positive);
    const auto cs = direct_coefficients(alpha, 48);
    const auto ds = dual_coefficients(alpha, 48);

    for (int l = 1; l <= 48; ++l) {
      CHECK(std::abs(cs.c_at(-l) - std::conj(cs.c_at(l))) < 1e-12);
    }
    CHECK(std::abs(sum_rule_1d(cs, ds) - 1.0) < 1e-8);
    CHECK(ds.sum_sq_d() == doctest::Approx(1.0).epsilon(1e-8));
    const GramRow row = gram_row(cs, a, 6);
    CHECK(std::abs(row.center() - 1.0) < 1e-8);
    CHECK(row.max_off_center() < 1e-8);
  }
}

TEST_CASE("overlap sequence JSON round trip") {
  const OverlapSequence1D a = box_overlaps({1.5});
  const auto doc = a.to_json();
  CHECK(doc["J"] == 1);
  const OverlapSequence1D back =
      OverlapSequence1D::from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.half_width == a.half_width);
  for (int j = -1; j <= 1; ++j) CHECK(back.at(j) == a.at(j));

  CHECK_THROWS_AS(OverlapSequence1D::from_json(nlohmann::json::parse(
                      R"({"J": 1, "re": [1.0], "im": [0.0]})")),
                  std::invalid_argument);
}
