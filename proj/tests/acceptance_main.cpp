// Acceptance suite: one criterion per numbered block, each printing a single
// PASS/FAIL line.  Every tolerance is pinned here, in code.  The process exit
// status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ortholat/core1d.hpp"
#include "ortholat/examples1d.hpp"
#include "ortholat/fock.hpp"
#include "ortholat/lattice2d.hpp"
#include "ortholat/theta.hpp"
#include "ortholat/zak.hpp"

using namespace ortholat;

namespace {

struct Criterion {
  std::vector<std::string> violations;

  void require(bool ok, const std::string& label, double value) {
    if (!ok) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s (got %.6e)", label.c_str(), value);
      violations.emplace_back(buf);
    }
  }
  void require_near(double value, double target, double tol,
                    const std::string& label) {
    require(std::abs(value - target) <= tol, label, value);
  }
  void require_le(double value, double bound, const std::string& label) {
    require(value <= bound, label, value);
  }
};

int g_failures = 0;

void run_criterion(int number, const std::string& title,
                   const std::function<void(Criterion&)>& body) {
  Criterion crit;
  try {
    body(crit);
  } catch (const std::exception& e) {
    crit.violations.push_back(std::string("exception: ") + e.what());
  }
  if (crit.violations.empty()) {
    std::printf("PASS %2d  %s\n", number, title.c_str());
  } else {
    ++g_failures;
    std::printf("FAIL %2d  %s\n", number, title.c_str());
    for (const std::string& v : crit.violations) {
      std::printf("         - %s\n", v.c_str());
    }
  }
  std::fflush(stdout);
}

}  // namespace

int main() {
  // ---- 1: box a = 3/2 coefficient norms, decay magnitudes, sum rule ------
  run_criterion(1, "box a=3/2: sum|c|^2 = 2/sqrt(5), |c_5|, |d_5|, sum rule",
                [](Criterion& c) {
    const OverlapSequence1D a = box_overlaps({1.5});
    const TorusFunction1D alpha = spectral_density(a, 4096);
    const CoefficientSet1D cs = direct_coefficients(alpha, 64);
    const CoefficientSet1D ds = dual_coefficients(alpha, 64);
    c.require_near(cs.sum_sq_c(), 2.0 / std::sqrt(5.0), 1e-6,
                   "sum|c|^2 = 0.8944272 +- 1e-6");
    const double c5 = std::abs(cs.c_at(5));
    c.require(c5 >= 5e-4 && c5 <= 2e-3, "|c_5| in [5e-4, 2e-3]", c5);
    const double d5 = std::abs(ds.d_at(5));
    c.require(d5 >= 1e-4 && d5 <= 4e-4, "|d_5| in [1e-4, 4e-4]", d5);
    c.require_near(std::abs(sum_rule_1d(cs, ds)), 1.0, 1e-8,
                   "sum conj(c) d = 1 +- 1e-8");
  });

  // ---- 2: box a = 2 divergence ------------------------------------------
  run_criterion(2, "box a=2: growing partial sums, zero of the density at pi",
                [](Criterion& c) {
    const OverlapSequence1D a = box_overlaps({2.0});
    const std::vector<double> sums = divergence_probe(a, {256, 1024, 4096});
    c.require(sums[0] < sums[1] && sums[1] < sums[2],
              "partial sums strictly increase", sums[2] - sums[0]);
    c.require(sums[2] > 10.0, "last partial sum exceeds 10", sums[2]);
    const PositivityReport rep =
        check_positivity(spectral_density(a, 4096));
    c.require(rep.status == PositivityStatus::has_zero, "status = has_zero",
              rep.min_value);
    c.require_near(rep.argmin, kPi, 1e-6, "argmin at p = pi");
  });

  // ---- 3: dyadic dilation closed-form values ----------------------------
  run_criterion(3, "dyadic dilation: alpha(pi), alpha(0), sum|c|^2 = 3",
                [](Criterion& c) {
    const OverlapSequence1D a = dilation_overlaps({});
    const TorusFunction1D alpha = spectral_density(a, 4096);
    c.require_near(alpha.samples[2048].real(), 0.17157, 5e-5,
                   "alpha(pi) = 0.17157 +- 5e-5");
    c.require_near(alpha.samples[0].real(), 5.82843, 5e-5,
                   "alpha(0) = 5.82843 +- 5e-5");
    const CoefficientSet1D cs = direct_coefficients(alpha, 64);
    c.require_near(cs.sum_sq_c(), 3.0, 1e-6, "sum|c|^2 = 3 +- 1e-6");
  });

  // ---- 4: 1-D Gram rows for both strictly positive examples -------------
  run_criterion(4, "1-D Gram: |<phi_n, phi_0> - delta_n0| <= 1e-8, |n| <= 8",
                [](Criterion& c) {
    for (const auto& [name, a] :
         {std::pair<std::string, OverlapSequence1D>{"box", box_overlaps({1.5})},
          {"dyadic", dilation_overlaps({})}}) {
      const CoefficientSet1D cs =
          direct_coefficients(spectral_density(a, 4096), 64);
      const GramRow row = gram_row(cs, a, 8);
      c.require_le(std::abs(row.center() - 1.0), 1e-8, name + " center entry");
      c.require_le(row.max_off_center(), 1e-8, name + " off-center entries");
    }
  });

  // ---- 5: theta bound table and grid certification -----------------------
  run_criterion(5, "F_L bounds: theta values 1.01497/0.180341/0.036256, sup",
                [](Criterion& c) {
    const double table[] = {1.01497, 0.180341, 0.036256};
    for (int L : {1, 2, 3}) {
      const double bound =
          std::norm(theta3(ThetaArg::make({0.0, 0.0},
                                          std::exp(-0.5 * kPi * L)))) - 1.0;
      c.require_near(bound, table[L - 1], 1e-5,
                     "theta bound L=" + std::to_string(L));
      const TorusFunction2D f = f_grid(L, 512);
      double sup = 0.0;
      for (const cplx& s : f.samples) {
        sup = std::max(sup, std::abs(s.real() - 1.0));
      }
      c.require_le(sup, bound * (1 + 1e-12),
                   "sup |F_L - 1| within bound, L=" + std::to_string(L));
    }
  });

  // ---- 6: three-route agreement on the full grid -------------------------
  run_criterion(6, "three-route F agreement <= 1e-10 on 512^2, L = 1,2,3",
                [](Criterion& c) {
    for (int L : {1, 2, 3}) {
      const TorusFunction2D f = f_grid(L, 512);
      double worst_theta = 0.0, worst_phase = 0.0;
      for (int i = 0; i < 512; ++i) {
        for (int j = 0; j < 512; ++j) {
          const double p1 = f.point(i), p2 = f.point(j);
          const double direct = f.at(i, j).real();
          worst_theta =
              std::max(worst_theta, std::abs(f_theta(p1, p2, L) - direct));
          worst_phase = std::max(worst_phase,
                                 std::abs(f_phase_product(p1, p2, L) - direct));
        }
      }
      c.require_le(worst_theta, 1e-10,
                   "theta route, L=" + std::to_string(L));
      c.require_le(worst_phase, 1e-10,
                   "phase-product route, L=" + std::to_string(L));
    }
  });

  // ---- 7: the L = 1 zero and the refusal --------------------------------
  run_criterion(7, "F_1(pi,pi) = 0 +- 1e-10; L = 1 refused without override",
                [](Criterion& c) {
    c.require_le(std::abs(f_direct(kPi, kPi, 1)), 1e-10, "F_1(pi,pi)");
    bool refused = false;
    try {
      direct_coefficients_2d(1);
    } catch (const density_zero_error&) {
      refused = true;
    }
    c.require(refused, "direct_coefficients_2d(1) refused", refused ? 1 : 0);
  });

  // ---- 8: exact 2-D construction at L = 2 --------------------------------
  run_criterion(8, "exact L=2 (K=6, M=64): Gram, norm, sum rule, Parseval",
                [](Criterion& c) {
    const CoefficientSet2D coeffs = merge_coefficients(
        direct_coefficients_2d(2, 64, 6), dual_coefficients_2d(2, 64, 6));
    const Gram2D gram = gram_2d(coeffs, 2, 3);
    c.require_le(gram.max_off_center(), 1e-8, "max off-center Gram entry");
    c.require_near(norm_condition(coeffs, 2), 1.0, 1e-8, "norm^2 = 1 +- 1e-8");
    c.require_near(std::abs(sum_rule_2d(coeffs, coeffs)), 1.0, 1e-8,
                   "sum rule = 1 +- 1e-8");
    c.require_near(coeffs.sum_sq(CoefficientKind::dual), 1.0, 1e-8,
                   "Parseval sum|dual|^2 = 1 +- 1e-8");
  });

  // ---- 9: perturbative diagnostics table ---------------------------------
  run_criterion(9, "perturbative table: norms, neighbor overlaps, residuals",
                [](Criterion& c) {
    const PerturbativeDiagnostics d2 = perturbative_diagnostics(2);
    const PerturbativeDiagnostics d3 = perturbative_diagnostics(3);
    const PerturbativeDiagnostics d4 = perturbative_diagnostics(4);
    c.require_near(d2.norm_sq, 0.99440, 5e-5, "norm^2 L=2");
    c.require_near(d3.norm_sq, 0.99976, 5e-5, "norm^2 L=3");
    c.require_near(d4.norm_sq, 0.99999, 5e-5, "norm^2 L=4");
    c.require_near(d2.neighbor_overlap, 0.00016, 5e-5, "neighbor overlap L=2");
    c.require_le(d3.neighbor_overlap, 2e-6, "neighbor overlap L=3");
    for (const PerturbativeDiagnostics& d : {d2, d3}) {
      c.require_le(d.inverse_residual,
                   4.0 * std::exp(-kPi * d.L) * (1 + 1e-9),
                   "residual within 4 e^{-pi L}, L=" + std::to_string(d.L));
    }
    c.require_near(d2.inverse_residual, 0.00747, 5e-5, "residual L=2");
    c.require_near(d3.inverse_residual, 0.00032, 5e-5, "residual L=3");
  });

  // ---- 10: Fock-space verification at L = 2, N = 140 ---------------------
  run_criterion(10, "Fock L=2 N=140: eigenrelation, uncertainty, Gram, "
                    "stability", [](Criterion& c) {
    const int dim = 140;
    const CoefficientSet2D coeffs = merge_coefficients(
        direct_coefficients_2d(2, 64, kFockCoeffRadius),
        dual_coefficients_2d(2, 64, kFockCoeffRadius));
    const auto [x, x_inv] = build_X_pair(coeffs, dim);
    const FockOperator b = build_B(x, x_inv);

    double residual_max = 0.0;
    for (int n1 = -1; n1 <= 1; ++n1) {
      for (int n2 = -1; n2 <= 1; ++n2) {
        const FockVector psi = lattice_state(x, n1, n2, 2);
        const cplx z = lattice_point(n1, n2, 2);
        residual_max = std::max(
            residual_max, (b.mat * psi.amp - z * psi.amp).norm() / psi.norm());
      }
    }
    c.require_le(residual_max, 1e-5, "||B Psi_n - z_n Psi_n|| <= 1e-5");

    const UncertaintyReport unc = uncertainty_report(x, x_inv, 0, 0, 2);
    c.require_near(unc.product, std::abs(unc.half_commutator_expectation),
                   1e-5, "dQ dP = 1/2 |<[B, B^dag]>| +- 1e-5");

    const FockGram fg = fock_gram(x, 2, 1);
    const Gram2D analytic = gram_2d(coeffs, 2, 2);
    double gram_err = 0.0;
    for (int n1 = -1; n1 <= 1; ++n1)
      for (int n2 = -1; n2 <= 1; ++n2)
        for (int m1 = -1; m1 <= 1; ++m1)
          for (int m2 = -1; m2 <= 1; ++m2)
            gram_err = std::max(gram_err,
                                std::abs(fg.at(n1, n2, m1, m2) -
                                         analytic.at(n1 - m1, n2 - m2)));
    c.require_le(gram_err, 1e-6, "Fock Gram vs analytic Gram <= 1e-6");

    // stability gate on the state-level quantities under N -> N + 40
    const auto [x_hi, x_inv_hi] = build_X_pair(coeffs, dim + 40);
    const UncertaintyReport unc_hi = uncertainty_report(x_hi, x_inv_hi, 0, 0, 2);
    c.require_le(std::abs(unc.dq - unc_hi.dq), 1e-8, "stability of dQ");
    c.require_le(std::abs(unc.dp - unc_hi.dp), 1e-8, "stability of dP");
    c.require_le(std::abs(unc.product - unc_hi.product), 1e-8,
                 "stability of dQ dP");
    c.require_le(std::abs(unc.half_commutator_expectation -
                          unc_hi.half_commutator_expectation), 1e-8,
                 "stability of <[B, B^dag]>");
    const FockGram fg_hi = fock_gram(x_hi, 2, 1);
    c.require_le((fg.entries - fg_hi.entries).cwiseAbs().maxCoeff(), 1e-8,
                 "stability of Gram entries");
    double norm_delta = 0.0;
    for (int n1 = -1; n1 <= 1; ++n1) {
      for (int n2 = -1; n2 <= 1; ++n2) {
        norm_delta = std::max(norm_delta,
                              std::abs(lattice_state(x, n1, n2, 2).norm() -
                                       lattice_state(x_hi, n1, n2, 2).norm()));
      }
    }
    c.require_le(norm_delta, 1e-8, "stability of state norms");
  });

  // ---- 11: kq-representation verification --------------------------------
  run_criterion(11, "Zak L=2 256^2: resolution, orthogonality, witness, "
                    "profiles", [](Criterion& c) {
    const KqBox box = KqBox::for_lattice(2, 256);
    const ZakSample vacuum_sample = zak_gaussian(box);
    c.require_near(zak_resolution_check(vacuum_sample), 1.0, 1e-6,
                   "resolution integral (vacuum) = 1 +- 1e-6");

    const CoefficientSet2D coeffs = direct_coefficients_2d(2, 64, 6);
    const ZakSample psi = zak_psi(coeffs, box);
    c.require_near(zak_resolution_check(psi), 1.0, 1e-4,
                   "resolution integral (Psi_0) = 1 +- 1e-4");
    for (int n1 = -2; n1 <= 2; ++n1) {
      for (int n2 = -2; n2 <= 2; ++n2) {
        const cplx val = zak_orthogonality_integral(psi, n1, n2);
        const double target = (n1 == 0 && n2 == 0) ? 1.0 : 0.0;
        c.require_le(std::abs(val - target), 1e-4,
                     "orthogonality integral n=(" + std::to_string(n1) + "," +
                         std::to_string(n2) + ")");
      }
    }
    for (int L : {2, 3, 4}) {
      c.require_le(incompleteness_witness(L, KqBox::for_lattice(L, 256), 4),
                   1e-10, "incompleteness witness L=" + std::to_string(L));
    }
    for (int j = 1; j <= 2; ++j) {
      c.require_near(profile_closed_form_integral(box, j), 1.0, 1e-10,
                     "profile integral j=" + std::to_string(j));
    }
  });

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
