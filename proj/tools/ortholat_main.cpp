// Command-line front end: every quantitative claim of the construction is
// runnable as a subcommand that emits a machine-readable report and
// self-checks its contracted tolerances.
//
// Exit codes: 0 all checks passed, 1 verification failure (a machine-readable
// failure list is part of the report), 2 usage error.

#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ortholat/core1d.hpp"
#include "ortholat/examples1d.hpp"
#include "ortholat/fock.hpp"
#include "ortholat/lattice2d.hpp"
#include "ortholat/theta.hpp"
#include "ortholat/zak.hpp"

namespace {

using nlohmann::ordered_json;
using namespace ortholat;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

// Fixed 12-significant-digit float formatting: reports are byte-identical
// for identical configurations.
double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

ordered_json cplx_json(const cplx& v) {
  ordered_json j;
  j["re"] = round12(v.real());
  j["im"] = round12(v.imag());
  return j;
}

struct CheckList {
  double scale = 1.0;
  ordered_json failures = ordered_json::array();

  void expect_le(const std::string& name, double value, double bound,
                 bool scaled = true) {
    const double limit = scaled ? bound * scale : bound;
    if (!(value <= limit)) {
      ordered_json f;
      f["check"] = name;
      f["value"] = round12(value);
      f["bound"] = round12(limit);
      failures.push_back(f);
    }
  }
  void expect_near(const std::string& name, double value, double target,
                   double tol) {
    expect_le(name, std::abs(value - target), tol);
  }
  void expect_true(const std::string& name, bool ok,
                   const std::string& diagnostic = "") {
    if (!ok) {
      ordered_json f;
      f["check"] = name;
      if (!diagnostic.empty()) f["diagnostic"] = diagnostic;
      failures.push_back(f);
    }
  }
  bool passed() const { return failures.empty(); }
};

struct OutputOptions {
  std::string path;           // empty = stdout
  std::string format = "json";
};

void add_output_options(CLI::App* cmd, OutputOptions* out) {
  cmd->add_option("--out", out->path,
                  "output file (relative paths resolve against "
                  "ORTHOLAT_OUT_DIR when set)");
  cmd->add_option("--format", out->format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("ORTHOLAT_OUT_DIR")) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p.string();
}

void write_text(const OutputOptions& out, const std::string& text) {
  const std::string path = resolve_output_path(out.path);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  file << text;
}

int finish(const OutputOptions& out, ordered_json& doc, const CheckList& checks,
           const std::string& csv = "") {
  doc["checks"] = ordered_json::object();
  doc["checks"]["passed"] = checks.passed();
  doc["checks"]["failures"] = checks.failures;
  if (out.format == "csv" && !csv.empty()) {
    write_text(out, csv);
  } else {
    write_text(out, doc.dump(2) + "\n");
  }
  if (!checks.passed() && out.format == "json" && !out.path.empty()) {
    // keep the failure list visible even when the report went to a file
    std::cerr << doc["checks"].dump(2) << "\n";
  }
  return checks.passed() ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- ortho1d --

struct Ortho1dConfig {
  std::string example = "box";
  std::string input_path;
  double width = 1.5;
  int dilation_j = 96;
  int half_width = 64;   // K
  int grid = 4096;       // M
  int n_max = 8;
  bool normalize = false;
  std::string export_c, export_d;
  double tolerance_scale = 1.0;
  OutputOptions out;
};

ordered_json coefficients_1d_json(const std::vector<cplx>& values,
                                  int half_width) {
  ordered_json doc;
  doc["K"] = half_width;
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

OverlapSequence1D load_overlaps(const Ortho1dConfig& cfg) {
  if (!cfg.input_path.empty()) {
    std::ifstream in(cfg.input_path);
    if (!in) throw CLI::ValidationError("--input", "cannot open " + cfg.input_path);
    nlohmann::json doc;
    in >> doc;
    return OverlapSequence1D::from_json(doc);
  }
  if (cfg.example == "box") return box_overlaps({cfg.width});
  if (cfg.example == "dyadic") return dilation_overlaps({cfg.dilation_j});
  throw CLI::ValidationError("--example", "unknown generator " + cfg.example);
}

int run_ortho1d(const Ortho1dConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "ortho1d";
  doc["example"] = cfg.input_path.empty() ? cfg.example : "json-input";
  doc["parameters"] = {{"a", cfg.width},
                       {"J", cfg.dilation_j},
                       {"K", cfg.half_width},
                       {"M", cfg.grid},
                       {"n_max", cfg.n_max},
                       {"normalize", cfg.normalize}};

  OverlapSequence1D overlaps = load_overlaps(cfg);
  if (cfg.normalize) overlaps = overlaps.normalized();
  const double a0 = overlaps.at(0).real();

  const TorusFunction1D alpha = spectral_density(overlaps, cfg.grid);
  const PositivityReport pos = check_positivity(alpha);
  doc["positivity"] = pos.to_json();

  if (pos.status != PositivityStatus::strictly_positive) {
    checks.expect_true("density_strictly_positive", false,
                       "density " + to_string(pos.status) + " near p = " +
                           std::to_string(pos.argmin) +
                           "; use diverge1d to probe the failure channel");
    return finish(cfg.out, doc, checks);
  }

  const CoefficientSet1D cs = direct_coefficients(alpha, cfg.half_width);
  const CoefficientSet1D ds = dual_coefficients(alpha, cfg.half_width);
  const GramRow gram = gram_row(cs, overlaps, cfg.n_max);
  const cplx rule = sum_rule_1d(cs, ds);
  const double residual = symbol_inverse_residual(cs, ds, cfg.grid);
  const DecayProfile decay_c = decay_profile(cs, CoefficientKind::direct);
  const DecayProfile decay_d = decay_profile(ds, CoefficientKind::dual);

  doc["sum_sq_c"] = round12(cs.sum_sq_c());
  doc["sum_sq_d"] = round12(ds.sum_sq_d());
  doc["c_tail_estimate"] = round12(cs.c_tail_estimate);
  doc["d_tail_estimate"] = round12(ds.d_tail_estimate);
  doc["sum_rule"] = cplx_json(rule);
  doc["gram_center"] = cplx_json(gram.center());
  doc["gram_max_off_center"] = round12(gram.max_off_center());
  doc["symbol_inverse_residual"] = round12(residual);
  const auto profile_json = [](const DecayProfile& p) {
    ordered_json j;
    j["index"] = p.index;
    ordered_json mags = ordered_json::array();
    for (double m : p.magnitude) mags.push_back(round12(m));
    j["magnitude"] = mags;
    if (p.log_slope) {
      j["log_slope"] = round12(*p.log_slope);
    } else {
      j["log_slope"] = nullptr;
    }
    return j;
  };
  doc["decay_c"] = profile_json(decay_c);
  doc["decay_d"] = profile_json(decay_d);

  if (!cfg.export_c.empty()) {
    std::ofstream file(resolve_output_path(cfg.export_c));
    file << coefficients_1d_json(cs.c, cs.half_width).dump(2) << "\n";
  }
  if (!cfg.export_d.empty()) {
    std::ofstream file(resolve_output_path(cfg.export_d));
    file << coefficients_1d_json(ds.d, ds.half_width).dump(2) << "\n";
  }

  checks.expect_near("gram_center", std::abs(gram.center()), 1.0, 1e-8);
  checks.expect_le("gram_max_off_center", gram.max_off_center(), 1e-8);
  checks.expect_near("sum_rule", std::abs(rule), 1.0, 1e-8);
  checks.expect_near("parseval_dual_over_a0", ds.sum_sq_d() / a0, 1.0, 1e-8);
  checks.expect_le("symbol_inverse_residual", residual, 1e-8);

  std::ostringstream csv;
  csv << "l,c_magnitude,d_magnitude\n";
  for (std::size_t i = 0; i < decay_c.index.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", decay_c.index[i],
                  decay_c.magnitude[i], decay_d.magnitude[i]);
    csv << line;
  }
  return finish(cfg.out, doc, checks, csv.str());
}

// -------------------------------------------------------------- diverge1d --

struct Diverge1dConfig {
  std::string example = "box";
  double width = 2.0;
  int dilation_j = 96;
  std::vector<int> grids = {256, 1024, 4096};
  double tolerance_scale = 1.0;
  OutputOptions out;
};

int run_diverge1d(const Diverge1dConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "diverge1d";
  doc["example"] = cfg.example;
  doc["parameters"] = {{"a", cfg.width}, {"grids", cfg.grids}};

  const OverlapSequence1D overlaps =
      (cfg.example == "box") ? box_overlaps({cfg.width})
                             : dilation_overlaps({cfg.dilation_j});
  // density status on a plain grid classifies the channel
  const PositivityReport pos = check_positivity(
      spectral_density(overlaps, 4 * (2 * overlaps.half_width + 1) + 4096));
  doc["positivity"] = pos.to_json();

  const std::vector<double> sums = divergence_probe(overlaps, cfg.grids);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < sums.size(); ++i) {
    rows.push_back({{"M", cfg.grids[i]}, {"sum_sq", round12(sums[i])}});
  }
  doc["partial_sums"] = rows;

  if (pos.status == PositivityStatus::has_zero) {
    bool increasing = true;
    for (std::size_t i = 1; i < sums.size(); ++i) {
      increasing = increasing && sums[i] > sums[i - 1];
    }
    checks.expect_true("partial_sums_strictly_increasing", increasing);
  } else if (pos.status == PositivityStatus::strictly_positive) {
    const double spread = std::abs(sums.back() - sums.front());
    checks.expect_le("partial_sums_converged", spread,
                     1e-6 * std::max(1.0, std::abs(sums.back())));
  }

  std::ostringstream csv;
  csv << "M,sum_sq\n";
  for (std::size_t i = 0; i < sums.size(); ++i) {
    char line[64];
    std::snprintf(line, sizeof(line), "%d,%.17g\n", cfg.grids[i], sums[i]);
    csv << line;
  }
  return finish(cfg.out, doc, checks, csv.str());
}

// ------------------------------------------------------------- coherent2d --

struct Coherent2dConfig {
  int L = 2;
  int radius = kCoeffRadiusDefault;
  int grid = kCoeffGridDefault;
  int n_max = 3;
  int bound_grid = kBoundGridDefault;
  bool override_l1 = false;
  bool skip_routes = false;
  std::string export_c, export_dual;
  double tolerance_scale = 1.0;
  OutputOptions out;
};

int run_coherent2d(const Coherent2dConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "coherent2d";
  doc["parameters"] = {{"L", cfg.L},
                       {"K", cfg.radius},
                       {"M", cfg.grid},
                       {"n_max", cfg.n_max},
                       {"bound_grid", cfg.bound_grid},
                       {"override_l1", cfg.override_l1}};

  // F_L analysis first: bound certification, route agreement, and the value
  // at (pi, pi); these are defined for every L, including the failing L = 1.
  const double bound =
      std::norm(theta3(ThetaArg::make({0.0, 0.0}, std::exp(-0.5 * kPi * cfg.L)))) -
      1.0;
  const TorusFunction2D f = f_grid(cfg.L, cfg.bound_grid);
  double sup_dev = 0.0;
  for (const cplx& s : f.samples) {
    sup_dev = std::max(sup_dev, std::abs(s.real() - 1.0));
  }
  doc["f_bound"] = round12(bound);
  doc["f_sup_deviation"] = round12(sup_dev);
  doc["f_at_pi_pi"] = round12(f_direct(kPi, kPi, cfg.L));
  checks.expect_le("f_sup_within_theta_bound", sup_dev, bound * (1 + 1e-12),
                   /*scaled=*/false);

  if (!cfg.skip_routes) {
    double route_theta = 0.0, route_phase = 0.0;
    for (int i = 0; i < cfg.bound_grid; ++i) {
      for (int j = 0; j < cfg.bound_grid; ++j) {
        const double p1 = f.point(i), p2 = f.point(j);
        const double direct = f.at(i, j).real();
        route_theta =
            std::max(route_theta, std::abs(f_theta(p1, p2, cfg.L) - direct));
        route_phase = std::max(route_phase,
                               std::abs(f_phase_product(p1, p2, cfg.L) - direct));
      }
    }
    doc["route_disagreement_theta"] = round12(route_theta);
    doc["route_disagreement_phase_product"] = round12(route_phase);
    checks.expect_le("route_agreement_theta", route_theta, 1e-10);
    checks.expect_le("route_agreement_phase_product", route_phase, 1e-10);
  }

  CoefficientSet2D coeffs;
  try {
    coeffs = merge_coefficients(
        direct_coefficients_2d(cfg.L, cfg.grid, cfg.radius, cfg.override_l1),
        dual_coefficients_2d(cfg.L, cfg.grid, cfg.radius));
  } catch (const density_zero_error& err) {
    checks.expect_true("coefficient_extraction", false,
                       "F has zero at (pi, pi)");
    doc["error"] = err.what();
    return finish(cfg.out, doc, checks);
  }
  doc["nonconvergent"] = coeffs.nonconvergent;

  const Gram2D gram = gram_2d(coeffs, cfg.L, cfg.n_max);
  const double norm_sq = norm_condition(coeffs, cfg.L);
  const cplx rule = sum_rule_2d(coeffs, coeffs);
  const double parseval = coeffs.sum_sq(CoefficientKind::dual);
  const double residual = xl_symbol_residual(coeffs, coeffs, cfg.grid);

  doc["sum_sq_c"] = round12(coeffs.sum_sq(CoefficientKind::direct));
  doc["sum_sq_dual"] = round12(parseval);
  doc["norm_sq"] = round12(norm_sq);
  doc["sum_rule"] = cplx_json(rule);
  doc["gram_center"] = cplx_json(gram.center());
  doc["gram_max_off_center"] = round12(gram.max_off_center());
  doc["xl_symbol_residual"] = round12(residual);

  if (!cfg.export_c.empty()) {
    std::ofstream file(resolve_output_path(cfg.export_c));
    file << coeffs.to_json(CoefficientKind::direct).dump(2) << "\n";
  }
  if (!cfg.export_dual.empty()) {
    std::ofstream file(resolve_output_path(cfg.export_dual));
    file << coeffs.to_json(CoefficientKind::dual).dump(2) << "\n";
  }

  checks.expect_near("gram_center", std::abs(gram.center()), 1.0, 1e-8);
  checks.expect_le("gram_max_off_center", gram.max_off_center(), 1e-8);
  checks.expect_near("norm_sq", norm_sq, 1.0, 1e-8);
  checks.expect_near("sum_rule", std::abs(rule), 1.0, 1e-8);
  checks.expect_near("parseval_dual", parseval, 1.0, 1e-8);
  checks.expect_le("xl_symbol_residual", residual, 1e-8);

  std::ostringstream csv;
  csv << "k1,k2,c_re,c_im,dual_re,dual_im\n";
  for (int k1 = -cfg.radius; k1 <= cfg.radius; ++k1) {
    for (int k2 = -cfg.radius; k2 <= cfg.radius; ++k2) {
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g,%.17g\n", k1,
                    k2, coeffs.c_at(k1, k2).real(), coeffs.c_at(k1, k2).imag(),
                    coeffs.dual_at(k1, k2).real(),
                    coeffs.dual_at(k1, k2).imag());
      csv << line;
    }
  }
  return finish(cfg.out, doc, checks, csv.str());
}

// --------------------------------------------------------------- perturb2d --

struct Perturb2dConfig {
  std::string l_range = "2..4";
  double tolerance_scale = 1.0;
  OutputOptions out;
};

std::vector<int> parse_l_range(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<int> ls;
  if (dots == std::string::npos) {
    ls.push_back(std::stoi(text));
  } else {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--L", "empty range " + text);
    for (int l = lo; l <= hi; ++l) ls.push_back(l);
  }
  for (int l : ls) {
    if (l < 1) throw CLI::ValidationError("--L", "L must be >= 1");
  }
  return ls;
}

int run_perturb2d(const Perturb2dConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "perturb2d";
  doc["parameters"] = {{"L", cfg.l_range}};

  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "L,norm_sq,neighbor_overlap,inverse_residual,conclusive\n";
  for (int l : parse_l_range(cfg.l_range)) {
    const PerturbativeDiagnostics diag = perturbative_diagnostics(l);
    rows.push_back({{"L", l},
                    {"norm_sq", round12(diag.norm_sq)},
                    {"neighbor_overlap", round12(diag.neighbor_overlap)},
                    {"inverse_residual", round12(diag.inverse_residual)},
                    {"conclusive", diag.conclusive}});
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%d\n", l,
                  diag.norm_sq, diag.neighbor_overlap, diag.inverse_residual,
                  diag.conclusive ? 1 : 0);
    csv << line;
    if (!diag.conclusive) continue;
    const std::string tag = "_L" + std::to_string(l);
    checks.expect_near("norm_sq" + tag, diag.norm_sq,
                       1.0 - 3.0 * std::exp(-kPi * l), 5e-5);
    checks.expect_le("neighbor_overlap" + tag, diag.neighbor_overlap,
                     2.2 * std::exp(-1.5 * kPi * l));
    checks.expect_le("inverse_residual" + tag, diag.inverse_residual,
                     4.0 * std::exp(-kPi * l) * (1 + 1e-9), /*scaled=*/false);
  }
  doc["table"] = rows;
  return finish(cfg.out, doc, checks, csv.str());
}

// --------------------------------------------------------------- breakdown --

struct BreakdownConfig {
  int L = 1;
  int control_L = 2;
  std::vector<int> grids = {32, 64, 128};
  double tolerance_scale = 1.0;
  OutputOptions out;
};

int run_breakdown(const BreakdownConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "breakdown";
  doc["parameters"] = {{"L", cfg.L},
                       {"control_L", cfg.control_L},
                       {"grids", cfg.grids}};

  const auto to_rows = [](const std::vector<BreakdownRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const BreakdownRow& r : rows) {
      arr.push_back({{"M", r.grid_size},
                     {"sum_abs", round12(r.sum_abs)},
                     {"sum_sq", round12(r.sum_sq)},
                     {"f_min", round12(r.f_min)}});
    }
    return arr;
  };

  const auto probe = l1_breakdown_report(cfg.grids, cfg.L);
  const auto control = l1_breakdown_report(cfg.grids, cfg.control_L);
  doc["probe"] = to_rows(probe);
  doc["control"] = to_rows(control);

  if (cfg.L == 1) {
    bool sq_up = true, abs_up = true, f_down = true;
    for (std::size_t i = 1; i < probe.size(); ++i) {
      sq_up = sq_up && probe[i].sum_sq > probe[i - 1].sum_sq;
      abs_up = abs_up && probe[i].sum_abs > probe[i - 1].sum_abs;
      f_down = f_down && probe[i].f_min < probe[i - 1].f_min;
    }
    checks.expect_true("sum_sq_strictly_increasing", sq_up);
    checks.expect_true("sum_abs_strictly_increasing", abs_up);
    checks.expect_true("f_min_decreasing_to_zero", f_down);
  }
  checks.expect_le("control_sum_sq_stable",
                   std::abs(control.back().sum_sq - control.front().sum_sq),
                   1e-8);

  std::ostringstream csv;
  csv << "L,M,sum_abs,sum_sq,f_min\n";
  for (const auto& [l, rows] :
       {std::pair{cfg.L, &probe}, {cfg.control_L, &control}}) {
    for (const BreakdownRow& r : *rows) {
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g\n", l,
                    r.grid_size, r.sum_abs, r.sum_sq, r.f_min);
      csv << line;
    }
  }
  return finish(cfg.out, doc, checks, csv.str());
}

// ------------------------------------------------------------- fock-verify --

struct FockVerifyConfig {
  int L = 2;
  int dim = kFockDimDefault;
  int radius = kFockCoeffRadius;
  int grid = kCoeffGridDefault;
  int stability_step = 40;
  double tolerance_scale = 1.0;
  OutputOptions out;
};

int run_fock_verify(const FockVerifyConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "fock-verify";
  doc["parameters"] = {{"L", cfg.L},
                       {"N", cfg.dim},
                       {"K", cfg.radius},
                       {"M", cfg.grid},
                       {"stability_step", cfg.stability_step}};

  const CoefficientSet2D coeffs = merge_coefficients(
      direct_coefficients_2d(cfg.L, cfg.grid, cfg.radius),
      dual_coefficients_2d(cfg.L, cfg.grid, cfg.radius));
  const auto [x, x_inv] = build_X_pair(coeffs, cfg.dim);
  const FockOperator b = build_B(x, x_inv);

  const double sa_defect = (x.mat - x.mat.adjoint()).cwiseAbs().maxCoeff();
  doc["x_selfadjoint_defect"] = round12(sa_defect);
  doc["x_l1_coefficient_norm"] =
      round12(coeffs.sum_abs(CoefficientKind::direct));

  // eigenrelation residuals on the first lattice shell
  double residual_max = 0.0;
  ordered_json eig = ordered_json::array();
  for (int n1 = -1; n1 <= 1; ++n1) {
    for (int n2 = -1; n2 <= 1; ++n2) {
      const FockVector psi = lattice_state(x, n1, n2, cfg.L);
      const cplx z = lattice_point(n1, n2, cfg.L);
      const double res = (b.mat * psi.amp - z * psi.amp).norm() / psi.norm();
      residual_max = std::max(residual_max, res);
      eig.push_back({{"n1", n1},
                     {"n2", n2},
                     {"norm", round12(psi.norm())},
                     {"residual", round12(res)}});
    }
  }
  doc["eigenrelation"] = eig;
  doc["eigen_residual_max"] = round12(residual_max);

  const UncertaintyReport unc = uncertainty_report(x, x_inv, 0, 0, cfg.L);
  doc["uncertainty"] = {{"dQ", round12(unc.dq)},
                        {"dP", round12(unc.dp)},
                        {"product", round12(unc.product)},
                        {"half_commutator_expectation",
                         round12(unc.half_commutator_expectation)},
                        {"bdagger_identity", round12(unc.bdagger_identity)}};

  const int block = cfg.dim / 2;
  const double comm_dev = commutator_deviation(b, block);
  doc["commutator_deviation"] = round12(comm_dev);

  const FockGram fock_entries = fock_gram(x, cfg.L, 1);
  const Gram2D analytic = gram_2d(coeffs, cfg.L, 2);
  double gram_err = 0.0;
  for (int n1 = -1; n1 <= 1; ++n1) {
    for (int n2 = -1; n2 <= 1; ++n2) {
      for (int m1 = -1; m1 <= 1; ++m1) {
        for (int m2 = -1; m2 <= 1; ++m2) {
          gram_err = std::max(gram_err,
                              std::abs(fock_entries.at(n1, n2, m1, m2) -
                                       analytic.at(n1 - m1, n2 - m2)));
        }
      }
    }
  }
  doc["gram_agreement"] = round12(gram_err);

  // truncation stability: state-level quantities at N + step; the residual
  // and the commutator deviation converge with N and are reported as deltas
  const auto [x_hi, x_inv_hi] = build_X_pair(coeffs, cfg.dim + cfg.stability_step);
  const FockOperator b_hi = build_B(x_hi, x_inv_hi);
  const UncertaintyReport unc_hi = uncertainty_report(x_hi, x_inv_hi, 0, 0, cfg.L);
  const FockGram fock_hi = fock_gram(x_hi, cfg.L, 1);
  double residual_hi = 0.0;
  double norm_delta = 0.0;
  for (int n1 = -1; n1 <= 1; ++n1) {
    for (int n2 = -1; n2 <= 1; ++n2) {
      const FockVector lo = lattice_state(x, n1, n2, cfg.L);
      const FockVector hi = lattice_state(x_hi, n1, n2, cfg.L);
      norm_delta = std::max(norm_delta, std::abs(lo.norm() - hi.norm()));
      const cplx z = lattice_point(n1, n2, cfg.L);
      residual_hi = std::max(residual_hi,
                             (b_hi.mat * hi.amp - z * hi.amp).norm() / hi.norm());
    }
  }
  const double gram_delta =
      (fock_entries.entries - fock_hi.entries).cwiseAbs().maxCoeff();
  const double unc_delta =
      std::max({std::abs(unc.dq - unc_hi.dq), std::abs(unc.dp - unc_hi.dp),
                std::abs(unc.product - unc_hi.product),
                std::abs(unc.half_commutator_expectation -
                         unc_hi.half_commutator_expectation)});
  doc["stability"] = {
      {"norm_delta", round12(norm_delta)},
      {"gram_delta", round12(gram_delta)},
      {"uncertainty_delta", round12(unc_delta)},
      {"eigen_residual_at_step", round12(residual_hi)},
      {"commutator_deviation_at_step",
       round12(commutator_deviation(b_hi, block))}};

  checks.expect_le("x_selfadjoint_defect", sa_defect, 1e-9);
  checks.expect_le("eigen_residual_max", residual_max, 1e-5);
  checks.expect_near("uncertainty_product_vs_half_commutator", unc.product,
                     std::abs(unc.half_commutator_expectation), 1e-5);
  checks.expect_near("variance_identity_q", unc.dq * unc.dq,
                     unc.bdagger_identity, 1e-5);
  checks.expect_near("variance_identity_p", unc.dp * unc.dp,
                     unc.bdagger_identity, 1e-5);
  checks.expect_le("gram_agreement", gram_err, 1e-6);
  checks.expect_le("stability_norm", norm_delta, 1e-8);
  checks.expect_le("stability_gram", gram_delta, 1e-8);
  checks.expect_le("stability_uncertainty", unc_delta, 1e-8);
  checks.expect_true("commutator_nonnormality", comm_dev > 1e-4,
                     "B_L unexpectedly close to normal");
  checks.expect_le("commutator_deviation_bound", comm_dev,
                   2.0 * (kTwoPi * cfg.L) * std::exp(-0.5 * kPi * cfg.L) * 1.05,
                   /*scaled=*/false);

  std::ostringstream csv;
  csv << "quantity,value\n";
  char line[96];
  for (const auto& [name, value] :
       {std::pair<const char*, double>{"eigen_residual_max", residual_max},
        {"uncertainty_product", unc.product},
        {"gram_agreement", gram_err},
        {"commutator_deviation", comm_dev}}) {
    std::snprintf(line, sizeof(line), "%s,%.17g\n", name, value);
    csv << line;
  }
  return finish(cfg.out, doc, checks, csv.str());
}

// -------------------------------------------------------------- zak-verify --

struct ZakVerifyConfig {
  int L = 2;
  int grid = kZakGridDefault;
  int radius = kCoeffRadiusDefault;
  int coeff_grid = kCoeffGridDefault;
  int n_max = 2;
  int witness_n_max = 4;
  std::string export_sample;
  double tolerance_scale = 1.0;
  OutputOptions out;
};

int run_zak_verify(const ZakVerifyConfig& cfg) {
  CheckList checks{cfg.tolerance_scale};
  ordered_json doc;
  doc["subcommand"] = "zak-verify";
  doc["parameters"] = {{"L", cfg.L},
                       {"grid", cfg.grid},
                       {"K", cfg.radius},
                       {"M", cfg.coeff_grid},
                       {"n_max", cfg.n_max},
                       {"witness_n_max", cfg.witness_n_max}};

  const KqBox box = KqBox::for_lattice(cfg.L, cfg.grid);
  doc["box"] = {{"A", round12(box.A)},
                {"a", round12(box.a)},
                {"cell_measure", round12(box.cell_measure())}};

  const ZakSample vacuum_sample = zak_gaussian(box);
  const double resolution_vacuum = zak_resolution_check(vacuum_sample);
  doc["resolution_vacuum"] = round12(resolution_vacuum);
  checks.expect_near("resolution_vacuum", resolution_vacuum, 1.0, 1e-6);

  const double witness = incompleteness_witness(cfg.L, box, cfg.witness_n_max);
  doc["incompleteness_witness"] = round12(witness);
  if (cfg.L > 1) {
    checks.expect_le("incompleteness_witness", witness, 1e-10);
  } else {
    checks.expect_near("witness_is_family_member_L1", witness,
                       box.cell_measure(), 1e-10);
  }

  ordered_json profiles = ordered_json::array();
  std::string psi_csv;
  if (cfg.L > 1) {
    const CoefficientSet2D coeffs =
        direct_coefficients_2d(cfg.L, cfg.coeff_grid, cfg.radius);
    const ZakSample psi = zak_psi(coeffs, box);
    const double resolution_psi = zak_resolution_check(psi);
    doc["resolution_psi"] = round12(resolution_psi);
    checks.expect_near("resolution_psi", resolution_psi, 1.0, 1e-4);

    ordered_json orth = ordered_json::array();
    double worst_orth = 0.0;
    for (int n1 = -cfg.n_max; n1 <= cfg.n_max; ++n1) {
      for (int n2 = -cfg.n_max; n2 <= cfg.n_max; ++n2) {
        const cplx val = zak_orthogonality_integral(psi, n1, n2);
        const double target = (n1 == 0 && n2 == 0) ? 1.0 : 0.0;
        worst_orth = std::max(worst_orth, std::abs(val - target));
        orth.push_back({{"n1", n1},
                        {"n2", n2},
                        {"value", cplx_json(val)}});
      }
    }
    doc["orthogonality_integrals"] = orth;
    doc["orthogonality_worst_deviation"] = round12(worst_orth);
    checks.expect_le("orthogonality_integrals", worst_orth, 1e-4);

    // raw lattice control: the vacuum family is visibly non-orthogonal
    const double raw_overlap =
        std::abs(zak_orthogonality_integral(vacuum_sample, 1, 0));
    doc["raw_vacuum_overlap_10"] = round12(raw_overlap);
    checks.expect_near("raw_vacuum_overlap_10", raw_overlap,
                       std::exp(-0.5 * kPi * cfg.L), 1e-6);

    for (int j = 1; j <= cfg.L; ++j) {
      const double integral = profile_closed_form_integral(box, j);
      const double dist =
          intensity_distance(psi, box_profile_candidate(box, j));
      profiles.push_back({{"j", j},
                          {"integral", round12(integral)},
                          {"distance", round12(dist)}});
      checks.expect_le("profile_integral_j" + std::to_string(j),
                       std::abs(integral - 1.0), 1e-10, /*scaled=*/false);
    }
    if (!cfg.export_sample.empty()) {
      std::ofstream file(resolve_output_path(cfg.export_sample));
      file << to_json(psi).dump() << "\n";
    }
    std::ostringstream csv;
    write_csv(psi, csv);
    psi_csv = csv.str();
  } else {
    for (int j = 1; j <= cfg.L; ++j) {
      profiles.push_back({{"j", j},
                          {"integral",
                           round12(profile_closed_form_integral(box, j))}});
    }
    std::ostringstream csv;
    write_csv(vacuum_sample, csv);
    psi_csv = csv.str();
  }
  doc["profiles"] = profiles;

  return finish(cfg.out, doc, checks, psi_csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ortholat: invariant orthonormalization of unitary-lattice translates "
      "(1-D overlap pipelines, coherent-state lattices, Fock and kq-space "
      "verification)"};
  app.require_subcommand(1);

  Ortho1dConfig ortho_cfg;
  CLI::App* ortho = app.add_subcommand(
      "ortho1d", "1-D orthonormalization pipeline: coefficients, Gram row, "
                 "sum rule, decay");
  ortho->add_option("--example", ortho_cfg.example, "generator: box | dyadic")
      ->check(CLI::IsMember({"box", "dyadic"}));
  ortho->add_option("--input", ortho_cfg.input_path,
                    "JSON overlap sequence {\"J\", \"re\", \"im\"}");
  ortho->add_option("--a", ortho_cfg.width, "box width");
  ortho->add_option("--J", ortho_cfg.dilation_j, "dyadic truncation");
  ortho->add_option("--K", ortho_cfg.half_width, "coefficient half-width");
  ortho->add_option("--M", ortho_cfg.grid, "density grid size");
  ortho->add_option("--n-max", ortho_cfg.n_max, "Gram row half-width");
  ortho->add_flag("--normalize", ortho_cfg.normalize,
                  "divide overlaps by a_0 first");
  ortho->add_option("--export-c", ortho_cfg.export_c,
                    "write direct coefficients as JSON");
  ortho->add_option("--export-d", ortho_cfg.export_d,
                    "write dual coefficients as JSON");
  ortho->add_option("--tolerance-scale", ortho_cfg.tolerance_scale,
                    "multiplier on contracted tolerances");
  add_output_options(ortho, &ortho_cfg.out);

  Diverge1dConfig div_cfg;
  CLI::App* div = app.add_subcommand(
      "diverge1d", "partial sums of sum |c_l|^2 on refining offset grids");
  div->add_option("--example", div_cfg.example, "generator: box | dyadic")
      ->check(CLI::IsMember({"box", "dyadic"}));
  div->add_option("--a", div_cfg.width, "box width");
  div->add_option("--J", div_cfg.dilation_j, "dyadic truncation");
  div->add_option("--grids", div_cfg.grids, "grid sizes")->delimiter(',');
  div->add_option("--tolerance-scale", div_cfg.tolerance_scale,
                  "multiplier on contracted tolerances");
  add_output_options(div, &div_cfg.out);

  Coherent2dConfig coh_cfg;
  CLI::App* coh = app.add_subcommand(
      "coherent2d", "coherent-state lattice pipeline: c, dual, Gram, sum "
                    "rule, F bounds, route agreement");
  coh->add_option("--L", coh_cfg.L, "lattice cell parameter a^2 = 2 pi L");
  coh->add_option("--K", coh_cfg.radius, "coefficient radius");
  coh->add_option("--M", coh_cfg.grid, "coefficient grid");
  coh->add_option("--n-max", coh_cfg.n_max, "Gram radius");
  coh->add_option("--bound-grid", coh_cfg.bound_grid,
                  "grid for bound certification and route agreement");
  coh->add_flag("--override-l1", coh_cfg.override_l1,
                "force extraction for L = 1 on offset grids");
  coh->add_flag("--skip-routes", coh_cfg.skip_routes,
                "skip the three-route agreement scan");
  coh->add_option("--export-c", coh_cfg.export_c, "write c part as JSON");
  coh->add_option("--export-dual", coh_cfg.export_dual,
                  "write dual part as JSON");
  coh->add_option("--tolerance-scale", coh_cfg.tolerance_scale,
                  "multiplier on contracted tolerances");
  add_output_options(coh, &coh_cfg.out);

  Perturb2dConfig pert_cfg;
  CLI::App* pert = app.add_subcommand(
      "perturb2d", "first-order diagnostics table over a range of L");
  pert->add_option("--L", pert_cfg.l_range, "single L or range lo..hi");
  pert->add_option("--tolerance-scale", pert_cfg.tolerance_scale,
                   "multiplier on contracted tolerances");
  add_output_options(pert, &pert_cfg.out);

  BreakdownConfig brk_cfg;
  CLI::App* brk = app.add_subcommand(
      "breakdown", "L = 1 failure channel: growing coefficient sums on "
                   "refining offset grids, with a stable control L");
  brk->add_option("--L", brk_cfg.L, "probed L");
  brk->add_option("--control-L", brk_cfg.control_L, "stable control L");
  brk->add_option("--grids", brk_cfg.grids, "grid sizes")->delimiter(',');
  brk->add_option("--tolerance-scale", brk_cfg.tolerance_scale,
                  "multiplier on contracted tolerances");
  add_output_options(brk, &brk_cfg.out);

  FockVerifyConfig fock_cfg;
  CLI::App* fock = app.add_subcommand(
      "fock-verify", "truncated number-basis verification: eigenrelation, "
                     "uncertainty, Gram cross-check, truncation stability");
  fock->add_option("--L", fock_cfg.L, "lattice parameter");
  fock->add_option("--N", fock_cfg.dim, "truncation dimension");
  fock->add_option("--K", fock_cfg.radius, "coefficient radius");
  fock->add_option("--M", fock_cfg.grid, "coefficient grid");
  fock->add_option("--stability-step", fock_cfg.stability_step,
                   "dimension increment for the stability gate");
  fock->add_option("--tolerance-scale", fock_cfg.tolerance_scale,
                   "multiplier on contracted tolerances");
  add_output_options(fock, &fock_cfg.out);

  ZakVerifyConfig zak_cfg;
  CLI::App* zak = app.add_subcommand(
      "zak-verify", "kq-representation verification: resolution, "
                    "orthogonality integrals, incompleteness witness, "
                    "profile distances");
  zak->add_option("--L", zak_cfg.L, "lattice parameter");
  zak->add_option("--grid", zak_cfg.grid, "box grid (per axis)");
  zak->add_option("--K", zak_cfg.radius, "coefficient radius");
  zak->add_option("--M", zak_cfg.coeff_grid, "coefficient grid");
  zak->add_option("--n-max", zak_cfg.n_max, "orthogonality integral radius");
  zak->add_option("--witness-n-max", zak_cfg.witness_n_max,
                  "witness pairing radius");
  zak->add_option("--export-sample", zak_cfg.export_sample,
                  "write the transformed sample grid as JSON");
  zak->add_option("--tolerance-scale", zak_cfg.tolerance_scale,
                  "multiplier on contracted tolerances");
  add_output_options(zak, &zak_cfg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ortho->parsed()) return run_ortho1d(ortho_cfg);
    if (div->parsed()) return run_diverge1d(div_cfg);
    if (coh->parsed()) return run_coherent2d(coh_cfg);
    if (pert->parsed()) return run_perturb2d(pert_cfg);
    if (brk->parsed()) return run_breakdown(brk_cfg);
    if (fock->parsed()) return run_fock_verify(fock_cfg);
    if (zak->parsed()) return run_zak_verify(zak_cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitUsage;
}
