// Acceptance suite: one PASS/FAIL line per criterion, details indented above it.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"
#include "mrmt/fit.hpp"
#include "mrmt/numerics/quadrature.hpp"
#include "mrmt/setups.hpp"
#include "mrmt/spectra.hpp"
#include "mrmt/surmise.hpp"

using namespace mrmt;
using surmise::TransitionKind;
using Tag = TransitionKind::Tag;
using ensembles::ComplexMatrix;
using ensembles::Matrix;
using ensembles::RealMatrix;
using ensembles::Rng;

namespace {

// Tolerances, pinned.
constexpr double kNormTol = 1e-6;
constexpr double kNormTolGseGue = 1e-4;
constexpr double kGibbsSigFigs = 4;
constexpr double kOvershootSigFigs = 6;
constexpr double kSmallMatrixDelta2 = 0.01;
constexpr double kLargeFitDelta2 = 0.03;
constexpr double kLinearDelta2 = 0.1;
constexpr double kS1Delta2 = 0.02;
constexpr double kS2Delta2 = 0.03;
constexpr double kRescaleDelta2 = 0.03;
constexpr double kSlopeTol = 0.01;
constexpr double kRatioTol = 0.05;
constexpr double kSelfDualDelta2 = 0.02;

struct Outcome {
  bool pass = true;
  std::string summary;
};

void detail(const std::string& line) { std::cout << "  " << line << std::endl; }

std::string fmt(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool same_sig_figs(double got, double want, double figs) {
  return std::abs(got - want) <= 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(want))) - figs + 1);
}

double moment(const surmise::SurmiseParams& p, int k) {
  const double w = std::max(0.1, std::min(1.0, p.lambda));
  auto f = [&](double s) { return std::pow(s, k) * surmise::transition_density(p, s); };
  const numerics::QuadratureSpec spec{p.kind.is_gse_gue() ? 1e-7 : 1e-9, 1e-300, 2000};
  return numerics::integrate_semi_infinite(f, {0.0, 0.1 * w, w, 1.0, 2.0, 4.0}, 1.0, spec).value;
}

spectra::Histogram histogram_of(std::vector<double> s) {
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= double(s.size());
  for (double& x : s) x /= mean;
  return spectra::histogram(s, spectra::kDefaultBins, spectra::kDefaultSMax);
}

double delta2_to(const spectra::Histogram& h, const surmise::SurmiseParams& p) {
  return fit::delta2(h, [&](double s) { return surmise::transition_density(p, s); });
}

double delta2_to_wigner(const spectra::Histogram& h, int beta) {
  return fit::delta2(h, [beta](double s) { return surmise::wigner_density(beta, s); });
}

// ---------------------------------------------------------------------------------------------

Outcome normalization() {
  Outcome o;
  int good = 0, total = 0;
  for (const auto& k : TransitionKind::mixed())
    for (double l : {0.02, 0.2, 0.8, 2.0}) {
      const auto p = surmise::surmise_constants(k, l);
      const double m0 = moment(p, 0), m1 = moment(p, 1);
      const double tol = k.is_gse_gue() ? kNormTolGseGue : kNormTol;
      const bool ok = std::abs(m0 - 1.0) <= tol && std::abs(m1 - 1.0) <= tol;
      ++total;
      good += ok;
      o.pass &= ok;
      detail(k.name() + " lambda=" + fmt(l) + ": |int P - 1| = " + fmt(std::abs(m0 - 1.0), 3) +
             ", |int sP - 1| = " + fmt(std::abs(m1 - 1.0), 3) + (ok ? "" : "  <-- out of tolerance"));
    }
  o.summary = std::to_string(good) + "/" + std::to_string(total) + " (kind, lambda) pairs normalized";
  return o;
}

Outcome gibbs() {
  Outcome o;
  const std::tuple<Tag, double, double> cited[] = {
      {Tag::PoissonToGOE, 2.51393, 1.17516}, {Tag::PoissonToGUE, 3.00395, 1.28475}, {Tag::PoissonToGSE, 3.76023, 1.43453}};
  for (auto [tag, x, v] : cited) {
    const auto m = surmise::gibbs_maximum(tag);
    const bool ok = same_sig_figs(m.s_tilde, x, kGibbsSigFigs) && same_sig_figs(m.value, v, kGibbsSigFigs);
    o.pass &= ok;
    detail(TransitionKind(tag).name() + ": (" + fmt(m.s_tilde, 8) + ", " + fmt(m.value, 8) + ") vs (" + fmt(x) + ", " +
           fmt(v) + ")");
  }
  const double g = surmise::fourier_gibbs_overshoot();
  const bool ok = same_sig_figs(g, 0.0894899, kOvershootSigFigs);
  o.pass &= ok;
  detail("Fourier overshoot " + fmt(g, 10) + " vs 0.0894899");
  o.summary = "three maxima and the Fourier overshoot";
  return o;
}

// ---------------------------------------------------------------------------------------------

Matrix gaussian(int beta, int n, Rng& rng) {
  ensembles::EnsembleSpec e;
  e.beta = beta;
  e.n = n;
  return ensembles::sample_gaussian(e, rng);
}

Matrix combine(const Matrix& h, double lambda, const Matrix& v) {
  if (ensembles::is_real(h) && ensembles::is_real(v))
    return RealMatrix(std::get<RealMatrix>(h) + lambda * std::get<RealMatrix>(v));
  return ComplexMatrix(ensembles::to_complex(h) + lambda * ensembles::to_complex(v));
}

// The 2x2 and 4x4 matrices defining each surmise: H_0 = diag(0, p) with p ~ Exp(1) for the Poisson
// cases, otherwise a matrix of the base ensemble, made self-dual where the perturbation is the GSE.
ensembles::Spectrum small_matrix(TransitionKind kind, double lambda, Rng& rng) {
  using ensembles::SelfDualMode;
  Matrix base, pert;
  bool collapse = false;
  switch (kind.tag()) {
    case Tag::PoissonToGOE:
    case Tag::PoissonToGUE: {
      base = RealMatrix(RealMatrix::Zero(2, 2));
      std::get<RealMatrix>(base)(1, 1) = rng.exponential();
      pert = gaussian(kind.perturbation_beta(), 2, rng);
      break;
    }
    case Tag::PoissonToGSE: {
      const double p = rng.exponential();
      RealMatrix d = RealMatrix::Zero(4, 4);
      d(2, 2) = d(3, 3) = p;
      base = d;
      pert = gaussian(4, 2, rng);
      collapse = true;
      break;
    }
    case Tag::GOEToGUE:
      base = gaussian(1, 2, rng);
      pert = gaussian(2, 2, rng);
      break;
    case Tag::GOEToGSE:
      base = ensembles::make_self_dual(gaussian(1, 2, rng), SelfDualMode::TensorIdentity);
      pert = gaussian(4, 2, rng);
      collapse = true;
      break;
    case Tag::GUEToGSE:
      base = ensembles::make_self_dual(gaussian(2, 2, rng), SelfDualMode::GUEPermutation);
      pert = gaussian(4, 2, rng);
      collapse = true;
      break;
    case Tag::GSEToGUE_S1:
    case Tag::GSEToGUE_S2:
      base = gaussian(4, 2, rng);
      pert = gaussian(2, 4, rng);
      break;
    case Tag::Pure: throw DomainError("no small-matrix construction for a pure kind");
  }
  return ensembles::eigenvalues(combine(base, lambda, pert), collapse);
}

Outcome small_matrix_oracle() {
  Outcome o;
  constexpr double lambda = 0.4;
  constexpr std::size_t count = 1000000;
  int good = 0;
  for (const auto& k : TransitionKind::mixed()) {
    const auto spectra = ensembles::parallel_batch(count, 3000 + std::uint64_t(k.tag()),
                                                   [&](std::size_t, Rng& rng) { return small_matrix(k, lambda, rng); });
    const auto family = k.tag() == Tag::GSEToGUE_S1   ? spectra::SpacingFamily::S1
                        : k.tag() == Tag::GSEToGUE_S2 ? spectra::SpacingFamily::S2
                                                      : spectra::SpacingFamily::All;
    std::vector<double> s;
    s.reserve(2 * count);
    const spectra::Window all{-1e300, 1e300};
    for (const auto& sp : spectra) {
      const auto r = spectra::raw_spacings(sp.eigenvalues, all, family);
      s.insert(s.end(), r.begin(), r.end());
    }
    const double d2 = delta2_to(histogram_of(std::move(s)), surmise::surmise_constants(k, lambda));
    const bool ok = d2 < kSmallMatrixDelta2;
    good += ok;
    o.pass &= ok;
    detail(k.name() + " lambda=" + fmt(lambda) + ": Delta2 = " + fmt(d2, 4) + " over " + std::to_string(count) + " matrices");
  }
  o.summary = std::to_string(good) + "/8 kinds match their small-matrix Monte Carlo";
  return o;
}

// ---------------------------------------------------------------------------------------------

struct FitRun {
  fit::FitResult fit;
  std::size_t spacings = 0;
};

FitRun fit_transition(const setups::Transition& t, TransitionKind fit_kind, std::size_t count, std::uint64_t seed) {
  const auto batch = ensembles::sample_spectra(t.spec, count, seed, t.collapse);
  const auto sample = spectra::extract_spacings(batch, setups::central_window(t.spec.base), t.family);
  return {fit::fit_lambda(spectra::histogram(sample), fit_kind), sample.count};
}

Outcome large_matrix_fits() {
  Outcome o;
  int good = 0, total = 0;
  for (const auto& k : TransitionKind::transitions())
    for (double cap : {0.1, 0.4}) {
      const auto t = setups::transition_setup(k, 200, cap);
      const auto r = fit_transition(t, k, 10000, 4000 + 10 * std::uint64_t(k.tag()) + (cap > 0.2));
      const double l = r.fit.lambda_star;
      bool ok = r.fit.delta2 <= kLargeFitDelta2 && l >= 0.5 * cap && l <= 2.0 * cap;
      if (cap > 0.2) ok &= l <= cap;
      ++total;
      good += ok;
      o.pass &= ok;
      detail(k.name() + " Lambda=" + fmt(cap) + ": lambda* = " + fmt(l, 4) + ", Delta2 = " + fmt(r.fit.delta2, 4) + ", " +
             std::to_string(r.spacings) + " spacings" + (ok ? "" : "  <-- out of bounds"));
    }
  o.summary = std::to_string(good) + "/" + std::to_string(total) + " fits with Delta2 <= 0.03 and lambda* within bounds";
  return o;
}

Outcome density_linearity() {
  Outcome o;
  std::map<int, double> quality;
  for (Tag tag : {Tag::PoissonToGUE, Tag::PoissonToGOE, Tag::PoissonToGSE}) {
    const TransitionKind k(tag);
    constexpr int n = 300;
    constexpr double alpha = 0.1;
    auto t = setups::transition_setup(k, n, 0.0, ensembles::DensityProfile::cubic(n));
    t.spec.scaling = ensembles::Raw{alpha};
    const auto batch = ensembles::sample_spectra(t.spec, 20000, 5000 + std::uint64_t(tag), t.collapse);
    fit::ScanOptions opt;
    opt.windows = 20;
    const auto range = setups::scan_range(t.spec.base);
    opt.lo = range.lo;
    opt.hi = range.hi;
    const auto r = fit::density_coupling_scan(batch, k, opt);
    quality[k.perturbation_beta()] = r.linear.delta2_rel;
    std::ostringstream pts;
    for (std::size_t i = 0; i < r.scan.windows.size(); ++i) pts << " (" << fmt(r.scan.rho[i], 3) << ", " << fmt(r.scan.lambda_fit[i], 3) << ")";
    detail(k.name() + ": slope = " + fmt(r.linear.slope, 4) + " [" + fmt(r.linear.ci_lo, 4) + ", " + fmt(r.linear.ci_hi, 4) +
           "], delta2 = " + fmt(r.linear.delta2_rel, 4) + ", excluded " + std::to_string(r.excluded.size()) + " windows");
    detail("  (rho, lambda):" + pts.str());
    if (tag == Tag::PoissonToGUE) {
      const bool ok = r.linear.delta2_rel < kLinearDelta2 && r.linear.slope < alpha;
      o.pass &= ok;
      detail(std::string("GUE scan: delta2 < 0.1 and slope < alpha: ") + (ok ? "yes" : "no"));
    }
  }
  const bool order = quality[4] < quality[2] && quality[2] < quality[1];
  detail(std::string("ordering delta2(GSE) < delta2(GUE) < delta2(GOE): ") + (order ? "yes" : "no"));
  o.pass &= order;
  o.summary = "Poisson(cubic) scans, delta2 GOE/GUE/GSE = " + fmt(quality[1], 3) + "/" + fmt(quality[2], 3) + "/" +
              fmt(quality[4], 3);
  return o;
}

// ---------------------------------------------------------------------------------------------

Outcome gse_gue_split() {
  Outcome o;
  const TransitionKind s2(Tag::GSEToGUE_S2);
  for (double cap : {0.1, 1.0}) {
    auto t = setups::transition_setup(s2, 200, cap);
    const auto batch = ensembles::sample_spectra(t.spec, 5000, 6000 + std::uint64_t(cap * 10), false);
    const auto w = setups::central_window(t.spec.base);
    const auto h1 = spectra::histogram(spectra::extract_spacings(batch, w, spectra::SpacingFamily::S1));
    const double d1 = delta2_to_wigner(h1, 2);
    const auto f2 = fit::fit_lambda(spectra::histogram(spectra::extract_spacings(batch, w, spectra::SpacingFamily::S2)), s2);
    const bool ok1 = d1 < kS1Delta2, ok2 = f2.delta2 < kS2Delta2;
    o.pass &= ok1 && ok2;
    detail("Lambda=" + fmt(cap) + ": S1 vs GUE surmise Delta2 = " + fmt(d1, 4) + (ok1 ? "" : "  <-- above 0.02") +
           "; S2 fit lambda* = " + fmt(f2.lambda_star, 4) + ", Delta2 = " + fmt(f2.delta2, 4) + (ok2 ? "" : "  <-- above 0.03"));
  }
  o.summary = "GSE broken by a non-self-dual GUE: S1 vs GUE surmise and S2 fits";
  return o;
}

Outcome goe_rescaling() {
  Outcome o;
  const TransitionKind s2(Tag::GSEToGUE_S2);
  constexpr double cap = 0.1;
  const auto goe = setups::transition_setup(s2, 200, cap, ensembles::DensityProfile::gaussian(), 1);
  const auto gue = setups::transition_setup(s2, 200, cap / std::sqrt(2.0), ensembles::DensityProfile::gaussian(), 2);
  const auto w = setups::central_window(goe.spec.base);
  const auto a = ensembles::sample_spectra(goe.spec, 5000, 7001, false);
  const auto b = ensembles::sample_spectra(gue.spec, 5000, 7002, false);
  const auto ha = spectra::histogram(spectra::extract_spacings(a, w, spectra::SpacingFamily::S2));
  const auto hb = spectra::histogram(spectra::extract_spacings(b, w, spectra::SpacingFamily::S2));
  const double d2 = fit::delta2(ha, hb);
  o.pass = d2 < kRescaleDelta2;
  detail("alpha_GOE = " + fmt(ensembles::coupling_alpha(goe.spec), 4) + ", alpha_GUE = " +
         fmt(ensembles::coupling_alpha(gue.spec), 4) + ": two-sample S2 Delta2 = " + fmt(d2, 4));
  o.summary = "H4 + alpha H1 vs H4 + (alpha/sqrt2) H2, S2 Delta2 = " + fmt(d2, 3);
  return o;
}

Outcome two_stage() {
  Outcome o;
  std::vector<double> lambdas;
  for (double cap : {2.0, 5.0, 10.0}) {
    auto t = setups::transition_setup(TransitionKind(Tag::GSEToGUE_S1), 200, cap, ensembles::DensityProfile::gaussian(), 1);
    t.family = spectra::SpacingFamily::All;
    const auto r = fit_transition(t, TransitionKind(Tag::GOEToGUE), 3000, 8000 + std::uint64_t(cap));
    lambdas.push_back(r.fit.lambda_star);
    detail("Lambda=" + fmt(cap) + ": GOEToGUE lambda* = " + fmt(r.fit.lambda_star, 4) + ", Delta2 = " + fmt(r.fit.delta2, 4));
  }
  o.pass = lambdas[0] > lambdas[1] && lambdas[1] > lambdas[2];
  o.summary = "GSE + GOE all-spacings fits, lambda* decreasing in Lambda: " + std::string(o.pass ? "yes" : "no");
  return o;
}

// ---------------------------------------------------------------------------------------------

Outcome asymptotes() {
  Outcome o;
  for (const auto& k : TransitionKind::transitions())
    for (double l : {0.3, 0.5, 1.5}) {
      const auto p = surmise::surmise_constants(k, l);
      const double s1 = 1e-4 * std::min(1.0, l);
      const double slope = std::log(surmise::transition_density(p, 2.0 * s1) / surmise::transition_density(p, s1)) / std::log(2.0);
      const int beta = k.perturbation_beta();
      const bool ok_small = std::abs(slope - beta) <= kSlopeTol * beta;

      const auto form = surmise::large_s_form(p);
      std::vector<double> grid;
      for (double s = 0.25; s <= 400.0 && form(s) > 1e-250; s += 0.25) grid.push_back(s);
      std::size_t first = grid.size();
      while (first > 0 && std::abs(surmise::transition_density(p, grid[first - 1]) / form(grid[first - 1]) - 1.0) < kRatioTol)
        --first;
      // The tail must be a genuine range, not just the last grid point.
      const bool ok_large = first + 8 <= grid.size();
      o.pass &= ok_small && ok_large;
      detail(k.name() + " lambda=" + fmt(l) + ": small-s slope " + fmt(slope, 6) + " (beta' = " + std::to_string(beta) +
             "), large-s ratio within 5% from s* = " + (ok_large ? fmt(grid[first], 4) : std::string("none")) + " to " +
             fmt(grid.back(), 4) + ((ok_small && ok_large) ? "" : "  <-- fails"));
    }
  o.summary = "small-s powers and large-s tails of the six transitions";
  return o;
}

Outcome self_dual_gue() {
  Outcome o;
  constexpr int n = 100;
  constexpr std::size_t count = 10000;
  ensembles::EnsembleSpec gue;
  gue.beta = 2;
  gue.n = n;
  struct Item {
    ensembles::Spectrum spectrum;
    double defect = 0.0;
  };
  const auto built = ensembles::parallel_batch(count, 10001, [&](std::size_t, Rng& rng) {
    const auto m = ensembles::make_self_dual(ensembles::sample_gaussian(gue, rng), ensembles::SelfDualMode::GUEPermutation);
    return Item{ensembles::eigenvalues(m, true), ensembles::self_duality_defect(m)};
  });
  double worst = 0.0;
  std::vector<ensembles::Spectrum> collapsed;
  for (const auto& it : built) {
    worst = std::max(worst, it.defect);
    collapsed.push_back(it.spectrum);
  }
  const auto direct = ensembles::sample_spectra(gue, count, 10002, false);
  const auto w = setups::central_window(gue);
  const auto ha = spectra::histogram(spectra::extract_spacings(collapsed, w, spectra::SpacingFamily::All));
  const auto hb = spectra::histogram(spectra::extract_spacings(direct, w, spectra::SpacingFamily::All));
  const double d2 = fit::delta2(ha, hb);
  o.pass = worst == 0.0 && d2 < kSelfDualDelta2;
  detail("max self-duality defect " + fmt(worst, 3) + " over " + std::to_string(count) + " matrices");
  detail("collapsed 2N x 2N vs direct N x N spacing histograms: Delta2 = " + fmt(d2, 4));
  o.summary = "self-dual GUE: exact self-duality and Delta2 = " + fmt(d2, 3);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"surmise normalization", normalization},
      {"Gibbs constants", gibbs},
      {"small-matrix oracle", small_matrix_oracle},
      {"large-matrix fits", large_matrix_fits},
      {"density-coupling linearity", density_linearity},
      {"GSE to GUE without self-duality", gse_gue_split},
      {"GOE perturbation rescaling", goe_rescaling},
      {"two-stage GSE to GOE", two_stage},
      {"asymptote suites", asymptotes},
      {"self-dual GUE construction", self_dual_gue},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && std::size_t(only) != i + 1) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << r.summary
              << " [" << fmt(secs, 3) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
