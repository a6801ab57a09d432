#include "mrmt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"
#include "mrmt/fit.hpp"
#include "mrmt/setups.hpp"
#include "mrmt/spectra.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using surmise::TransitionKind;
using Tag = TransitionKind::Tag;

constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinities; the pure endpoints are written as strings.
json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw DomainError("cannot read " + what + " '" + text + "'");
  return v;
}

spectra::Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("window must look like lo:hi, got '" + text + "'");
  const spectra::Window w{parse_real(text.substr(0, colon), "window bound"), parse_real(text.substr(colon + 1), "window bound")};
  if (!(w.lo < w.hi)) throw DomainError("window needs lo < hi");
  return w;
}

std::string header(const json& config) {
  return "# mixrmt " + std::string(MRMT_VERSION) + "\n# config " + config.dump() + "\n";
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw DomainError("cannot write " + (dir / name).string());
  f << content;
}

json document(const json& config) {
  json doc;
  doc["version"] = MRMT_VERSION;
  doc["config"] = config;
  return doc;
}

json fit_json(const fit::FitResult& r) {
  json j;
  j["kind"] = r.kind.name();
  j["lambda_star"] = number(r.lambda_star);
  j["grid_index"] = r.grid_index;
  j["delta2"] = r.delta2;
  j["at_endpoint"] = r.at_endpoint();
  if (r.at_endpoint()) {
    const auto pure = r.grid_index == 0 ? r.kind.zero_limit() : TransitionKind::pure(r.kind.perturbation_beta());
    // Beyond lambda = inf the S1/S2 densities do not reduce to a Wigner surmise.
    j["effective_kind"] = r.kind.is_gse_gue() && r.grid_index != 0 ? r.kind.name() : pure.name();
  }
  json nb = json::array();
  for (const auto& n : r.neighbors) nb.push_back({{"lambda", number(n.lambda)}, {"delta2", n.delta2}});
  j["neighbors"] = nb;
  json bad = json::array();
  for (double l : r.invalid_lambdas) bad.push_back(number(l));
  j["invalid_lambdas"] = bad;
  return j;
}

ensembles::DensityProfile parse_profile(const std::string& name, int n) {
  if (name == "gaussian") return ensembles::DensityProfile::gaussian();
  if (name == "cubic") return ensembles::DensityProfile::cubic(n);
  throw DomainError("unknown density profile '" + name + "' (gaussian or cubic)");
}

struct Preset {
  int n;
  std::size_t count;
};

// Desk scale by default; the paper scale uses its dimensions and batch sizes.
Preset preset_for(const std::string& preset, bool scan, int perturbation_beta) {
  if (preset == "desk") return {200, 10000};
  if (preset == "paper") {
    if (!scan) return {400, 50000};
    return {perturbation_beta == 4 ? 800 : 600, 100000};
  }
  throw DomainError("unknown preset '" + preset + "' (desk or paper)");
}

// Seconds for one sample-and-diagonalize step, timed on this machine.
double seconds_per_matrix(const ensembles::MixedSpec& spec, bool collapse) {
  ensembles::Rng rng(0);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 2; ++i) (void)ensembles::eigenvalues(ensembles::build_mixed(spec, rng), collapse);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 2.0;
}

double fit_table_seconds(const TransitionKind& kind) { return kind.is_gse_gue() ? 900.0 : 5.0; }

void enforce_budget(double estimate, double budget) {
  if (budget > 0.0 && estimate > budget) {
    std::ostringstream msg;
    msg << "estimated run time " << fmt(std::round(estimate)) << " s exceeds the budget of " << fmt(budget)
        << " s; raise --budget or reduce --count / --n";
    throw BudgetError(msg.str());
  }
}

spectra::SpacingFamily family_for(const TransitionKind& kind, const std::optional<std::string>& parity) {
  if (!kind.is_gse_gue()) return spectra::SpacingFamily::All;
  if (!parity) throw DomainError(kind.name() + " needs --parity even|odd to tell intra-pair from inter-pair spacings");
  if (*parity != "even" && *parity != "odd") throw DomainError("--parity must be even or odd");
  const bool s1 = kind.tag() == Tag::GSEToGUE_S1;
  // With even parity the spacing starting at eigenvalue 0 lies inside a Kramers pair.
  return (*parity == "even") == s1 ? spectra::SpacingFamily::S1 : spectra::SpacingFamily::S2;
}

// ---------------------------------------------------------------------------------------------

struct EvalArgs {
  std::string kind;
  std::vector<std::string> lambdas;
  double s_max = 4.0;
  std::size_t points = 401;
  bool asymptotes = false;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto kind = TransitionKind::parse(a.kind);
  if (a.points < 2) throw DomainError("--points must be at least 2");
  if (!(a.s_max > 0.0)) throw DomainError("--s-max must be positive");
  std::vector<double> lambdas;
  for (const auto& t : a.lambdas) lambdas.push_back(parse_real(t, "lambda"));
  if (kind.is_pure()) lambdas = {0.0};
  if (lambdas.empty()) throw DomainError(kind.name() + " needs --lambda");
  if (kind.is_pure() && a.asymptotes) throw DomainError("asymptote columns exist only for mixed kinds");

  for (double lambda : lambdas) {
    if (std::isnan(lambda) || lambda < 0.0) throw DomainError("lambda must be >= 0");
    json config{{"command", "eval"}, {"kind", kind.name()}, {"s_max", a.s_max}, {"points", a.points},
                {"asymptotes", a.asymptotes}};
    if (!kind.is_pure()) config["lambda"] = number(lambda);
    std::string text = header(config);
    std::optional<surmise::AsymptoteReport> rep;
    if (a.asymptotes) {
      if (lambda == 0.0 || std::isinf(lambda)) throw DomainError("asymptotes need 0 < lambda < inf");
      rep = surmise::small_s_asymptote(kind, lambda);
      text += "# small-s: " + fmt(rep->small_s_coefficient) + " s^" + std::to_string(rep->small_s_power) +
              "; large-s: " + rep->large_s.description + "\n";
    }
    text += a.asymptotes ? "# s P(s) small_s large_s\n" : "# s P(s)\n";
    for (std::size_t i = 0; i < a.points; ++i) {
      const double s = a.s_max * double(i) / double(a.points - 1);
      text += fmt(s) + " " + fmt(surmise::density_with_endpoints(kind, lambda, s));
      if (rep) text += " " + fmt(rep->small_s_coefficient * std::pow(s, rep->small_s_power)) + " " + fmt(rep->large_s(s));
      text += "\n";
    }
    if (a.out.empty()) {
      out << text;
    } else {
      const std::string name = "eval_" + kind.name() + (kind.is_pure() ? "" : "_lambda" + fmt(lambda)) + ".dat";
      write_file(a.out, name, text);
      out << "wrote " << (fs::path(a.out) / name).string() << "\n";
    }
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------------------------

struct RunArgs {
  std::string kind = "PoissonToGUE";
  std::optional<double> capital_lambda;
  std::optional<double> alpha;
  int n = 0;
  std::size_t count = 0;
  std::string window;
  std::size_t bins = spectra::kDefaultBins;
  double s_max = spectra::kDefaultSMax;
  std::uint64_t seed = 1;
  std::string family;
  std::string fit_kind;
  std::string gse_perturbation = "gue";
  std::string profile;
  std::string preset = "desk";
  double budget = 3600.0;
  std::string out;
  std::string save_spectra;
  std::size_t windows = 35;
  std::string range;
  bool n_given = false, count_given = false;
};

struct Prepared {
  TransitionKind kind = TransitionKind::pure(0);
  setups::Transition setup;
  int n = 0;
  std::size_t count = 0;
  json config;
};

Prepared prepare(const RunArgs& a, bool scan) {
  Prepared p;
  p.kind = TransitionKind::parse(a.kind);
  if (p.kind.is_pure()) throw DomainError("--kind must be a mixed kind");
  if (a.capital_lambda.has_value() == a.alpha.has_value())
    throw DomainError("give exactly one of --capital-lambda and --alpha");
  const double coupling = a.capital_lambda ? *a.capital_lambda : *a.alpha;
  if (!std::isfinite(coupling) || coupling < 0.0) throw DomainError("the coupling must be finite and >= 0");
  if (a.gse_perturbation != "gue" && a.gse_perturbation != "goe") throw DomainError("--gse-perturbation must be goe or gue");

  const auto preset = preset_for(a.preset, scan, p.kind.perturbation_beta());
  p.n = a.n_given ? a.n : preset.n;
  p.count = a.count_given ? a.count : preset.count;
  if (p.count == 0) throw DomainError("--count must be positive");
  if (p.n < 2) throw DomainError("--n must be at least 2");
  if (a.bins < 10) throw DomainError("--bins must be at least 10");
  if (!(a.s_max > 0.0)) throw DomainError("--s-max must be positive");

  const std::string profile = a.profile.empty() ? (scan ? "cubic" : "gaussian") : a.profile;
  p.setup = setups::transition_setup(p.kind, p.n, a.capital_lambda.value_or(0.0), parse_profile(profile, p.n),
                                     a.gse_perturbation == "goe" ? 1 : 2);
  if (a.alpha) p.setup.spec.scaling = ensembles::Raw{*a.alpha};
  if (!a.family.empty()) p.setup.family = spectra::parse_family(a.family);

  p.config = json{{"command", scan ? "density-scan" : "transition"}, {"kind", p.kind.name()}};
  if (a.capital_lambda) p.config["capital_lambda"] = *a.capital_lambda;
  p.config["alpha"] = ensembles::coupling_alpha(p.setup.spec);
  p.config["scaling"] = a.alpha ? "raw" : "density-matched";
  p.config["n"] = p.n;
  p.config["count"] = p.count;
  p.config["preset"] = a.preset;
  if (p.setup.spec.base.beta == 0) p.config["profile"] = profile;
  if (p.kind.is_gse_gue()) p.config["gse_perturbation"] = a.gse_perturbation;
  p.config["family"] = spectra::family_name(p.setup.family);
  p.config["collapse_kramers_pairs"] = p.setup.collapse;
  p.config["bins"] = a.bins;
  p.config["s_max"] = a.s_max;
  p.config["seed"] = a.seed;
  p.config["budget_seconds"] = a.budget;
  return p;
}

std::vector<spectra::Spectrum> run_batch(const Prepared& p, const RunArgs& a, double fit_seconds, std::ostream& out) {
  const double estimate = double(p.count) * seconds_per_matrix(p.setup.spec, p.setup.collapse) /
                              double(std::max(1u, std::thread::hardware_concurrency())) +
                          fit_seconds;
  enforce_budget(estimate, a.budget);
  out << "sampling " << p.count << " matrices of dimension " << p.setup.spec.base.matrix_dimension() << " (about "
      << fmt(std::round(estimate)) << " s)\n";
  auto batch = ensembles::sample_spectra(p.setup.spec, p.count, a.seed, p.setup.collapse);
  if (!a.save_spectra.empty()) spectra::write_spectrum_file(a.save_spectra, batch);
  return batch;
}

int cmd_transition(const RunArgs& a, std::ostream& out) {
  auto p = prepare(a, false);
  const auto fit_kind = a.fit_kind.empty() ? p.kind : TransitionKind::parse(a.fit_kind);
  const auto window = a.window.empty() ? setups::central_window(p.setup.spec.base) : parse_window(a.window);
  p.config["fit_kind"] = fit_kind.name();
  p.config["window"] = {window.lo, window.hi};

  const auto batch = run_batch(p, a, fit_kind.is_pure() ? 0.0 : fit_table_seconds(fit_kind), out);
  const auto sample = spectra::extract_spacings(batch, window, p.setup.family);
  const auto hist = spectra::histogram(sample, a.bins, a.s_max);

  auto doc = document(p.config);
  doc["spacings"] = sample.count;
  doc["raw_mean_spacing"] = sample.raw_mean;
  doc["overflow_fraction"] = hist.overflow_fraction();

  std::function<double(double)> overlay;
  if (fit_kind.is_pure()) {
    overlay = [b = fit_kind.beta()](double s) { return surmise::wigner_density(b, s); };
    doc["reference"] = {{"kind", fit_kind.name()}, {"delta2", fit::delta2(hist, overlay)}};
    out << fit_kind.name() << ": Delta2 = " << fmt(doc["reference"]["delta2"].get<double>()) << "\n";
  } else {
    const auto r = fit::fit_lambda(hist, fit_kind);
    doc["fit"] = fit_json(r);
    overlay = [fit_kind, l = r.lambda_star](double s) { return surmise::density_with_endpoints(fit_kind, l, s); };
    out << fit_kind.name() << ": lambda* = " << fmt(r.lambda_star) << ", Delta2 = " << fmt(r.delta2) << "\n";
  }

  std::string table = header(p.config) + "# s_lo s_hi s P_measured P_fit\n";
  for (std::size_t i = 0; i < hist.bins(); ++i)
    table += fmt(hist.edges[i]) + " " + fmt(hist.edges[i + 1]) + " " + fmt(hist.center(i)) + " " + fmt(hist.densities[i]) +
             " " + fmt(overlay(hist.center(i))) + "\n";
  if (!a.out.empty()) {
    write_file(a.out, "histogram.dat", table);
    write_file(a.out, "fit.json", doc.dump(2) + "\n");
    out << "wrote " << (fs::path(a.out) / "histogram.dat").string() << " and fit.json\n";
  }
  return kSuccess;
}

int cmd_density_scan(const RunArgs& a, std::ostream& out) {
  if (a.windows < 2) throw DomainError("a density scan needs --windows >= 2");
  auto p = prepare(a, true);
  const auto range = a.range.empty() ? setups::scan_range(p.setup.spec.base) : parse_window(a.range);
  p.config["windows"] = a.windows;
  p.config["range"] = {range.lo, range.hi};

  const auto batch = run_batch(p, a, fit_table_seconds(p.kind), out);
  fit::ScanOptions o;
  o.windows = a.windows;
  o.lo = range.lo;
  o.hi = range.hi;
  o.family = p.setup.family;
  o.bins = a.bins;
  o.s_max = a.s_max;
  const auto r = fit::density_coupling_scan(batch, p.kind, o);

  const double alpha = ensembles::coupling_alpha(p.setup.spec);
  const double sbar = surmise::unnormalized_mean_spacing(p.setup.spec.base.beta);
  auto doc = document(p.config);
  doc["linear_fit"] = {{"slope", r.linear.slope},
                       {"delta2_rel", r.linear.delta2_rel},
                       {"ci95", {r.linear.ci_lo, r.linear.ci_hi}},
                       {"ci_method", "bootstrap over windows"},
                       {"resamples", r.linear.resamples},
                       {"points", r.linear.points}};
  // lambda = sbar * rho * alpha predicts slope alpha * sbar.
  doc["expected_slope"] = alpha * sbar;
  doc["alpha_fit"] = r.linear.slope / sbar;
  doc["capital_lambda_fit"] = r.linear.slope * ensembles::central_density(p.setup.spec.base);
  doc["excluded_windows"] = r.excluded;
  json windows = json::array();
  std::string table = header(p.config) + "# lo hi rho lambda_fit lambda_linear delta2 used\n";
  for (std::size_t i = 0; i < r.scan.windows.size(); ++i) {
    const auto& w = r.scan.windows[i];
    const bool used = std::find(r.excluded.begin(), r.excluded.end(), i) == r.excluded.end();
    json wj{{"lo", w.lo}, {"hi", w.hi}, {"rho", r.scan.rho[i]}, {"used", used}};
    if (!r.window_fits[i].kind.is_pure()) wj["fit"] = fit_json(r.window_fits[i]);
    windows.push_back(wj);
    table += fmt(w.lo) + " " + fmt(w.hi) + " " + fmt(r.scan.rho[i]) + " " + fmt(r.scan.lambda_fit[i]) + " " +
             fmt(r.linear.slope * r.scan.rho[i]) + " " + fmt(r.window_fits[i].delta2) + " " + (used ? "1" : "0") + "\n";
  }
  doc["windows"] = windows;
  out << "slope = " << fmt(r.linear.slope) << " [" << fmt(r.linear.ci_lo) << ", " << fmt(r.linear.ci_hi)
      << "], expected " << fmt(alpha * sbar) << ", delta2 = " << fmt(r.linear.delta2_rel) << ", " << r.excluded.size()
      << " windows excluded\n";
  if (!a.out.empty()) {
    write_file(a.out, "scan.dat", table);
    write_file(a.out, "scan.json", doc.dump(2) + "\n");
    out << "wrote " << (fs::path(a.out) / "scan.dat").string() << " and scan.json\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------------------------

struct GibbsArgs {
  double s_max = 20.0;
  double step = 0.05;
  std::string out;
};

int cmd_gibbs(const GibbsArgs& a, std::ostream& out) {
  if (!(a.step > 0.0) || !(a.s_max > 0.0)) throw DomainError("--step and --s-max must be positive");
  const json config{{"command", "gibbs"}, {"s_max", a.s_max}, {"step", a.step}};
  auto doc = document(config);
  json maxima = json::array();
  out << "kind s_max g_max\n";
  const std::array<TransitionKind, 3> kinds{Tag::PoissonToGOE, Tag::PoissonToGUE, Tag::PoissonToGSE};
  for (const auto& k : kinds) {
    const auto m = surmise::gibbs_maximum(k);
    maxima.push_back({{"kind", k.name()}, {"s_tilde", m.s_tilde}, {"value", m.value}});
    out << k.name() << " " << fmt(m.s_tilde) << " " << fmt(m.value) << "\n";
  }
  doc["maxima"] = maxima;
  doc["fourier_overshoot"] = surmise::fourier_gibbs_overshoot();
  out << "fourier_overshoot " << fmt(surmise::fourier_gibbs_overshoot()) << "\n";
  if (!a.out.empty()) {
    const auto n = static_cast<std::size_t>(std::floor(a.s_max / a.step + 1e-9));
    for (const auto& k : kinds) {
      std::string table = header(config) + "# s_tilde g(s_tilde)\n";
      for (std::size_t i = 0; i <= n; ++i) {
        const double st = a.step * double(i);
        table += fmt(st) + " " + fmt(surmise::gibbs_limit(k, st)) + "\n";
      }
      write_file(a.out, "gibbs_" + k.name() + ".dat", table);
    }
    write_file(a.out, "gibbs.json", doc.dump(2) + "\n");
    out << "wrote gibbs tables to " << a.out << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------------------------

struct ExternalArgs {
  std::string file;
  std::vector<std::string> kinds;
  std::string window;
  std::optional<std::string> parity;
  std::size_t bins = spectra::kDefaultBins;
  double s_max = spectra::kDefaultSMax;
  double endpoint_tolerance = 2e-3;
  std::string out;
};

int cmd_fit_external(const ExternalArgs& a, std::ostream& out) {
  std::vector<TransitionKind> kinds;
  if (a.kinds.empty())
    kinds.assign(TransitionKind::transitions().begin(), TransitionKind::transitions().end());
  else
    for (const auto& k : a.kinds) kinds.push_back(TransitionKind::parse(k));
  for (const auto& k : kinds) {
    if (k.is_pure()) throw DomainError("fit kinds must be mixed; the pure cases are the grid endpoints");
    (void)family_for(k, a.parity);
  }
  if (a.bins < 10) throw DomainError("--bins must be at least 10");
  const auto window = a.window.empty() ? spectra::Window{-kInf, kInf} : parse_window(a.window);

  const auto ingest = spectra::ingest_spectrum_file(a.file);
  if (ingest.spectra.empty()) throw EmptySampleError("no spectra in " + a.file);

  json config{{"command", "fit-external"}, {"file", a.file}};
  json names = json::array();
  for (const auto& k : kinds) names.push_back(k.name());
  config["kinds"] = names;
  config["window"] = {number(window.lo), number(window.hi)};
  if (a.parity) config["parity"] = *a.parity;
  config["bins"] = a.bins;
  config["s_max"] = a.s_max;
  config["endpoint_tolerance"] = a.endpoint_tolerance;
  auto doc = document(config);
  doc["spectra"] = ingest.spectra.size();
  doc["resorted_groups"] = ingest.resorted_groups;

  std::map<spectra::SpacingFamily, spectra::Histogram> hists;
  std::vector<fit::FitResult> results;
  for (const auto& k : kinds) {
    const auto fam = family_for(k, a.parity);
    if (!hists.count(fam)) hists[fam] = spectra::histogram(spectra::extract_spacings(ingest.spectra, window, fam), a.bins, a.s_max);
    results.push_back(fit::fit_lambda(hists.at(fam), k));
  }
  std::stable_sort(results.begin(), results.end(), [](const auto& x, const auto& y) { return x.delta2 < y.delta2; });
  json ranked = json::array();
  out << "rank kind lambda* Delta2\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    ranked.push_back(fit_json(results[i]));
    out << i + 1 << " " << results[i].kind.name() << " " << fmt(results[i].lambda_star) << " " << fmt(results[i].delta2) << "\n";
  }
  doc["ranked"] = ranked;
  // Near the grid ends every mixed family is practically a pure surmise; a pure endpoint within
  // endpoint_tolerance of the best Delta2 is preferred as the simpler description.
  std::optional<std::pair<TransitionKind, double>> best_pure;
  for (const auto& k : kinds) {
    std::vector<TransitionKind> ends{k.zero_limit()};
    if (!k.is_gse_gue()) ends.push_back(TransitionKind::pure(k.perturbation_beta()));
    const auto& h = hists.at(family_for(k, a.parity));
    for (const auto& p : ends) {
      const double d = fit::delta2(h, [b = p.beta()](double x) { return surmise::wigner_density(b, x); });
      if (!best_pure || d < best_pure->second) best_pure = {p, d};
    }
  }
  const auto best = fit_json(results.front());
  if (best_pure && best_pure->second <= results.front().delta2 + a.endpoint_tolerance) {
    doc["best"] = {{"kind", best_pure->first.name()}, {"delta2", best_pure->second},
                   {"best_mixed", best}};
  } else {
    doc["best"] = {{"kind", best.contains("effective_kind") ? best["effective_kind"] : best["kind"]},
                   {"fit_kind", best["kind"]},
                   {"lambda_star", best["lambda_star"]},
                   {"delta2", best["delta2"]}};
  }
  out << "best: " << doc["best"]["kind"].get<std::string>() << "\n";
  if (!a.out.empty()) {
    write_file(a.out, "fit_external.json", doc.dump(2) + "\n");
    out << "wrote " << (fs::path(a.out) / "fit_external.json").string() << "\n";
  }
  return kSuccess;
}

void add_run_options(CLI::App* sub, RunArgs& a, bool scan) {
  sub->add_option("--kind", a.kind, "transition kind, e.g. PoissonToGUE")->capture_default_str();
  sub->add_option("--capital-lambda,--gamma", a.capital_lambda, "density-matched coupling Lambda");
  sub->add_option("--alpha", a.alpha, "raw coupling alpha in H = H_beta + alpha H_beta'");
  sub->add_option("--n", a.n, "independent eigenvalues per matrix (preset: 200 desk)");
  sub->add_option("--count", a.count, "number of matrices (preset: 10000 desk)");
  sub->add_option("--bins", a.bins, "histogram bins")->capture_default_str();
  sub->add_option("--s-max", a.s_max, "histogram range [0, s-max]")->capture_default_str();
  sub->add_option("--seed", a.seed, "root seed of the batch")->capture_default_str();
  sub->add_option("--family", a.family, "spacing family all|s1|s2 (default from the kind)");
  sub->add_option("--gse-perturbation", a.gse_perturbation, "GSE -> GUE kinds: break the GSE with goe or gue")
      ->capture_default_str();
  sub->add_option("--profile", a.profile, std::string("Poisson density profile gaussian|cubic (default ") +
                                              (scan ? "cubic" : "gaussian") + ")");
  sub->add_option("--preset", a.preset, "desk or paper scale")->capture_default_str();
  sub->add_option("--budget", a.budget, "refuse runs estimated above this many seconds (0: no limit)")
      ->capture_default_str();
  sub->add_option("--out", a.out, "output directory");
  sub->add_option("--save-spectra", a.save_spectra, "also write the sampled spectra to this file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed random-matrix spacing distributions: evaluate, simulate and fit"};
  app.set_version_flag("--version", std::string(MRMT_VERSION));
  app.set_config("--config", "", "key = value file; options of a subcommand go in a [subcommand] section");
  app.require_subcommand(1);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "tabulate P(s) of a surmise");
  e->add_option("--kind", eval.kind, "kind, e.g. PoissonToGSE or Pure2")->required();
  e->add_option("--lambda", eval.lambdas, "coupling(s), comma separated; 0 and inf select the limits")->delimiter(',');
  e->add_option("--s-max", eval.s_max)->capture_default_str();
  e->add_option("--points", eval.points)->capture_default_str();
  e->add_flag("--asymptotes", eval.asymptotes, "add small-s and large-s asymptote columns");
  e->add_option("--out", eval.out, "output directory (default: print to stdout)");

  RunArgs tr;
  auto* t = app.add_subcommand("transition", "sample a mixed ensemble, histogram a window and fit lambda");
  add_run_options(t, tr, false);
  t->add_option("--window", tr.window, "spectral window lo:hi (default: flat center)");
  t->add_option("--fit-kind", tr.fit_kind, "kind to fit (default: --kind); a pure kind only computes Delta2");

  RunArgs sc;
  sc.kind = "PoissonToGUE";
  auto* s = app.add_subcommand("density-scan", "fit lambda in windows of varying density and fit lambda(rho)");
  add_run_options(s, sc, true);
  s->add_option("--windows", sc.windows, "number of equal windows")->capture_default_str();
  s->add_option("--range", sc.range, "scanned range lo:hi (default: from the base ensemble)");

  GibbsArgs gb;
  auto* g = app.add_subcommand("gibbs", "maxima of the small-lambda limit functions");
  g->add_option("--s-max", gb.s_max)->capture_default_str();
  g->add_option("--step", gb.step)->capture_default_str();
  g->add_option("--out", gb.out, "output directory for the g tables");

  ExternalArgs ex;
  auto* x = app.add_subcommand("fit-external", "fit and rank kinds on spectra read from a file");
  x->add_option("--file", ex.file, "spectrum file: one eigenvalue list per blank-line separated group")->required();
  x->add_option("--kinds", ex.kinds, "kinds to fit, comma separated (default: the six transitions)")->delimiter(',');
  x->add_option("--window", ex.window, "spectral window lo:hi (default: everything)");
  x->add_option("--parity", ex.parity, "even|odd: whether spacing 0 of each spectrum is intra-pair (S1/S2 kinds)");
  x->add_option("--bins", ex.bins)->capture_default_str();
  x->add_option("--endpoint-tolerance", ex.endpoint_tolerance,
                "prefer a pure surmise whose Delta2 is within this of the best mixed fit")
      ->capture_default_str();
  x->add_option("--s-max", ex.s_max)->capture_default_str();
  x->add_option("--out", ex.out, "output directory");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kSuccess : kValidation;
  }

  try {
    if (*e) return cmd_eval(eval, out);
    if (*t) {
      tr.n_given = t->get_option("--n")->count() > 0;
      tr.count_given = t->get_option("--count")->count() > 0;
      return cmd_transition(tr, out);
    }
    if (*s) {
      sc.n_given = s->get_option("--n")->count() > 0;
      sc.count_given = s->get_option("--count")->count() > 0;
      return cmd_density_scan(sc, out);
    }
    if (*g) return cmd_gibbs(gb, out);
    if (*x) return cmd_fit_external(ex, out);
  } catch (const BudgetError& be) {
    err << "refused: " << be.what() << "\n";
    return kBudget;
  } catch (const ParseError& pe) {
    err << "parse error: " << pe.what() << "\n";
    return kValidation;
  } catch (const DomainError& de) {
    err << "error: " << de.what() << "\n";
    return kValidation;
  } catch (const EmptySampleError& ee) {
    err << "error: " << ee.what() << "\n";
    return kValidation;
  } catch (const fs::filesystem_error& fe) {
    err << "error: " << fe.what() << "\n";
    return kValidation;
  } catch (const std::exception& ne) {
    err << "numerical failure: " << ne.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}

}  // namespace mrmt::cli
