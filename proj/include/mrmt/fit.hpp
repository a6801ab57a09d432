#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mrmt/spectra.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::fit {

using spectra::Histogram;
using surmise::TransitionKind;

// lambda_i = 0.01 * 1000^((i - 1) / 999), i = 1..1000, framed by the pure endpoints:
// index 0 holds 0 and index 1001 holds +inf.
class LambdaGrid {
 public:
  static constexpr std::size_t kInterior = 1000;
  static const std::vector<double>& values();
  static std::size_t size() { return kInterior + 2; }
};

struct GridPoint {
  double lambda = 0.0;
  double delta2 = 0.0;
};

struct FitResult {
  TransitionKind kind = TransitionKind::pure(0);
  double lambda_star = 0.0;  // 0 or inf for the pure endpoints
  std::size_t grid_index = 0;
  double delta2 = 0.0;
  std::vector<GridPoint> neighbors;
  std::vector<double> invalid_lambdas;

  bool at_endpoint() const { return grid_index == 0 || grid_index + 1 == LambdaGrid::size(); }
};

struct LinearFit {
  double slope = 0.0;
  double delta2_rel = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t points = 0;
  std::size_t resamples = 0;
};

struct ScanResult {
  spectra::DensityScan scan;
  std::vector<FitResult> window_fits;  // one per window, default-constructed when excluded
  std::vector<std::size_t> excluded;   // window indices without a usable sample or fit
  LinearFit linear;
};

// Discrete L2 distance sqrt(sum_i [h_i - P(s_i)]^2 w_i) over bin centers s_i.
double delta2(const Histogram& hist, const std::function<double(double)>& density);
double delta2(const Histogram& a, const Histogram& b);

// Density of `kind` at every bin center for grid point `index`, cached per (kind, index, binning).
std::vector<double> density_table(TransitionKind kind, std::size_t index, const Histogram& binning);

FitResult fit_lambda(const Histogram& hist, TransitionKind kind);
std::vector<FitResult> rank_kinds(const Histogram& hist, const std::vector<TransitionKind>& kinds);

LinearFit linear_fit_through_origin(const std::vector<std::pair<double, double>>& rho_lambda,
                                    std::size_t resamples = 10000, std::uint64_t seed = 12345);

struct ScanOptions {
  std::size_t windows = 35;
  double lo = 0.0;
  double hi = 0.0;
  spectra::SpacingFamily family = spectra::SpacingFamily::All;
  std::size_t bins = spectra::kDefaultBins;
  double s_max = spectra::kDefaultSMax;
};

ScanResult density_coupling_scan(const std::vector<spectra::Spectrum>& batch, TransitionKind kind, const ScanOptions& options);

}  // namespace mrmt::fit
