#include "mrmt/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"
#include "mrmt/parallel.hpp"

namespace mrmt::fit {

namespace {

using Table = std::shared_ptr<const std::vector<double>>;

// Kind, grid index and the bit patterns of the bin edges.
using CacheKey = std::tuple<int, int, std::size_t, std::vector<std::uint64_t>>;

std::vector<std::uint64_t> binning_key(const Histogram& h) {
  std::vector<std::uint64_t> key(h.edges.size());
  for (std::size_t i = 0; i < h.edges.size(); ++i) std::memcpy(&key[i], &h.edges[i], sizeof(double));
  return key;
}

class TableCache {
 public:
  Table find(const CacheKey& k) {
    std::lock_guard lock(mutex_);
    const auto it = tables_.find(k);
    return it == tables_.end() ? nullptr : it->second;
  }
  void store(const CacheKey& k, Table t) {
    std::lock_guard lock(mutex_);
    tables_[k] = std::move(t);
  }

 private:
  std::mutex mutex_;
  std::map<CacheKey, Table> tables_;
};

TableCache& cache() {
  static TableCache c;
  return c;
}

Table cached_table(TransitionKind kind, std::size_t index, const Histogram& binning,
                   const std::vector<std::uint64_t>& bkey) {
  const CacheKey key{static_cast<int>(kind.tag()), kind.is_pure() ? kind.beta() : -1, index, bkey};
  if (auto t = cache().find(key)) return t;
  const double lambda = LambdaGrid::values().at(index);
  auto table = std::make_shared<std::vector<double>>(binning.bins());
  if (index == 0 || index + 1 == LambdaGrid::size() || kind.is_pure()) {
    for (std::size_t i = 0; i < binning.bins(); ++i)
      (*table)[i] = surmise::density_with_endpoints(kind, lambda, binning.center(i));
  } else {
    const auto params = surmise::surmise_constants(kind, lambda);
    for (std::size_t i = 0; i < binning.bins(); ++i) (*table)[i] = surmise::transition_density(params, binning.center(i));
  }
  // Concurrent misses compute identical values, so the last store wins harmlessly.
  cache().store(key, table);
  return table;
}

}  // namespace

const std::vector<double>& LambdaGrid::values() {
  static const std::vector<double> grid = [] {
    std::vector<double> v;
    v.reserve(kInterior + 2);
    v.push_back(0.0);
    for (std::size_t i = 1; i <= kInterior; ++i) v.push_back(0.01 * std::pow(1000.0, double(i - 1) / double(kInterior - 1)));
    v.push_back(std::numeric_limits<double>::infinity());
    return v;
  }();
  return grid;
}

double delta2(const Histogram& hist, const std::function<double(double)>& density) {
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    const double d = hist.densities[i] - density(hist.center(i));
    sum += d * d * hist.width(i);
  }
  return std::sqrt(sum);
}

double delta2(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw DomainError("histograms must share their binning");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    const double d = a.densities[i] - b.densities[i];
    sum += d * d * a.width(i);
  }
  return std::sqrt(sum);
}

std::vector<double> density_table(TransitionKind kind, std::size_t index, const Histogram& binning) {
  return *cached_table(kind, index, binning, binning_key(binning));
}

FitResult fit_lambda(const Histogram& hist, TransitionKind kind) {
  if (hist.bins() == 0) throw DomainError("fit_lambda needs a non-empty histogram");
  const auto& grid = LambdaGrid::values();
  const std::size_t n = grid.size();
  const auto bkey = binning_key(hist);
  std::vector<double> d2(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n, [&](std::size_t k) {
    try {
      const auto table = cached_table(kind, k, hist, bkey);
      double sum = 0.0;
      for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double d = hist.densities[i] - (*table)[i];
        sum += d * d * hist.width(i);
      }
      d2[k] = std::sqrt(sum);
    } catch (const ConvergenceError&) {
    } catch (const NumericalError&) {
    }
  });
  FitResult r;
  r.kind = kind;
  std::size_t best = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(d2[k])) {
      r.invalid_lambdas.push_back(grid[k]);
      continue;
    }
    if (best == n || d2[k] < d2[best]) best = k;
  }
  if (best == n) throw NumericalError("no grid point of " + kind.name() + " could be evaluated");
  r.grid_index = best;
  r.lambda_star = grid[best];
  r.delta2 = d2[best];
  for (std::size_t k : {best - 1, best + 1})
    if (k < n && std::isfinite(d2[k])) r.neighbors.push_back({grid[k], d2[k]});
  return r;
}

std::vector<FitResult> rank_kinds(const Histogram& hist, const std::vector<TransitionKind>& kinds) {
  std::vector<FitResult> out;
  for (const auto& k : kinds) out.push_back(fit_lambda(hist, k));
  std::stable_sort(out.begin(), out.end(), [](const FitResult& a, const FitResult& b) { return a.delta2 < b.delta2; });
  return out;
}

LinearFit linear_fit_through_origin(const std::vector<std::pair<double, double>>& pts, std::size_t resamples,
                                    std::uint64_t seed) {
  if (pts.size() < 3) throw DomainError("a linear fit needs at least 3 points");
  double srr = 0.0, srl = 0.0, sl = 0.0;
  for (const auto& [rho, lambda] : pts) {
    if (!std::isfinite(rho) || !std::isfinite(lambda)) throw DomainError("linear fit points must be finite");
    if (rho < 0.0) throw DomainError("densities must be non-negative");
    srr += rho * rho;
    srl += rho * lambda;
    sl += lambda;
  }
  if (!(srr > 0.0)) throw DomainError("all densities vanish; the slope is undefined");
  for (const auto& p : pts)
    if (!(p.first > 0.0)) throw DomainError("linear fit needs positive densities");

  LinearFit f;
  f.points = pts.size();
  f.slope = srl / srr;
  const double n = double(pts.size());
  double ss = 0.0;
  for (const auto& [rho, lambda] : pts) ss += (lambda - f.slope * rho) * (lambda - f.slope * rho);
  const double mean = sl / n;
  f.delta2_rel = ss == 0.0 ? 0.0 : std::sqrt(ss / n) / mean;

  // Percentile interval from resampling the windows with replacement.
  f.resamples = resamples;
  if (resamples > 0) {
    ensembles::Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::vector<double> slopes;
    slopes.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
      double a = 0.0, c = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[pick(rng.engine())];
        a += p.first * p.second;
        c += p.first * p.first;
      }
      slopes.push_back(a / c);
    }
    std::sort(slopes.begin(), slopes.end());
    auto quantile = [&](double q) {
      const double pos = q * double(slopes.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double t = pos - double(i);
      return i + 1 < slopes.size() ? slopes[i] * (1.0 - t) + slopes[i + 1] * t : slopes.back();
    };
    f.ci_lo = quantile(0.025);
    f.ci_hi = quantile(0.975);
  } else {
    f.ci_lo = f.ci_hi = f.slope;
  }
  return f;
}

ScanResult density_coupling_scan(const std::vector<spectra::Spectrum>& batch, TransitionKind kind, const ScanOptions& o) {
  if (o.windows < 2) throw DomainError("a density scan needs at least 2 windows");
  ScanResult r;
  r.scan = spectra::local_density(batch, o.windows, o.lo, o.hi);
  r.window_fits.resize(o.windows);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < o.windows; ++i) {
    if (r.scan.empty[i]) {
      r.excluded.push_back(i);
      continue;
    }
    try {
      const auto sample = spectra::extract_spacings(batch, r.scan.windows[i], o.family);
      const auto hist = spectra::histogram(sample, o.bins, o.s_max);
      r.window_fits[i] = fit_lambda(hist, kind);
    } catch (const EmptySampleError&) {
      r.excluded.push_back(i);
      continue;
    } catch (const NumericalError&) {
      r.excluded.push_back(i);
      continue;
    }
    r.scan.lambda_fit[i] = r.window_fits[i].lambda_star;
    // Windows that land on the lambda = inf endpoint carry no finite coupling.
    if (std::isfinite(r.scan.lambda_fit[i]))
      pts.emplace_back(r.scan.rho[i], r.scan.lambda_fit[i]);
    else
      r.excluded.push_back(i);
  }
  r.linear = linear_fit_through_origin(pts);
  return r;
}

}  // namespace mrmt::fit
