#include <cmath>
#include <limits>
#include <numbers>

#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"

namespace mrmt::ensembles {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed), b = splitmix64(stream ^ 0x5851f42d4c957f2dULL);
  std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32), std::uint32_t(b), std::uint32_t(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_id_(stream), engine_(seeded_engine(seed, stream)) {}

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) { return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL)); }

DensityProfile DensityProfile::gaussian() {
  DensityProfile p;
  p.variant_ = Variant::GaussianUnitVariance;
  p.lo_ = -std::numeric_limits<double>::infinity();
  p.hi_ = std::numeric_limits<double>::infinity();
  p.pmax_ = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return p;
}

DensityProfile DensityProfile::cubic(int n) {
  if (n < 1) throw DomainError("cubic profile needs N >= 1");
  DensityProfile p;
  p.variant_ = Variant::CubicOnInterval;
  p.scale_ = n;
  p.lo_ = -0.5 * n;
  p.hi_ = 0.5 * n;
  // 1/2 + 6x^2 + 8x^3 peaks at the right end x = 1/2 with value 3.
  p.pmax_ = 3.0 / n;
  return p;
}

DensityProfile DensityProfile::tabulated(std::vector<double> theta, std::vector<double> pdf) {
  if (theta.size() < 2 || theta.size() != pdf.size()) throw DomainError("tabulated profile needs >= 2 matching points");
  double area = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i]) || !(pdf[i] >= 0.0) || !std::isfinite(pdf[i]))
      throw DomainError("tabulated profile needs finite, non-negative values");
    if (i > 0) {
      if (!(theta[i] > theta[i - 1])) throw DomainError("tabulated profile abscissae must increase");
      area += 0.5 * (pdf[i] + pdf[i - 1]) * (theta[i] - theta[i - 1]);
    }
  }
  if (std::abs(area - 1.0) > 1e-6) throw DomainError("tabulated profile is not normalized (area " + std::to_string(area) + ")");
  DensityProfile p;
  p.variant_ = Variant::Custom;
  p.lo_ = theta.front();
  p.hi_ = theta.back();
  p.pmax_ = *std::max_element(pdf.begin(), pdf.end());
  if (!(p.pmax_ > 0.0)) throw DomainError("tabulated profile vanishes everywhere");
  p.x_ = std::move(theta);
  p.p_ = std::move(pdf);
  return p;
}

double DensityProfile::pdf(double theta) const {
  switch (variant_) {
    case Variant::GaussianUnitVariance: return std::exp(-0.5 * theta * theta) / std::sqrt(2.0 * std::numbers::pi);
    case Variant::CubicOnInterval: {
      if (theta <= lo_ || theta >= hi_) return 0.0;
      const double x = theta / scale_;
      return (0.5 + 6.0 * x * x + 8.0 * x * x * x) / scale_;
    }
    case Variant::Custom: {
      if (theta < lo_ || theta > hi_) return 0.0;
      const auto it = std::upper_bound(x_.begin(), x_.end(), theta);
      if (it == x_.end()) return p_.back();
      const std::size_t i = static_cast<std::size_t>(it - x_.begin());
      const double t = (theta - x_[i - 1]) / (x_[i] - x_[i - 1]);
      return p_[i - 1] + t * (p_[i] - p_[i - 1]);
    }
  }
  return 0.0;
}

double DensityProfile::sample(Rng& rng) const {
  if (variant_ == Variant::GaussianUnitVariance) return rng.normal();
  // Rejection from the uniform proposal on the bounded support.
  for (;;) {
    const double theta = lo_ + (hi_ - lo_) * rng.uniform();
    if (rng.uniform() * pmax_ < pdf(theta)) return theta;
  }
}

std::string DensityProfile::name() const {
  switch (variant_) {
    case Variant::GaussianUnitVariance: return "gaussian";
    case Variant::CubicOnInterval: return "cubic";
    case Variant::Custom: return "tabulated";
  }
  return "";
}

}  // namespace mrmt::ensembles
