#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "mrmt/errors.hpp"
#include "mrmt/numerics/special.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::surmise {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

struct WignerConstants {
  double a, b;
};

WignerConstants wigner_constants(int beta) {
  switch (beta) {
    case 1: return {kPi / 2.0, kPi / 4.0};
    case 2: return {32.0 / (kPi * kPi), 4.0 / kPi};
    case 4: {
      const double b = 64.0 / (9.0 * kPi);
      return {b * b * b, b};
    }
    default: throw DomainError("Wigner surmise needs beta in {1, 2, 4}");
  }
}

// q(x) = [(4x^3 + 2x) e^{-x^2} + sqrt(pi) (4x^4 + 4x^2 - 1) erf(x)] / x^3
double poisson_gse_q(double x) {
  if (x < 1e-2) {
    const double x2 = x * x;
    return 32.0 / 3.0 + x2 * (32.0 / 15.0 + x2 * (-16.0 / 105.0 + x2 * (16.0 / 945.0 - x2 * 4.0 / 2079.0)));
  }
  const double x2 = x * x;
  return ((4.0 * x2 + 2.0) * x * std::exp(-x2) + kSqrtPi * (4.0 * x2 * x2 + 4.0 * x2 - 1.0) * std::erf(x)) /
         (x2 * x);
}

double poisson_gse_d(double lambda) {
  const double two_lambda = 2.0 * lambda;
  auto f = [two_lambda](double y) { return std::exp(-y) * poisson_gse_q(y / two_lambda); };
  const auto r = numerics::integrate_semi_infinite(f, {0.0, 1.0, 4.0, 12.0, 30.0}, 10.0, {1e-12, 1e-300, 2000});
  return r.value / (4.0 * kSqrtPi);
}

double goe_gse_d(double lambda) {
  double n;
  if (lambda >= 2.0) {
    // lambda - lambda^3 + (1 + lambda^2)^2 arccot(lambda) cancels for large lambda; expand in u = 1/lambda.
    const double u2 = 1.0 / (lambda * lambda);
    auto a = [](int k) { return (k % 2 ? -1.0 : 1.0) / (2.0 * k + 1.0); };
    double sum = 8.0 / 3.0, pw = 1.0;
    for (int m = 2; m < 200; ++m) {
      pw *= u2;
      const double term = (a(m) + 2.0 * a(m - 1) + a(m - 2)) * pw;
      sum += term;
      if (std::abs(term) < 1e-18 * sum) break;
    }
    n = lambda * sum;
  } else {
    const double l2 = lambda * lambda;
    n = lambda - l2 * lambda + (1.0 + l2) * (1.0 + l2) * std::atan(1.0 / lambda);
  }
  return n / (std::sqrt(2.0 * kPi) * lambda * std::sqrt(1.0 + lambda * lambda));
}

double gue_gse_d(double lambda) {
  double n;
  if (lambda >= 2.0) {
    const double u2 = 1.0 / (lambda * lambda);
    double b = 2.0 / 3.0, pw = 1.0, sum = 8.0 / 3.0;
    for (int k = 2; k < 200; ++k) {
      b *= 2.0 * k / (2.0 * k + 1.0);
      pw *= u2;
      const double term = (k % 2 ? -1.0 : 1.0) * b * pw;
      sum -= term;
      if (std::abs(term) < 1e-18 * sum) break;
    }
    n = sum;
  } else {
    const double l2 = lambda * lambda;
    n = 2.0 + l2 - l2 * l2 * std::asinh(1.0 / lambda) / std::sqrt(1.0 + l2);
  }
  return n / (lambda * kSqrtPi);
}

struct GseGueCacheKey {
  bool s2;
  std::uint64_t bits;
  bool operator<(const GseGueCacheKey& o) const { return s2 != o.s2 ? s2 < o.s2 : bits < o.bits; }
};

double gse_gue_mean(GseGueFamily family, double lambda) {
  static std::mutex mutex;
  static std::map<GseGueCacheKey, double> cache;
  GseGueCacheKey key{family == GseGueFamily::S2, 0};
  std::memcpy(&key.bits, &lambda, sizeof lambda);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const numerics::QuadratureSpec spec{1e-9, 1e-300, 2000};
  const double c = detail::gse_gue_c_scaled(lambda);
  const double w = std::isinf(lambda) ? 1.0 : std::min(lambda, 1.0);
  auto moment = [&](double S) { return S * detail::gse_gue_marginal(family, S, lambda, spec); };
  const double d = c * numerics::integrate_semi_infinite(moment, {0.0, w, 3.0 * w, 1.0, 3.0}, 1.0, spec).value;
  std::lock_guard lock(mutex);
  cache.emplace(key, d);
  return d;
}

}  // namespace

double wigner_density(int beta, double s) {
  if (!(s >= 0.0)) throw DomainError("spacing must be non-negative");
  if (beta == 0) return std::exp(-s);
  const auto [a, b] = wigner_constants(beta);
  return a * std::pow(s, beta) * std::exp(-b * s * s);
}

double unnormalized_mean_spacing(int beta) {
  switch (beta) {
    case 0: return 1.0;
    case 1: return kSqrtPi;
    case 2: return 4.0 / kSqrtPi;
    case 4: return 16.0 / (3.0 * kSqrtPi);
    default: throw DomainError("mean spacing needs beta in {0, 1, 2, 4}");
  }
}

namespace detail {

double poisson_gue_d_closed_form(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("closed form needs finite lambda > 0");
  using L = long double;
  const L l = lambda;
  const L l2 = l * l;
  const L sqrt_pi = std::sqrt(std::numbers::pi_v<L>);
  const L erfc_term = std::exp(l2) * std::erfc(l) / (2.0L * l);
  return static_cast<double>(1.0L / sqrt_pi + erfc_term - l / 2.0L * numerics::exponential_integral(l2) +
                             2.0L * l2 / sqrt_pi * numerics::hyp2f2_special(l2));
}

double poisson_gue_d_quadrature(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("quadrature form needs finite lambda > 0");
  // Mean of a chi(3) variable with non-centrality mu, averaged over the exponential shift.
  auto chi_mean = [](double mu) {
    const double x = mu / std::numbers::sqrt2;
    double erf_over_x;
    if (x < 0.1) {
      double term = 1.0, sum = 1.0;
      for (int n = 1; n < 20; ++n) {
        term *= -x * x / n;
        sum += term / (2.0 * n + 1.0);
      }
      erf_over_x = 2.0 / kSqrtPi * sum;
    } else {
      erf_over_x = std::erf(x) / x;
    }
    const double erf_term = mu * std::erf(x) + erf_over_x / std::numbers::sqrt2;
    return std::sqrt(2.0 / kPi) * std::exp(-0.5 * mu * mu) + erf_term;
  };
  const double scale = 1.0 / (lambda * std::numbers::sqrt2);
  auto f = [&](double p) { return std::exp(-p) * chi_mean(p * scale); };
  const auto r = numerics::integrate_semi_infinite(f, {0.0, 1.0, 4.0, 12.0, 30.0}, 10.0, {1e-13, 1e-300, 2000});
  return r.value / std::numbers::sqrt2;
}

}  // namespace detail

SurmiseParams surmise_constants(TransitionKind kind, double lambda) {
  SurmiseParams p;
  p.kind = kind;
  p.lambda = lambda;
  if (kind.is_pure()) {
    if (kind.beta() == 0) {
      p.D = 1.0;
      p.C = 1.0;
    } else {
      const auto [a, b] = wigner_constants(kind.beta());
      p.D = std::sqrt(b);
      p.C = a;
    }
    return p;
  }
  if (std::isnan(lambda) || lambda <= 0.0)
    throw DomainError(kind.name() + " needs lambda > 0; lambda = 0 is the pure " + kind.zero_limit().name() +
                      " limit");
  if (std::isinf(lambda) && !kind.is_gse_gue())
    throw DomainError(kind.name() + " at lambda = inf is the pure limit; use density_with_endpoints");

  const double l = lambda;
  switch (kind.tag()) {
    case TransitionKind::Tag::PoissonToGOE:
      p.D = kSqrtPi / (2.0 * l) * numerics::tricomi_u_half(l * l);
      p.C = 2.0 * p.D * p.D;
      break;
    case TransitionKind::Tag::PoissonToGUE:
      p.D = l <= detail::kPoissonGueSwitch ? detail::poisson_gue_d_closed_form(l) : detail::poisson_gue_d_quadrature(l);
      p.C = 4.0 * p.D * p.D * p.D / kSqrtPi;
      break;
    case TransitionKind::Tag::PoissonToGSE:
      p.D = poisson_gse_d(l);
      p.C = 8.0 * std::pow(p.D, 5) / kSqrtPi;
      break;
    case TransitionKind::Tag::GOEToGUE:
      p.D = std::sqrt(1.0 + l * l) / kSqrtPi * (l / (1.0 + l * l) + std::atan(1.0 / l));
      p.C = 2.0 * std::sqrt(1.0 + l * l) * p.D * p.D;
      break;
    case TransitionKind::Tag::GOEToGSE:
      p.D = goe_gse_d(l);
      p.C = std::pow(2.0, 4.5) / kSqrtPi * l * l * std::pow(1.0 + l * l, 1.5) * std::pow(p.D, 5);
      break;
    case TransitionKind::Tag::GUEToGSE:
      p.D = gue_gse_d(l);
      p.C = 2.0 * l * l * l / kSqrtPi * (1.0 + l * l) * p.D;
      break;
    case TransitionKind::Tag::GSEToGUE_S1:
    case TransitionKind::Tag::GSEToGUE_S2:
      p.C = detail::gse_gue_c_scaled(l);
      p.D = gse_gue_mean(kind.tag() == TransitionKind::Tag::GSEToGUE_S1 ? GseGueFamily::S1 : GseGueFamily::S2, l);
      break;
    case TransitionKind::Tag::Pure: break;
  }
  return p;
}

}  // namespace mrmt::surmise
