#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrmt/errors.hpp"
#include "mrmt/numerics/special.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::surmise {

namespace {

using Tag = TransitionKind::Tag;

// exp(-z) times the Bessel-type factor of each Poisson transition.
double scaled_poisson_factor(int beta, double z) {
  switch (beta) {
    case 1: return numerics::bessel_i(numerics::BesselOrder::Zero, z, true);
    case 2: return z < 1e-300 ? 1.0 : -std::expm1(-2.0 * z) / (2.0 * z);
    case 4: {
      if (z < 1.0) {
        // (z cosh z - sinh z) / z^3 = sum_k 2k z^(2k-2) / (2k+1)!
        double term = 1.0 / 3.0, sum = term;
        const double z2 = z * z;
        for (int k = 2; k < 30; ++k) {
          term *= z2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
          sum += term;
          if (term < 1e-17 * sum) break;
        }
        return std::exp(-z) * sum;
      }
      const double e2 = std::exp(-2.0 * z);
      return (0.5 * z * (1.0 + e2) - 0.5 * (1.0 - e2)) / (z * z * z);
    }
  }
  return 0.0;
}

double poisson_density(const SurmiseParams& p, int beta, double s) {
  const double l = p.lambda;
  const double ds = p.D * s;
  const double x_peak = 2.0 * l * ds - 2.0 * l * l;
  const double sigma = std::numbers::sqrt2 * l;
  const double e_star = x_peak > 0.0 ? l * l - 2.0 * l * ds : -ds * ds;
  auto f = [&](double x) {
    const double d = ds - x / (2.0 * l);
    return std::exp(-d * d - x - e_star) * scaled_poisson_factor(beta, x * ds / l);
  };
  std::vector<double> bp{0.0};
  double tail_scale;
  if (x_peak > 0.0) {
    for (double k : {-6.0, -2.0, 0.0, 2.0, 6.0})
      if (x_peak + k * sigma > 0.0) bp.push_back(x_peak + k * sigma);
    tail_scale = sigma;
  } else {
    const double L = std::min(1.0, sigma);
    bp.insert(bp.end(), {L, 4.0 * L, 10.0 * L});
    tail_scale = L;
  }
  const double integral = numerics::integrate_semi_infinite(f, bp, tail_scale, kDensityQuadrature).value;
  return p.C * std::pow(s, beta) * std::exp(e_star) * integral;
}

double goe_gse_density(const SurmiseParams& p, double s) {
  const double ds = p.D * s;
  const double ds2 = ds * ds;
  auto f = [ds2](double x) {
    const double w = 1.0 - x * x;
    return w * numerics::bessel_i0_minus_i1_scaled(w * ds2);
  };
  double integral;
  if (ds > 1.0) {
    const double knee = std::sqrt(1.0 - 1.0 / ds2);
    integral = numerics::integrate_finite(f, 0.0, knee, kDensityQuadrature).value +
               numerics::integrate_finite(f, knee, 1.0, kDensityQuadrature).value;
  } else {
    integral = numerics::integrate_finite(f, 0.0, 1.0, kDensityQuadrature).value;
  }
  const double l = p.lambda;
  return p.C * std::pow(s, 4) * std::exp(-2.0 * l * l * ds2) * integral;
}

double gse_gue_density(const SurmiseParams& p, double s) {
  const auto family = p.kind.tag() == Tag::GSEToGUE_S1 ? GseGueFamily::S1 : GseGueFamily::S2;
  // The marginal can be far below any fixed absolute tolerance at small lambda.
  const numerics::QuadratureSpec spec{kDensityQuadrature.relative_tolerance, 1e-300, kDensityQuadrature.max_subdivisions};
  return p.C * p.D * detail::gse_gue_marginal(family, p.D * s, p.lambda, spec);
}

}  // namespace

double transition_density(const SurmiseParams& p, double s) {
  if (!(s >= 0.0)) throw DomainError("spacing must be non-negative");
  if (p.kind.is_pure()) return wigner_density(p.kind.beta(), s);
  if (std::isinf(s)) return 0.0;
  if (s == 0.0) return 0.0;
  if (!(p.lambda > 0.0)) throw DomainError("mixed densities need lambda > 0");
  const double ds = p.D * s;
  switch (p.kind.tag()) {
    case Tag::PoissonToGOE: return poisson_density(p, 1, s);
    case Tag::PoissonToGUE: return poisson_density(p, 2, s);
    case Tag::PoissonToGSE: return poisson_density(p, 4, s);
    case Tag::GOEToGUE: return p.C * s * std::exp(-ds * ds) * std::erf(ds / p.lambda);
    case Tag::GOEToGSE: return goe_gse_density(p, s);
    case Tag::GUEToGSE: {
      const double ld = p.lambda * ds;
      return p.C * std::exp(-ld * ld) * 2.0 * ds * numerics::x_minus_dawson(ds);
    }
    case Tag::GSEToGUE_S1:
    case Tag::GSEToGUE_S2: return gse_gue_density(p, s);
    case Tag::Pure: break;
  }
  return 0.0;
}

double transition_density(TransitionKind kind, double s, double lambda) {
  return transition_density(surmise_constants(kind, lambda), s);
}

double density_with_endpoints(TransitionKind kind, double lambda, double s) {
  if (kind.is_pure()) return wigner_density(kind.beta(), s);
  if (std::isnan(lambda) || lambda < 0.0) throw DomainError("lambda must be >= 0");
  if (lambda == 0.0) return wigner_density(kind.zero_limit().beta(), s);
  if (std::isinf(lambda) && !kind.is_gse_gue()) return wigner_density(kind.perturbation_beta(), s);
  return transition_density(surmise_constants(kind, lambda), s);
}

}  // namespace mrmt::surmise
