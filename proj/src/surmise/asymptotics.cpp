#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrmt/errors.hpp"
#include "mrmt/numerics/special.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::surmise {

namespace {

using Tag = TransitionKind::Tag;
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

double cited_small_lambda_coefficient(Tag tag, double l) {
  switch (tag) {
    case Tag::PoissonToGOE: return kSqrtPi / (2.0 * l);
    case Tag::PoissonToGUE: return 1.0 / (2.0 * l * l);
    case Tag::PoissonToGSE: return 1.0 / (12.0 * std::pow(l, 4));
    case Tag::GOEToGUE: return kPi / (2.0 * l);
    case Tag::GOEToGSE: return kPi * kPi / (12.0 * l * l * l);
    case Tag::GUEToGSE: return 256.0 / (3.0 * kPi * kPi * kPi * l * l);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

// Polynomial extrapolation of g(h_k) to h = 0 through Neville's scheme.
double extrapolate_to_zero(const std::vector<double>& h, std::vector<double> g) {
  const std::size_t n = h.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) g[i] = (h[i + m] * g[i] - h[i] * g[i + 1]) / (h[i + m] - h[i]);
  return g[0];
}

}  // namespace

double LargeSForm::operator()(double s) const {
  if (!(s >= 0.0)) throw DomainError("spacing must be non-negative");
  return std::exp(log_prefactor + power * std::log(s) - linear_rate * s - quadratic_rate * s * s);
}

LargeSForm large_s_form(const SurmiseParams& p) {
  LargeSForm f;
  const double l = p.lambda, D = p.D, C = p.C;
  if (p.kind.is_pure()) {
    const int beta = p.kind.beta();
    f.power = beta;
    f.log_prefactor = std::log(C);
    if (beta == 0)
      f.linear_rate = 1.0;
    else
      f.quadratic_rate = D * D;
    f.description = "exact Wigner form";
    return f;
  }
  switch (p.kind.tag()) {
    case Tag::PoissonToGOE:
    case Tag::PoissonToGUE:
    case Tag::PoissonToGSE:
      f.log_prefactor = std::log(2.0 * l * D) + l * l;
      f.linear_rate = 2.0 * l * D;
      f.description = "2 lambda D exp(lambda^2) exp(-2 lambda D s)";
      break;
    case Tag::GOEToGUE:
      f.log_prefactor = std::log(C);
      f.power = 1;
      f.quadratic_rate = D * D;
      f.description = "C s exp(-D^2 s^2)";
      break;
    case Tag::GOEToGSE:
      f.log_prefactor = std::log(std::sqrt(kPi / 32.0) * C / (D * D * D));
      f.power = 1;
      f.quadratic_rate = 2.0 * l * l * D * D;
      f.description = "sqrt(pi/32) (C/D^3) s exp(-2 (lambda D s)^2)";
      break;
    case Tag::GUEToGSE:
      f.log_prefactor = std::log(2.0 * C * D * D);
      f.power = 2;
      f.quadratic_rate = l * l * D * D;
      f.description = "2 C D^2 s^2 exp(-(lambda D s)^2)";
      break;
    default: throw DomainError("no large-s form is available for " + p.kind.name());
  }
  return f;
}

double large_s_asymptote(TransitionKind kind, double s, double lambda) {
  return large_s_form(surmise_constants(kind, lambda))(s);
}

AsymptoteReport small_s_asymptote(TransitionKind kind, double lambda) {
  AsymptoteReport r;
  const auto p = surmise_constants(kind, lambda);
  if (kind.is_pure()) {
    r.small_s_power = kind.beta();
    r.small_s_coefficient = p.C;
    r.small_lambda_coefficient = p.C;
    r.large_s = large_s_form(p);
    return r;
  }
  const int power = kind.perturbation_beta();
  r.small_s_power = power;
  r.small_lambda_coefficient = cited_small_lambda_coefficient(kind.tag(), lambda);
  // Sample P(s)/s^power well inside the region where the leading term dominates.
  const double scale = std::min(lambda, 1.0) / std::max(p.D, 1.0);
  std::vector<double> h, g;
  for (int k = 0; k < 6; ++k) {
    const double s = 0.05 * scale * std::ldexp(1.0, -k);
    h.push_back(s);
    g.push_back(transition_density(p, s) / std::pow(s, power));
  }
  r.small_s_coefficient = extrapolate_to_zero(h, g);
  if (!kind.is_gse_gue()) r.large_s = large_s_form(p);
  return r;
}

double gibbs_limit(TransitionKind kind, double st) {
  if (!(st >= 0.0)) throw DomainError("rescaled spacing must be non-negative");
  if (std::isinf(st)) return 1.0;
  switch (kind.tag()) {
    case Tag::PoissonToGOE:
      return kSqrtPi / 2.0 * st * numerics::bessel_i(numerics::BesselOrder::Zero, st * st / 8.0, true);
    case Tag::PoissonToGUE: return st * numerics::dawson(st / 2.0);
    case Tag::PoissonToGSE: {
      if (st < 0.5) {
        // (s^2/4) sum_{n>=1} (e_n + e_{n-1}/2) s^(2n) with e_n = (-1)^n / (2^n (2n+1)!!)
        const double s2 = st * st;
        double e_prev = 1.0, sum = 0.0, pw = 1.0;
        for (int n = 1; n < 30; ++n) {
          const double e = -e_prev / (2.0 * (2.0 * n + 1.0));
          pw *= s2;
          const double term = (e + 0.5 * e_prev) * pw;
          sum += term;
          e_prev = e;
          if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return s2 / 4.0 * sum;
      }
      return st / 4.0 * ((2.0 + st * st) * numerics::dawson(st / 2.0) - st);
    }
    default: throw DomainError("the Gibbs limit exists only for the Poisson transitions");
  }
}

GibbsMaximum gibbs_maximum(TransitionKind kind) {
  if (!kind.is_poisson_base()) throw DomainError("the Gibbs maximum exists only for the Poisson transitions");
  auto neg = [&](double st) { return -gibbs_limit(kind, st); };
  boost::uintmax_t iterations = 200;
  const auto [x, fx] = boost::math::tools::brent_find_minima(neg, 1.0, 6.0, 52, iterations);
  if (iterations >= 200) throw ConvergenceError("Gibbs maximum search did not converge", -fx, 0.0);
  if (x <= 1.0 + 1e-6 || x >= 6.0 - 1e-6) throw ConvergenceError("Gibbs maximum hit the search bracket", -fx, 0.0);
  return {x, -fx};
}

double fourier_gibbs_overshoot() { return 0.5 + numerics::sine_integral(kPi) / kPi - 1.0; }

}  // namespace mrmt::surmise
