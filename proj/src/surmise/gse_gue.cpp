#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrmt/errors.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::surmise {

namespace {

void check_arguments(double t1, double t2, double t3, double lambda) {
  if (!(t1 >= 0.0 && t2 >= 0.0 && t3 >= 0.0) || !std::isfinite(t1 + t2 + t3))
    throw DomainError("level differences must be finite and non-negative");
  if (!(lambda > 0.0)) throw DomainError("GSE -> GUE density needs lambda > 0");
}

double vandermonde(double t1, double t2, double t3) { return t1 * t2 * t3 * (t1 + t2) * (t2 + t3) * (t1 + t2 + t3); }

double gaussian_factor(double t1, double t2, double t3) {
  const double a = t1 + 2.0 * t2 + t3;
  return std::exp(-0.25 * (a * a + 2.0 * t1 * t1 + 2.0 * t3 * t3));
}

// lambda^4 * Dhat * G * bracket
double scaled_joint(double t1, double t2, double t3, double lambda) {
  const double v = vandermonde(t1, t2, t3);
  if (v == 0.0) return 0.0;
  return v * gaussian_factor(t1, t2, t3) * detail::gse_gue_bracket_scaled(t1, t2, t3, lambda);
}

}  // namespace

namespace detail {

double gse_gue_bracket_scaled(double t1, double t2, double t3, double lambda) {
  const double v = vandermonde(t1, t2, t3);
  if (std::isinf(lambda)) return 2.0 * v;
  const double a[3] = {t1, t1 + t2, t1 + t2 + t3};
  const double b[3] = {t3, t2 + t3, t2};
  const double sign[3] = {1.0, -1.0, 1.0};
  double r[3];
  for (int p = 0; p < 3; ++p) r[p] = a[p] * a[p] + b[p] * b[p];
  const double inv_l2 = 1.0 / (lambda * lambda);
  const double rmax = std::max({r[0], r[1], r[2]}) * inv_l2;
  if (rmax > 2.0) {
    double sum = 0.0;
    for (int p = 0; p < 3; ++p) sum += sign[p] * a[p] * b[p] * std::exp(-r[p] * inv_l2);
    const double l2 = lambda * lambda;
    return l2 * l2 * sum;
  }
  // sum_m (-1)^m M_m / m! lambda^(4 - 2m) with M_m = sum_p sign_p a_p b_p r_p^m.
  // M_0 and M_1 vanish identically; M_2 and M_3 are used in factored form.
  const double q3 = 3.0 * t1 * t1 + 4.0 * t1 * t2 + 2.0 * t1 * t3 + 4.0 * t2 * t2 + 4.0 * t2 * t3 + 3.0 * t3 * t3;
  double sum = 2.0 * v - 4.0 * v * q3 / 6.0 * inv_l2;
  double w[3];
  for (int p = 0; p < 3; ++p) w[p] = sign[p] * a[p] * b[p] * r[p] * r[p] * r[p];
  double factor = -inv_l2 / 6.0;
  for (int m = 4; m < 80; ++m) {
    factor *= -inv_l2 / m;
    double mm = 0.0;
    for (int p = 0; p < 3; ++p) {
      w[p] *= r[p];
      mm += w[p];
    }
    const double term = factor * mm;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && m > 6) break;
  }
  return sum;
}

double gse_gue_c_scaled(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("GSE -> GUE normalization needs lambda > 0");
  const double base = 4.0 / 3.0 * std::pow(std::numbers::pi, -1.5);
  if (std::isinf(lambda)) return base;
  return base * std::pow(1.0 + 2.0 / (lambda * lambda), 5);
}

double gse_gue_marginal(GseGueFamily family, double S, double lambda, const numerics::QuadratureSpec& spec) {
  if (!(S >= 0.0)) throw DomainError("spacing must be non-negative");
  if (S == 0.0) return 0.0;
  const double w = std::isinf(lambda) ? 1.0 : std::min(lambda, 1.0);
  const std::vector<double> bp{0.0, w, 3.0 * w, 1.0, 3.0};
  auto outer = [&](double u) {
    auto inner = [&](double v) {
      return family == GseGueFamily::S1 ? scaled_joint(S, u, v, lambda) : scaled_joint(u, S, v, lambda);
    };
    return numerics::integrate_semi_infinite(inner, bp, 1.0, spec).value;
  };
  return numerics::integrate_semi_infinite(outer, bp, 1.0, spec).value;
}

}  // namespace detail

double gse_gue_joint_density(double t1, double t2, double t3, double lambda) {
  check_arguments(t1, t2, t3, lambda);
  if (std::isinf(lambda)) throw DomainError("the unscaled joint density vanishes as lambda -> inf");
  const double l2 = lambda * lambda;
  return scaled_joint(t1, t2, t3, lambda) / (l2 * l2);
}

double gse_gue_spacing_density(GseGueFamily family, double s, double lambda) {
  const auto kind = family == GseGueFamily::S1 ? TransitionKind(TransitionKind::Tag::GSEToGUE_S1)
                                               : TransitionKind(TransitionKind::Tag::GSEToGUE_S2);
  return transition_density(surmise_constants(kind, lambda), s);
}

}  // namespace mrmt::surmise
