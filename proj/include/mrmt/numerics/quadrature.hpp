#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mrmt/errors.hpp"

namespace mrmt::numerics {

struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-12;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
      throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

namespace detail {

// 21-point Gauss-Kronrod pair, abscissae and weights as in QUADPACK qk21.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980253500, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  double fv1[10], fv2[10];
  const double fc = f(centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    abserr = std::max(eps * 50.0 * resabs, abserr);
  if (!std::isfinite(result)) abserr = std::numeric_limits<double>::infinity();
  return {a, b, result, abserr};
}

// Globally adaptive bisection over a set of initial intervals in one
// coordinate; the caller's integrand already contains any Jacobian.
template <class G>
QuadratureResult adapt(G& g, const std::vector<double>& pts, const QuadratureSpec& spec) {
  spec.validate();
  std::priority_queue<Segment> heap;
  int evaluations = 0;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    Segment s = gauss_kronrod21(g, pts[i], pts[i + 1]);
    evaluations += 21;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int subdivisions = static_cast<int>(heap.size());
  auto tolerance = [&] { return std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(total)); };

  while (!heap.empty() && total_err > tolerance()) {
    if (!std::isfinite(total)) break;
    if (subdivisions >= spec.max_subdivisions) break;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) < 1e3 * std::numeric_limits<double>::epsilon() *
                                          std::max(std::abs(worst.a), std::abs(worst.b)))
      break;
    heap.pop();
    const Segment left = gauss_kronrod21(g, worst.a, mid);
    const Segment right = gauss_kronrod21(g, mid, worst.b);
    evaluations += 42;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Refresh the running sums now and then so drift never decides convergence.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  total = total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(total) || total_err > tolerance())
    throw ConvergenceError("adaptive quadrature did not converge (estimate " + std::to_string(total) +
                               ", error " + std::to_string(total_err) + ")",
                           total, total_err);
  return {total, total_err, evaluations};
}

}  // namespace detail

template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_finite needs finite endpoints");
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate_finite(f, b, a, spec);
    r.value = -r.value;
    return r;
  }
  std::vector<double> pts{a, b};
  return detail::adapt(f, pts, spec);
}

// Integrates over [breakpoints.front(), inf). The finite breakpoints split
// the interval and the tail beyond the last one is mapped onto [0, 1) with
// x = last + scale * u / (1 - u).
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, std::vector<double> breakpoints, double scale = 1.0,
                                         const QuadratureSpec& spec = {}) {
  if (breakpoints.empty()) throw DomainError("integrate_semi_infinite needs a lower limit");
  for (double p : breakpoints)
    if (!std::isfinite(p)) throw DomainError("breakpoints must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("tail scale must be positive");
  std::sort(breakpoints.begin(), breakpoints.end());
  const double lower = breakpoints.front();
  const double tail = breakpoints.back();
  auto g = [&](double t) -> double {
    if (t < tail) return t < lower ? 0.0 : f(t);
    const double u = t - tail;
    const double w = 1.0 - u;
    if (w <= 0.0) return 0.0;
    const double v = f(tail + scale * u / w) * scale / (w * w);
    return std::isfinite(v) ? v : 0.0;
  };
  breakpoints.push_back(tail + 0.5);
  breakpoints.push_back(tail + 1.0);
  return detail::adapt(g, breakpoints, spec);
}

template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a = 0.0, const QuadratureSpec& spec = {}) {
  return integrate_semi_infinite(f, std::vector<double>{a}, 1.0, spec);
}

}  // namespace mrmt::numerics
