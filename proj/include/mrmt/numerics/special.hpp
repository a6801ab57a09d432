#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "mrmt/errors.hpp"
#include "mrmt/numerics/quadrature.hpp"

namespace mrmt::numerics {

struct ErfValues {
  double erf;
  double erfc;
  double erfi_scaled;  // exp(-x^2) erfi(x)
};

ErfValues erf_family(double x);

// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
double dawson(double x);

// x - F(x), accurate near the origin where the difference cancels.
double x_minus_dawson(double x);

double sine_integral(double x);

enum class BesselOrder { Zero, Half, One, ThreeHalves };

// Modified Bessel function of the first kind; scaled returns exp(-x) I(x).
double bessel_i(BesselOrder order, double x, bool scaled = false);

// exp(-x) * (I0(x) - I1(x)), computed without cancellation for large x.
double bessel_i0_minus_i1_scaled(double x);

// exp(x) K0(x) and exp(x) K1(x) for x > 0.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

// Confluent hypergeometric U(-1/2, 0, x) for x > 0.
double tricomi_u_half(double x);

// Exponential integral Ei(x) for real x != 0.
template <class T>
T exponential_integral(T x) {
  using std::abs;
  using std::exp;
  using std::log;
  if (x == T(0) || !std::isfinite(static_cast<double>(x)))
    throw DomainError("Ei is undefined at 0 and needs a finite argument");
  const T eps = std::numeric_limits<T>::epsilon();
  const T euler = T(0.577215664901532860606512090082402431L);
  if (x > T(0)) {
    if (x < T(60)) {
      T term = T(1), sum = T(0);
      for (int k = 1; k < 1000; ++k) {
        term *= x / T(k);
        const T add = term / T(k);
        sum += add;
        if (add < eps * sum) break;
      }
      return euler + log(x) + sum;
    }
    T term = T(1), sum = T(1);
    for (int k = 1; k < 100; ++k) {
      const T next = term * T(k) / x;
      if (next > term) break;
      term = next;
      sum += term;
      if (term < eps * sum) break;
    }
    return exp(x) / x * sum;
  }
  // Ei(x) = -E1(-x) for x < 0.
  const T y = -x;
  if (y <= T(1)) {
    T term = T(1), sum = T(0);
    for (int k = 1; k < 1000; ++k) {
      term *= -y / T(k);
      const T add = term / T(k);
      sum += add;
      if (abs(add) < eps * abs(sum)) break;
    }
    const T e1 = -euler - log(y) - sum;
    return -e1;
  }
  // Modified Lentz evaluation of the continued fraction for E1.
  const T tiny = std::numeric_limits<T>::min() / eps;
  T b = y + T(1);
  T c = T(1) / tiny;
  T d = T(1) / b;
  T h = d;
  for (int i = 1; i < 10000; ++i) {
    const T an = -T(i) * T(i);
    b += T(2);
    d = T(1) / (an * d + b);
    c = b + an / c;
    const T del = c * d;
    h *= del;
    if (abs(del - T(1)) < eps) return -(h * exp(-y));
  }
  throw ConvergenceError("E1 continued fraction did not converge", static_cast<double>(-(h * exp(-y))), 0.0);
}

// Generalized hypergeometric 2F2(1/2, 1; 3/2, 3/2; x).
// Direct summation for x >= -5. Below that the alternating series cancels, so
// the value comes from 2F2(-y) = y^(-1/2) int_0^sqrt(y) F(u)/u du with F Dawson's function.
inline constexpr double kHyp2f2SeriesFloor = -5.0;

template <class T>
T hyp2f2_special(T x) {
  using std::abs;
  if (!std::isfinite(static_cast<double>(x))) throw DomainError("2F2 needs a finite argument");
  if (x < T(kHyp2f2SeriesFloor)) {
    const double r = std::sqrt(-static_cast<double>(x));
    auto f = [](double u) { return u < 1e-8 ? 1.0 - 2.0 * u * u / 3.0 : dawson(u) / u; };
    return T(integrate_finite(f, 0.0, r, QuadratureSpec{1e-13, 1e-300, 4000}).value / r);
  }
  const T eps = std::numeric_limits<T>::epsilon();
  const int cap = static_cast<int>(10.0 * abs(static_cast<double>(x))) + 1000;
  T term = T(1), sum = T(1);
  for (int k = 0; k < cap; ++k) {
    const T kk = T(k);
    term *= (kk + T(0.5)) / ((kk + T(1.5)) * (kk + T(1.5))) * x;
    sum += term;
    if (abs(term) < eps * abs(sum) && kk > abs(x)) return sum;
  }
  throw ConvergenceError("2F2 series did not converge", static_cast<double>(sum), static_cast<double>(abs(term)));
}

}  // namespace mrmt::numerics
