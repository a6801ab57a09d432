#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mrmt/ensembles.hpp"
#include "mrmt/errors.hpp"
#include "mrmt/fit.hpp"
#include "mrmt/numerics/quadrature.hpp"
#include "mrmt/spectra.hpp"
#include "mrmt/surmise.hpp"

using namespace mrmt;
using namespace mrmt::ensembles;
using cd = std::complex<double>;

namespace {

const double kPi = std::numbers::pi;

struct Moments {
  double n = 0, sum = 0, sum2 = 0, sum4 = 0;
  void add(double x) {
    n += 1;
    sum += x;
    sum2 += x * x;
    sum4 += x * x * x * x;
  }
  double mean() const { return sum / n; }
  double variance() const { return sum2 / n; }
  // Standard error of the second moment about the known zero mean.
  double variance_error() const { return std::sqrt((sum4 / n - variance() * variance()) / n); }
};

void check_variance(const Moments& m, double want) {
  CHECK(std::abs(m.mean()) < 3.0 * std::sqrt(want / m.n));
  CHECK(std::abs(m.variance() - want) < 3.0 * m.variance_error());
}

EnsembleSpec gauss(int beta, int n, bool sd = false) {
  EnsembleSpec s;
  s.beta = beta;
  s.n = n;
  s.self_dual = sd;
  return s;
}

EnsembleSpec poisson(int n, DensityProfile p, bool sd = false) {
  EnsembleSpec s;
  s.beta = 0;
  s.n = n;
  s.self_dual = sd;
  s.poisson_density = std::move(p);
  return s;
}

double cubic_cdf_scaled(double x) { return 0.5 * x + 2.0 * x * x * x + 2.0 * x * x * x * x; }

std::vector<double> sorted_eigs(const Matrix& m) { return eigenvalues(m, false).eigenvalues; }

}  // namespace

TEST_CASE("random streams are reproducible and independent of scheduling") {
  Rng a(7), b(7);
  for (int i = 0; i < 5; ++i) CHECK(a.normal() == b.normal());
  Rng s3 = Rng(7).stream(3), s3b = Rng(7).stream(3), s4 = Rng(7).stream(4);
  const double x = s3.uniform();
  CHECK(x == s3b.uniform());
  CHECK(x != s4.uniform());
  CHECK(Rng(7).stream(1).normal() != Rng(8).stream(1).normal());

  auto job = [](std::size_t, Rng& r) { return r.normal() + 10.0 * r.uniform(); };
  const auto one = parallel_batch(50, 99, job, 1);
  const auto many = parallel_batch(50, 99, job, 4);
  CHECK(one == many);
}

TEST_CASE("density profiles") {
  const auto g = DensityProfile::gaussian();
  CHECK(g.pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-15));

  const int n = 300;
  const auto c = DensityProfile::cubic(n);
  CHECK(c.pdf(0.0) == doctest::Approx(0.5 / n).epsilon(1e-15));
  CHECK(c.pdf(0.5 * n + 1.0) == 0.0);
  const double area = numerics::integrate_finite([&](double t) { return c.pdf(t); }, -0.5 * n, 0.5 * n, {1e-13, 1e-300, 100}).value;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(DensityProfile::tabulated({0.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(DensityProfile::tabulated({0.0, 1.0}, {1.0, -1.0}), DomainError);
  const auto t = DensityProfile::tabulated({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  CHECK(t.pdf(0.5) == doctest::Approx(0.5));

  // Cubic draws against the exact window probabilities on 35 windows.
  Rng rng(11);
  const int draws = 1000000, windows = 35;
  std::vector<int> counts(windows, 0);
  for (int i = 0; i < draws; ++i) {
    const double x = c.sample(rng) / n + 0.5;
    counts[std::min(windows - 1, int(x * windows))]++;
  }
  for (int k = 0; k < windows; ++k) {
    const double a = -0.5 + double(k) / windows, b = a + 1.0 / windows;
    const double p = cubic_cdf_scaled(b) - cubic_cdf_scaled(a);
    CHECK(double(counts[k]) / draws == doctest::Approx(p).epsilon(0.05));
  }

  Rng rt(12);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) mean += t.sample(rt);
  CHECK(std::abs(mean / 100000) < 0.01);
}

TEST_CASE("Gaussian ensembles follow the standard element variances") {
  Rng rng(2024);
  SUBCASE("GOE") {
    Moments diag, off;
    for (int k = 0; k < 100; ++k) {
      const auto h = std::get<RealMatrix>(sample_gaussian(gauss(1, 100), rng));
      CHECK(hermiticity_defect(h) == 0.0);
      for (int j = 0; j < 100; ++j) {
        diag.add(h(j, j));
        for (int i = j + 1; i < 100; ++i) off.add(h(i, j));
      }
    }
    check_variance(diag, 1.0);
    check_variance(off, 0.5);
  }
  SUBCASE("GUE") {
    Moments diag, re, im, diag_im;
    for (int k = 0; k < 100; ++k) {
      const auto h = std::get<ComplexMatrix>(sample_gaussian(gauss(2, 100), rng));
      CHECK(hermiticity_defect(h) == 0.0);
      for (int j = 0; j < 100; ++j) {
        diag.add(h(j, j).real());
        diag_im.add(h(j, j).imag());
        for (int i = j + 1; i < 100; ++i) {
          re.add(h(i, j).real());
          im.add(h(i, j).imag());
        }
      }
    }
    check_variance(diag, 1.0);
    check_variance(re, 0.5);
    check_variance(im, 0.5);
    CHECK(diag_im.sum2 == 0.0);
  }
  SUBCASE("GSE") {
    Moments diag, q[4];
    for (int k = 0; k < 100; ++k) {
      const auto h = std::get<ComplexMatrix>(sample_gaussian(gauss(4, 100), rng));
      REQUIRE(h.rows() == 200);
      CHECK(hermiticity_defect(h) == 0.0);
      CHECK(self_duality_defect(h) == 0.0);
      for (int j = 0; j < 100; ++j) {
        diag.add(h(2 * j, 2 * j).real());
        CHECK(h(2 * j, 2 * j + 1) == cd(0.0));
        for (int i = j + 1; i < 100; ++i) {
          // Upper block (j, i) = [[q0 + i q3, q1 + i q2], [-q1 + i q2, q0 - i q3]].
          const cd a = h(2 * j, 2 * i), b = h(2 * j, 2 * i + 1);
          q[0].add(a.real());
          q[3].add(a.imag());
          q[1].add(b.real());
          q[2].add(b.imag());
          CHECK(h(2 * j + 1, 2 * i) == -std::conj(b));
          CHECK(h(2 * j + 1, 2 * i + 1) == std::conj(a));
        }
      }
    }
    check_variance(diag, 1.0);
    for (const auto& m : q) check_variance(m, 0.5);
  }
  CHECK_THROWS_AS(sample_gaussian(gauss(1, 1), rng), DomainError);
  CHECK_THROWS_AS(sample_gaussian(gauss(3, 10), rng), DomainError);
  CHECK_THROWS_AS(sample_poisson_diag(gauss(1, 10), rng), DomainError);
}

TEST_CASE("self-dual constructions") {
  SUBCASE("tensor identity of the 2x2 Poisson matrix") {
    RealMatrix h0 = RealMatrix::Zero(2, 2);
    h0(1, 1) = 0.7;
    const auto m = std::get<RealMatrix>(make_self_dual(h0, SelfDualMode::TensorIdentity));
    RealMatrix want = RealMatrix::Zero(4, 4);
    want(2, 2) = want(3, 3) = 0.7;
    CHECK(m == want);
    CHECK(self_duality_defect(m) == 0.0);
  }
  SUBCASE("GUE permutation of a 2x2 draw") {
    Rng rng(5);
    const auto h = std::get<ComplexMatrix>(sample_gaussian(gauss(2, 2), rng));
    const double a = h(0, 0).real(), b = h(1, 1).real();
    const cd c = h(0, 1);
    ComplexMatrix want(4, 4);
    want << a, 0, c, 0,  //
        0, a, 0, std::conj(c),  //
        std::conj(c), 0, b, 0,  //
        0, c, 0, b;
    const auto m = std::get<ComplexMatrix>(make_self_dual(h, SelfDualMode::GUEPermutation));
    CHECK(m == want);
    CHECK(self_duality_defect(m) == 0.0);
  }
  SUBCASE("spectra are those of the input, twice") {
    Rng rng(6);
    for (int n : {2, 7, 30}) {
      const Matrix goe = sample_gaussian(gauss(1, n), rng);
      const Matrix gue = sample_gaussian(gauss(2, n), rng);
      const std::pair<Matrix, SelfDualMode> cases[] = {{goe, SelfDualMode::TensorIdentity},
                                                        {gue, SelfDualMode::GUEPermutation},
                                                        {goe, SelfDualMode::GUEPermutation}};
      for (const auto& [in, mode] : cases) {
        const Matrix out = make_self_dual(in, mode);
        CHECK(self_duality_defect(out) == 0.0);
        const auto e_in = sorted_eigs(in), e_out = sorted_eigs(out);
        REQUIRE(e_out.size() == 2 * e_in.size());
        for (std::size_t i = 0; i < e_in.size(); ++i) {
          CHECK(std::abs(e_out[2 * i] - e_in[i]) < 1e-12 * (1.0 + std::abs(e_in[i])));
          CHECK(std::abs(e_out[2 * i + 1] - e_in[i]) < 1e-12 * (1.0 + std::abs(e_in[i])));
        }
      }
    }
  }
  SUBCASE("rejections") {
    RealMatrix bad(2, 2);
    bad << 1, 2, 3, 4;
    CHECK_THROWS_AS(make_self_dual(bad, SelfDualMode::TensorIdentity), DomainError);
    CHECK_THROWS_AS(make_self_dual(bad, SelfDualMode::GUEPermutation), DomainError);
    Rng rng(1);
    CHECK_THROWS_AS(make_self_dual(sample_gaussian(gauss(2, 3), rng), SelfDualMode::TensorIdentity), DomainError);
  }
}

TEST_CASE("mixed matrices") {
  SUBCASE("density-matched couplings") {
    MixedSpec p;
    p.base = poisson(400, DensityProfile::gaussian());
    p.perturbation = gauss(2, 400);
    p.capital_lambda = 0.2;
    CHECK(coupling_alpha(p) == doctest::Approx(0.2 * std::sqrt(2.0 * kPi) / 400.0).epsilon(1e-14));

    MixedSpec g;
    g.base = gauss(1, 400, true);
    g.perturbation = gauss(4, 400);
    g.capital_lambda = 0.3;
    const double rho1 = std::sqrt(800.0) / kPi;
    CHECK(coupling_alpha(g) == doctest::Approx(0.3 / (rho1 * std::sqrt(kPi))).epsilon(1e-14));

    MixedSpec u;
    u.base = gauss(4, 100);
    u.perturbation = gauss(2, 200);
    u.capital_lambda = 1.0;
    const double rho4 = std::sqrt(200.0) / (2.0 * kPi);
    CHECK(coupling_alpha(u) == doctest::Approx(1.0 / (rho4 * 16.0 / (3.0 * std::sqrt(kPi)))).epsilon(1e-14));
  }
  SUBCASE("raw coupling reproduces base + alpha * perturbation") {
    MixedSpec m;
    m.base = poisson(50, DensityProfile::cubic(50));
    m.perturbation = gauss(1, 50);
    m.scaling = Raw{0.1};
    CHECK(coupling_alpha(m) == 0.1);
    Rng r1(3), r2(3);
    const auto h = std::get<RealMatrix>(build_mixed(m, r1));
    const auto b = std::get<RealMatrix>(sample(m.base, r2));
    const auto v = std::get<RealMatrix>(sample(m.perturbation, r2));
    CHECK(h == RealMatrix(b + 0.1 * v));
  }
  SUBCASE("self-duality survives mixing of self-dual parts") {
    Rng rng(8);
    const EnsembleSpec bases[] = {poisson(20, DensityProfile::gaussian(), true), gauss(1, 20, true), gauss(2, 20, true), gauss(4, 20)};
    for (const auto& base : bases) {
      MixedSpec m;
      m.base = base;
      m.perturbation = gauss(4, 20);
      m.capital_lambda = 0.7;
      const Matrix h = build_mixed(m, rng);
      CHECK(dimension(h) == 40);
      CHECK(self_duality_defect(h) <= 1e-14);
    }
  }
  SUBCASE("dimensions must agree after doubling") {
    Rng rng(9);
    MixedSpec m;
    m.base = gauss(4, 10);
    m.perturbation = gauss(2, 10);
    CHECK_THROWS_AS(build_mixed(m, rng), DomainError);
    m.perturbation = gauss(2, 20);
    m.capital_lambda = 0.1;
    const Matrix h = build_mixed(m, rng);
    CHECK(dimension(h) == 20);
    CHECK(self_duality_defect(h) > 1e-6);
  }
}

TEST_CASE("eigenvalues and degeneracy collapse") {
  SUBCASE("2x2 real symmetric closed form") {
    RealMatrix h(2, 2);
    h << 0.3, -1.1, -1.1, 2.0;
    const auto e = sorted_eigs(h);
    CHECK(e[1] - e[0] == doctest::Approx(std::sqrt(1.7 * 1.7 + 4.0 * 1.21)).epsilon(1e-14));
  }
  SUBCASE("4x4 Poisson plus GSE spacing") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
      const double p = rng.exponential(), lambda = 0.05 + rng.uniform();
      RealMatrix h0 = RealMatrix::Zero(2, 2);
      h0(1, 1) = p;
      const auto h4 = std::get<ComplexMatrix>(sample_gaussian(gauss(4, 2), rng));
      const ComplexMatrix h = to_complex(make_self_dual(h0, SelfDualMode::TensorIdentity)) + lambda * h4;
      const auto s = eigenvalues(h, true);
      REQUIRE(s.eigenvalues.size() == 2);
      const double a = h4(0, 0).real(), b = h4(2, 2).real();
      const double cc = std::norm(h4(0, 2)) + std::norm(h4(0, 3));
      const double want = lambda * std::sqrt(std::pow(a - b - p / lambda, 2) + 4.0 * cc);
      CHECK(s.eigenvalues[1] - s.eigenvalues[0] == doctest::Approx(want).epsilon(1e-12));
    }
  }
  SUBCASE("collapsed self-dual spectra") {
    Rng rng(11);
    const Matrix h = sample_gaussian(gauss(4, 60), rng);
    const auto full = eigenvalues(h, false);
    for (std::size_t k = 0; k < 60; ++k) CHECK(full.eigenvalues[2 * k + 1] - full.eigenvalues[2 * k] < 1e-10);
    const auto c = eigenvalues(h, true);
    CHECK(c.degeneracy_collapsed);
    CHECK(c.eigenvalues.size() == 60);
    CHECK(c.max_pair_gap < 1e-10);
    CHECK(std::is_sorted(c.eigenvalues.begin(), c.eigenvalues.end()));

    MixedSpec m;
    m.base = gauss(4, 60);
    m.perturbation = gauss(2, 120);
    m.capital_lambda = 0.1;
    CHECK_THROWS_AS(eigenvalues(build_mixed(m, rng), true), NumericalError);
    CHECK_THROWS_AS(eigenvalues(sample_gaussian(gauss(1, 5), rng), true), DomainError);
  }
  SUBCASE("diagonal input") {
    RealMatrix d = RealMatrix::Zero(3, 3);
    d.diagonal() << 2.0, -1.0, 0.5;
    CHECK(sorted_eigs(d) == std::vector<double>{-1.0, 0.5, 2.0});
  }
}

TEST_CASE("spectral densities and semicircle radii") {
  SUBCASE("GUE density at the center") {
    const auto batch = sample_spectra(gauss(2, 400), 40, 21, false);
    const double rho = spectra::local_density(batch, 1, -5.0, 5.0).rho[0];
    CHECK(rho == doctest::Approx(std::sqrt(800.0) / (std::sqrt(2.0) * kPi)).epsilon(0.05));
  }
  SUBCASE("Poisson Gaussian density at the center") {
    const auto batch = sample_spectra(poisson(600, DensityProfile::gaussian()), 200, 22, false);
    const double rho = spectra::local_density(batch, 1, -0.2, 0.2).rho[0];
    CHECK(rho == doctest::Approx(600.0 / std::sqrt(2.0 * kPi)).epsilon(0.03));
  }
  SUBCASE("edges of the pure ensembles") {
    Rng rng(23);
    for (int beta : {1, 2, 4}) {
      const auto spec = gauss(beta, 400);
      const auto e = eigenvalues(sample(spec, rng), beta == 4).eigenvalues;
      const double edge = std::max(-e.front(), e.back());
      CHECK(edge == doctest::Approx(semicircle_radius(spec)).epsilon(0.03));
    }
  }
}

TEST_CASE("first-order splitting of Kramers pairs") {
  const auto wigner2 = [](double s) { return surmise::wigner_density(2, s); };
  const auto pair_spacings = [](const std::vector<Spectrum>& batch) {
    std::vector<double> s1;
    for (const auto& sp : batch) {
      const auto part = spectra::raw_spacings(sp.eigenvalues, {-1e300, 1e300}, spectra::SpacingFamily::S1);
      s1.insert(s1.end(), part.begin(), part.end());
    }
    return s1;
  };
  const double eps = 1e-4;

  SUBCASE("GUE perturbation gives the 2x2 GUE surmise") {
    MixedSpec m;
    m.base = gauss(4, 50);
    m.perturbation = gauss(2, 100);
    m.scaling = Raw{eps};
    const auto s1 = spectra::extract_spacings(sample_spectra(m, 2000, 31, false), {-1e300, 1e300}, spectra::SpacingFamily::S1);
    REQUIRE(s1.count == 100000);
    const double d2 = fit::delta2(spectra::histogram(s1), wigner2);
    MESSAGE("Delta2 = " << d2);
    CHECK(d2 < 0.02);
  }

  SUBCASE("GOE perturbation acts like a GUE one with half the variance") {
    MixedSpec goe;
    goe.base = gauss(4, 200);
    goe.perturbation = gauss(1, 400);
    goe.scaling = Raw{eps};
    MixedSpec gue = goe;
    gue.perturbation = gauss(2, 400);
    gue.scaling = Raw{eps / std::sqrt(2.0)};
    auto a = pair_spacings(sample_spectra(goe, 750, 32, false));
    auto b = pair_spacings(sample_spectra(gue, 750, 33, false));
    // Common scale from the GUE side only, so a wrong variance shows up as a shift.
    double mean = 0.0;
    for (double x : b) mean += x;
    mean /= double(b.size());
    for (double& x : a) x /= mean;
    for (double& x : b) x /= mean;
    const double d2 = fit::delta2(spectra::histogram(a, 30, 3.5), spectra::histogram(b, 30, 3.5));
    MESSAGE("two-sample Delta2 = " << d2 << " over " << a.size() << " pairs each");
    CHECK(d2 < 0.02);
    // With the full GUE variance the histograms separate clearly.
    for (double& x : b) x *= std::sqrt(2.0);
    CHECK(fit::delta2(spectra::histogram(a, 30, 3.5), spectra::histogram(b, 30, 3.5)) > 0.1);
  }
}

TEST_CASE("real and imaginary parts of GSE eigenvectors decouple as 1/N") {
  std::vector<double> scaled;
  Rng rng(41);
  for (int n : {50, 100, 200, 400}) {
    const int reps = 400 / n;
    double acc = 0.0;
    int count = 0;
    for (int r = 0; r < reps; ++r) {
      const auto [w, v] = eigensystem(std::get<ComplexMatrix>(sample_gaussian(gauss(4, n), rng)));
      for (Eigen::Index k = 0; k < v.cols(); ++k) {
        // Averaged over the arbitrary phase of psi, <re|im>^2 = |psi . psi|^2 / 8.
        const cd z = (v.col(k).transpose() * v.col(k))(0, 0);
        acc += std::norm(z) / 8.0;
        ++count;
      }
    }
    scaled.push_back(n * acc / count);
  }
  const double hi = *std::max_element(scaled.begin(), scaled.end());
  const double lo = *std::min_element(scaled.begin(), scaled.end());
  MESSAGE("N <re|im>^2 = " << scaled[0] << ", " << scaled[1] << ", " << scaled[2] << ", " << scaled[3]);
  CHECK(hi / lo < 2.0);
}
