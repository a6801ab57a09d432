#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mrmt/parallel.hpp"

namespace mrmt::ensembles {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Dense Hermitian matrix; real symmetric matrices are kept real so the cheaper solver applies.
using Matrix = std::variant<RealMatrix, ComplexMatrix>;

Eigen::Index dimension(const Matrix& m);
bool is_real(const Matrix& m);
ComplexMatrix to_complex(const Matrix& m);

// Seedable generator with independent derived streams: stream(k) of a root seed is a
// pure function of (seed, k), so batch jobs can run in any order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng stream(std::uint64_t k) const { return Rng(seed_, mix(stream_id_, k)); }
  std::uint64_t seed() const noexcept { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double exponential() { return exponential_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
  std::exponential_distribution<double> exponential_;
};

// Single-eigenvalue distribution P(theta) of a Poisson spectrum; rho_0 = N * P.
class DensityProfile {
 public:
  enum class Variant { GaussianUnitVariance, CubicOnInterval, Custom };

  static DensityProfile gaussian();
  // (1/N)[1/2 + 6 (theta/N)^2 + 8 (theta/N)^3] on (-N/2, N/2).
  static DensityProfile cubic(int n);
  // Piecewise linear through (theta_i, p_i); must integrate to 1 (trapezoid rule, 1e-6).
  static DensityProfile tabulated(std::vector<double> theta, std::vector<double> p);

  Variant variant() const noexcept { return variant_; }
  double pdf(double theta) const;
  double sample(Rng& rng) const;
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }
  std::string name() const;

 private:
  DensityProfile() = default;

  Variant variant_ = Variant::GaussianUnitVariance;
  double scale_ = 1.0;
  double lo_ = 0.0, hi_ = 0.0;
  double pmax_ = 0.0;
  std::vector<double> x_, p_;
};

struct EnsembleSpec {
  int beta = 1;  // 0, 1, 2 or 4
  int n = 2;     // number of independent eigenvalues
  // Doubles a beta in {0, 1, 2} matrix into a 2N x 2N self-dual one; beta = 4 is always self-dual.
  bool self_dual = false;
  DensityProfile poisson_density = DensityProfile::gaussian();

  Eigen::Index matrix_dimension() const { return (beta == 4 || self_dual) ? 2 * Eigen::Index(n) : n; }
  void validate() const;
};

struct DensityMatched {};
struct Raw {
  double alpha;
};

struct MixedSpec {
  EnsembleSpec base;
  EnsembleSpec perturbation;
  double capital_lambda = 0.0;
  std::variant<DensityMatched, Raw> scaling = DensityMatched{};
};

struct Spectrum {
  std::vector<double> eigenvalues;
  bool degeneracy_collapsed = false;
  double max_pair_gap = 0.0;
};

enum class SelfDualMode { TensorIdentity, GUEPermutation };

// Eigenvalue density at the center of the unperturbed spectrum: N P(0) for beta = 0,
// the semicircle value sqrt(2N) / (sqrt(beta) pi) otherwise.
double central_density(const EnsembleSpec& spec);
// Semicircle radius sqrt(2 beta N).
double semicircle_radius(const EnsembleSpec& spec);
double coupling_alpha(const MixedSpec& spec);

Matrix sample_gaussian(const EnsembleSpec& spec, Rng& rng);
Matrix sample_poisson_diag(const EnsembleSpec& spec, Rng& rng);
// Dispatches on beta and applies self-dual doubling where requested.
Matrix sample(const EnsembleSpec& spec, Rng& rng);

Matrix make_self_dual(const Matrix& m, SelfDualMode mode);
Matrix build_mixed(const MixedSpec& spec, Rng& rng);

// J = 1_N (x) [[0, -1], [1, 0]]; returns max |J M^T J^T - M|.
double self_duality_defect(const Matrix& m);
double hermiticity_defect(const Matrix& m);

Spectrum eigenvalues(const Matrix& m, bool collapse_degeneracy);
// Eigenvalues together with eigenvectors (columns), complex input only.
std::pair<std::vector<double>, ComplexMatrix> eigensystem(const ComplexMatrix& m);

// Runs job(i, rng_i) for i in [0, count) with rng_i = Rng(seed).stream(i) and returns
// the results in index order, independent of the thread count.
template <class Job>
auto parallel_batch(std::size_t count, std::uint64_t seed, Job job, unsigned threads = 0) {
  using Result = decltype(job(std::size_t{}, std::declval<Rng&>()));
  std::vector<Result> out(count);
  const Rng root(seed);
  parallel_for(
      count,
      [&](std::size_t i) {
        Rng rng = root.stream(i);
        out[i] = job(i, rng);
      },
      threads);
  return out;
}

std::vector<Spectrum> sample_spectra(const MixedSpec& spec, std::size_t count, std::uint64_t seed, bool collapse);
std::vector<Spectrum> sample_spectra(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed, bool collapse);

}  // namespace mrmt::ensembles
