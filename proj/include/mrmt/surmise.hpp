#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mrmt/numerics/quadrature.hpp"

namespace mrmt::surmise {

class TransitionKind {
 public:
  enum class Tag {
    Pure,
    PoissonToGOE,
    PoissonToGUE,
    PoissonToGSE,
    GOEToGUE,
    GOEToGSE,
    GUEToGSE,
    GSEToGUE_S1,
    GSEToGUE_S2
  };

  // Mixed kinds only; Pure needs a Dyson index and goes through pure().
  TransitionKind(Tag tag);
  static TransitionKind pure(int beta);
  static TransitionKind parse(std::string_view name);

  Tag tag() const noexcept { return tag_; }
  int beta() const;  // Pure only
  bool is_pure() const noexcept { return tag_ == Tag::Pure; }
  bool is_gse_gue() const noexcept { return tag_ == Tag::GSEToGUE_S1 || tag_ == Tag::GSEToGUE_S2; }
  bool is_poisson_base() const noexcept;

  // Dyson index of the perturbing ensemble, i.e. the small-s power.
  int perturbation_beta() const;
  // The pure ensemble reached as lambda -> 0 (for S1/S2: the 2x2 GUE and the GSE).
  TransitionKind zero_limit() const;
  std::string name() const;

  bool operator==(const TransitionKind& o) const noexcept { return tag_ == o.tag_ && beta_ == o.beta_; }

  static const std::array<TransitionKind, 6>& transitions();
  static const std::array<TransitionKind, 8>& mixed();

 private:
  TransitionKind(Tag tag, int beta) : tag_(tag), beta_(beta) {}
  Tag tag_;
  int beta_ = -1;
};

struct SurmiseParams {
  TransitionKind kind = TransitionKind::pure(0);
  double lambda = 0.0;
  double D = 0.0;
  // For the two GSE -> GUE families this holds C / lambda^4, which stays finite as lambda -> inf.
  double C = 0.0;
};

struct LargeSForm {
  // prefactor * s^power * exp(-linear_rate * s - quadratic_rate * s^2),
  // with the prefactor carried as a logarithm so that e^(lambda^2) cannot overflow.
  double log_prefactor = 0.0;
  int power = 0;
  double linear_rate = 0.0;
  double quadratic_rate = 0.0;
  std::string description;

  double operator()(double s) const;
};

struct AsymptoteReport {
  int small_s_power = 0;
  double small_s_coefficient = 0.0;
  // The cited lambda -> 0 form of the coefficient, for comparison.
  double small_lambda_coefficient = 0.0;
  LargeSForm large_s;
};

struct GibbsMaximum {
  double s_tilde = 0.0;
  double value = 0.0;
};

// Accuracy used for the inner integrals of a single density value.
inline constexpr numerics::QuadratureSpec kDensityQuadrature{1e-10, 1e-15, 4000};

double wigner_density(int beta, double s);
// Mean spacing of the unnormalized 2x2 (4x4 for beta = 4) problem with entries as in the standard normalization.
double unnormalized_mean_spacing(int beta);

SurmiseParams surmise_constants(TransitionKind kind, double lambda);

double transition_density(const SurmiseParams& params, double s);
double transition_density(TransitionKind kind, double s, double lambda);

// Density that also accepts the pure endpoints lambda = 0 and lambda = inf.
double density_with_endpoints(TransitionKind kind, double lambda, double s);

enum class GseGueFamily { S1, S2 };

double gse_gue_joint_density(double t1, double t2, double t3, double lambda);
double gse_gue_spacing_density(GseGueFamily family, double s, double lambda);

AsymptoteReport small_s_asymptote(TransitionKind kind, double lambda);
double large_s_asymptote(TransitionKind kind, double s, double lambda);
LargeSForm large_s_form(const SurmiseParams& params);

double gibbs_limit(TransitionKind kind, double s_tilde);
GibbsMaximum gibbs_maximum(TransitionKind kind);
double fourier_gibbs_overshoot();

namespace detail {
// Exposed for cross-checks in tests.
double poisson_gue_d_closed_form(double lambda);
double poisson_gue_d_quadrature(double lambda);
inline constexpr double kPoissonGueSwitch = 5.0;
// lambda^4 times the bracket of h-products; finite as lambda -> inf.
double gse_gue_bracket_scaled(double t1, double t2, double t3, double lambda);
// C / lambda^4, finite for lambda = inf.
double gse_gue_c_scaled(double lambda);
double gse_gue_marginal(GseGueFamily family, double S, double lambda, const numerics::QuadratureSpec& spec);
}  // namespace detail

}  // namespace mrmt::surmise
