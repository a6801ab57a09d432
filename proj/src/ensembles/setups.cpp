#include "mrmt/setups.hpp"

#include "mrmt/errors.hpp"

namespace mrmt::setups {

using surmise::TransitionKind;
using Tag = TransitionKind::Tag;

Transition transition_setup(TransitionKind kind, int n, double capital_lambda, ensembles::DensityProfile profile,
                            int gse_perturbation_beta) {
  if (kind.is_pure()) throw DomainError("a transition setup needs a mixed kind");
  Transition t;
  auto& base = t.spec.base;
  auto& pert = t.spec.perturbation;
  base.n = pert.n = n;
  base.poisson_density = std::move(profile);
  t.spec.capital_lambda = capital_lambda;
  switch (kind.tag()) {
    case Tag::PoissonToGOE: base.beta = 0; pert.beta = 1; break;
    case Tag::PoissonToGUE: base.beta = 0; pert.beta = 2; break;
    case Tag::PoissonToGSE: base.beta = 0; base.self_dual = true; pert.beta = 4; break;
    case Tag::GOEToGUE: base.beta = 1; pert.beta = 2; break;
    case Tag::GOEToGSE: base.beta = 1; base.self_dual = true; pert.beta = 4; break;
    case Tag::GUEToGSE: base.beta = 2; base.self_dual = true; pert.beta = 4; break;
    case Tag::GSEToGUE_S1:
    case Tag::GSEToGUE_S2:
      if (gse_perturbation_beta != 1 && gse_perturbation_beta != 2)
        throw DomainError("the GSE can only be broken by a GOE or GUE perturbation here");
      base.beta = 4;
      pert.beta = gse_perturbation_beta;
      pert.n = 2 * n;
      t.family = kind.tag() == Tag::GSEToGUE_S1 ? spectra::SpacingFamily::S1 : spectra::SpacingFamily::S2;
      break;
    case Tag::Pure: break;
  }
  t.collapse = kind.perturbation_beta() == 4;
  return t;
}

spectra::Window central_window(const ensembles::EnsembleSpec& base) {
  if (base.beta != 0) {
    const double r = ensembles::semicircle_radius(base);
    return {-0.2 * r, 0.2 * r};
  }
  const auto& p = base.poisson_density;
  switch (p.variant()) {
    case ensembles::DensityProfile::Variant::GaussianUnitVariance: return {-0.2, 0.2};
    case ensembles::DensityProfile::Variant::CubicOnInterval: return {-0.05 * base.n, 0.05 * base.n};
    case ensembles::DensityProfile::Variant::Custom: break;
  }
  const double mid = 0.5 * (p.lower() + p.upper()), half = 0.05 * (p.upper() - p.lower());
  return {mid - half, mid + half};
}

spectra::Window scan_range(const ensembles::EnsembleSpec& base) {
  if (base.beta != 0) {
    const double r = ensembles::semicircle_radius(base);
    return {-0.9 * r, 0.9 * r};
  }
  const auto& p = base.poisson_density;
  if (p.variant() == ensembles::DensityProfile::Variant::GaussianUnitVariance) return {-2.5, 2.5};
  return {p.lower(), p.upper()};
}

}  // namespace mrmt::setups
