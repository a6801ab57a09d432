#pragma once

#include "mrmt/ensembles.hpp"
#include "mrmt/spectra.hpp"
#include "mrmt/surmise.hpp"

// Large-matrix realizations of the transitions and the spectral windows used to study them.
namespace mrmt::setups {

struct Transition {
  ensembles::MixedSpec spec;
  bool collapse = false;  // self-dual results are Kramers degenerate
  spectra::SpacingFamily family = spectra::SpacingFamily::All;
};

// H_beta + alpha H_beta' for `kind` with N independent eigenvalues and density-matched coupling.
// The GSE -> GUE kinds take a non-self-dual perturbation of dimension 2N, from the GUE unless
// gse_perturbation_beta = 1 asks for the GOE.
Transition transition_setup(surmise::TransitionKind kind, int n, double capital_lambda,
                            ensembles::DensityProfile profile = ensembles::DensityProfile::gaussian(),
                            int gse_perturbation_beta = 2);

// Window around the center of the unperturbed spectrum where the density is flat to about 2%.
spectra::Window central_window(const ensembles::EnsembleSpec& base);
// Range for a density scan: the profile support, +-2.5 for the Gaussian profile, 90% of the semicircle.
spectra::Window scan_range(const ensembles::EnsembleSpec& base);

}  // namespace mrmt::setups
