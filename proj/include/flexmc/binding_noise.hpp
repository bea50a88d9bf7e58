#pragma once

#include <vector>

#include "flexmc/config.hpp"

namespace flexmc {

/// Stationary statistics of the bound-receptor count under multi-ligand competition.
struct BindingNoiseModel {
  double p_B = 0.0;          // bound probability
  double NR = 0.0;           // receptor count
  double var_NB = 0.0;       // binomial variance p_B*(1-p_B)*NR
  double k_on_total = 0.0;   // sum k_j+ * [L_j]0           [1/s]
  double k_off_total = 0.0;  // sum p_Bj * k_j-             [1/s]
  double tau_B = 0.0;        // 1/(k_on_total + k_off_total) [s]
  std::vector<double> p_Bj;
  bool degenerate = false;   // no ligands: zero-noise model, tau undefined
};

BindingNoiseModel build_noise_model(const std::vector<LigandSpec>& species, double NR);

/// Occupancy-fluctuation autocovariance at lag tau: var_NB * exp(-tau/tau_B).
double autocorrelation(const BindingNoiseModel& m, double lag);

/// Lorentzian PSD of the bound count. 'as_printed' uses the var/(2 tau)
/// prefactor; 'fourier_pair' the 2 var tau transform pair of the
/// exponential autocovariance.
double psd_binding(const BindingNoiseModel& m, double f,
                   PsdNormalization norm = PsdNormalization::as_printed);

} // namespace flexmc
