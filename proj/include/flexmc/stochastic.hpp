#pragma once

#include <cstdint>
#include <vector>

#include "flexmc/config.hpp"

namespace flexmc {

/// Uniformly sampled trajectory of per-species bound-receptor counts.
struct ReceptorTrajectory {
  double sample_dt = 0.0;
  std::vector<std::vector<long>> counts;  // counts[j][i]: species j at t = i*dt
  std::vector<long> total;                // sum over species at each sample
  uint64_t seed = 0;
  long NR = 0;
  bool short_run = false;  // duration not >> relaxation time
};

/// Event-driven Markov simulation of NR independent receptors; a free receptor
/// binds species j at rate k_j+ [L_j]0, a j-bound receptor unbinds at k_j-.
/// Ligand depletion ignored (total concentrations held constant).
ReceptorTrajectory simulate(const std::vector<LigandSpec>& species, long NR,
                            double duration, double sample_dt, uint64_t seed);

struct EmpiricalStats {
  double p_hat = 0.0;               // mean occupancy fraction
  double var_hat = 0.0;             // variance of the total bound count
  std::vector<double> p_hat_j;      // per-species occupancy fractions
  bool window_too_short = false;
};

/// Stationary statistics over the post-burn-in window (burn-in = 10 tau_B).
EmpiricalStats empirical_stats(const ReceptorTrajectory& traj, double tau_B);

struct EmpiricalPsd {
  std::vector<double> freq;  // [Hz]
  std::vector<double> psd;   // one-sided, count^2/Hz
};

/// Welch-averaged periodogram of the total bound count (Hann window, 50% overlap).
EmpiricalPsd empirical_psd(const ReceptorTrajectory& traj);

struct LorentzianFit {
  double amplitude = 0.0;   // plateau level
  double corner_hz = 0.0;
  double rms_log_residual = 0.0;
};

/// Least-squares Lorentzian fit A/(1+(f/fc)^2) on a log-log grid.
LorentzianFit fit_lorentzian(const EmpiricalPsd& psd);

} // namespace flexmc
