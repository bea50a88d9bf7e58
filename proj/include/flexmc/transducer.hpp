#pragma once

#include <functional>
#include <vector>

#include "flexmc/binding_noise.hpp"
#include "flexmc/config.hpp"
#include "flexmc/equilibrium.hpp"

namespace flexmc {

/// Bound receptor surface densities split by origin [m^-2].
struct BoundDensityVector {
  double ns_target = 0.0;
  double ns_interferer = 0.0;
  double ns_sum = 0.0;
};

/// Electromechanical response of one density component.
struct ComponentResponse {
  double dk = 0.0;      // stiffness change [N/m]
  double dy = 0.0;      // gate displacement change [m]
  double dpsi = 0.0;    // surface potential shift [V]
  double S = 1.0;       // sensitivity ratio (pre/post current)
  double I_mean = 0.0;  // post-binding mean drain current [A]
};

struct TransducerResponse {
  ComponentResponse target;
  ComponentResponse interferer;
  ComponentResponse sum;
};

/// Output-current noise decomposition on a frequency grid.
struct NoisePsd {
  std::vector<double> grid;       // [Hz]
  std::vector<double> s_binding;  // [A^2/Hz]
  std::vector<double> s_flicker;  // [A^2/Hz]
  std::vector<double> s_total;    // [A^2/Hz]
  double sigma2_I = 0.0;          // integrated output variance [A^2]
};

BoundDensityVector bound_densities(const EquilibriumSolution& eq, double P0_surface);

/// Equilibrium problem for the receiver pipeline. The reception space holds
/// ligand concentrations constant over a symbol, so the receptor total enters
/// only as the reference the occupancy fractions are measured against; it is
/// set far below every K_j, where the fractions are independent of its value
/// and no volumetric conversion of the surface density is needed.
EquilibriumProblem reaction_limited_problem(const std::vector<LigandSpec>& species);

/// Molecular volume from molecular weight [g/mol] and mass density [kg/m^3].
double molecular_volume(double mw_gmol, double rho);

double stiffness_change(double ns, double MV, double H, double k_stiff);
double gate_displacement(double ns, double MV, const DeviceConfig& cfg,
                         const DerivedDevice& dd);
double surface_potential_shift(double dk, double dy, const DeviceConfig& cfg,
                               const DerivedDevice& dd);

/// Sensitivity S = exp((k dy - dk (y0-y)) / (kB T eps_r NA A)) and the
/// post-binding mean current IDS1/S.
struct Sensitivity {
  double S = 1.0;
  double I_mean = 0.0;
};
Sensitivity sensitivity(double dk, double dy, const DeviceConfig& cfg,
                        const DerivedDevice& dd);

ComponentResponse transduce_component(double ns, double MV, const DeviceConfig& cfg,
                                      const DerivedDevice& dd);

/// Full chain per component; the sum component runs through the nonlinear
/// chain from ns_sum, not by adding component currents.
TransducerResponse transduce(const BoundDensityVector& bdv, double MV,
                             const DeviceConfig& cfg, const DerivedDevice& dd);

/// Correlated number/mobility-fluctuation flicker PSD at the output [A^2/Hz].
double flicker_psd(double f, double I_mean, const DeviceConfig& cfg,
                   const DerivedDevice& dd);

/// Subthreshold transconductance q I / (m kB T).
double transconductance(double I_mean, const DeviceConfig& cfg);

/// Surface-potential shift of exactly one bound ligand (ns = 1/A).
double dpsi_single(double MV, const DeviceConfig& cfg, const DerivedDevice& dd);

/// Compose binding + flicker output noise on `grid` (defaults to a log grid
/// over the configured band) and integrate the two-sided total over
/// [f_min, f_max] by adaptive quadrature.
NoisePsd total_noise(const BindingNoiseModel& model, const TransducerResponse& response,
                     double dpsi_1, const DeviceConfig& cfg, const DerivedDevice& dd,
                     const std::vector<double>& grid = {});

/// Adaptive composite Simpson rule on a logarithmic abscissa; doubles the
/// panel count until successive estimates agree to rel_tol.
double integrate_log(double lo, double hi, double rel_tol,
                     const std::function<double(double)>& f);

std::vector<double> log_grid(double lo, double hi, int points);

} // namespace flexmc
