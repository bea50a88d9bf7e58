#include "flexmc/binding_noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "flexmc/equilibrium.hpp"
#include "flexmc/errors.hpp"

namespace flexmc {

BindingNoiseModel build_noise_model(const std::vector<LigandSpec>& species, double NR) {
  if (!(NR >= 1)) throw DomainError("build_noise_model: NR >= 1 required");
  BindingNoiseModel m;
  m.NR = NR;
  if (species.empty()) {
    m.degenerate = true;
    m.tau_B = std::numeric_limits<double>::infinity();
    return m;
  }
  std::vector<EquilibriumProblem::Species> sp;
  sp.reserve(species.size());
  for (const auto& lg : species) sp.push_back({lg.conc0, lg.dissociation_constant()});
  BoundProbability bp = bound_probability(sp);
  m.p_B = bp.p_B;
  m.p_Bj = bp.p_Bj;
  m.var_NB = m.p_B * (1.0 - m.p_B) * NR;
  for (size_t j = 0; j < species.size(); ++j) {
    m.k_on_total += species[j].k_on * species[j].conc0;
    m.k_off_total += bp.p_Bj[j] * species[j].k_off;
  }
  double rate = m.k_on_total + m.k_off_total;
  if (rate > 0) {
    m.tau_B = 1.0 / rate;
  } else {
    m.degenerate = true;
    m.tau_B = std::numeric_limits<double>::infinity();
  }
  return m;
}

double autocorrelation(const BindingNoiseModel& m, double lag) {
  if (m.degenerate) throw DomainError("autocorrelation: degenerate (no-ligand) noise model");
  if (!(lag >= 0)) throw DomainError("autocorrelation: lag >= 0 required");
  return m.var_NB * std::exp(-lag / m.tau_B);
}

double psd_binding(const BindingNoiseModel& m, double f, PsdNormalization norm) {
  if (m.degenerate) throw DomainError("psd_binding: degenerate (no-ligand) noise model");
  double w = 2.0 * std::numbers::pi * f * m.tau_B;
  double lorentz = 1.0 / (1.0 + w * w);
  if (norm == PsdNormalization::as_printed) {
    return m.var_NB / (2.0 * m.tau_B) * lorentz;
  }
  return 2.0 * m.var_NB * m.tau_B * lorentz;
}

} // namespace flexmc
