#include "flexmc/transducer.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "flexmc/constants.hpp"
#include "flexmc/errors.hpp"

namespace flexmc {

EquilibriumProblem reaction_limited_problem(const std::vector<LigandSpec>& species) {
  EquilibriumProblem prob;
  double k_min = std::numeric_limits<double>::infinity();
  for (const auto& lg : species) {
    double K = lg.dissociation_constant();
    prob.species.push_back({lg.conc0, K});
    k_min = std::min(k_min, K);
  }
  prob.P0 = species.empty() ? 1.0 : 1e-9 * k_min;
  return prob;
}

BoundDensityVector bound_densities(const EquilibriumSolution& eq, double P0_surface) {
  BoundDensityVector v;
  if (eq.PL.empty()) return v;
  double P0 = eq.P_free;
  for (double pl : eq.PL) P0 += pl;
  if (!(P0 > 0)) return v;
  v.ns_target = eq.PL[0] / P0 * P0_surface;
  for (size_t j = 1; j < eq.PL.size(); ++j) v.ns_interferer += eq.PL[j] / P0 * P0_surface;
  v.ns_sum = v.ns_target + v.ns_interferer;
  return v;
}

double molecular_volume(double mw_gmol, double rho) {
  if (!(mw_gmol > 0)) throw DomainError("molecular_volume: mw > 0 required");
  if (!(rho > 0)) throw DomainError("molecular_volume: rho > 0 required");
  return (mw_gmol / 1000.0) / (kAvogadro * rho);
}

double stiffness_change(double ns, double MV, double H, double k_stiff) {
  if (!(ns >= 0) || !(MV >= 0)) throw DomainError("stiffness_change: ns, MV >= 0 required");
  if (!(H > 0)) throw DomainError("stiffness_change: H > 0 required");
  return k_stiff * 3.0 * ns * MV / H;
}

double gate_displacement(double ns, double MV, const DeviceConfig& cfg,
                         const DerivedDevice& dd) {
  if (!(ns >= 0)) throw DomainError("gate_displacement: ns >= 0 required");
  double y = cfg.y_operating();
  double dv = cfg.VG - cfg.psi_s;
  double radicand = kVacuumPermittivity * dd.A * dv * dv / (2.0 * (3.0 * y - cfg.y0)) *
                    ns * MV / (cfg.H * dd.k_stiff);
  if (cfg.displacement_factor3) radicand *= 3.0;
  if (radicand < 0) {
    throw InternalError("gate_displacement: negative radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand);
}

double surface_potential_shift(double dk, double dy, const DeviceConfig& cfg,
                               const DerivedDevice& dd) {
  double y = cfg.y_operating();
  double eps_r = cfg.eps_s / kVacuumPermittivity;
  return (-dd.k_stiff * dy + dk * (cfg.y0 - y)) /
         (kElementaryCharge * eps_r * cfg.NA * dd.A);
}

Sensitivity sensitivity(double dk, double dy, const DeviceConfig& cfg,
                        const DerivedDevice& dd) {
  double y = cfg.y_operating();
  double eps_r = cfg.eps_s / kVacuumPermittivity;
  double exponent = (dd.k_stiff * dy - dk * (cfg.y0 - y)) /
                    (kBoltzmann * cfg.T * eps_r * cfg.NA * dd.A);
  if (std::abs(exponent) > 700.0) {
    throw RangeError("sensitivity: exponent overflows exp()", exponent);
  }
  Sensitivity s;
  s.S = std::exp(exponent);
  s.I_mean = cfg.IDS1 / s.S;
  return s;
}

ComponentResponse transduce_component(double ns, double MV, const DeviceConfig& cfg,
                                      const DerivedDevice& dd) {
  ComponentResponse r;
  r.dk = stiffness_change(ns, MV, cfg.H, dd.k_stiff);
  r.dy = gate_displacement(ns, MV, cfg, dd);
  r.dpsi = surface_potential_shift(r.dk, r.dy, cfg, dd);
  Sensitivity s = sensitivity(r.dk, r.dy, cfg, dd);
  r.S = s.S;
  r.I_mean = s.I_mean;
  return r;
}

TransducerResponse transduce(const BoundDensityVector& bdv, double MV,
                             const DeviceConfig& cfg, const DerivedDevice& dd) {
  TransducerResponse out;
  out.target = transduce_component(bdv.ns_target, MV, cfg, dd);
  out.interferer = transduce_component(bdv.ns_interferer, MV, cfg, dd);
  out.sum = transduce_component(bdv.ns_sum, MV, cfg, dd);
  return out;
}

double transconductance(double I_mean, const DeviceConfig& cfg) {
  return kElementaryCharge * I_mean / (cfg.m_ideality * kBoltzmann * cfg.T);
}

double flicker_psd(double f, double I_mean, const DeviceConfig& cfg,
                   const DerivedDevice& dd) {
  if (f == 0.0) throw DomainError("flicker_psd: f != 0 required");
  double g = transconductance(I_mean, cfg);
  double not_per_joule = cfg.Not / kJoulePerEv;
  double bracket = 1.0 + cfg.alpha_s * cfg.mu_p * dd.Cox * (cfg.VG - std::abs(cfg.VTH));
  double num = cfg.lambda_tun * kBoltzmann * cfg.T * kElementaryCharge *
               kElementaryCharge * not_per_joule * g * g;
  double den = cfg.W * cfg.L * dd.Cox * dd.Cox * std::abs(f);
  return num / den * bracket * bracket;
}

double dpsi_single(double MV, const DeviceConfig& cfg, const DerivedDevice& dd) {
  double ns1 = 1.0 / dd.A;
  double dk = stiffness_change(ns1, MV, cfg.H, dd.k_stiff);
  double dy = gate_displacement(ns1, MV, cfg, dd);
  return surface_potential_shift(dk, dy, cfg, dd);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0 && lo < hi) || points < 2) {
    throw ConfigError("log grid requires 0 < lo < hi and points >= 2");
  }
  std::vector<double> g(points);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

double integrate_log(double lo, double hi, double rel_tol,
                     const std::function<double(double)>& f) {
  if (!(lo > 0 && lo < hi)) throw ConfigError("integration band requires 0 < lo < hi");
  // integral f(x) dx = integral f(e^u) e^u du on u in [ln lo, ln hi]
  auto g = [&](double u) {
    double x = std::exp(u);
    return f(x) * x;
  };
  double ulo = std::log(lo), uhi = std::log(hi);
  double decades = (uhi - ulo) / std::numbers::ln10;
  long n = std::max<long>(64, static_cast<long>(64.0 * decades));
  if (n % 2) ++n;

  auto simpson = [&](long panels) {
    double h = (uhi - ulo) / panels;
    double acc = g(ulo) + g(uhi);
    for (long i = 1; i < panels; ++i) acc += g(ulo + h * i) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
  };

  double prev = simpson(n);
  for (int pass = 0; pass < 24; ++pass) {
    n *= 2;
    double cur = simpson(n);
    double err = std::abs(cur - prev);
    if (err <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

NoisePsd total_noise(const BindingNoiseModel& model, const TransducerResponse& response,
                     double dpsi_1, const DeviceConfig& cfg, const DerivedDevice& dd,
                     const std::vector<double>& grid) {
  if (!(cfg.f_min > 0 && cfg.f_min < cfg.f_max)) {
    throw ConfigError("noise band requires 0 < f_min < f_max");
  }
  double I = response.sum.I_mean;  // drain current reflects all bound species
  double g = transconductance(I, cfg);
  double gain2 = dpsi_1 * dpsi_1 * g * g;

  auto binding_at = [&](double f) {
    if (model.degenerate) return 0.0;
    return psd_binding(model, f, cfg.psd_normalization) * gain2;
  };
  auto flicker_at = [&](double f) { return flicker_psd(f, I, cfg, dd); };

  NoisePsd out;
  out.grid = grid.empty() ? log_grid(cfg.f_min, cfg.f_max, 121) : grid;
  out.s_binding.reserve(out.grid.size());
  out.s_flicker.reserve(out.grid.size());
  out.s_total.reserve(out.grid.size());
  for (double f : out.grid) {
    double sb = binding_at(f);
    double sf = flicker_at(f);
    out.s_binding.push_back(sb);
    out.s_flicker.push_back(sf);
    out.s_total.push_back(sb + sf);
  }
  // even integrand, two-sided spectrum
  out.sigma2_I = 2.0 * integrate_log(cfg.f_min, cfg.f_max, 1e-8, [&](double f) {
    return binding_at(f) + flicker_at(f);
  });
  return out;
}

} // namespace flexmc
