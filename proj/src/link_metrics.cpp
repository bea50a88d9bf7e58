#include "flexmc/link_metrics.hpp"

#include <cmath>
#include <string>

#include "flexmc/errors.hpp"

namespace flexmc {

WskAlphabet build_alphabet(int bits, double mw_min, double mw_max, double conc,
                           std::vector<LigandSpec> interferers) {
  if (bits != 1 && bits != 2) throw ConfigError("WSK bits must be 1 or 2");
  if (!(mw_min < mw_max)) throw ConfigError("WSK requires mw_min < mw_max");
  WskAlphabet a;
  a.M = 1 << bits;
  a.interferers = std::move(interferers);
  for (int m = 0; m < a.M; ++m) {
    double mw = mw_min + (mw_max - mw_min) * m / (a.M - 1);
    a.symbols.push_back({mw, conc});
  }
  return a;
}

SymbolStats evaluate_symbol(const WskAlphabet::Symbol& sym, const WskAlphabet& alphabet,
                            const Config& cfg, const DerivedDevice& dd) {
  if (cfg.ligands.empty()) throw ConfigError("link evaluation requires a target ligand");
  std::vector<LigandSpec> species;
  species.reserve(1 + alphabet.interferers.size());
  LigandSpec target = cfg.ligands[0];
  target.conc0 = sym.conc;
  target.mw = sym.mw;
  species.push_back(target);
  for (LigandSpec ifr : alphabet.interferers) {
    ifr.mw = sym.mw;  // interferers carry the active symbol's weight
    species.push_back(ifr);
  }

  EquilibriumProblem prob = reaction_limited_problem(species);
  EquilibriumSolution eq = solve_iterative(prob);

  BoundDensityVector bdv = bound_densities(eq, cfg.device.P0_surface);
  double MV = molecular_volume(sym.mw, cfg.device.rho_ligand);
  TransducerResponse resp = transduce(bdv, MV, cfg.device, dd);

  BindingNoiseModel noise = build_noise_model(species, dd.NR);
  // per-molecule responsivity of the assay's reference (target) species
  double MV_ref = molecular_volume(cfg.ligands[0].mw, cfg.device.rho_ligand);
  double dpsi1 = dpsi_single(MV_ref, cfg.device, dd);
  NoisePsd psd = total_noise(noise, resp, dpsi1, cfg.device, dd);

  SymbolStats st;
  st.mu_I_target = std::abs(cfg.device.IDS1 - resp.target.I_mean);
  st.mu_I_interferer = std::abs(cfg.device.IDS1 - resp.interferer.I_mean);
  st.mu_I_sum = std::abs(cfg.device.IDS1 - resp.sum.I_mean);
  st.sigma2 = psd.sigma2_I;
  return st;
}

std::vector<SymbolStats> evaluate_alphabet(const WskAlphabet& alphabet, const Config& cfg,
                                           const DerivedDevice& dd) {
  std::vector<SymbolStats> out;
  out.reserve(alphabet.symbols.size());
  for (const auto& sym : alphabet.symbols) {
    out.push_back(evaluate_symbol(sym, alphabet, cfg, dd));
  }
  return out;
}

double snr1(const SymbolStats& s) {
  if (!(s.sigma2 > 0)) throw DomainError("snr1: sigma2 > 0 required");
  return s.mu_I_sum * s.mu_I_sum / s.sigma2;
}

double snr2(const SymbolStats& s) {
  if (!(s.sigma2 > 0)) throw DomainError("snr2: sigma2 > 0 required");
  return s.mu_I_target * s.mu_I_target /
         (s.sigma2 + s.mu_I_interferer * s.mu_I_interferer);
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }

SymbolGaussian symbol_gaussian(const SymbolStats& s, SepVariant v) {
  if (v == SepVariant::sep1) return {s.mu_I_sum, std::sqrt(s.sigma2)};
  return {s.mu_I_target,
          std::sqrt(s.sigma2 + s.mu_I_interferer * s.mu_I_interferer)};
}

namespace {

// Equal-likelihood point of two ordered Gaussians; root of the
// log-likelihood-difference quadratic inside (mu1, mu2).
double pair_threshold(const SymbolGaussian& g1, const SymbolGaussian& g2) {
  double mu1 = g1.mean, s1 = g1.sigma;
  double mu2 = g2.mean, s2 = g2.sigma;
  if (!(mu1 < mu2)) throw DomainError("ml_thresholds: symbol means must be strictly ordered");
  if (std::abs(s1 - s2) <= 1e-12 * std::max(s1, s2)) return 0.5 * (mu1 + mu2);

  // log-likelihood difference; positive where the lower symbol is likelier
  auto diff = [&](double x) {
    double d1 = (x - mu1) / s1, d2 = (x - mu2) / s2;
    return -0.5 * d1 * d1 - std::log(s1) + 0.5 * d2 * d2 + std::log(s2);
  };
  const double delta = 1e-7 * (mu2 - mu1);
  // a valid boundary hands the left side to the lower symbol
  auto is_boundary = [&](double x) {
    return x > mu1 && x < mu2 && diff(x - delta) > 0 && diff(x + delta) < 0;
  };

  double a = 1.0 / (s1 * s1) - 1.0 / (s2 * s2);
  double b = -2.0 * (mu1 / (s1 * s1) - mu2 / (s2 * s2));
  double c = mu1 * mu1 / (s1 * s1) - mu2 * mu2 / (s2 * s2) - 2.0 * std::log(s2 / s1);
  double disc = b * b - 4.0 * a * c;
  if (disc >= 0) {
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : r1;
    if (is_boundary(r1)) return r1;
    if (is_boundary(r2)) return r2;
  }
  if (diff(mu1) > 0 && diff(mu2) < 0) {
    double lo = mu1, hi = mu2;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (diff(mid) >= 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  // With strongly unequal variances the boundary-type crossing can leave the
  // interval entirely (the wider symbol dominates past its neighbor's mean).
  // Keep the detector's thresholds interleaved by reducing the pair to its
  // midpoint, as in the equal-variance case.
  return 0.5 * (mu1 + mu2);
}

} // namespace

DecisionThresholds ml_thresholds(const std::vector<SymbolStats>& stats, SepVariant v) {
  if (stats.size() < 2) throw DomainError("ml_thresholds: need at least 2 symbols");
  DecisionThresholds thr;
  for (size_t m = 0; m + 1 < stats.size(); ++m) {
    double lam = pair_threshold(symbol_gaussian(stats[m], v), symbol_gaussian(stats[m + 1], v));
    if (!thr.lambda.empty() && !(lam > thr.lambda.back())) {
      throw InternalError("ml_thresholds: thresholds not strictly increasing");
    }
    thr.lambda.push_back(lam);
  }
  return thr;
}

SepResult sep(const std::vector<SymbolStats>& stats, const DecisionThresholds& thr,
              SepVariant v) {
  const size_t M = stats.size();
  if (M < 2) throw DomainError("sep: need at least 2 symbols");
  if (thr.lambda.size() != M - 1) throw DomainError("sep: need M-1 thresholds");
  auto g = [&](size_t m) { return symbol_gaussian(stats[m], v); };
  const double rt2 = std::sqrt(2.0);

  double acc = 0.0;
  {
    SymbolGaussian g0 = g(0);
    acc += std::erfc((thr.lambda[0] - g0.mean) / (g0.sigma * rt2));
    SymbolGaussian gl = g(M - 1);
    acc += std::erfc((gl.mean - thr.lambda[M - 2]) / (gl.sigma * rt2));
  }
  for (size_t m = 1; m + 1 < M; ++m) {
    SymbolGaussian gm = g(m);
    acc += std::erfc((gm.mean - thr.lambda[m - 1]) / (gm.sigma * rt2));
    acc += std::erfc((thr.lambda[m] - gm.mean) / (gm.sigma * rt2));
  }
  SepResult res;
  res.value = acc / (2.0 * static_cast<double>(M));
  if (res.value < 0.0) { res.value = 0.0; res.clamped = true; }
  if (res.value > 1.0) { res.value = 1.0; res.clamped = true; }
  return res;
}

} // namespace flexmc
