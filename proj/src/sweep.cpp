#include "flexmc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <thread>

#include "flexmc/errors.hpp"
#include "flexmc/version.hpp"

namespace flexmc {

PointEvaluation evaluate_point(const Config& cfg) {
  if (cfg.ligands.empty()) throw ConfigError("evaluation requires at least one ligand");
  DerivedDevice dd = derive_device(cfg.device);

  EquilibriumProblem prob = reaction_limited_problem(cfg.ligands);
  EquilibriumSolution eq = solve_iterative(prob);

  PointEvaluation pe;
  OccupancyFractions occ = occupancy_fractions(eq, prob.P0);
  pe.theta = occ.theta;
  pe.theta_sum = occ.theta_sum;
  pe.P_free_surface = (1.0 - occ.theta_sum) * cfg.device.P0_surface;

  BoundDensityVector bdv = bound_densities(eq, cfg.device.P0_surface);
  double MV = molecular_volume(cfg.ligands[0].mw, cfg.device.rho_ligand);
  pe.response = transduce(bdv, MV, cfg.device, dd);

  BindingNoiseModel noise = build_noise_model(cfg.ligands, dd.NR);
  double dpsi1 = dpsi_single(MV, cfg.device, dd);
  NoisePsd psd = total_noise(noise, pe.response, dpsi1, cfg.device, dd);

  pe.stats.mu_I_target = std::abs(cfg.device.IDS1 - pe.response.target.I_mean);
  pe.stats.mu_I_interferer = std::abs(cfg.device.IDS1 - pe.response.interferer.I_mean);
  pe.stats.mu_I_sum = std::abs(cfg.device.IDS1 - pe.response.sum.I_mean);
  pe.stats.sigma2 = psd.sigma2_I;
  return pe;
}

double sep_value(const Config& cfg, int bits, SepVariant v) {
  if (cfg.ligands.empty()) throw ConfigError("sep requires a target ligand");
  DerivedDevice dd = derive_device(cfg.device);
  std::vector<LigandSpec> interferers(cfg.ligands.begin() + 1, cfg.ligands.end());
  WskAlphabet alphabet = build_alphabet(bits, cfg.link.mw_min, cfg.link.mw_max,
                                        cfg.ligands[0].conc0, std::move(interferers));
  std::vector<SymbolStats> stats = evaluate_alphabet(alphabet, cfg, dd);
  DecisionThresholds thr = ml_thresholds(stats, v);
  return sep(stats, thr, v).value;
}

std::vector<double> sweep_values(const SweepSpec& spec) {
  if (!(spec.points >= 2)) throw ConfigError("sweep requires points >= 2");
  if (!(spec.lo < spec.hi)) throw ConfigError("sweep requires lo < hi");
  if (spec.scale == SweepScale::log && !(spec.lo > 0)) {
    throw ConfigError("log sweep requires lo > 0");
  }
  std::vector<double> vals(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    double t = static_cast<double>(i) / (spec.points - 1);
    vals[i] = (spec.scale == SweepScale::log)
                  ? spec.lo * std::pow(spec.hi / spec.lo, t)
                  : spec.lo + (spec.hi - spec.lo) * t;
  }
  vals.front() = spec.lo;
  vals.back() = spec.hi;
  return vals;
}

namespace {

struct MetricSet {
  bool sensitivity = false, want_snr1 = false, want_snr2 = false;
  bool want_sep1 = false, want_sep2 = false, psd = false, equilibrium = false;
};

MetricSet parse_outputs(const std::vector<std::string>& outputs) {
  MetricSet m;
  for (const auto& o : outputs) {
    if (o == "sensitivity") m.sensitivity = true;
    else if (o == "snr1") m.want_snr1 = true;
    else if (o == "snr2") m.want_snr2 = true;
    else if (o == "sep1") m.want_sep1 = true;
    else if (o == "sep2") m.want_sep2 = true;
    else if (o == "psd") m.psd = true;
    else if (o == "equilibrium") m.equilibrium = true;
    else throw ConfigError("unknown sweep output '" + o + "'");
  }
  return m;
}

std::string leaf_name(const std::string& key) {
  size_t dot = key.rfind('.');
  return dot == std::string::npos ? key : key.substr(dot + 1);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

std::vector<std::string> standard_meta(const Config& cfg, const SweepOptions& opts) {
  std::vector<std::string> meta;
  meta.push_back(std::string("flexmc ") + kVersion);
  if (!opts.reproducible) {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta.push_back(std::string("generated: ") + buf);
  }
  meta.push_back("preset: " + (cfg.preset_name.empty() ? std::string("(file)") : cfg.preset_name));
  meta.push_back("config_hash: " + config_hash(cfg));
  meta.push_back("seed: " + std::to_string(opts.seed));
  for (const auto& d : cfg.defaulted) meta.push_back("default: " + d);
  return meta;
}

Table run_sweep(const SweepSpec& spec, const Config& base, const SweepOptions& opts,
                int* failed_rows) {
  MetricSet want = parse_outputs(spec.outputs);
  if (spec.outputs.empty()) throw ConfigError("sweep requires at least one output metric");
  std::vector<double> vals = sweep_values(spec);

  // probe the key once so bad keys fail up front with a clear message
  {
    Config probe = base;
    apply_override(probe, spec.key + "=" + format_full(vals[0]));
  }

  Table t;
  t.meta = standard_meta(base, opts);
  t.add_meta("sweep_key: " + spec.key);
  t.columns.push_back(leaf_name(spec.key));
  if (want.sensitivity) {
    t.columns.insert(t.columns.end(), {"S_target", "S_interferer", "S_sum"});
  }
  if (want.want_snr1) t.columns.push_back("snr1_db");
  if (want.want_snr2) t.columns.push_back("snr2_db");
  if (want.want_sep1) t.columns.push_back("sep1");
  if (want.want_sep2) t.columns.push_back("sep2");
  if (want.psd) t.columns.push_back("sigma2_I");
  if (want.equilibrium) {
    t.columns.insert(t.columns.end(), {"P_free", "theta_target", "theta_interferer"});
  }

  const size_t ncols = t.columns.size();
  std::vector<std::vector<double>> rows(vals.size());
  std::vector<std::string> errors(vals.size());

  auto compute_row = [&](size_t i) {
    std::vector<double> row;
    row.reserve(ncols);
    row.push_back(vals[i]);
    try {
      Config cfg = base;
      apply_override(cfg, spec.key + "=" + format_full(vals[i]));
      bool need_point = want.sensitivity || want.want_snr1 || want.want_snr2 ||
                        want.psd || want.equilibrium;
      PointEvaluation pe;
      if (need_point) pe = evaluate_point(cfg);
      if (want.sensitivity) {
        row.push_back(pe.response.target.S);
        row.push_back(pe.response.interferer.S);
        row.push_back(pe.response.sum.S);
      }
      if (want.want_snr1) row.push_back(to_db(snr1(pe.stats)));
      if (want.want_snr2) row.push_back(to_db(snr2(pe.stats)));
      if (want.want_sep1) row.push_back(sep_value(cfg, cfg.link.bits, SepVariant::sep1));
      if (want.want_sep2) row.push_back(sep_value(cfg, cfg.link.bits, SepVariant::sep2));
      if (want.psd) row.push_back(pe.stats.sigma2);
      if (want.equilibrium) {
        row.push_back(pe.P_free_surface);
        row.push_back(pe.theta.empty() ? 0.0 : pe.theta[0]);
        double ti = 0.0;
        for (size_t j = 1; j < pe.theta.size(); ++j) ti += pe.theta[j];
        row.push_back(ti);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
      row.resize(ncols, std::nan(""));
    }
    rows[i] = std::move(row);
  };

  int nthreads = opts.threads > 0 ? opts.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min<int>(nthreads, static_cast<int>(vals.size()));

  if (nthreads == 1) {
    for (size_t i = 0; i < vals.size(); ++i) compute_row(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int k = 0; k < nthreads; ++k) {
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < vals.size(); i = next.fetch_add(1)) {
          compute_row(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  int failed = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      t.add_meta("row " + std::to_string(i) + " failed: " + errors[i]);
    }
  }
  for (auto& row : rows) t.add_row(std::move(row));
  if (failed_rows) *failed_rows = failed;
  return t;
}

} // namespace flexmc
