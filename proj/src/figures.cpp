#include "flexmc/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flexmc/errors.hpp"
#include "flexmc/transducer.hpp"

namespace flexmc {

namespace {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_interferer(const Config& cfg) {
  if (cfg.ligands.size() < 2) {
    throw ConfigError("this figure needs a target plus at least one interferer ligand");
  }
}

SweepSpec relative_sweep(const std::string& key, double center, double rel_lo,
                         double rel_hi, int points, std::vector<std::string> outputs,
                         const FigureAxis& axis) {
  SweepSpec s;
  s.key = key;
  s.scale = SweepScale::log;
  s.lo = axis.lo.value_or(center * rel_lo);
  s.hi = axis.hi.value_or(center * rel_hi);
  s.points = axis.points.value_or(points);
  s.outputs = std::move(outputs);
  return s;
}

/// Replicate the first interferer n times at the target's concentration.
Config with_n_interferers(const Config& base, int n) {
  Config cfg = base;
  if (cfg.ligands.size() < 2) {
    throw ConfigError("multi-interferer figure needs an interferer template ligand");
  }
  LigandSpec tmpl = cfg.ligands[1];
  tmpl.conc0 = cfg.ligands[0].conc0;
  tmpl.mw = cfg.ligands[0].mw;
  cfg.ligands.resize(1);
  for (int i = 0; i < n; ++i) {
    LigandSpec lg = tmpl;
    lg.name = "interferer" + std::to_string(i + 1);
    cfg.ligands.push_back(lg);
  }
  finalize_config(cfg);
  return cfg;
}

/// Sweep one value across every interferer simultaneously (conc or k_on).
Table multi_interferer_sweep(const Config& cfg, const SweepOptions& opts,
                             const std::string& field, double center, double rel_lo,
                             double rel_hi, int points, const std::string& axis_name,
                             const FigureAxis& axis) {
  SweepSpec probe;
  probe.scale = SweepScale::log;
  probe.lo = axis.lo.value_or(center * rel_lo);
  probe.hi = axis.hi.value_or(center * rel_hi);
  probe.points = axis.points.value_or(points);
  std::vector<double> vals = sweep_values(probe);

  Table t;
  t.meta = standard_meta(cfg, opts);
  t.columns = {axis_name, "snr1_db", "snr2_db"};
  for (double v : vals) {
    Config point = cfg;
    for (size_t j = 1; j < point.ligands.size(); ++j) {
      apply_override(point, "ligand[" + std::to_string(j) + "]." + field + "=" +
                                format_full(v));
    }
    PointEvaluation pe = evaluate_point(point);
    t.add_row({v, to_db(snr1(pe.stats)), to_db(snr2(pe.stats))});
  }
  return t;
}

Table fig4(const Config& cfg, const SweepOptions& opts, const FigureAxis& axis) {
  require_interferer(cfg);
  double conc_def = cfg.ligands[1].conc0;
  double k2p_def = cfg.ligands[1].k_on;
  double lo = axis.lo.value_or(conc_def * 5.9e-2);
  double hi = axis.hi.value_or(conc_def * 5.9e5);
  int points = axis.points.value_or(36);
  const double k2p_set[] = {k2p_def / 3.0, k2p_def, k2p_def * 10.0 / 3.0};

  std::vector<double> grid = log_grid(lo, hi, points);
  Table t;
  t.meta = standard_meta(cfg, opts);
  t.columns = {"L2_conc", "k2_plus", "sensitivity_normalized"};
  std::vector<std::vector<double>> raw;
  double s_max = 0.0;
  for (double k2p : k2p_set) {
    for (double conc : grid) {
      Config point = cfg;
      apply_override(point, "ligand[1].k_on=" + format_full(k2p));
      apply_override(point, "ligand[1].conc0=" + format_full(conc));
      PointEvaluation pe = evaluate_point(point);
      raw.push_back({conc, k2p, pe.response.sum.S});
      s_max = std::max(s_max, pe.response.sum.S);
    }
  }
  for (auto& row : raw) t.add_row({row[0], row[1], row[2] / s_max});
  return t;
}

Table fig5(const Config& cfg, const SweepOptions& opts, const FigureAxis& axis) {
  if (cfg.ligands.empty()) throw ConfigError("fig5 needs at least one ligand");
  DerivedDevice dd = derive_device(cfg.device);
  PointEvaluation pe = evaluate_point(cfg);
  BindingNoiseModel noise = build_noise_model(cfg.ligands, dd.NR);
  double MV = molecular_volume(cfg.ligands[0].mw, cfg.device.rho_ligand);
  double dpsi1 = dpsi_single(MV, cfg.device, dd);
  double lo = axis.lo.value_or(cfg.device.f_min);
  double hi = axis.hi.value_or(cfg.device.f_max);
  NoisePsd psd = total_noise(noise, pe.response, dpsi1, cfg.device, dd,
                             log_grid(lo, hi, axis.points.value_or(121)));
  Table t;
  t.meta = standard_meta(cfg, opts);
  t.add_meta("sigma2_I: " + format_float(psd.sigma2_I));
  t.columns = {"f_hz", "s_binding", "s_flicker", "s_total"};
  for (size_t i = 0; i < psd.grid.size(); ++i) {
    t.add_row({psd.grid[i], psd.s_binding[i], psd.s_flicker[i], psd.s_total[i]});
  }
  return t;
}

Table fig7(const Config& cfg, const SweepOptions& opts, const FigureAxis& axis) {
  require_interferer(cfg);
  double conc_def = cfg.ligands[1].conc0;
  double k2p_def = cfg.ligands[1].k_on;
  int points = axis.points.value_or(15);
  std::vector<double> conc_grid =
      log_grid(axis.lo.value_or(conc_def * 5.9e-5), axis.hi.value_or(conc_def * 5.9e-1),
               points);
  std::vector<double> k2p_grid = log_grid(k2p_def * 0.0316227766, k2p_def * 31.6227766, points);
  Table t;
  t.meta = standard_meta(cfg, opts);
  t.columns = {"L2_conc", "k2_plus", "snr2_db"};
  for (double k2p : k2p_grid) {
    for (double conc : conc_grid) {
      Config point = cfg;
      apply_override(point, "ligand[1].k_on=" + format_full(k2p));
      apply_override(point, "ligand[1].conc0=" + format_full(conc));
      PointEvaluation pe = evaluate_point(point);
      t.add_row({conc, k2p, to_db(snr2(pe.stats))});
    }
  }
  return t;
}

Table fig10(const Config& cfg, const SweepOptions& opts, const SweepSpec& spec,
            const std::string& axis_name, bool axis_is_K2) {
  std::vector<double> vals = sweep_values(spec);
  Table t;
  t.meta = standard_meta(cfg, opts);
  t.add_meta("sweep_key: " + spec.key);
  t.columns = {axis_name, "sep1_1bit", "sep2_1bit", "sep1_2bit", "sep2_2bit"};
  for (double v : vals) {
    Config point = cfg;
    apply_override(point, spec.key + "=" + format_full(v));
    double axis_val = axis_is_K2 ? point.ligands[1].dissociation_constant() : v;
    t.add_row({axis_val,
               sep_value(point, 1, SepVariant::sep1), sep_value(point, 1, SepVariant::sep2),
               sep_value(point, 2, SepVariant::sep1), sep_value(point, 2, SepVariant::sep2)});
  }
  // K2 runs opposite to the swept association rate; emit with K2 ascending
  if (axis_is_K2 && t.rows.size() > 1 && t.rows.front()[0] > t.rows.back()[0]) {
    std::reverse(t.rows.begin(), t.rows.end());
  }
  return t;
}

} // namespace

std::vector<std::string> figure_ids() {
  return {"fig4", "fig5", "fig6a", "fig6b", "fig6c", "fig6d", "fig6e",
          "fig7", "fig8a", "fig8b", "fig8c", "fig10a", "fig10b", "fig10c"};
}

Table reproduce_figure(const std::string& id, const Config& cfg, const SweepOptions& opts,
                       const FigureAxis& axis) {
  auto snr_outputs = std::vector<std::string>{"snr1", "snr2"};

  if (id == "fig4") return fig4(cfg, opts, axis);
  if (id == "fig5") return fig5(cfg, opts, axis);
  if (id == "fig6a") {
    require_interferer(cfg);
    SweepSpec s = relative_sweep("ligand[1].conc0", cfg.ligands[1].conc0, 5.9e-5,
                                 5.9e-1, 25, snr_outputs, axis);
    return run_sweep(s, cfg, opts);
  }
  if (id == "fig6b") {
    SweepSpec s = relative_sweep("device.P0_surface", cfg.device.P0_surface, 1.0 / 3.0,
                                 3.0, 25, snr_outputs, axis);
    return run_sweep(s, cfg, opts);
  }
  if (id == "fig6c") {
    SweepSpec s = relative_sweep("device.Not", cfg.device.Not, 1e-2, 1e2, 25,
                                 snr_outputs, axis);
    return run_sweep(s, cfg, opts);
  }
  if (id == "fig6d") {
    require_interferer(cfg);
    SweepSpec s = relative_sweep("ligand[1].k_on", cfg.ligands[1].k_on, 0.0316227766,
                                 31.6227766, 25, snr_outputs, axis);
    return run_sweep(s, cfg, opts);
  }
  if (id == "fig6e") {
    require_interferer(cfg);
    SweepSpec s = relative_sweep("ligand[1].k_off", cfg.ligands[1].k_off, 0.0316227766,
                                 31.6227766, 25, snr_outputs, axis);
    return run_sweep(s, cfg, opts);
  }
  if (id == "fig7") return fig7(cfg, opts, axis);
  if (id == "fig8a") {
    Config multi = with_n_interferers(cfg, 2);
    SweepSpec s = relative_sweep("device.P0_surface", multi.device.P0_surface, 1.0 / 3.0,
                                 3.0, 25, snr_outputs, axis);
    return run_sweep(s, multi, opts);
  }
  if (id == "fig8b") {
    Config multi = with_n_interferers(cfg, 4);
    return multi_interferer_sweep(multi, opts, "k_on", cfg.ligands[1].k_on, 0.0316227766,
                                  31.6227766, 25, "k2_plus", axis);
  }
  if (id == "fig8c") {
    Config multi = with_n_interferers(cfg, 4);
    return multi_interferer_sweep(multi, opts, "conc0", cfg.ligands[1].conc0, 5.9e-5,
                                  5.9e-1, 25, "L2_conc", axis);
  }
  if (id == "fig10a") {
    require_interferer(cfg);
    SweepSpec s = relative_sweep("ligand[1].conc0", cfg.ligands[1].conc0, 0.3, 300.0, 25,
                                 {}, axis);
    return fig10(cfg, opts, s, "L2_conc", false);
  }
  if (id == "fig10b") {
    SweepSpec s = relative_sweep("device.P0_surface", cfg.device.P0_surface, 1e-2,
                                 1e-1, 25, {}, axis);
    return fig10(cfg, opts, s, "P0_surface", false);
  }
  if (id == "fig10c") {
    require_interferer(cfg);
    // K2 = k_off/k_on realized through the association rate, so the
    // interferer's binding flux (and its noise) tracks the sweep
    SweepSpec s = relative_sweep("ligand[1].k_on", cfg.ligands[1].k_on, 1.0, 100.0, 25,
                                 {}, axis);
    return fig10(cfg, opts, s, "K2", true);
  }

  std::string valid;
  for (const auto& v : figure_ids()) valid += (valid.empty() ? "" : ", ") + v;
  throw ConfigError("unknown figure id '" + id + "' (valid: " + valid + ")");
}

} // namespace flexmc
