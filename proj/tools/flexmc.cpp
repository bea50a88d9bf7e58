#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flexmc/binding_noise.hpp"
#include "flexmc/config.hpp"
#include "flexmc/equilibrium.hpp"
#include "flexmc/errors.hpp"
#include "flexmc/figures.hpp"
#include "flexmc/link_metrics.hpp"
#include "flexmc/stochastic.hpp"
#include "flexmc/sweep.hpp"
#include "flexmc/table.hpp"
#include "flexmc/transducer.hpp"
#include "flexmc/version.hpp"

namespace {

using namespace flexmc;

struct GlobalOpts {
  std::string config_path;
  std::string preset = "table1";
  std::vector<std::string> sets;
  std::string out_dir;
  std::string format = "csv";
  uint64_t seed = 0;
  int threads = 0;
  bool reproducible = false;
};

Config build_config(const GlobalOpts& g) {
  Config cfg = g.config_path.empty() ? load_preset(g.preset) : load_config(g.config_path);
  for (const auto& s : g.sets) apply_override(cfg, s);
  return cfg;
}

SweepOptions sweep_options(const GlobalOpts& g) {
  SweepOptions o;
  o.threads = g.threads;
  o.reproducible = g.reproducible;
  o.seed = g.seed;
  return o;
}

void emit(const Table& t, const GlobalOpts& g, const std::string& name) {
  if (g.out_dir.empty()) {
    if (g.format == "json") write_json(t, std::cout);
    else write_csv(t, std::cout);
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  std::string ext = (g.format == "json") ? ".json" : ".csv";
  std::string path = g.out_dir + "/" + name + ext;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  if (g.format == "json") write_json(t, out);
  else write_csv(t, out);
  std::cerr << "wrote " << path << "\n";
}

// "key:scale:lo:hi:points", e.g. "ligand[1].conc0:log:1e12:1e16:25"
SweepSpec parse_sweep_arg(const std::string& arg) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : arg) {
    if (c == ':') { parts.push_back(cur); cur.clear(); }
    else cur += c;
  }
  parts.push_back(cur);
  if (parts.size() != 5) {
    throw ConfigError("--sweep must be key:scale:lo:hi:points, got '" + arg + "'");
  }
  SweepSpec s;
  s.key = parts[0];
  if (parts[1] == "log") s.scale = SweepScale::log;
  else if (parts[1] == "lin" || parts[1] == "linear") s.scale = SweepScale::linear;
  else throw ConfigError("sweep scale must be 'log' or 'lin'");
  s.lo = std::stod(parts[2]);
  s.hi = std::stod(parts[3]);
  s.points = std::stoi(parts[4]);
  return s;
}

// "log:f_min:f_max:points"
std::vector<double> parse_fgrid(const std::string& arg) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : arg) {
    if (c == ':') { parts.push_back(cur); cur.clear(); }
    else cur += c;
  }
  parts.push_back(cur);
  if (parts.size() != 4 || parts[0] != "log") {
    throw ConfigError("--fgrid must be log:f_min:f_max:points, got '" + arg + "'");
  }
  return log_grid(std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3]));
}

int cmd_equilibrium(const GlobalOpts& g) {
  Config cfg = build_config(g);
  EquilibriumProblem prob;
  prob.P0 = cfg.device.P0_surface;
  for (const auto& lg : cfg.ligands) {
    prob.species.push_back({lg.conc0, lg.dissociation_constant()});
  }
  EquilibriumSolution sol = solve_iterative(prob);
  nlohmann::json j;
  j["P_free"] = sol.P_free;
  j["PL"] = sol.PL;
  j["L_free"] = sol.L_free;
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_noise_psd(const GlobalOpts& g, const std::string& fgrid) {
  Config cfg = build_config(g);
  DerivedDevice dd = derive_device(cfg.device);
  PointEvaluation pe = evaluate_point(cfg);
  BindingNoiseModel noise = build_noise_model(cfg.ligands, dd.NR);
  double MV = molecular_volume(cfg.ligands[0].mw, cfg.device.rho_ligand);
  double dpsi1 = dpsi_single(MV, cfg.device, dd);
  std::vector<double> grid =
      fgrid.empty() ? log_grid(cfg.device.f_min, cfg.device.f_max, 121) : parse_fgrid(fgrid);
  NoisePsd psd = total_noise(noise, pe.response, dpsi1, cfg.device, dd, grid);

  Table t;
  t.meta = standard_meta(cfg, sweep_options(g));
  t.add_meta("sigma2_I: " + format_float(psd.sigma2_I));
  t.columns = {"f_hz", "s_binding", "s_flicker", "s_total"};
  for (size_t i = 0; i < psd.grid.size(); ++i) {
    t.add_row({psd.grid[i], psd.s_binding[i], psd.s_flicker[i], psd.s_total[i]});
  }
  emit(t, g, "noise_psd");
  return 0;
}

int cmd_point_metric(const GlobalOpts& g, const std::string& name,
                     const std::string& sweep_arg) {
  Config cfg = build_config(g);
  if (!sweep_arg.empty() && name == "sep") {
    // both word sizes per row, independent of link.bits
    SweepSpec spec = parse_sweep_arg(sweep_arg);
    std::vector<double> vals = sweep_values(spec);
    Table t;
    t.meta = standard_meta(cfg, sweep_options(g));
    t.add_meta("sweep_key: " + spec.key);
    t.columns = {"sweep_value", "sep1_1bit", "sep2_1bit", "sep1_2bit", "sep2_2bit"};
    int failed = 0;
    for (size_t i = 0; i < vals.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
      try {
        Config point = cfg;
        apply_override(point, spec.key + "=" + buf);
        t.add_row({vals[i], sep_value(point, 1, SepVariant::sep1),
                   sep_value(point, 1, SepVariant::sep2),
                   sep_value(point, 2, SepVariant::sep1),
                   sep_value(point, 2, SepVariant::sep2)});
      } catch (const std::exception& e) {
        ++failed;
        t.add_meta("row " + std::to_string(i) + " failed: " + e.what());
        double nan = std::nan("");
        t.add_row({vals[i], nan, nan, nan, nan});
      }
    }
    emit(t, g, name);
    return failed > 0 ? 4 : 0;
  }
  if (!sweep_arg.empty()) {
    SweepSpec spec = parse_sweep_arg(sweep_arg);
    if (name == "snr") spec.outputs = {"snr1", "snr2"};
    else spec.outputs = {"sensitivity"};
    int failed = 0;
    Table t = run_sweep(spec, cfg, sweep_options(g), &failed);
    emit(t, g, name);
    return failed > 0 ? 4 : 0;
  }

  Table t;
  t.meta = standard_meta(cfg, sweep_options(g));
  if (name == "snr") {
    PointEvaluation pe = evaluate_point(cfg);
    t.columns = {"snr1_db", "snr2_db"};
    t.add_row({to_db(snr1(pe.stats)), to_db(snr2(pe.stats))});
  } else if (name == "sep") {
    t.columns = {"sep1_1bit", "sep2_1bit", "sep1_2bit", "sep2_2bit"};
    t.add_row({sep_value(cfg, 1, SepVariant::sep1), sep_value(cfg, 1, SepVariant::sep2),
               sep_value(cfg, 2, SepVariant::sep1), sep_value(cfg, 2, SepVariant::sep2)});
  } else {
    PointEvaluation pe = evaluate_point(cfg);
    t.columns = {"S_target", "S_interferer", "S_sum"};
    t.add_row({pe.response.target.S, pe.response.interferer.S, pe.response.sum.S});
  }
  emit(t, g, name);
  return 0;
}

int cmd_oracle(const GlobalOpts& g, double duration, double sample_dt, long nr_override) {
  Config cfg = build_config(g);
  DerivedDevice dd = derive_device(cfg.device);
  long NR = nr_override > 0 ? nr_override
                            : std::max<long>(1, static_cast<long>(std::llround(dd.NR)));
  BindingNoiseModel model = build_noise_model(cfg.ligands, static_cast<double>(NR));

  ReceptorTrajectory traj = simulate(cfg.ligands, NR, duration, sample_dt, g.seed);
  EmpiricalStats st = empirical_stats(traj, model.tau_B);

  nlohmann::json j;
  j["seed"] = g.seed;
  j["NR"] = NR;
  j["duration_s"] = duration;
  j["sample_dt_s"] = sample_dt;
  j["short_run_warning"] = traj.short_run || st.window_too_short;
  j["analytic"] = {{"p_B", model.p_B},
                   {"var_NB", model.var_NB},
                   {"tau_B", model.tau_B},
                   {"p_Bj", model.p_Bj}};
  j["empirical"] = {{"p_hat", st.p_hat}, {"var_hat", st.var_hat}, {"p_hat_j", st.p_hat_j}};
  if (!model.degenerate && traj.total.size() >= 256) {
    EmpiricalPsd psd = empirical_psd(traj);
    LorentzianFit fit = fit_lorentzian(psd);
    j["analytic"]["corner_hz"] = 1.0 / (2.0 * std::numbers::pi * model.tau_B);
    j["empirical"]["corner_hz"] = fit.corner_hz;
    j["empirical"]["lorentzian_rms_log_residual"] = fit.rms_log_residual;
  }
  std::cout << j.dump(2) << "\n";

  if (!g.out_dir.empty()) {
    Table t;
    t.meta = standard_meta(cfg, sweep_options(g));
    t.columns = {"t_s", "nb_total"};
    for (size_t s = 0; s < traj.counts.size(); ++s) {
      t.columns.push_back("nb_" + std::to_string(s));
    }
    for (size_t i = 0; i < traj.total.size(); ++i) {
      std::vector<double> row{static_cast<double>(i) * traj.sample_dt,
                              static_cast<double>(traj.total[i])};
      for (size_t s = 0; s < traj.counts.size(); ++s) {
        row.push_back(static_cast<double>(traj.counts[s][i]));
      }
      t.add_row(std::move(row));
    }
    emit(t, g, "oracle_trajectory");
  }
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& key, const std::string& scale,
              double lo, double hi, int points, const std::vector<std::string>& outputs) {
  Config cfg = build_config(g);
  SweepSpec spec;
  spec.key = key;
  if (scale == "log") spec.scale = SweepScale::log;
  else if (scale == "lin" || scale == "linear") spec.scale = SweepScale::linear;
  else throw ConfigError("--scale must be 'log' or 'lin'");
  spec.lo = lo;
  spec.hi = hi;
  spec.points = points;
  spec.outputs = outputs;
  int failed = 0;
  Table t = run_sweep(spec, cfg, sweep_options(g), &failed);
  emit(t, g, "sweep");
  return failed > 0 ? 4 : 0;
}

int cmd_figure(const GlobalOpts& g, const std::string& id, const FigureAxis& axis) {
  Config cfg = build_config(g);
  Table t = reproduce_figure(id, cfg, sweep_options(g), axis);
  emit(t, g, id);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexure-FET molecular communication receiver model"};
  app.set_version_flag("--version", std::string("flexmc ") + flexmc::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "configuration file path");
  app.add_option("--preset", g.preset, "built-in preset: table1 or improved");
  app.add_option("--set", g.sets, "override a config key, e.g. device.Not=1e24")
      ->take_all();
  app.add_option("--out", g.out_dir, "output directory (default: stdout)");
  app.add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_flag("--reproducible", g.reproducible, "omit timestamps from metadata");

  auto* eq = app.add_subcommand("equilibrium", "solve the competitive binding equilibrium");

  std::string fgrid;
  auto* psd = app.add_subcommand("noise-psd", "output-current noise decomposition");
  psd->add_option("--fgrid", fgrid, "frequency grid log:f_min:f_max:points");

  std::string snr_sweep, sep_sweep, sens_sweep;
  auto* snr = app.add_subcommand("snr", "signal-to-noise ratios");
  snr->add_option("--sweep", snr_sweep, "key:scale:lo:hi:points");
  auto* sepc = app.add_subcommand("sep", "symbol error probabilities (1- and 2-bit)");
  sepc->add_option("--sweep", sep_sweep, "key:scale:lo:hi:points");
  auto* sens = app.add_subcommand("sensitivity", "device sensitivity components");
  sens->add_option("--sweep", sens_sweep, "key:scale:lo:hi:points");

  double duration = 60.0, sample_dt = 1e-3;
  long oracle_nr = 0;
  auto* oracle = app.add_subcommand("oracle", "stochastic receptor simulation report");
  oracle->add_option("--duration", duration, "simulated seconds");
  oracle->add_option("--sample-dt", sample_dt, "sampling interval [s]");
  oracle->add_option("--nr", oracle_nr, "receptor count (0 = derived from the device)");

  std::string sw_key, sw_scale = "log";
  double sw_lo = 0.0, sw_hi = 0.0;
  int sw_points = 25;
  std::vector<std::string> sw_outputs;
  auto* sweep = app.add_subcommand("sweep", "sweep any scalar config key");
  sweep->add_option("--key", sw_key, "config key path")->required();
  sweep->add_option("--scale", sw_scale, "log or lin");
  sweep->add_option("--lo", sw_lo, "lower bound")->required();
  sweep->add_option("--hi", sw_hi, "upper bound")->required();
  sweep->add_option("--points", sw_points, "sweep points");
  sweep->add_option("--outputs", sw_outputs, "metrics: sensitivity,snr1,snr2,sep1,sep2,psd,equilibrium")
      ->required()
      ->delimiter(',');

  std::string fig_id;
  FigureAxis axis;
  double ax_lo = 0.0, ax_hi = 0.0;
  int ax_points = 0;
  auto* figure = app.add_subcommand("figure", "regenerate a figure dataset");
  figure->add_option("id", fig_id, "figure id (fig4, fig5, fig6a..e, fig7, fig8a..c, fig10a..c)")
      ->required();
  auto* lo_opt = figure->add_option("--lo", ax_lo, "primary axis lower bound");
  auto* hi_opt = figure->add_option("--hi", ax_hi, "primary axis upper bound");
  auto* pt_opt = figure->add_option("--points", ax_points, "primary axis points");

  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
    sc->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (eq->parsed()) return cmd_equilibrium(g);
    if (psd->parsed()) return cmd_noise_psd(g, fgrid);
    if (snr->parsed()) return cmd_point_metric(g, "snr", snr_sweep);
    if (sepc->parsed()) return cmd_point_metric(g, "sep", sep_sweep);
    if (sens->parsed()) return cmd_point_metric(g, "sensitivity", sens_sweep);
    if (oracle->parsed()) return cmd_oracle(g, duration, sample_dt, oracle_nr);
    if (sweep->parsed()) {
      return cmd_sweep(g, sw_key, sw_scale, sw_lo, sw_hi, sw_points, sw_outputs);
    }
    if (figure->parsed()) {
      if (lo_opt->count()) axis.lo = ax_lo;
      if (hi_opt->count()) axis.hi = ax_hi;
      if (pt_opt->count()) axis.points = ax_points;
      return cmd_figure(g, fig_id, axis);
    }
  } catch (const flexmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const flexmc::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
