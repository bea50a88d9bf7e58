// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the path to the flexmc executable (used by the
// determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flexmc/binding_noise.hpp"
#include "flexmc/config.hpp"
#include "flexmc/equilibrium.hpp"
#include "flexmc/figures.hpp"
#include "flexmc/link_metrics.hpp"
#include "flexmc/stochastic.hpp"
#include "flexmc/sweep.hpp"
#include "flexmc/table.hpp"
#include "flexmc/transducer.hpp"

using namespace flexmc;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  if (!ok) ++g_failures;
}

double rel_diff(double a, double b) {
  double m = std::max(std::abs(a), std::abs(b));
  return m == 0 ? 0.0 : std::abs(a - b) / m;
}

bool monotone(const std::vector<double>& v, bool increasing, bool strict) {
  for (size_t i = 1; i < v.size(); ++i) {
    double a = v[i - 1], b = v[i];
    if (increasing) {
      if (strict ? !(b > a) : !(b >= a)) return false;
    } else {
      if (strict ? !(b < a) : !(b <= a)) return false;
    }
  }
  return true;
}

std::vector<double> column(const Table& t, const std::string& name) {
  size_t idx = 0;
  for (; idx < t.columns.size(); ++idx) {
    if (t.columns[idx] == name) break;
  }
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(r.at(idx));
  return out;
}

SweepOptions repro_opts() {
  SweepOptions o;
  o.reproducible = true;
  return o;
}

// ---------------------------------------------------------------------------

void criterion_1_oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240801);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool agree = true, conserve = true;
  double worst_rel = 0.0, worst_mass = 0.0;
  for (int it = 0; it < 1000; ++it) {
    int n = 1 + static_cast<int>(rng() % 10);
    EquilibriumProblem p;
    p.P0 = std::pow(10.0, u(rng));
    for (int j = 0; j < n; ++j) {
      p.species.push_back({std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});
    }
    EquilibriumSolution a = solve_iterative(p);
    EquilibriumSolution b = solve_bisection(p);
    double rd = rel_diff(a.P_free, b.P_free);
    worst_rel = std::max(worst_rel, rd);
    if (rd > 1e-8) agree = false;
    double mass = a.P_free;
    for (double pl : a.PL) mass += pl;
    double md = std::abs(mass - p.P0) / p.P0;
    worst_mass = std::max(worst_mass, md);
    if (md > 1e-10) conserve = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "oracle equivalence over 1000 problems (worst rel %.2e, worst mass %.2e, "
                "%.2f s)",
                worst_rel, worst_mass, secs);
  report(1, agree && conserve && secs < 5.0, buf);
}

void criterion_2_closed_forms() {
  EquilibriumProblem single;
  single.P0 = 1.0;
  single.species = {{1.0, 1.0}};
  EquilibriumSolution s1 = solve_iterative(single);
  double e1 = std::abs(s1.PL[0] - (3.0 - std::sqrt(5.0)) / 2.0);

  EquilibriumProblem twin;
  twin.P0 = 1.0;
  twin.species = {{1.0, 1.0}, {1.0, 1.0}};
  EquilibriumSolution s2 = solve_iterative(twin);
  double e2 = std::abs(s2.P_free - (std::sqrt(2.0) - 1.0));

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "closed-form anchors: |PL-(3-sqrt5)/2| = %.2e, |P_free-(sqrt2-1)| = %.2e",
                e1, e2);
  report(2, e1 < 1e-12 && e2 < 1e-12, buf);
}

void criterion_3_stochastic_validation() {
  auto t0 = std::chrono::steady_clock::now();
  auto make = [](double conc, double kon, double koff) {
    LigandSpec lg;
    lg.conc0 = conc;
    lg.k_on = kon;
    lg.k_off = koff;
    lg.mw = 100.0;
    return lg;
  };
  bool ok = true;
  std::string detail;

  {  // balanced single species: p = 0.5, var = 250
    std::vector<LigandSpec> sp{make(1.0, 20.0, 20.0)};
    const long NR = 1000;
    ReceptorTrajectory t = simulate(sp, NR, 80.0, 5e-4, 101);
    BindingNoiseModel m = build_noise_model(sp, NR);
    EmpiricalStats st = empirical_stats(t, m.tau_B);
    double n_eff = 80.0 / (2.0 / 40.0);
    double se = std::sqrt(0.25 / (NR * n_eff));
    bool p_ok = std::abs(st.p_hat - 0.5) <= 3.0 * se;
    bool v_ok = std::abs(st.var_hat - 250.0) <= 0.10 * 250.0;
    if (!p_ok || !v_ok) ok = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "p=%.4f var=%.1f", st.p_hat, st.var_hat);
    detail += buf;
  }
  {  // two species: occupancies (0.2, 0.6)
    std::vector<LigandSpec> sp{make(1.0, 20.0, 20.0), make(3.0, 20.0, 20.0)};
    const long NR = 1000;
    ReceptorTrajectory t = simulate(sp, NR, 40.0, 2e-4, 202);
    BindingNoiseModel m = build_noise_model(sp, NR);
    EmpiricalStats st = empirical_stats(t, m.tau_B);
    double n_eff = 40.0 / (2.0 / 100.0);
    auto se = [&](double p) { return std::sqrt(p * (1.0 - p) / (NR * n_eff)); };
    bool ok2 = std::abs(st.p_hat_j[0] - 0.2) <= 3.0 * se(0.2) &&
               std::abs(st.p_hat_j[1] - 0.6) <= 3.0 * se(0.6);
    if (!ok2) ok = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), ", p_j=(%.3f, %.3f)", st.p_hat_j[0], st.p_hat_j[1]);
    detail += buf;

    EmpiricalPsd psd = empirical_psd(t);
    LorentzianFit fit = fit_lorentzian(psd);
    double corner_model = 1.0 / (2.0 * std::numbers::pi * m.tau_B);
    bool c_ok = std::abs(fit.corner_hz - corner_model) <= 0.2 * corner_model;
    if (!c_ok) ok = false;
    std::snprintf(buf, sizeof(buf), ", corner %.2f Hz vs %.2f Hz", fit.corner_hz,
                  corner_model);
    detail += buf;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[64];
  std::snprintf(buf, sizeof(buf), ", %.1f s", secs);
  report(3, ok && secs < 30.0, "stochastic validation (" + detail + buf + ")");
}

void criterion_4_quadrature() {
  Config cfg = load_preset("table1");
  DerivedDevice dd = derive_device(cfg.device);
  double MV = molecular_volume(cfg.ligands[0].mw, cfg.device.rho_ligand);
  double dpsi1 = dpsi_single(MV, cfg.device, dd);
  BoundDensityVector bdv{1e17, 5e16, 1.5e17};
  TransducerResponse resp = transduce(bdv, MV, cfg.device, dd);
  double g = transconductance(resp.sum.I_mean, cfg.device);

  Config noflick = cfg;
  noflick.device.Not = 0.0;
  BindingNoiseModel m = build_noise_model(cfg.ligands, dd.NR);
  NoisePsd binding_only = total_noise(m, resp, dpsi1, noflick.device, dd);
  double two_pi_tau = 2.0 * std::numbers::pi * m.tau_B;
  double lorentz = 2.0 * dpsi1 * dpsi1 * g * g * m.var_NB /
                   (4.0 * std::numbers::pi * m.tau_B * m.tau_B) *
                   (std::atan(two_pi_tau * cfg.device.f_max) -
                    std::atan(two_pi_tau * cfg.device.f_min));
  double e_binding = rel_diff(binding_only.sigma2_I, lorentz);

  BindingNoiseModel none = build_noise_model({}, dd.NR);
  NoisePsd flicker_only = total_noise(none, resp, dpsi1, cfg.device, dd);
  double log_band = 2.0 * flicker_psd(1.0, resp.sum.I_mean, cfg.device, dd) *
                    std::log(cfg.device.f_max / cfg.device.f_min);
  double e_flicker = rel_diff(flicker_only.sigma2_I, log_band);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "quadrature vs closed forms: binding rel %.2e, flicker rel %.2e", e_binding,
                e_flicker);
  report(4, e_binding < 1e-6 && e_flicker < 1e-6, buf);
}

void criterion_5_fig4() {
  Config cfg = load_preset("table1");
  Table t = reproduce_figure("fig4", cfg, repro_opts());
  std::vector<double> k2ps;
  for (const auto& r : t.rows) {
    if (k2ps.empty() || k2ps.back() != r[1]) k2ps.push_back(r[1]);
  }
  bool mono_ok = true, sat_ok = true;
  std::vector<double> crossings;
  for (double k2p : k2ps) {
    std::vector<double> conc, s;
    for (const auto& r : t.rows) {
      if (r[1] == k2p) {
        conc.push_back(r[0]);
        s.push_back(r[2]);
      }
    }
    if (!monotone(s, true, false)) mono_ok = false;
    double last = s.back();
    double decade_ago = 0.0;
    for (size_t i = 0; i < conc.size(); ++i) {
      if (conc[i] <= conc.back() / 10.0 * (1 + 1e-9)) decade_ago = s[i];
    }
    if ((last - decade_ago) / decade_ago >= 0.05) sat_ok = false;
    double s_inf = last;
    double target = 0.9 * s_inf;
    double cross = conc.back();
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= target) { cross = conc[i]; break; }
    }
    crossings.push_back(cross);
  }
  bool order_ok = monotone(crossings, false, true);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "fig4 sensitivity: monotone=%d, final-decade rise <5%%=%d, 90%%-crossing "
                "ordering=%d",
                mono_ok, sat_ok, order_ok);
  report(5, mono_ok && sat_ok && order_ok, buf);
}

void criterion_6_fig5() {
  Config cfg = load_preset("table1");
  Table t = reproduce_figure("fig5", cfg, repro_opts());
  const auto& lo = t.rows.front();
  const auto& hi = t.rows.back();
  bool low_ok = lo[1] > lo[2];
  bool high_ok = hi[2] > hi[1];
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "fig5 structure: binding/flicker at f_min %.1fx, flicker/binding at f_max "
                "%.1fx",
                lo[1] / lo[2], hi[2] / hi[1]);
  report(6, low_ok && high_ok, buf);
}

void criterion_7_fig6() {
  Config cfg = load_preset("table1");
  bool ok = true;
  std::string detail;

  {
    Table t = reproduce_figure("fig6a", cfg, repro_opts());
    auto s1 = column(t, "snr1_db");
    auto s2 = column(t, "snr2_db");
    double span = *std::max_element(s1.begin(), s1.end()) -
                  *std::min_element(s1.begin(), s1.end());
    bool a_ok = monotone(s2, false, true) && span < 1.0;
    if (!a_ok) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(a) snr2 strict-dec, snr1 span %.2f dB", span);
    detail += buf;
  }
  {
    Table t = reproduce_figure("fig6b", cfg, repro_opts());
    auto s1 = column(t, "snr1_db");
    auto s2 = column(t, "snr2_db");
    double span = *std::max_element(s2.begin(), s2.end()) -
                  *std::min_element(s2.begin(), s2.end());
    bool b_ok = monotone(s1, true, true) && span < 1.0;
    if (!b_ok) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "; (b) snr1 strict-inc, snr2 span %.2f dB", span);
    detail += buf;
  }
  {
    Table t = reproduce_figure("fig6c", cfg, repro_opts());
    auto s1 = column(t, "snr1_db");
    auto s2 = column(t, "snr2_db");
    double d1 = s1.front() - s1.back();
    double d2 = s2.front() - s2.back();
    bool c_ok = monotone(s1, false, true) && monotone(s2, false, true) && d1 >= d2;
    if (!c_ok) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "; (c) drops %.1f/%.1f dB", d1, d2);
    detail += buf;
  }
  {
    Table td = reproduce_figure("fig6d", cfg, repro_opts());
    Table te = reproduce_figure("fig6e", cfg, repro_opts());
    bool de_ok = monotone(column(td, "snr2_db"), false, false) &&
                 monotone(column(te, "snr2_db"), true, false);
    if (!de_ok) ok = false;
    detail += de_ok ? "; (d,e) directions ok" : "; (d,e) directions WRONG";
  }
  report(7, ok, "fig6 trends: " + detail);
}

void criterion_8_fig8() {
  Config cfg = load_preset("table1");
  bool ok = true;
  double min_margin = 1e300;
  const std::pair<const char*, const char*> pairs[] = {
      {"fig8a", "fig6b"}, {"fig8b", "fig6d"}, {"fig8c", "fig6a"}};
  for (const auto& [multi_id, single_id] : pairs) {
    Table multi = reproduce_figure(multi_id, cfg, repro_opts());
    Table single = reproduce_figure(single_id, cfg, repro_opts());
    auto m1 = column(multi, "snr1_db");
    auto m2 = column(multi, "snr2_db");
    auto s1 = column(single, "snr1_db");
    auto s2 = column(single, "snr2_db");
    for (size_t i = 0; i < m1.size(); ++i) {
      double margin = (m1[i] - m2[i]) - (s1[i] - s2[i]);
      min_margin = std::min(min_margin, margin);
      if (margin < -1e-9) ok = false;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "multi-interferer snr1->snr2 gap >= single-interferer gap (min margin "
                "%.3f dB)",
                min_margin);
  report(8, ok, buf);
}

void criterion_9_fig10() {
  Config cfg = load_preset("table1");
  bool ok = true;
  std::string detail;

  {
    Table t = reproduce_figure("fig10a", cfg, repro_opts());
    auto s11 = column(t, "sep1_1bit");
    auto s12 = column(t, "sep1_2bit");
    auto s21 = column(t, "sep2_1bit");
    auto s22 = column(t, "sep2_2bit");
    bool inc = monotone(s11, true, false);
    bool cap = true;
    for (size_t i = 0; i < s11.size(); ++i) {
      if (s12[i] < s11[i] - 1e-12 || s22[i] < s21[i] - 1e-12) cap = false;
    }
    if (!inc || !cap) ok = false;
    detail += inc ? "(a) sep1 increasing" : "(a) sep1 NOT increasing";
    detail += cap ? ", 2bit>=1bit" : ", capacity ordering WRONG";
  }
  {
    Table t = reproduce_figure("fig10b", cfg, repro_opts());
    bool dec = monotone(column(t, "sep1_1bit"), false, false) &&
               monotone(column(t, "sep1_2bit"), false, false);
    if (!dec) ok = false;
    detail += dec ? "; (b) sep1 decreasing" : "; (b) sep1 NOT decreasing";
  }
  {
    Table t = reproduce_figure("fig10c", cfg, repro_opts());
    auto s11 = column(t, "sep1_1bit");
    auto s21 = column(t, "sep2_1bit");
    auto s12 = column(t, "sep1_2bit");
    auto s22 = column(t, "sep2_2bit");
    bool dec = monotone(s11, false, false) && monotone(s21, false, false) &&
               monotone(s12, false, false) && monotone(s22, false, false);
    double slope1 = std::log10(s11.front() / s11.back());
    double slope2 = std::log10(s21.front() / s21.back());
    double slope1b = std::log10(s12.front() / s12.back());
    double slope2b = std::log10(s22.front() / s22.back());
    bool steeper = slope1 > slope2 && slope1b > slope2b;
    if (!dec || !steeper) ok = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "; (c) dec=%d, log-slopes %.2f>%.2f and %.2f>%.2f", dec,
                  slope1, slope2, slope1b, slope2b);
    detail += buf;
  }
  report(9, ok, "fig10 trends: " + detail);
}

void criterion_10_sep_monte_carlo() {
  bool ok = true;
  std::string detail;

  {  // Q(1) anchor
    std::vector<SymbolStats> st(2);
    st[0] = {0.0, 0.0, 0.0, 1.0};
    st[1] = {2.0, 0.0, 2.0, 1.0};
    DecisionThresholds thr = ml_thresholds(st, SepVariant::sep1);
    double pe = sep(st, thr, SepVariant::sep1).value;
    bool q1 = std::abs(pe - 0.15866) <= 1e-5;
    if (!q1) ok = false;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Q(1) case %.6f", pe);
    detail += buf;
  }

  std::mt19937_64 rng(55555);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto mc = [&](const std::vector<SymbolStats>& st, SepVariant v) {
    DecisionThresholds thr = ml_thresholds(st, v);
    double analytic = sep(st, thr, v).value;
    const long N = 1000000;
    long errors = 0;
    for (size_t m = 0; m < st.size(); ++m) {
      SymbolGaussian g = symbol_gaussian(st[m], v);
      for (long i = 0; i < N; ++i) {
        double x = g.mean + g.sigma * gauss(rng);
        size_t decided = 0;
        while (decided < thr.lambda.size() && x > thr.lambda[decided]) ++decided;
        if (decided != m) ++errors;
      }
    }
    double n = static_cast<double>(N) * static_cast<double>(st.size());
    double empirical = static_cast<double>(errors) / n;
    double se = std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / n);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "; M=%zu: %.5f vs %.5f (3se %.5f)", st.size(), analytic,
                  empirical, 3.0 * se);
    detail += buf;
    return std::abs(empirical - analytic) <= 3.0 * se;
  };

  std::vector<SymbolStats> m2(2);
  m2[0] = {1.0, 0.3, 1.2, 0.8};
  m2[1] = {2.6, 0.5, 3.0, 1.1};
  if (!mc(m2, SepVariant::sep1)) ok = false;
  if (!mc(m2, SepVariant::sep2)) ok = false;

  std::vector<SymbolStats> m4(4);
  m4[0] = {0.5, 0.2, 0.6, 0.5};
  m4[1] = {1.5, 0.3, 1.7, 0.7};
  m4[2] = {2.6, 0.4, 2.9, 0.9};
  m4[3] = {3.8, 0.5, 4.3, 1.2};
  if (!mc(m4, SepVariant::sep1)) ok = false;

  report(10, ok, "sep vs Monte Carlo: " + detail);
}

void criterion_11_determinism(const char* flexmc_path) {
  if (flexmc_path == nullptr) {
    report(11, false, "determinism: flexmc path not supplied");
    return;
  }
  std::string dir_a = "acceptance_out_a";
  std::string dir_b = "acceptance_out_b";
  std::string base = std::string(flexmc_path) +
                     " figure fig6a --reproducible --seed 42 --preset table1 --out ";
  int rc1 = std::system((base + dir_a + " 2>/dev/null").c_str());
  int rc2 = std::system((base + dir_b + " 2>/dev/null").c_str());
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(dir_a + "/fig6a.csv");
  std::string b = slurp(dir_b + "/fig6a.csv");
  bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "reproducible runs byte-identical (%zu bytes)", a.size());
  report(11, ok, buf);
}

} // namespace

int main(int argc, char** argv) {
  std::printf("flexmc acceptance suite\n");
  criterion_1_oracle_equivalence();
  criterion_2_closed_forms();
  criterion_3_stochastic_validation();
  criterion_4_quadrature();
  criterion_5_fig4();
  criterion_6_fig5();
  criterion_7_fig6();
  criterion_8_fig8();
  criterion_9_fig10();
  criterion_10_sep_monte_carlo();
  criterion_11_determinism(argc > 1 ? argv[1] : nullptr);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
