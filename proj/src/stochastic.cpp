#include "flexmc/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "flexmc/binding_noise.hpp"
#include "flexmc/errors.hpp"

namespace flexmc {

ReceptorTrajectory simulate(const std::vector<LigandSpec>& species, long NR,
                            double duration, double sample_dt, uint64_t seed) {
  if (NR < 1) throw DomainError("simulate: NR >= 1 required");
  if (!(duration > 0) || !(sample_dt > 0)) {
    throw DomainError("simulate: duration and sample_dt must be positive");
  }
  const size_t n = species.size();
  std::vector<double> kon(n), koff(n);
  for (size_t j = 0; j < n; ++j) {
    kon[j] = species[j].k_on * species[j].conc0;
    koff[j] = species[j].k_off;
  }

  const long nsamples = static_cast<long>(std::floor(duration / sample_dt)) + 1;
  ReceptorTrajectory traj;
  traj.sample_dt = sample_dt;
  traj.seed = seed;
  traj.NR = NR;
  traj.counts.assign(n, std::vector<long>());
  for (auto& c : traj.counts) c.reserve(nsamples);
  traj.total.reserve(nsamples);

  BindingNoiseModel model = build_noise_model(species, static_cast<double>(NR));
  if (!model.degenerate && duration < 20.0 * model.tau_B) traj.short_run = true;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::vector<long> nb(n, 0);
  long bound = 0;
  double t = 0.0;
  long next_sample = 0;

  auto record_until = [&](double t_event) {
    while (next_sample < nsamples && next_sample * sample_dt <= t_event) {
      for (size_t j = 0; j < n; ++j) traj.counts[j].push_back(nb[j]);
      traj.total.push_back(bound);
      ++next_sample;
    }
  };

  if (n == 0) {
    // nothing to bind; flat zero trajectory
    record_until(duration);
    return traj;
  }

  std::vector<double> rate(2 * n);
  while (next_sample < nsamples) {
    double total_rate = 0.0;
    for (size_t j = 0; j < n; ++j) {
      rate[2 * j] = static_cast<double>(NR - bound) * kon[j];
      rate[2 * j + 1] = static_cast<double>(nb[j]) * koff[j];
      total_rate += rate[2 * j] + rate[2 * j + 1];
    }
    if (total_rate <= 0.0) {
      record_until(duration);
      break;
    }
    double u = uni(rng);
    double dt = -std::log(1.0 - u) / total_rate;
    double t_next = t + dt;
    record_until(std::min(t_next, duration));
    if (t_next > duration) break;
    t = t_next;

    double pick = uni(rng) * total_rate;
    size_t idx = 0;
    for (; idx + 1 < rate.size(); ++idx) {
      if (pick < rate[idx]) break;
      pick -= rate[idx];
    }
    size_t j = idx / 2;
    if (idx % 2 == 0) {
      ++nb[j];
      ++bound;
    } else {
      --nb[j];
      --bound;
    }
  }
  // pad in case the event loop exited exactly at the boundary
  while (traj.total.size() < static_cast<size_t>(nsamples)) {
    for (size_t j = 0; j < n; ++j) traj.counts[j].push_back(nb[j]);
    traj.total.push_back(bound);
  }
  return traj;
}

EmpiricalStats empirical_stats(const ReceptorTrajectory& traj, double tau_B) {
  EmpiricalStats st;
  const size_t nsamp = traj.total.size();
  if (nsamp == 0) throw DomainError("empirical_stats: empty trajectory");

  size_t burn = 0;
  if (std::isfinite(tau_B) && tau_B > 0) {
    burn = static_cast<size_t>(std::ceil(10.0 * tau_B / traj.sample_dt));
    double window = (nsamp - std::min(burn, nsamp)) * traj.sample_dt;
    if (window < 100.0 * tau_B) st.window_too_short = true;
  }
  if (burn >= nsamp) {
    burn = 0;
    st.window_too_short = true;
  }

  const size_t n_used = nsamp - burn;
  double mean = 0.0;
  for (size_t i = burn; i < nsamp; ++i) mean += static_cast<double>(traj.total[i]);
  mean /= static_cast<double>(n_used);
  double var = 0.0;
  for (size_t i = burn; i < nsamp; ++i) {
    double d = static_cast<double>(traj.total[i]) - mean;
    var += d * d;
  }
  var /= static_cast<double>(n_used);

  st.p_hat = mean / static_cast<double>(traj.NR);
  st.var_hat = var;
  for (const auto& cj : traj.counts) {
    double mj = 0.0;
    for (size_t i = burn; i < nsamp; ++i) mj += static_cast<double>(cj[i]);
    st.p_hat_j.push_back(mj / static_cast<double>(n_used) / static_cast<double>(traj.NR));
  }
  return st;
}

namespace {

// In-place radix-2 FFT; n must be a power of two.
void fft(std::vector<double>& re, std::vector<double>& im) {
  const size_t n = re.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        size_t a = i + k, b = i + k + len / 2;
        double tr = re[b] * cr - im[b] * ci;
        double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        double ncr = cr * wr - ci * wi;
        ci = ci * wr + cr * wi;
        cr = ncr;
      }
    }
  }
}

} // namespace

EmpiricalPsd empirical_psd(const ReceptorTrajectory& traj) {
  const size_t n = traj.total.size();
  if (n < 256) throw DomainError("empirical_psd: insufficient samples (need >= 256)");

  // segment length: power of two giving ~16 half-overlapping segments
  size_t seg = 1;
  while (seg * 2 <= n / 8) seg *= 2;
  seg = std::max<size_t>(seg, 128);
  const size_t hop = seg / 2;
  const size_t nseg = (n - seg) / hop + 1;

  std::vector<double> window(seg);
  double wss = 0.0;
  for (size_t i = 0; i < seg; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (seg - 1)));
    wss += window[i] * window[i];
  }

  const double fs = 1.0 / traj.sample_dt;
  const size_t nfreq = seg / 2;
  std::vector<double> acc(nfreq, 0.0);
  std::vector<double> re(seg), im(seg);

  for (size_t s = 0; s < nseg; ++s) {
    const size_t off = s * hop;
    double mean = 0.0;
    for (size_t i = 0; i < seg; ++i) mean += static_cast<double>(traj.total[off + i]);
    mean /= static_cast<double>(seg);
    for (size_t i = 0; i < seg; ++i) {
      re[i] = (static_cast<double>(traj.total[off + i]) - mean) * window[i];
      im[i] = 0.0;
    }
    fft(re, im);
    for (size_t k = 1; k <= nfreq; ++k) acc[k - 1] += re[k] * re[k] + im[k] * im[k];
  }

  EmpiricalPsd out;
  out.freq.reserve(nfreq);
  out.psd.reserve(nfreq);
  for (size_t k = 1; k <= nfreq; ++k) {
    out.freq.push_back(fs * static_cast<double>(k) / static_cast<double>(seg));
    // one-sided density, Hann power normalization
    out.psd.push_back(2.0 * acc[k - 1] / (static_cast<double>(nseg) * wss * fs));
  }
  return out;
}

namespace {

struct BinnedSpectrum {
  std::vector<double> freq;
  std::vector<double> logS;
};

// Average the periodogram into log-spaced bins to beat down per-bin scatter.
BinnedSpectrum bin_spectrum(const EmpiricalPsd& psd, double f_hi_cut) {
  double flo = psd.freq.front();
  double fhi = std::min(psd.freq.back(), f_hi_cut);
  const int nbins = 40;
  std::vector<double> bin_f(nbins, 0.0), bin_s(nbins, 0.0);
  std::vector<long> bin_n(nbins, 0);
  double lr = std::log(fhi / flo);
  for (size_t i = 0; i < psd.freq.size(); ++i) {
    if (psd.freq[i] > fhi) break;
    int b = static_cast<int>(std::log(psd.freq[i] / flo) / lr * nbins);
    b = std::clamp(b, 0, nbins - 1);
    bin_f[b] += std::log(psd.freq[i]);
    bin_s[b] += psd.psd[i];
    ++bin_n[b];
  }
  BinnedSpectrum out;
  for (int b = 0; b < nbins; ++b) {
    if (bin_n[b] < 6) continue;  // sparse bins keep raw periodogram scatter
    out.freq.push_back(std::exp(bin_f[b] / bin_n[b]));
    out.logS.push_back(std::log(std::max(bin_s[b] / bin_n[b], 1e-300)));
  }
  if (out.freq.size() < 6) {
    for (int b = 0; b < nbins && out.freq.size() < 6; ++b) {
      if (bin_n[b] == 0 || bin_n[b] >= 6) continue;
      out.freq.push_back(std::exp(bin_f[b] / bin_n[b]));
      out.logS.push_back(std::log(std::max(bin_s[b] / bin_n[b], 1e-300)));
    }
  }
  return out;
}

LorentzianFit fit_binned(const BinnedSpectrum& sp) {
  auto cost_for = [&](double fc, double& logA_out) {
    double sum = 0.0;
    size_t n = sp.freq.size();
    std::vector<double> shape(n);
    for (size_t i = 0; i < n; ++i) {
      double r = sp.freq[i] / fc;
      shape[i] = -std::log1p(r * r);
      sum += sp.logS[i] - shape[i];
    }
    double logA = sum / static_cast<double>(n);
    double cost = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double d = sp.logS[i] - (logA + shape[i]);
      cost += d * d;
    }
    logA_out = logA;
    return cost;
  };

  double flo = sp.freq.front(), fhi = sp.freq.back();
  double best_fc = flo, best_cost = std::numeric_limits<double>::infinity();
  double best_logA = 0.0;
  const int coarse = 241;
  for (int i = 0; i < coarse; ++i) {
    double fc = flo * std::pow(fhi / flo, static_cast<double>(i) / (coarse - 1));
    double logA;
    double c = cost_for(fc, logA);
    if (c < best_cost) { best_cost = c; best_fc = fc; best_logA = logA; }
  }
  double a = best_fc / 1.6, b = best_fc * 1.6;
  for (int it = 0; it < 60; ++it) {
    double m1 = a * std::pow(b / a, 0.381966);
    double m2 = a * std::pow(b / a, 0.618034);
    double lA1, lA2;
    if (cost_for(m1, lA1) < cost_for(m2, lA2)) b = m2; else a = m1;
  }
  best_fc = std::sqrt(a * b);
  best_cost = cost_for(best_fc, best_logA);

  LorentzianFit fit;
  fit.corner_hz = best_fc;
  fit.amplitude = std::exp(best_logA);
  fit.rms_log_residual = std::sqrt(best_cost / static_cast<double>(sp.freq.size()));
  return fit;
}

} // namespace

LorentzianFit fit_lorentzian(const EmpiricalPsd& psd) {
  if (psd.freq.size() < 8) throw DomainError("fit_lorentzian: too few spectral points");
  // the top octave is dominated by aliasing of the folded tail; drop it, then
  // refit on a window around the first-pass corner
  double nyq_cut = psd.freq.back() / 2.0;
  LorentzianFit first = fit_binned(bin_spectrum(psd, nyq_cut));
  double window_hi = std::min(nyq_cut, first.corner_hz * 30.0);
  if (window_hi <= psd.freq.front() * 8.0) return first;
  return fit_binned(bin_spectrum(psd, window_hi));
}

} // namespace flexmc
