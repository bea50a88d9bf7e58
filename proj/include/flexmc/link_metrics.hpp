#pragma once

#include <vector>

#include "flexmc/config.hpp"
#include "flexmc/transducer.hpp"

namespace flexmc {

/// Weight-shift-keying alphabet: symbols are molecular weights; interferers
/// carry the active symbol's weight.
struct WskAlphabet {
  struct Symbol {
    double mw = 0.0;    // [g/mol]
    double conc = 0.0;  // target concentration [m^-3]
  };
  int M = 2;
  std::vector<Symbol> symbols;
  std::vector<LigandSpec> interferers;
};

WskAlphabet build_alphabet(int bits, double mw_min, double mw_max, double conc,
                           std::vector<LigandSpec> interferers);

/// Per-symbol link statistics. Mean currents are the baseline-referenced
/// changes |IDS1 - IDS1/S| per component; sigma2 is the intrinsic output
/// variance from the integrated noise PSD.
struct SymbolStats {
  double mu_I_target = 0.0;
  double mu_I_interferer = 0.0;
  double mu_I_sum = 0.0;
  double sigma2 = 0.0;
};

SymbolStats evaluate_symbol(const WskAlphabet::Symbol& sym, const WskAlphabet& alphabet,
                            const Config& cfg, const DerivedDevice& dd);

std::vector<SymbolStats> evaluate_alphabet(const WskAlphabet& alphabet, const Config& cfg,
                                           const DerivedDevice& dd);

/// Intrinsic-noise-only SNR.
double snr1(const SymbolStats& s);
/// Interference-as-noise SNR.
double snr2(const SymbolStats& s);
double to_db(double ratio);

enum class SepVariant { sep1, sep2 };

/// Per-variant Gaussian parameters of one symbol.
struct SymbolGaussian {
  double mean = 0.0;
  double sigma = 0.0;
};
SymbolGaussian symbol_gaussian(const SymbolStats& s, SepVariant v);

struct DecisionThresholds {
  std::vector<double> lambda;  // M-1 strictly increasing thresholds
};

/// Equal-likelihood points of adjacent symbol Gaussians (ML rule).
DecisionThresholds ml_thresholds(const std::vector<SymbolStats>& stats, SepVariant v);

struct SepResult {
  double value = 0.0;
  bool clamped = false;
};

/// Symbol error probability under ML thresholding, erfc form.
SepResult sep(const std::vector<SymbolStats>& stats, const DecisionThresholds& thr,
              SepVariant v);

} // namespace flexmc
