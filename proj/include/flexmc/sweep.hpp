#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexmc/config.hpp"
#include "flexmc/link_metrics.hpp"
#include "flexmc/table.hpp"

namespace flexmc {

enum class SweepScale { linear, log };

/// Declarative one-dimensional sweep over a scalar config key.
struct SweepSpec {
  std::string key;  // e.g. "device.P0_surface", "ligand[1].conc0"
  SweepScale scale = SweepScale::log;
  double lo = 0.0;
  double hi = 0.0;
  int points = 2;
  std::vector<std::string> outputs;  // sensitivity|snr1|snr2|sep1|sep2|psd|equilibrium
};

struct SweepOptions {
  int threads = 0;  // 0: hardware parallelism
  bool reproducible = false;
  uint64_t seed = 0;
};

/// Single-configuration link evaluation used by sweeps and point subcommands.
struct PointEvaluation {
  SymbolStats stats;
  TransducerResponse response;
  double P_free_surface = 0.0;  // free receptor surface density [m^-2]
  std::vector<double> theta;
  double theta_sum = 0.0;
};

PointEvaluation evaluate_point(const Config& cfg);

/// SEP at the configured alphabet for the given word size.
double sep_value(const Config& cfg, int bits, SepVariant v);

std::vector<double> sweep_values(const SweepSpec& spec);

/// One row per sweep point, columns per requested metric. Failed rows are
/// flagged in the metadata, filled with NaN, and reported via `failed_rows`.
Table run_sweep(const SweepSpec& spec, const Config& base, const SweepOptions& opts,
                int* failed_rows = nullptr);

/// Standard provenance metadata: version, preset, config hash, seed, defaults.
std::vector<std::string> standard_meta(const Config& cfg, const SweepOptions& opts);

} // namespace flexmc
