#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flexmc {

enum class LigandRole { target, interferer };

/// One molecular species in the reception space.
struct LigandSpec {
  std::string name;
  double conc0 = 0.0;  // total concentration [m^-3]
  double k_on = 0.0;   // association rate [m^3/s]
  double k_off = 0.0;  // dissociation rate [1/s]
  double mw = 0.0;     // molecular weight [g/mol]
  LigandRole role = LigandRole::interferer;

  double dissociation_constant() const { return k_off / k_on; }
};

enum class PsdNormalization { as_printed, fourier_pair };

/// Receiver geometry, material and FET electrical parameters. All SI except mw-like fields.
struct DeviceConfig {
  double W = 0.0;           // beam width [m]
  double L = 0.0;           // beam length [m]
  double H = 0.0;           // beam thickness [m]
  double y0 = 0.0;          // air gap [m]
  double yd = 0.0;          // dielectric thickness [m]
  double E = 0.0;           // Young's modulus [Pa]
  double NA = 0.0;          // substrate doping [m^-3]
  double Not = 0.0;         // oxide trap density [eV^-1 m^-3]
  double P0_surface = 0.0;  // receptor surface density [m^-2]
  double eps_s = 0.0;       // substrate permittivity [F/m]
  double eps_ox = 0.0;      // oxide permittivity [F/m]
  double VG = 0.0;          // gate bias [V]
  double psi_s = 0.0;       // surface potential [V]
  double VTH = 0.0;         // threshold voltage [V]
  double IDS1 = 0.0;        // baseline drain current [A]
  double lambda_tun = 0.0;  // characteristic tunneling distance [m]
  double alpha_s = 0.0;     // Coulomb scattering coefficient [V s/C]
  double mu_p = 0.0;        // hole mobility [m^2/(V s)]
  double T = 0.0;           // temperature [K]
  double rho_ligand = 0.0;  // ligand mass density [kg/m^3]
  double m_ideality = 0.0;  // subthreshold ideality factor
  double f_min = 0.0;       // noise band low edge [Hz]
  double f_max = 0.0;       // noise band high edge [Hz]
  double B = 0.0;           // symbol rate [1/s]

  PsdNormalization psd_normalization = PsdNormalization::as_printed;
  bool displacement_factor3 = false;
  std::optional<double> k_stiff_override;  // [N/m]

  /// Gate displacement operating point near pull-in.
  double y_operating() const { return 2.0 / 3.0 * y0; }
};

/// Quantities derived from DeviceConfig.
struct DerivedDevice {
  double k_stiff = 0.0;   // beam stiffness [N/m]
  double A = 0.0;         // gate area [m^2]
  double Cox = 0.0;       // oxide capacitance per area [F/m^2]
  double NR = 0.0;        // receptor count
  double V_pullin = 0.0;  // pull-in voltage [V]
};

struct LinkSettings {
  int bits = 1;            // 1 or 2
  double mw_min = 89.0;    // [g/mol]
  double mw_max = 763.0;   // [g/mol]
};

struct Config {
  DeviceConfig device;
  std::vector<LigandSpec> ligands;
  LinkSettings link;

  std::string preset_name;  // empty when loaded from file
  /// Keys absent from the input and filled with declared defaults, as "key = value".
  std::vector<std::string> defaulted;
};

/// Parse a configuration from TOML-style text. Applies declared defaults,
/// derives VG = 0.95*V_pullin when unset, and validates every invariant.
Config parse_config(const std::string& text);

/// Read and parse a configuration file.
Config load_config(const std::string& path);

/// Built-in preset ("table1" or "improved").
Config load_preset(const std::string& name);
const std::string& preset_text(const std::string& name);

/// Apply a "section.key=value" override (same key grammar as config files,
/// plus ligand[i].field). Re-validates.
void apply_override(Config& cfg, const std::string& assignment);
void finalize_config(Config& cfg);

/// Canonical serialization; load_config(serialize(cfg)) round-trips bit-for-bit.
std::string serialize(const Config& cfg);

/// FNV-1a hash of the canonical serialization, as "0x...." hex.
std::string config_hash(const Config& cfg);

DerivedDevice derive_device(const DeviceConfig& cfg);

} // namespace flexmc
