#include "flexmc/config.hpp"
#include "flexmc/errors.hpp"

namespace flexmc {

namespace {

// Default simulation parameter set (thick stiff beam).
const std::string kTable1 = R"(# flexmc preset: table1
[device]
W_um = 1.0
L_um = 8.0
H_nm = 260.0
y0_nm = 100.0
yd_nm = 10.0
E_GPa = 4.0
NA = 1.0e22
Not = 1.0e24
P0_surface = 5.0e18

[link]
bits = 1
mw_min_gmol = 89.0
mw_max_gmol = 763.0

[[ligand]]
name = "target"
role = "target"
conc0 = 1.37e17
k_on = 3.0e-18
k_off = 20.0
mw_gmol = 89.0

[[ligand]]
name = "interferer"
role = "interferer"
conc0 = 1.37e16
k_on = 3.0e-18
k_off = 20.0
mw_gmol = 89.0
)";

// Thin soft-gap beam variant; stronger transduction, lower working concentrations.
const std::string kImproved = R"(# flexmc preset: improved
[device]
W_um = 1.0
L_um = 4.0
H_nm = 40.0
y0_nm = 100.0
yd_nm = 10.0
E_GPa = 200.0
NA = 1.0e22
Not = 1.0e24
P0_surface = 5.0e18

[link]
bits = 1
mw_min_gmol = 89.0
mw_max_gmol = 763.0

[[ligand]]
name = "target"
role = "target"
conc0 = 1.32e15
k_on = 3.0e-18
k_off = 20.0
mw_gmol = 89.0

[[ligand]]
name = "interferer"
role = "interferer"
conc0 = 1.32e14
k_on = 3.0e-18
k_off = 20.0
mw_gmol = 89.0
)";

} // namespace

const std::string& preset_text(const std::string& name) {
  if (name == "table1") return kTable1;
  if (name == "improved") return kImproved;
  throw ConfigError("unknown preset '" + name + "' (available: table1, improved)");
}

Config load_preset(const std::string& name) {
  Config cfg = parse_config(preset_text(name));
  cfg.preset_name = name;
  return cfg;
}

} // namespace flexmc
