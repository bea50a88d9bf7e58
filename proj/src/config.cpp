#include "flexmc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "flexmc/constants.hpp"
#include "flexmc/errors.hpp"

namespace flexmc {

namespace {

struct RawTables {
  std::map<std::string, std::string> device;
  std::map<std::string, std::string> link;
  std::vector<std::map<std::string, std::string>> ligands;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

RawTables tokenize(const std::string& text) {
  RawTables raw;
  std::map<std::string, std::string>* current = nullptr;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[[ligand]]") {
      raw.ligands.emplace_back();
      current = &raw.ligands.back();
      continue;
    }
    if (line == "[device]") { current = &raw.device; continue; }
    if (line == "[link]") { current = &raw.link; continue; }
    if (line.front() == '[') {
      throw ConfigError("unknown config section '" + line + "' (line " +
                        std::to_string(lineno) + ")");
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value' (line " + std::to_string(lineno) + ")");
    }
    if (current == nullptr) {
      throw ConfigError("key outside of a section (line " + std::to_string(lineno) + ")");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ConfigError("malformed 'key = value' (line " + std::to_string(lineno) + ")");
    }
    if (current->count(key)) throw ConfigError("duplicate key '" + key + "'");
    (*current)[key] = val;
  }
  return raw;
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw ConfigError("key '" + key + "' must be finite");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' must be a number, got '" + text + "'");
  }
}

// Recognized unit suffixes and their SI factors.
struct Suffix { const char* tag; double factor; };
constexpr Suffix kSuffixes[] = {
    {"_um", 1e-6}, {"_nm", 1e-9}, {"_GPa", 1e9}, {"_percm3ev", 1e6}, {"_gmol", 1.0},
};

// Pull `base` (or any suffixed variant) out of the table. Consumed keys are erased.
std::optional<double> take_number(std::map<std::string, std::string>& tab,
                                  const std::string& base) {
  auto it = tab.find(base);
  if (it != tab.end()) {
    double v = parse_number(base, it->second);
    tab.erase(it);
    return v;
  }
  for (const auto& s : kSuffixes) {
    std::string k = base + s.tag;
    it = tab.find(k);
    if (it != tab.end()) {
      double v = parse_number(k, it->second) * s.factor;
      tab.erase(it);
      return v;
    }
  }
  return std::nullopt;
}

std::optional<std::string> take_string(std::map<std::string, std::string>& tab,
                                       const std::string& key) {
  auto it = tab.find(key);
  if (it == tab.end()) return std::nullopt;
  std::string v = strip_quotes(it->second);
  tab.erase(it);
  return v;
}

std::string format_si(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require(bool ok, const std::string& constraint) {
  if (!ok) throw ConfigError("configuration violates: " + constraint);
}

} // namespace

DerivedDevice derive_device(const DeviceConfig& cfg) {
  DerivedDevice d;
  d.A = cfg.W * cfg.L;
  d.NR = cfg.P0_surface * d.A;
  d.k_stiff = cfg.k_stiff_override
                  ? *cfg.k_stiff_override
                  : 16.0 * cfg.E * cfg.W * cfg.H * cfg.H * cfg.H / (cfg.L * cfg.L * cfg.L);
  d.Cox = cfg.eps_ox / cfg.yd;
  d.V_pullin = std::sqrt(8.0 * d.k_stiff * cfg.y0 * cfg.y0 * cfg.y0 /
                         (27.0 * kVacuumPermittivity * d.A));
  return d;
}

void finalize_config(Config& cfg) {
  DeviceConfig& dev = cfg.device;
  require(dev.W > 0, "W > 0");
  require(dev.L > 0, "L > 0");
  require(dev.H > 0, "H > 0");
  require(dev.y0 > 0, "y0 > 0");
  require(dev.yd > 0, "yd > 0");
  require(dev.E > 0, "E > 0");
  require(dev.NA > 0, "NA > 0");
  require(dev.Not >= 0, "Not >= 0");
  require(dev.P0_surface > 0, "P0_surface > 0");
  require(dev.T > 0, "T > 0");
  require(dev.rho_ligand > 0, "rho_ligand > 0");
  require(dev.eps_s > 0, "eps_s > 0");
  require(dev.eps_ox > 0, "eps_ox > 0");
  require(dev.IDS1 > 0, "IDS1 > 0");
  require(dev.m_ideality > 0, "m_ideality > 0");
  require(dev.mu_p > 0, "mu_p > 0");
  require(dev.lambda_tun >= 0, "lambda_tun >= 0");
  require(dev.alpha_s >= 0, "alpha_s >= 0");
  require(dev.f_min > 0 && dev.f_min < dev.f_max, "0 < f_min < f_max");
  require(dev.B > 0, "B > 0");
  if (cfg.device.k_stiff_override) require(*cfg.device.k_stiff_override > 0, "k_stiff > 0");

  DerivedDevice d = derive_device(dev);
  if (std::isnan(dev.VG)) {
    dev.VG = 0.95 * d.V_pullin;
    cfg.defaulted.push_back("device.VG = " + format_si(dev.VG) + " (0.95*V_pullin)");
  }
  require(dev.VG < d.V_pullin, "VG < V_pullin");

  for (size_t i = 0; i < cfg.ligands.size(); ++i) {
    const LigandSpec& lg = cfg.ligands[i];
    std::string at = "ligand[" + std::to_string(i) + "]: ";
    require(lg.conc0 >= 0, at + "conc0 >= 0");
    require(lg.k_on > 0, at + "k_on > 0");
    require(lg.k_off > 0, at + "k_off > 0");
    require(lg.mw > 0, at + "mw > 0");
    double K = lg.dissociation_constant();
    require(std::isfinite(K) && K > 0, at + "K = k_off/k_on finite and positive");
  }
  if (!cfg.ligands.empty()) {
    require(cfg.ligands[0].role == LigandRole::target, "ligand[0] has role 'target'");
    for (size_t i = 1; i < cfg.ligands.size(); ++i) {
      require(cfg.ligands[i].role == LigandRole::interferer,
              "ligand[" + std::to_string(i) + "] has role 'interferer'");
    }
  }

  require(cfg.link.bits == 1 || cfg.link.bits == 2, "link.bits in {1,2}");
  require(cfg.link.mw_min > 0, "link.mw_min > 0");
  require(cfg.link.mw_min < cfg.link.mw_max, "link.mw_min < link.mw_max");
}

Config parse_config(const std::string& text) {
  RawTables raw = tokenize(text);
  Config cfg;
  DeviceConfig& dev = cfg.device;

  auto dev_required = [&](const std::string& key, double& field) {
    auto v = take_number(raw.device, key);
    if (!v) throw ConfigError("missing required device key '" + key + "'");
    field = *v;
  };
  auto dev_default = [&](const std::string& key, double& field, double dflt) {
    auto v = take_number(raw.device, key);
    field = v ? *v : dflt;
    if (!v) cfg.defaulted.push_back("device." + key + " = " + format_si(dflt));
  };

  dev_required("W", dev.W);
  dev_required("L", dev.L);
  dev_required("H", dev.H);
  dev_required("y0", dev.y0);
  dev_required("yd", dev.yd);
  dev_required("E", dev.E);
  dev_required("NA", dev.NA);
  dev_required("Not", dev.Not);
  dev_required("P0_surface", dev.P0_surface);

  dev_default("psi_s", dev.psi_s, 0.3);
  dev_default("VTH", dev.VTH, -0.4);
  dev_default("IDS1", dev.IDS1, 1e-9);
  dev_default("lambda_tun", dev.lambda_tun, 1e-10);
  dev_default("alpha_s", dev.alpha_s, 1e4);
  dev_default("mu_p", dev.mu_p, 0.02);
  dev_default("m_ideality", dev.m_ideality, 1.5);
  dev_default("eps_s", dev.eps_s, 11.7 * kVacuumPermittivity);
  dev_default("eps_ox", dev.eps_ox, 3.9 * kVacuumPermittivity);
  dev_default("T", dev.T, 300.0);
  dev_default("rho_ligand", dev.rho_ligand, 1350.0);
  dev_default("f_min", dev.f_min, 1e-2);
  dev_default("f_max", dev.f_max, 1e4);
  dev_default("B", dev.B, 1.0);

  if (auto v = take_number(raw.device, "VG")) {
    dev.VG = *v;
  } else {
    dev.VG = std::nan("");  // finalize derives 0.95*V_pullin
  }
  if (auto v = take_number(raw.device, "k_stiff")) dev.k_stiff_override = *v;

  if (auto v = take_string(raw.device, "psd_normalization")) {
    if (*v == "as_printed") dev.psd_normalization = PsdNormalization::as_printed;
    else if (*v == "fourier_pair") dev.psd_normalization = PsdNormalization::fourier_pair;
    else throw ConfigError("psd_normalization must be 'as_printed' or 'fourier_pair'");
  } else {
    cfg.defaulted.push_back("device.psd_normalization = as_printed");
  }
  if (auto v = take_string(raw.device, "displacement_factor3")) {
    if (*v == "on" || *v == "true") dev.displacement_factor3 = true;
    else if (*v == "off" || *v == "false") dev.displacement_factor3 = false;
    else throw ConfigError("displacement_factor3 must be 'on' or 'off'");
  }
  if (!raw.device.empty()) {
    throw ConfigError("unknown device key '" + raw.device.begin()->first + "'");
  }

  if (auto v = take_number(raw.link, "bits")) {
    if (*v != 1.0 && *v != 2.0) throw ConfigError("link.bits must be 1 or 2");
    cfg.link.bits = static_cast<int>(*v);
  } else {
    cfg.defaulted.push_back("link.bits = 1");
  }
  if (auto v = take_number(raw.link, "mw_min")) cfg.link.mw_min = *v;
  else cfg.defaulted.push_back("link.mw_min_gmol = 89");
  if (auto v = take_number(raw.link, "mw_max")) cfg.link.mw_max = *v;
  else cfg.defaulted.push_back("link.mw_max_gmol = 763");
  if (!raw.link.empty()) {
    throw ConfigError("unknown link key '" + raw.link.begin()->first + "'");
  }

  for (size_t i = 0; i < raw.ligands.size(); ++i) {
    auto& tab = raw.ligands[i];
    LigandSpec lg;
    std::string at = "ligand[" + std::to_string(i) + "].";
    auto lig_required = [&](const std::string& key, double& field) {
      auto v = take_number(tab, key);
      if (!v) throw ConfigError("missing required key '" + at + key + "'");
      field = *v;
    };
    lig_required("conc0", lg.conc0);
    lig_required("k_on", lg.k_on);
    lig_required("k_off", lg.k_off);
    lig_required("mw", lg.mw);
    if (auto v = take_string(tab, "name")) lg.name = *v;
    else lg.name = (i == 0) ? "target" : ("interferer" + std::to_string(i));
    if (auto v = take_string(tab, "role")) {
      if (*v == "target") lg.role = LigandRole::target;
      else if (*v == "interferer") lg.role = LigandRole::interferer;
      else throw ConfigError(at + "role must be 'target' or 'interferer'");
    } else {
      lg.role = (i == 0) ? LigandRole::target : LigandRole::interferer;
    }
    if (!tab.empty()) throw ConfigError("unknown key '" + at + tab.begin()->first + "'");
    cfg.ligands.push_back(lg);
  }

  finalize_config(cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(Config& cfg, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key=value, got '" + assignment + "'");
  }
  std::string path = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  if (path.empty() || value.empty()) {
    throw ConfigError("override must be key=value, got '" + assignment + "'");
  }

  auto suffixed = [&](const std::string& leaf, const std::string& base, double& factor) {
    if (leaf == base) { factor = 1.0; return true; }
    for (const auto& s : kSuffixes) {
      if (leaf == base + s.tag) { factor = s.factor; return true; }
    }
    return false;
  };

  if (path.rfind("device.", 0) == 0) {
    std::string leaf = path.substr(7);
    DeviceConfig& d = cfg.device;
    struct Entry { const char* name; double* field; };
    const Entry entries[] = {
        {"W", &d.W}, {"L", &d.L}, {"H", &d.H}, {"y0", &d.y0}, {"yd", &d.yd},
        {"E", &d.E}, {"NA", &d.NA}, {"Not", &d.Not}, {"P0_surface", &d.P0_surface},
        {"eps_s", &d.eps_s}, {"eps_ox", &d.eps_ox}, {"VG", &d.VG},
        {"psi_s", &d.psi_s}, {"VTH", &d.VTH}, {"IDS1", &d.IDS1},
        {"lambda_tun", &d.lambda_tun}, {"alpha_s", &d.alpha_s}, {"mu_p", &d.mu_p},
        {"T", &d.T}, {"rho_ligand", &d.rho_ligand}, {"m_ideality", &d.m_ideality},
        {"f_min", &d.f_min}, {"f_max", &d.f_max}, {"B", &d.B},
    };
    for (const auto& e : entries) {
      double factor = 1.0;
      if (suffixed(leaf, e.name, factor)) {
        *e.field = parse_number(path, value) * factor;
        finalize_config(cfg);
        return;
      }
    }
    if (leaf == "k_stiff") {
      d.k_stiff_override = parse_number(path, value);
      finalize_config(cfg);
      return;
    }
    if (leaf == "psd_normalization") {
      std::string v = strip_quotes(value);
      if (v == "as_printed") d.psd_normalization = PsdNormalization::as_printed;
      else if (v == "fourier_pair") d.psd_normalization = PsdNormalization::fourier_pair;
      else throw ConfigError("psd_normalization must be 'as_printed' or 'fourier_pair'");
      return;
    }
    if (leaf == "displacement_factor3") {
      std::string v = strip_quotes(value);
      if (v == "on" || v == "true") d.displacement_factor3 = true;
      else if (v == "off" || v == "false") d.displacement_factor3 = false;
      else throw ConfigError("displacement_factor3 must be 'on' or 'off'");
      return;
    }
    throw ConfigError("unknown override key '" + path + "'");
  }

  if (path.rfind("link.", 0) == 0) {
    std::string leaf = path.substr(5);
    double factor = 1.0;
    if (leaf == "bits") {
      double v = parse_number(path, value);
      if (v != 1.0 && v != 2.0) throw ConfigError("link.bits must be 1 or 2");
      cfg.link.bits = static_cast<int>(v);
      return;
    }
    if (suffixed(leaf, "mw_min", factor)) {
      cfg.link.mw_min = parse_number(path, value) * factor;
      finalize_config(cfg);
      return;
    }
    if (suffixed(leaf, "mw_max", factor)) {
      cfg.link.mw_max = parse_number(path, value) * factor;
      finalize_config(cfg);
      return;
    }
    throw ConfigError("unknown override key '" + path + "'");
  }

  if (path.rfind("ligand[", 0) == 0) {
    size_t close = path.find(']');
    if (close == std::string::npos || close + 1 >= path.size() || path[close + 1] != '.') {
      throw ConfigError("override key must look like ligand[i].field, got '" + path + "'");
    }
    size_t idx = 0;
    try {
      idx = static_cast<size_t>(std::stoul(path.substr(7, close - 7)));
    } catch (const std::exception&) {
      throw ConfigError("bad ligand index in '" + path + "'");
    }
    if (idx >= cfg.ligands.size()) {
      throw ConfigError("ligand index " + std::to_string(idx) + " out of range (have " +
                        std::to_string(cfg.ligands.size()) + ")");
    }
    std::string leaf = path.substr(close + 2);
    LigandSpec& lg = cfg.ligands[idx];
    double factor = 1.0;
    if (suffixed(leaf, "conc0", factor)) lg.conc0 = parse_number(path, value) * factor;
    else if (suffixed(leaf, "k_on", factor)) lg.k_on = parse_number(path, value) * factor;
    else if (suffixed(leaf, "k_off", factor)) lg.k_off = parse_number(path, value) * factor;
    else if (suffixed(leaf, "mw", factor)) lg.mw = parse_number(path, value) * factor;
    else if (leaf == "name") { lg.name = strip_quotes(value); return; }
    else throw ConfigError("unknown override key '" + path + "'");
    finalize_config(cfg);
    return;
  }

  throw ConfigError("unknown override key '" + path + "'");
}

std::string serialize(const Config& cfg) {
  const DeviceConfig& d = cfg.device;
  std::ostringstream out;
  out << "[device]\n";
  auto kv = [&](const char* k, double v) { out << k << " = " << format_si(v) << "\n"; };
  kv("W", d.W); kv("L", d.L); kv("H", d.H); kv("y0", d.y0); kv("yd", d.yd);
  kv("E", d.E); kv("NA", d.NA); kv("Not", d.Not); kv("P0_surface", d.P0_surface);
  kv("eps_s", d.eps_s); kv("eps_ox", d.eps_ox); kv("VG", d.VG);
  kv("psi_s", d.psi_s); kv("VTH", d.VTH); kv("IDS1", d.IDS1);
  kv("lambda_tun", d.lambda_tun); kv("alpha_s", d.alpha_s); kv("mu_p", d.mu_p);
  kv("T", d.T); kv("rho_ligand", d.rho_ligand); kv("m_ideality", d.m_ideality);
  kv("f_min", d.f_min); kv("f_max", d.f_max); kv("B", d.B);
  if (d.k_stiff_override) kv("k_stiff", *d.k_stiff_override);
  out << "psd_normalization = "
      << (d.psd_normalization == PsdNormalization::as_printed ? "\"as_printed\"\n"
                                                              : "\"fourier_pair\"\n");
  out << "displacement_factor3 = " << (d.displacement_factor3 ? "\"on\"\n" : "\"off\"\n");
  out << "\n[link]\n";
  out << "bits = " << cfg.link.bits << "\n";
  kv("mw_min_gmol", cfg.link.mw_min);
  kv("mw_max_gmol", cfg.link.mw_max);
  for (const auto& lg : cfg.ligands) {
    out << "\n[[ligand]]\n";
    out << "name = \"" << lg.name << "\"\n";
    out << "role = " << (lg.role == LigandRole::target ? "\"target\"\n" : "\"interferer\"\n");
    kv("conc0", lg.conc0);
    kv("k_on", lg.k_on);
    kv("k_off", lg.k_off);
    kv("mw_gmol", lg.mw);
  }
  return out.str();
}

std::string config_hash(const Config& cfg) {
  std::string s = serialize(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace flexmc
