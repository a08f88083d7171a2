// Line-oriented `key = value` run configuration with strict key checking.
// Unknown keys, unparsable values and physics-invariant violations are hard
// errors naming the offending key.
#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fmcompton/constants.hpp"
#include "fmcompton/mc.hpp"
#include "fmcompton/params.hpp"

namespace fmc {

struct RunConfig {
  // pulse
  double omega0_eV = 1.55;
  double tau_fwhm_fs = 40.0;
  double xi0 = 5.0;
  double carrier_phase_rad = 0.0;
  // squeezing
  double zeta0 = 0.0;
  double gamma_eV = 1.9e-3;
  double theta0_rad = 0.0;
  // beam
  double beam_energy_GeV = 5.0;
  double beam_sigma_GeV = 0.5;
  long n_electrons = 10000;
  // numerics
  double grid_step = 0.05;
  double phi_window = 0.0;        // half-width; 0 = auto-sized
  double omega_window_eV = 0.0;   // half-width override; 0 = auto
  double dphi_cap = 0.2;
  double u_floor = 1e-7;
  double bin_min_MeV = 0.0;
  double bin_max_MeV = 4000.0;
  long n_bins = 160;
  bool log_bins = false;
  bool breit_wheeler = true;
  // run control
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = ".";
  bool photon_dump = false;
  bool rate_table_dump = false;
  double spot_radius_um = 3.0;
  double peak_intensity_Wcm2 = 1e20;
  // rho-scan lattice
  std::vector<double> rho_zeta0 = {0.0, 1e-3, 3.45};
  std::vector<double> rho_gamma_tau = {0.0693};
  std::vector<double> rho_theta0 = {0.0, M_PI / 4.0, M_PI / 2.0, M_PI};

  PulseParams pulse() const {
    return PulseParams::from_lab(omega0_eV, tau_fwhm_fs, xi0, carrier_phase_rad);
  }
  SqueezeParams squeeze() const { return SqueezeParams(zeta0, gamma_eV, theta0_rad); }
  BeamParams beam() const { return BeamParams::from_lab(beam_energy_GeV, beam_sigma_GeV, n_electrons); }
  GridRequest grid_request() const {
    GridRequest r;
    r.step = grid_step;
    if (phi_window > 0.0) {
      r.auto_window = false;
      r.phi_min = -phi_window;
      r.phi_max = phi_window;
    }
    return r;
  }
  BinSpec bins() const {
    BinSpec b;
    b.min_MeV = bin_min_MeV;
    b.max_MeV = bin_max_MeV;
    b.n_bins = static_cast<int>(n_bins);
    b.log_bins = log_bins;
    return b;
  }
  EnsembleOptions ensemble_options() const {
    EnsembleOptions o;
    o.seed = seed;
    o.workers = workers;
    o.bins = bins();
    o.step.dphi_cap = dphi_cap;
    o.breit_wheeler = breit_wheeler;
    o.keep_photons = photon_dump;
    return o;
  }

  // Constructs every parameter bundle once so that an invalid configuration
  // fails before any computation starts.
  void validate() const {
    (void)pulse();
    (void)squeeze();
    (void)beam();
    if (!(grid_step > 0.0 && grid_step <= 0.15))
      throw ValidationError("grid_step", "must lie in (0, 0.15]");
    if (phi_window < 0.0) throw ValidationError("phi_window", "must be >= 0 (0 = auto)");
    if (omega_window_eV < 0.0) throw ValidationError("omega_window_eV", "must be >= 0 (0 = auto)");
    if (!(dphi_cap > 0.0 && dphi_cap <= 1.0)) throw ValidationError("dphi_cap", "must lie in (0, 1]");
    if (!(u_floor > 0.0 && u_floor < 1e-3)) throw ValidationError("u_floor", "must lie in (0, 1e-3)");
    if (n_bins < 1) throw ValidationError("n_bins", "must be >= 1");
    if (!(bin_max_MeV > bin_min_MeV)) throw ValidationError("bin_max_MeV", "must exceed bin_min_MeV");
    if (log_bins && !(bin_min_MeV > 0.0))
      throw ValidationError("bin_min_MeV", "log bins require a positive lower edge");
    if (workers < 1 || workers > 256) throw ValidationError("workers", "must lie in [1, 256]");
    if (!(spot_radius_um > 0.0)) throw ValidationError("spot_radius_um", "must be > 0");
    if (!(peak_intensity_Wcm2 > 0.0)) throw ValidationError("peak_intensity_Wcm2", "must be > 0");
    for (double z : rho_zeta0)
      if (!(z >= 0.0)) throw ValidationError("rho_zeta0", "entries must be >= 0");
    for (double g : rho_gamma_tau)
      if (!(g > 0.0)) throw ValidationError("rho_gamma_tau", "entries must be > 0");
  }

  // `# key = value` lines embedded in every output artifact
  std::vector<std::string> echo_lines() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ValidationError(key, "not a number: '" + v + "'");
  }
  if (pos != v.size()) throw ValidationError(key, "trailing characters in '" + v + "'");
  if (!std::isfinite(x)) throw ValidationError(key, "must be finite");
  return x;
}

inline long parse_long(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ValidationError(key, "not an integer: '" + v + "'");
  }
  if (pos != v.size()) throw ValidationError(key, "trailing characters in '" + v + "'");
  return x;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ValidationError(key, "not an unsigned integer: '" + v + "'");
  }
  if (pos != v.size()) throw ValidationError(key, "trailing characters in '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key, "expected on/off, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ValidationError(key, "empty list");
  return out;
}

}  // namespace detail

inline void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "omega0_eV") c.omega0_eV = parse_double(key, value);
  else if (key == "tau_fwhm_fs") c.tau_fwhm_fs = parse_double(key, value);
  else if (key == "xi0") c.xi0 = parse_double(key, value);
  else if (key == "carrier_phase_rad") c.carrier_phase_rad = parse_double(key, value);
  else if (key == "zeta0") c.zeta0 = parse_double(key, value);
  else if (key == "gamma_eV") c.gamma_eV = parse_double(key, value);
  else if (key == "theta0_rad") c.theta0_rad = parse_double(key, value);
  else if (key == "beam_energy_GeV") c.beam_energy_GeV = parse_double(key, value);
  else if (key == "beam_sigma_GeV") c.beam_sigma_GeV = parse_double(key, value);
  else if (key == "n_electrons") c.n_electrons = parse_long(key, value);
  else if (key == "grid_step") c.grid_step = parse_double(key, value);
  else if (key == "phi_window") c.phi_window = parse_double(key, value);
  else if (key == "omega_window_eV") c.omega_window_eV = parse_double(key, value);
  else if (key == "dphi_cap") c.dphi_cap = parse_double(key, value);
  else if (key == "u_floor") c.u_floor = parse_double(key, value);
  else if (key == "bin_min_MeV") c.bin_min_MeV = parse_double(key, value);
  else if (key == "bin_max_MeV") c.bin_max_MeV = parse_double(key, value);
  else if (key == "n_bins") c.n_bins = parse_long(key, value);
  else if (key == "log_bins") c.log_bins = parse_bool(key, value);
  else if (key == "breit_wheeler") c.breit_wheeler = parse_bool(key, value);
  else if (key == "seed") c.seed = parse_u64(key, value);
  else if (key == "workers") c.workers = static_cast<int>(parse_long(key, value));
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "photon_dump") c.photon_dump = parse_bool(key, value);
  else if (key == "rate_table_dump") c.rate_table_dump = parse_bool(key, value);
  else if (key == "spot_radius_um") c.spot_radius_um = parse_double(key, value);
  else if (key == "peak_intensity_Wcm2") c.peak_intensity_Wcm2 = parse_double(key, value);
  else if (key == "rho_zeta0") c.rho_zeta0 = parse_list(key, value);
  else if (key == "rho_gamma_tau") c.rho_gamma_tau = parse_list(key, value);
  else if (key == "rho_theta0") c.rho_theta0 = parse_list(key, value);
  else throw ValidationError(key, "unknown configuration key");
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path + "'");
  RunConfig c;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("config", "line " + std::to_string(lineno) + ": empty key");
    if (++seen[key] > 1) throw ValidationError(key, "duplicate key");
    apply_config_entry(c, key, value);
  }
  c.validate();
  return c;
}

inline std::vector<std::string> RunConfig::echo_lines() const {
  auto fmt = [](const char* k, const std::string& v) { return std::string("# ") + k + " = " + v; };
  auto num = [&](const char* k, double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return fmt(k, os.str());
  };
  std::vector<std::string> out;
  out.push_back(std::string("# fmcompton ") + kVersion);
  out.push_back(num("omega0_eV", omega0_eV));
  out.push_back(num("tau_fwhm_fs", tau_fwhm_fs));
  out.push_back(num("xi0", xi0));
  out.push_back(num("carrier_phase_rad", carrier_phase_rad));
  out.push_back(num("zeta0", zeta0));
  out.push_back(num("gamma_eV", gamma_eV));
  out.push_back(num("theta0_rad", theta0_rad));
  out.push_back(num("beam_energy_GeV", beam_energy_GeV));
  out.push_back(num("beam_sigma_GeV", beam_sigma_GeV));
  out.push_back(fmt("n_electrons", std::to_string(n_electrons)));
  out.push_back(num("grid_step", grid_step));
  out.push_back(num("phi_window", phi_window));
  out.push_back(num("omega_window_eV", omega_window_eV));
  out.push_back(num("dphi_cap", dphi_cap));
  out.push_back(num("u_floor", u_floor));
  out.push_back(num("bin_min_MeV", bin_min_MeV));
  out.push_back(num("bin_max_MeV", bin_max_MeV));
  out.push_back(fmt("n_bins", std::to_string(n_bins)));
  out.push_back(fmt("log_bins", log_bins ? "on" : "off"));
  out.push_back(fmt("breit_wheeler", breit_wheeler ? "on" : "off"));
  out.push_back(fmt("seed", std::to_string(seed)));
  out.push_back(fmt("workers", std::to_string(workers)));
  out.push_back(num("spot_radius_um", spot_radius_um));
  out.push_back(num("peak_intensity_Wcm2", peak_intensity_Wcm2));
  out.push_back(fmt("photon_dump", photon_dump ? "on" : "off"));
  out.push_back(fmt("rate_table_dump", rate_table_dump ? "on" : "off"));
  return out;
}

}  // namespace fmc
