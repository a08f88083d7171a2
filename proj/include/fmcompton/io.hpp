// Column output (CSV) and JSON summary writers.  Every file embeds the full
// configuration echo and the artifact version so reruns are attributable.
#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmcompton/config.hpp"
#include "fmcompton/field.hpp"
#include "fmcompton/mc.hpp"
#include "fmcompton/rho.hpp"

namespace fmc {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open output file '" + path + "'");
  out << std::setprecision(17);
  return out;
}

inline void write_echo(std::ofstream& out, const RunConfig& config) {
  for (const auto& line : config.echo_lines()) out << line << "\n";
}

}  // namespace detail

inline void write_field_csv(const std::string& path, const FieldGrid& grid,
                            const RunConfig& config) {
  auto out = detail::open_out(path);
  detail::write_echo(out, config);
  out << "phi,f_Z,xi\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << grid.phi(i) << "," << grid.f_values[i] << "," << grid.xi_values[i] << "\n";
}

inline void write_spectrum_csv(const std::string& path, const SpectrumHist& hist,
                               const RunConfig& config) {
  auto out = detail::open_out(path);
  detail::write_echo(out, config);
  out << "# overflow_count = " << hist.overflow_count
      << ", overflow_energy_MeV = " << hist.overflow_energy_MeV << "\n";
  out << "omega_MeV,dE_domega\n";
  for (std::size_t b = 0; b < hist.dE_domega.size(); ++b)
    out << hist.bin_center(b) << "," << hist.dE_domega[b] << "\n";
}

inline void write_photon_csv(const std::string& path, const std::vector<PhotonRecord>& photons,
                             const RunConfig& config) {
  auto out = detail::open_out(path);
  detail::write_echo(out, config);
  out << "energy_MeV,emission_phi,parent_chi\n";
  for (const auto& ph : photons)
    out << ph.energy_eV * 1e-6 << "," << ph.emission_phi << "," << ph.parent_chi << "\n";
}

inline void write_rate_table_csv(const std::string& path, const RateTable& table,
                                 const RunConfig& config) {
  auto out = detail::open_out(path);
  detail::write_echo(out, config);
  out << "chi,total_rate\n";
  for (std::size_t i = 0; i < table.chi_grid.size(); ++i)
    out << table.chi_grid[i] << "," << table.total_rate[i] << "\n";
}

struct RhoScanRow {
  double zeta0, gamma_tau, theta0;
  double quadrature, bessel, asymptotic;
};

inline void write_rho_csv(const std::string& path, const std::vector<RhoScanRow>& rows,
                          const RunConfig& config) {
  auto out = detail::open_out(path);
  detail::write_echo(out, config);
  out << "zeta0,gamma_tau,theta0,rho_quadrature,rho_bessel,rho_asymptotic\n";
  for (const auto& r : rows)
    out << r.zeta0 << "," << r.gamma_tau << "," << r.theta0 << "," << r.quadrature << ","
        << r.bessel << "," << r.asymptotic << "\n";
}

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["omega0_eV"] = c.omega0_eV;
  j["tau_fwhm_fs"] = c.tau_fwhm_fs;
  j["xi0"] = c.xi0;
  j["carrier_phase_rad"] = c.carrier_phase_rad;
  j["zeta0"] = c.zeta0;
  j["gamma_eV"] = c.gamma_eV;
  j["theta0_rad"] = c.theta0_rad;
  j["beam_energy_GeV"] = c.beam_energy_GeV;
  j["beam_sigma_GeV"] = c.beam_sigma_GeV;
  j["n_electrons"] = c.n_electrons;
  j["grid_step"] = c.grid_step;
  j["phi_window"] = c.phi_window;
  j["omega_window_eV"] = c.omega_window_eV;
  j["dphi_cap"] = c.dphi_cap;
  j["u_floor"] = c.u_floor;
  j["bin_min_MeV"] = c.bin_min_MeV;
  j["bin_max_MeV"] = c.bin_max_MeV;
  j["n_bins"] = c.n_bins;
  j["log_bins"] = c.log_bins;
  j["breit_wheeler"] = c.breit_wheeler;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["spot_radius_um"] = c.spot_radius_um;
  j["peak_intensity_Wcm2"] = c.peak_intensity_Wcm2;
  j["photon_dump"] = c.photon_dump;
  return j;
}

inline void write_summary_json(const std::string& path, const RunSummary& summary,
                               const RunConfig& config) {
  nlohmann::json j;
  j["artifact_version"] = kVersion;
  j["config"] = config_json(config);
  j["seed"] = summary.seed;
  j["n_electrons"] = summary.n_electrons;
  j["mean_emitted_energy_MeV"] = summary.mean_emitted_energy_MeV;
  j["stderr_emitted_energy_MeV"] = summary.stderr_emitted_energy_MeV;
  j["mean_photon_count"] = summary.mean_photon_count;
  j["pair_count"] = summary.pair_count;
  j["pulse_energy_J"] = summary.pulse_energy_J;
  j["chi_clamp_above"] = summary.clamp.above;
  j["chi_clamp_below"] = summary.clamp.below;
  auto out = detail::open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace fmc
