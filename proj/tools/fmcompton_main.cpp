// Command-line driver for the three workflows: simulate, rho-scan, field-dump.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-validation error,
// 4 other runtime error.
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fmcompton/config.hpp"
#include "fmcompton/field.hpp"
#include "fmcompton/io.hpp"
#include "fmcompton/lcfa.hpp"
#include "fmcompton/mc.hpp"
#include "fmcompton/rho.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
};

fmc::RunConfig load_config(const CliOverrides& cli) {
  fmc::RunConfig config = fmc::parse_config(cli.config_path);
  if (cli.seed >= 0) config.seed = static_cast<std::uint64_t>(cli.seed);
  if (cli.workers > 0) config.workers = cli.workers;
  if (!cli.out_dir.empty()) config.out_dir = cli.out_dir;
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  return config;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_simulate(const CliOverrides& cli) {
  const fmc::RunConfig config = load_config(cli);
  const auto pulse = config.pulse();
  const auto squeeze = config.squeeze();
  std::cerr << "synthesizing field (zeta0 = " << squeeze.zeta0 << ", theta0 = " << squeeze.theta0
            << ")...\n";
  const auto grid =
      fmc::synthesize_field(pulse, squeeze, config.grid_request(), config.omega_window_eV);
  std::cerr << "  grid: [" << grid.phi_min << ", " << grid.phi_max << "] step " << grid.step
            << " (" << grid.size() << " samples)\n";
  const auto table = fmc::build_rate_table(config.u_floor);
  std::cerr << "running " << config.n_electrons << " electrons...\n";
  auto result = fmc::run_ensemble(grid, table, config.beam(), config.ensemble_options());
  result.summary.pulse_energy_J =
      fmc::pulse_energy_J(grid, config.spot_radius_um, config.peak_intensity_Wcm2);

  fmc::write_spectrum_csv(join(config.out_dir, "spectrum.csv"), result.spectrum, config);
  fmc::write_summary_json(join(config.out_dir, "summary.json"), result.summary, config);
  if (config.photon_dump)
    fmc::write_photon_csv(join(config.out_dir, "photons.csv"), result.photons, config);
  if (config.rate_table_dump)
    fmc::write_rate_table_csv(join(config.out_dir, "rate_table.csv"), table, config);

  std::cout << "mean emitted energy: " << result.summary.mean_emitted_energy_MeV << " +- "
            << result.summary.stderr_emitted_energy_MeV << " MeV\n"
            << "mean photon count:   " << result.summary.mean_photon_count << "\n"
            << "pair count:          " << result.summary.pair_count << "\n"
            << "pulse energy:        " << result.summary.pulse_energy_J << " J\n";
  return 0;
}

int cmd_rho_scan(const CliOverrides& cli) {
  const fmc::RunConfig config = load_config(cli);
  std::vector<fmc::RhoScanRow> rows;
  for (double z0 : config.rho_zeta0)
    for (double gt : config.rho_gamma_tau)
      for (double th : config.rho_theta0) {
        fmc::RhoScanRow row{z0, gt, th, 0.0, 0.0, 0.0};
        row.quadrature = fmc::rho_quadrature(z0, gt, th).value;
        row.bessel = fmc::rho_bessel(z0, gt, th).value;
        row.asymptotic = fmc::rho_asymptotic(z0, gt, th).value;
        rows.push_back(row);
      }
  fmc::write_rho_csv(join(config.out_dir, "rho_scan.csv"), rows, config);
  std::cout << "wrote " << rows.size() << " lattice rows\n";
  return 0;
}

int cmd_field_dump(const CliOverrides& cli) {
  const fmc::RunConfig config = load_config(cli);
  const auto grid = fmc::synthesize_field(config.pulse(), config.squeeze(), config.grid_request(),
                                          config.omega_window_eV);
  fmc::write_field_csv(join(config.out_dir, "field.csv"), grid, config);
  std::cout << "wrote " << grid.size() << " grid samples on [" << grid.phi_min << ", "
            << grid.phi_max << "]\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear Compton scattering in a frequency-modulated plane wave"};
  app.require_subcommand(1);

  CliOverrides cli;
  auto add_common = [&cli](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "run configuration file")->required();
    sub->add_option("--seed", cli.seed, "override the configured seed");
    sub->add_option("--out", cli.out_dir, "override the output directory");
    sub->add_option("--workers", cli.workers, "override the worker count");
  };
  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo and write spectra");
  auto* rho_scan = app.add_subcommand("rho-scan", "evaluate the enhancement factor on a lattice");
  auto* field_dump = app.add_subcommand("field-dump", "write the synthesized field grid");
  add_common(simulate);
  add_common(rho_scan);
  add_common(field_dump);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(cli);
    if (rho_scan->parsed()) return cmd_rho_scan(cli);
    if (field_dump->parsed()) return cmd_field_dump(cli);
  } catch (const fmc::ValidationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const fmc::NumericalError& e) {
    std::cerr << "numerical validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
