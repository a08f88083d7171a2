// Validated physical parameter bundles.  All types are immutable after
// construction and safe to share across threads.
#pragma once

#include <cmath>
#include <iostream>

#include "fmcompton/constants.hpp"

namespace fmc {

// Laser pulse: Gaussian spectral amplitude b(w) with central photon energy
// omega0 and field-envelope scale tau (FWHM of the intensity = 2 sqrt(ln 2) tau).
struct PulseParams {
  double omega0_eV;      // central photon energy
  double tau;            // envelope scale [eV^-1]
  double xi0;            // classical nonlinearity parameter
  double carrier_phase;  // carrier phase at vphi = 0 [rad]; 0 = cosine

  PulseParams(double omega0_eV_, double tau_eV_inv, double xi0_,
              double carrier_phase_ = 0.0)
      : omega0_eV(omega0_eV_), tau(tau_eV_inv), xi0(xi0_), carrier_phase(carrier_phase_) {
    if (!(omega0_eV > 0.0)) throw ValidationError("omega0_eV", "must be > 0");
    if (!(tau > 0.0)) throw ValidationError("tau", "must be > 0");
    if (!(xi0 >= 0.0)) throw ValidationError("xi0", "must be >= 0");
    if (!std::isfinite(carrier_phase)) throw ValidationError("carrier_phase_rad", "must be finite");
    if (omega0_eV * tau < 10.0)
      std::cerr << "warning: omega0*tau = " << omega0_eV * tau
                << " < 10; narrowband (omega0 tau >> 1) assumptions degrade\n";
  }

  static PulseParams from_lab(double omega0_eV, double tau_fwhm_fs, double xi0,
                              double carrier_phase = 0.0) {
    if (!(tau_fwhm_fs > 0.0)) throw ValidationError("tau_fwhm_fs", "must be > 0");
    const double tau_fs = tau_fwhm_fs / (2.0 * std::sqrt(std::log(2.0)));
    return PulseParams(omega0_eV, fs_to_inverse_eV(tau_fs), xi0, carrier_phase);
  }

  double omega0_tau() const { return omega0_eV * tau; }
  bool narrowband() const { return omega0_tau() >= 10.0; }
};

// Squeezing of the coherent modes: Lorentzian amplitude profile
// zeta(w) = zeta0 / (1 + (w - omega0)^2 / gamma^2) at constant angle theta0.
// zeta0 = 0 reproduces the unsqueezed pulse exactly.
struct SqueezeParams {
  double zeta0;      // squeezing amplitude (30 dB <-> zeta0 ~ 3.45)
  double gamma_eV;   // Lorentzian half-width
  double theta0;     // squeezing angle [rad], [0, 2 pi)

  SqueezeParams(double zeta0_, double gamma_eV_, double theta0_)
      : zeta0(zeta0_), gamma_eV(gamma_eV_), theta0(theta0_) {
    if (!(zeta0 >= 0.0)) throw ValidationError("zeta0", "must be >= 0");
    if (!(gamma_eV > 0.0)) throw ValidationError("gamma_eV", "must be > 0");
    if (!(theta0 >= 0.0 && theta0 < 2.0 * M_PI))
      throw ValidationError("theta0_rad", "must lie in [0, 2 pi)");
  }

  static SqueezeParams none() { return SqueezeParams(0.0, 1.0, 0.0); }

  double zeta(double omega_eV, double omega0_eV) const {
    const double d = (omega_eV - omega0_eV) / gamma_eV;
    return zeta0 / (1.0 + d * d);
  }
};

// Electron beam: Gaussian energy distribution, truncated at +-5 sigma so that
// sampled energies stay positive and ultrarelativistic.
struct BeamParams {
  double mean_energy_eV;
  double sigma_energy_eV;
  long n_electrons;

  BeamParams(double mean_energy_eV_, double sigma_energy_eV_, long n_electrons_)
      : mean_energy_eV(mean_energy_eV_),
        sigma_energy_eV(sigma_energy_eV_),
        n_electrons(n_electrons_) {
    if (!(mean_energy_eV > 0.0)) throw ValidationError("beam_energy_GeV", "must be > 0");
    if (!(sigma_energy_eV >= 0.0)) throw ValidationError("beam_sigma_GeV", "must be >= 0");
    if (!(mean_energy_eV > 5.0 * sigma_energy_eV))
      throw ValidationError("beam_sigma_GeV",
                            "requires mean_energy > 5 sigma (positive, ultrarelativistic energies)");
    if (n_electrons < 1) throw ValidationError("n_electrons", "must be >= 1");
  }

  static BeamParams from_lab(double mean_GeV, double sigma_GeV, long n) {
    return BeamParams(mean_GeV * 1e9, sigma_GeV * 1e9, n);
  }
};

}  // namespace fmc
