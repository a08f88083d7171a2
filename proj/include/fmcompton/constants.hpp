// Physical constants and unit conversions shared by all modules.
//
// Internal unit system: energies in eV, times in eV^-1 (hbar = c = 1),
// dimensionless phase  vphi = omega0 * (t - z).  Public configuration
// accepts laboratory units (fs, GeV, W/cm^2) and converts at the boundary.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fmc {

inline constexpr const char* kVersion = "0.1.0";

namespace constants {

// fine-structure constant e^2/(4 pi eps0 hbar c)
inline constexpr double alpha = 1.0 / 137.035999084;

// electron mass [eV]
inline constexpr double m_e_eV = 510998.95;

// reduced Planck constant [eV s]
inline constexpr double hbar_eV_s = 6.582119569e-16;

// hbar*c [eV cm]
inline constexpr double hbar_c_eV_cm = 1.973269804e-5;

// One natural-unit intensity (1 eV^4, Heaviside-Lorentz) expressed in W/cm^2:
//   k = (1 eV in J) / ((hbar c)^2 [eV^2 cm^2] * hbar [eV s])
inline constexpr double intensity_eV4_to_W_cm2 =
    1.602176634e-19 / (hbar_c_eV_cm * hbar_c_eV_cm * hbar_eV_s);

// Documentation constants (appear in prose only, not in any hot path):
// critical (Schwinger) field F_cr = m^2/|e| = 1.3e16 V/cm, Compton scale
// lambda_C = 1/m = 3.9e-11 cm, omega_C = m.
inline constexpr double F_cr_V_cm = 1.3e16;
inline constexpr double lambda_C_cm = 3.9e-11;

}  // namespace constants

// Error raised by parameter and configuration validation; names the
// offending key so the CLI can report it.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Raised when an internal numerical self-check fails (quadrature window,
// truncated pulse, step-size violation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// t [fs] -> t [eV^-1].  Rejects negative durations.
inline double fs_to_inverse_eV(double t_fs) {
  if (!(t_fs >= 0.0))
    throw ValidationError("duration_fs", "must be >= 0, got " + std::to_string(t_fs));
  return t_fs * 1e-15 / constants::hbar_eV_s;
}

inline double inverse_eV_to_fs(double t) {
  if (!(t >= 0.0))
    throw ValidationError("duration_eV_inv", "must be >= 0");
  return t * constants::hbar_eV_s * 1e15;
}

// eta = omega0 * p_- / m^2 for a head-on collision with the plane wave.
inline double eta_parameter(double p_minus_eV, double omega0_eV) {
  if (!(p_minus_eV > 0.0))
    throw ValidationError("p_minus", "must be > 0");
  return omega0_eV * p_minus_eV / (constants::m_e_eV * constants::m_e_eV);
}

// Conversion between xi0 and the instantaneous peak intensity of a linearly
// polarized plane wave:  I0 = E0^2 = (xi0 m omega0)^2 / (4 pi alpha)  [eV^4].
// xi0 = 5 at omega0 = 1.55 eV corresponds to I0 = 1.069e20 W/cm^2.
inline double xi0_to_peak_intensity_W_cm2(double xi0, double omega0_eV) {
  const double e0 = xi0 * constants::m_e_eV * omega0_eV;
  return e0 * e0 / (4.0 * M_PI * constants::alpha) * constants::intensity_eV4_to_W_cm2;
}

inline double peak_intensity_W_cm2_to_xi0(double intensity_W_cm2, double omega0_eV) {
  if (!(intensity_W_cm2 >= 0.0))
    throw ValidationError("peak_intensity_Wcm2", "must be >= 0");
  const double i_eV4 = intensity_W_cm2 / constants::intensity_eV4_to_W_cm2;
  return std::sqrt(i_eV4 * 4.0 * M_PI * constants::alpha) / (constants::m_e_eV * omega0_eV);
}

}  // namespace fmc
