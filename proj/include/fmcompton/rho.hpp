// Peak-field enhancement factor rho(zeta0, Gamma tau, theta0): ratio of the
// squeezed to unsqueezed cosine-quadrature amplitude of the field at vphi = 0,
// plus its three analytic approximations.  Each method reports the regime
// assumptions it relies on instead of silently switching.
#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "fmcompton/bessel.hpp"
#include "fmcompton/quadrature.hpp"

namespace fmc {

enum class RhoMethod { quadrature, small_zeta, bessel, asymptotic };

inline const char* rho_method_name(RhoMethod m) {
  switch (m) {
    case RhoMethod::quadrature: return "quadrature";
    case RhoMethod::small_zeta: return "small_zeta";
    case RhoMethod::bessel: return "bessel";
    case RhoMethod::asymptotic: return "asymptotic";
  }
  return "?";
}

struct RhoResult {
  double value;
  RhoMethod method;
  std::string validity;  // text tag of the regime assumptions used
};

// rho = (Gt/sqrt(2 pi)) int ds [sin^2(th/2) e^{z(s)} + cos^2(th/2) e^{-z(s)}]
//       e^{-Gt^2 s^2/2},   z(s) = zeta0/(1+s^2).
// Absolute error <= 1e-8.  Truncated at |s| <= max(10, 8/Gt, 5 sqrt(zeta0));
// beyond the cut the bracket is within e^{1/25} of 1 and the Gaussian tail
// erfc(8/sqrt 2) < 1e-14 bounds the remainder.
inline RhoResult rho_quadrature(double zeta0, double gamma_tau, double theta0) {
  if (!(zeta0 >= 0.0)) throw ValidationError("zeta0", "must be >= 0");
  if (!(gamma_tau > 0.0)) throw ValidationError("gamma_tau", "must be > 0");
  if (zeta0 == 0.0) return {1.0, RhoMethod::quadrature, "exact: zeta0 = 0 is the unsqueezed case"};
  const double s2 = std::sin(0.5 * theta0) * std::sin(0.5 * theta0);
  const double c2 = 1.0 - s2;
  const double g2 = gamma_tau * gamma_tau;
  auto integrand = [&](double s) {
    const double z = zeta0 / (1.0 + s * s);
    return (s2 * std::exp(z) + c2 * std::exp(-z)) * std::exp(-0.5 * g2 * s * s);
  };
  const double cut = std::max({10.0, 8.0 / gamma_tau, 5.0 * std::sqrt(zeta0)});
  // split at the squeezing-spike scale so the refinement starts resolved
  const double knee = std::min(5.0 * std::sqrt(zeta0) + 5.0, 0.5 * cut);
  double integral = adaptive_simpson(integrand, 0.0, knee, 2.5e-9);
  integral += adaptive_simpson(integrand, knee, cut, 2.5e-9);
  const double value = gamma_tau / std::sqrt(2.0 * M_PI) * 2.0 * integral;
  std::ostringstream tag;
  tag << "quadrature: |s| <= " << cut << ", abs err <= 1e-8";
  return {value, RhoMethod::quadrature, tag.str()};
}

// First order in zeta0:  rho ~ 1 - cos(theta0) sqrt(2 pi) zeta0 Gt.
inline RhoResult rho_small_zeta(double zeta0, double gamma_tau, double theta0) {
  if (zeta0 == 0.0) return {1.0, RhoMethod::small_zeta, "exact: zeta0 = 0"};
  const double value = 1.0 - std::cos(theta0) * std::sqrt(2.0 * M_PI) * zeta0 * gamma_tau;
  std::ostringstream tag;
  tag << "small_zeta: O(zeta0^2) dropped, zeta0 = " << zeta0;
  return {value, RhoMethod::small_zeta, tag.str()};
}

// Gaussian replaced by 1 under the integral (valid for Gt << 1 and
// Gt << 1/sqrt(zeta0)); the s integral then evaluates to modified Bessel
// functions of the first kind.
inline RhoResult rho_bessel(double zeta0, double gamma_tau, double theta0) {
  if (zeta0 == 0.0) return {1.0, RhoMethod::bessel, "exact: zeta0 = 0"};
  if (zeta0 > 600.0) throw ValidationError("zeta0", "overflow guard: rho_bessel requires zeta0 <= 600");
  const double s2 = std::sin(0.5 * theta0) * std::sin(0.5 * theta0);
  const double c2 = 1.0 - s2;
  const double h = 0.5 * zeta0;
  const double i0 = bessel_i(0, h), i1 = bessel_i(1, h);
  const double value =
      1.0 + std::sqrt(M_PI / 2.0) * zeta0 * gamma_tau *
                (s2 * std::exp(h) * (i0 - i1) - c2 * std::exp(-h) * (i0 + i1));
  std::ostringstream tag;
  tag << "bessel: assumes Gt << 1 and Gt sqrt(zeta0) << 1 (Gt sqrt(zeta0) = "
      << gamma_tau * std::sqrt(zeta0) << ")";
  return {value, RhoMethod::bessel, tag.str()};
}

// Large-zeta0 limit of the Bessel form: the e^{zeta0}/sqrt(2 zeta0) term
// drives the enhancement, the sqrt(2 zeta0) term bounds the suppression.
inline RhoResult rho_asymptotic(double zeta0, double gamma_tau, double theta0) {
  if (zeta0 == 0.0) return {1.0, RhoMethod::asymptotic, "exact: zeta0 = 0"};
  if (zeta0 > 700.0) throw ValidationError("zeta0", "overflow guard: rho_asymptotic requires zeta0 <= 700");
  const double s2 = std::sin(0.5 * theta0) * std::sin(0.5 * theta0);
  const double c2 = 1.0 - s2;
  const double value =
      1.0 + gamma_tau * (s2 * std::exp(zeta0) / std::sqrt(2.0 * zeta0) - c2 * std::sqrt(2.0 * zeta0));
  std::ostringstream tag;
  tag << "asymptotic: assumes zeta0 >> 1 and Gt sqrt(zeta0) << 1 (zeta0 = " << zeta0 << ")";
  return {value, RhoMethod::asymptotic, tag.str()};
}

}  // namespace fmc
