// Synthesis of the effective frequency-modulated plane wave:
//   A0 f_Z(phi) = int_0^inf (dw/2pi) (1/2w) [b(w) E(phi,w) + c.c.]
// with Gaussian spectral amplitude b(w), squeezed mode function E(phi,w) and
// Lorentzian squeezing profile zeta(w).  xi(vphi) = -xi0 d f_Z/d vphi is
// computed from the analytically differentiated integrand, not by numerical
// differencing.
//
// The omega integral is a fixed-order composite Gauss-Legendre rule; panel
// counts are doubled until the sampled grid changes by < 1e-6 of peak.  The
// phase window auto-sizer grows the grid until the captured fraction of
// int xi^2 dvphi and the boundary amplitude meet their thresholds.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "fmcompton/constants.hpp"
#include "fmcompton/params.hpp"
#include "fmcompton/quadrature.hpp"

namespace fmc {

// b(omega)/A0 = sqrt(2 pi) omega0 tau exp(-tau^2 (omega - omega0)^2 / 2)
inline double spectral_amplitude(double omega_eV, const PulseParams& pulse) {
  if (!(omega_eV > 0.0)) throw ValidationError("omega_eV", "must be > 0");
  const double d = pulse.tau * (omega_eV - pulse.omega0_eV);
  return std::sqrt(2.0 * M_PI) * pulse.omega0_tau() * std::exp(-0.5 * d * d);
}

// E(phi_lab, w) = cosh(zeta) e^{-i w phi_lab} - sinh(zeta) e^{-i theta0} e^{+i w phi_lab}
// with phi_lab = vphi / omega0 and zeta = zeta(w) from the Lorentzian profile.
inline std::complex<double> mode_function(double vphi, double omega_eV,
                                          const SqueezeParams& squeeze,
                                          const PulseParams& pulse) {
  if (!(omega_eV > 0.0)) throw ValidationError("omega_eV", "must be > 0");
  const double phase = omega_eV * vphi / pulse.omega0_eV;
  const double z = squeeze.zeta(omega_eV, pulse.omega0_eV);
  const std::complex<double> down(std::cos(phase), -std::sin(phase));
  const std::complex<double> up = std::conj(down);
  const std::complex<double> rot(std::cos(squeeze.theta0), -std::sin(squeeze.theta0));
  return std::cosh(z) * down - std::sinh(z) * rot * up;
}

struct GridRequest {
  bool auto_window = true;
  double phi_min = 0.0;  // used when auto_window == false
  double phi_max = 0.0;
  double step = 0.05;    // must be <= 0.15 to resolve the carrier
};

struct FieldGrid {
  double phi_min = 0.0, phi_max = 0.0, step = 0.0;
  std::vector<double> f_values;   // f_Z(vphi), dimensionless
  std::vector<double> xi_values;  // xi(vphi) = -xi0 d f_Z / d vphi
  PulseParams pulse;
  SqueezeParams squeeze;

  std::size_t size() const { return f_values.size(); }
  double phi(std::size_t i) const { return phi_min + step * static_cast<double>(i); }

  double xi_at(double vphi) const { return interp(xi_values, vphi); }
  double f_at(double vphi) const { return interp(f_values, vphi); }

  // trapezoid of xi^2 over the grid
  double xi_square_integral() const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < xi_values.size(); ++i)
      sum += 0.5 * (xi_values[i] * xi_values[i] + xi_values[i + 1] * xi_values[i + 1]);
    return sum * step;
  }

  // largest |xi| within the outermost `frac` of the window on each side
  double boundary_xi_max(double frac = 0.02) const {
    const auto n = xi_values.size();
    const auto k = std::max<std::size_t>(2, static_cast<std::size_t>(frac * n));
    double m = 0.0;
    for (std::size_t i = 0; i < k && i < n; ++i) {
      m = std::max(m, std::abs(xi_values[i]));
      m = std::max(m, std::abs(xi_values[n - 1 - i]));
    }
    return m;
  }

 private:
  double interp(const std::vector<double>& v, double vphi) const {
    if (vphi <= phi_min || vphi >= phi_max) return 0.0;
    const double t = (vphi - phi_min) / step;
    auto i = static_cast<std::size_t>(t);
    if (i + 1 >= v.size()) return v.back();
    const double s = t - static_cast<double>(i);
    return v[i] * (1.0 - s) + v[i + 1] * s;
  }
};

namespace detail {

// Precomputed omega-quadrature: nodes, weights and the carrier-projected
// coefficients of cos(w phi_lab) and sin(w phi_lab) for f and xi.
struct OmegaRule {
  std::vector<double> omega;  // node frequencies
  std::vector<double> cf, sf; // f_Z   = sum cf c + sf s
  std::vector<double> cx, sx; // xi/xi0 = sum cx c + sx s
};

inline OmegaRule build_omega_rule(const PulseParams& pulse, const SqueezeParams& squeeze,
                                  double w_lo, double w_hi, int panels_outer, int panels_core,
                                  double core_half_width) {
  static const GaussLegendre gl(12);
  const double w0 = pulse.omega0_eV;
  OmegaRule r;
  std::vector<double> nodes, weights;
  if (squeeze.zeta0 > 0.0 && core_half_width > 0.0 &&
      w0 - core_half_width > w_lo && w0 + core_half_width < w_hi) {
    composite_gl(gl, w_lo, w0 - core_half_width, panels_outer, nodes, weights);
    composite_gl(gl, w0 - core_half_width, w0 + core_half_width, panels_core, nodes, weights);
    composite_gl(gl, w0 + core_half_width, w_hi, panels_outer, nodes, weights);
  } else {
    composite_gl(gl, w_lo, w_hi, panels_outer + panels_core, nodes, weights);
  }
  const double psi = pulse.carrier_phase;
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  const double cpt = std::cos(psi - squeeze.theta0), spt = std::sin(psi - squeeze.theta0);
  r.omega.reserve(nodes.size());
  r.cf.reserve(nodes.size());
  r.sf.reserve(nodes.size());
  r.cx.reserve(nodes.size());
  r.sx.reserve(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double w = nodes[j];
    const double b = spectral_amplitude(w, pulse) * weights[j] / (2.0 * M_PI);
    const double z = squeeze.zeta(w, w0);
    const double ch = std::cosh(z), sh = std::sinh(z);
    r.omega.push_back(w);
    r.cf.push_back(b / w * (ch * cpsi - sh * cpt));
    r.sf.push_back(b / w * (ch * spsi + sh * spt));
    r.cx.push_back(b / w0 * (-ch * spsi - sh * spt));
    r.sx.push_back(b / w0 * (ch * cpsi - sh * cpt));
  }
  return r;
}

inline void eval_point(const OmegaRule& r, double w0, double vphi, double& f, double& xi) {
  const double phi_lab = vphi / w0;
  double af = 0.0, ax = 0.0;
  for (std::size_t j = 0; j < r.omega.size(); ++j) {
    const double c = std::cos(r.omega[j] * phi_lab);
    const double s = std::sin(r.omega[j] * phi_lab);
    af += r.cf[j] * c + r.sf[j] * s;
    ax += r.cx[j] * c + r.sx[j] * s;
  }
  f = af;
  xi = ax;
}

// Streaming evaluation over a uniform vphi grid using per-node rotation
// recurrences, re-anchored with exact trigonometry every 512 samples.
inline void eval_grid(const OmegaRule& r, const PulseParams& pulse, double phi_min, double step,
                      std::size_t n, std::vector<double>& f_out, std::vector<double>& xi_out) {
  const double w0 = pulse.omega0_eV;
  const std::size_t nj = r.omega.size();
  std::vector<double> c(nj), s(nj), cr(nj), sr(nj);
  for (std::size_t j = 0; j < nj; ++j) {
    const double dphase = r.omega[j] * step / w0;
    cr[j] = std::cos(dphase);
    sr[j] = std::sin(dphase);
  }
  f_out.assign(n, 0.0);
  xi_out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 512 == 0) {
      const double phi_lab = (phi_min + step * static_cast<double>(i)) / w0;
      for (std::size_t j = 0; j < nj; ++j) {
        c[j] = std::cos(r.omega[j] * phi_lab);
        s[j] = std::sin(r.omega[j] * phi_lab);
      }
    }
    double af = 0.0, ax = 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      af += r.cf[j] * c[j] + r.sf[j] * s[j];
      ax += r.cx[j] * c[j] + r.sx[j] * s[j];
      const double cn = c[j] * cr[j] - s[j] * sr[j];
      s[j] = s[j] * cr[j] + c[j] * sr[j];
      c[j] = cn;
    }
    f_out[i] = af;
    xi_out[i] = ax;
  }
}

struct OmegaWindow {
  double lo, hi, core_half_width;
};

// Integrand magnitude bound (phi-independent): b(w) e^{zeta(w)} / w.
inline double integrand_bound(double w, const PulseParams& pulse, const SqueezeParams& squeeze) {
  if (w <= 0.0) return 0.0;
  return spectral_amplitude(w, pulse) / w * std::exp(squeeze.zeta(w, pulse.omega0_eV));
}

inline OmegaWindow choose_omega_window(const PulseParams& pulse, const SqueezeParams& squeeze,
                                       double override_half_width_eV) {
  const double w0 = pulse.omega0_eV;
  double W = (override_half_width_eV > 0.0)
                 ? override_half_width_eV
                 : std::max(8.0 / pulse.tau, 10.0 * squeeze.gamma_eV);
  const double peak = integrand_bound(w0, pulse, squeeze);
  if (override_half_width_eV <= 0.0) {
    int grow = 0;
    while (integrand_bound(w0 + W, pulse, squeeze) > 1e-8 * peak ||
           integrand_bound(std::max(w0 - W, 1e-9 * w0), pulse, squeeze) > 1e-8 * peak) {
      W *= 1.25;
      if (++grow > 64)
        throw NumericalError("omega window: integrand tail does not fall below 1e-8 of peak");
    }
  }
  const double lo = std::max(w0 - W, 1e-9 * w0);
  if (integrand_bound(lo, pulse, squeeze) > 1e-8 * peak)
    throw NumericalError(
        "omega window too small: integrand at the w > 0 boundary exceeds 1e-8 of its peak "
        "(omega0 tau too small for the narrowband field model)");
  const double core = std::min(30.0 * squeeze.gamma_eV, W / 3.0);
  return {lo, w0 + W, core};
}

}  // namespace detail

// Deterministic field synthesis.  Throws NumericalError for a too-coarse grid
// or an unsatisfiable omega window; ValidationError for bad parameters.
inline FieldGrid synthesize_field(const PulseParams& pulse, const SqueezeParams& squeeze,
                                  const GridRequest& request = {},
                                  double omega_window_override_eV = 0.0) {
  if (!(request.step > 0.0) || request.step > 0.15)
    throw NumericalError("grid too coarse: step must lie in (0, 0.15] to resolve the carrier");

  const double w0 = pulse.omega0_eV;
  const auto window = detail::choose_omega_window(pulse, squeeze, omega_window_override_eV);

  // Panel doubling until a probe subset of the grid (stride-sampled, both
  // endpoints included) changes by < 1e-6 of the peak amplitude.
  auto converge_rule = [&](double phi_lo, double phi_hi) {
    const double span = phi_hi - phi_lo;
    const int n_probe = 513;
    std::vector<double> probes(n_probe);
    for (int i = 0; i < n_probe; ++i)
      probes[i] = phi_lo + span * static_cast<double>(i) / (n_probe - 1);
    int p_outer = 8, p_core = 16;
    std::vector<double> f_prev, xi_prev;
    detail::OmegaRule rule;
    for (int level = 0; level < 12; ++level) {
      rule = detail::build_omega_rule(pulse, squeeze, window.lo, window.hi, p_outer, p_core,
                                      window.core_half_width);
      std::vector<double> f(n_probe), xi(n_probe);
      for (int i = 0; i < n_probe; ++i)
        detail::eval_point(rule, w0, probes[i], f[i], xi[i]);
      if (!f_prev.empty()) {
        double peak = 1e-300, diff = 0.0;
        for (int i = 0; i < n_probe; ++i) {
          peak = std::max({peak, std::abs(f[i]), std::abs(xi[i])});
          diff = std::max({diff, std::abs(f[i] - f_prev[i]), std::abs(xi[i] - xi_prev[i])});
        }
        if (diff < 1e-6 * peak) return rule;
      }
      f_prev = std::move(f);
      xi_prev = std::move(xi);
      p_outer *= 2;
      p_core *= 2;
    }
    throw NumericalError("omega quadrature did not converge after 12 panel doublings");
  };

  double phi_lo, phi_hi;
  if (request.auto_window) {
    // Probe-based window growth: expand by 1.5x until the outermost band
    // carries < 5e-4 of int xi^2 and the boundary amplitude is small.
    double W = std::max(8.0 * pulse.omega0_tau(), 50.0);
    detail::OmegaRule rule = converge_rule(-W, W);
    for (int iter = 0; iter < 24; ++iter) {
      const int np = 1025;
      double total = 0.0, outer = 0.0;
      const double h = W / (np - 1);
      for (int i = 0; i < np; ++i) {
        const double vp = h * static_cast<double>(i);
        double f, xi;
        detail::eval_point(rule, w0, vp, f, xi);
        const double contrib = xi * xi * h * ((i == 0 || i == np - 1) ? 0.5 : 1.0);
        total += contrib;
        if (vp > W / 1.5) outer += contrib;
      }
      double boundary = 0.0;
      for (int i = 0; i < 17; ++i) {
        double f, xi;
        detail::eval_point(rule, w0, W - 0.4 * i, f, xi);
        boundary = std::max(boundary, std::abs(xi));
      }
      const double amp_scale = std::max(pulse.xi0, 1e-300);
      if ((outer < 5e-4 * total && boundary < 5e-4 * amp_scale) || pulse.xi0 == 0.0) break;
      W *= 1.5;
      rule = converge_rule(-W, W);
    }
    phi_lo = -W;
    phi_hi = W;
  } else {
    if (!(request.phi_max > request.phi_min))
      throw ValidationError("phi_window", "requires phi_max > phi_min");
    phi_lo = request.phi_min;
    phi_hi = request.phi_max;
  }

  const auto rule = converge_rule(phi_lo, phi_hi);
  const auto n = static_cast<std::size_t>(std::floor((phi_hi - phi_lo) / request.step)) + 1;

  FieldGrid grid{phi_lo, phi_lo + request.step * static_cast<double>(n - 1), request.step,
                 {}, {}, pulse, squeeze};
  detail::eval_grid(rule, pulse, phi_lo, request.step, n, grid.f_values, grid.xi_values);

  // xi carries the configured amplitude; the quadrature computed xi/xi0
  for (auto& v : grid.xi_values) v *= pulse.xi0;

  // Numerical confirmation that the b E + c.c. structure stays real: the
  // complex-route integrand summed over nodes must have negligible imaginary part.
  for (int k = 0; k < 16; ++k) {
    const double vp = phi_lo + (phi_hi - phi_lo) * k / 15.0;
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < rule.omega.size(); j += 37) {
      const double w = rule.omega[j];
      const std::complex<double> ew = mode_function(vp, w, squeeze, pulse);
      const std::complex<double> bphase(std::cos(pulse.carrier_phase), std::sin(pulse.carrier_phase));
      const std::complex<double> be = bphase * spectral_amplitude(w, pulse) * ew;
      acc += be + std::conj(be);
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
      throw NumericalError("reality check failed: imaginary residue above 1e-10 of peak");
  }
  return grid;
}

// E = pi sigma0^2 I0 (1/omega0) int dvphi [xi/xi0]^2, in Joules.
// I0 is the (instantaneous peak) intensity corresponding to xi0.
inline double pulse_energy_J(const FieldGrid& grid, double spot_radius_um,
                             double peak_intensity_W_cm2) {
  if (!(spot_radius_um > 0.0)) throw ValidationError("spot_radius_um", "must be > 0");
  const double xi0 = grid.pulse.xi0;
  if (xi0 == 0.0) return 0.0;
  if (grid.boundary_xi_max() >= 1e-3 * xi0)
    throw NumericalError(
        "truncated pulse: |xi| at the grid ends exceeds 1e-3 xi0; enlarge the phase window");
  const double integral = grid.xi_square_integral() / (xi0 * xi0);
  const double sigma_cm = spot_radius_um * 1e-4;
  const double one_over_omega0_s = constants::hbar_eV_s / grid.pulse.omega0_eV;
  return M_PI * sigma_cm * sigma_cm * peak_intensity_W_cm2 * one_over_omega0_s * integral;
}

}  // namespace fmc
