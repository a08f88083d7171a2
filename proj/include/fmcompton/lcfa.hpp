// Locally-constant-field-approximation emission kernels: the quantum
// synchrotron spectral density for nonlinear Compton scattering, the total
// nonlinear Breit-Wheeler pair-production rate, and the tabulated total-rate /
// inverse-CDF machinery used by the Monte Carlo.
//
// Differential emission probability per unit dimensionless phase:
//   d2P/(dvphi du) = alpha/(sqrt(3) pi eta) * F(chi, u),
//   F(chi, u) = int_z^inf K_{5/3}(y) dy + u^2/(1-u) K_{2/3}(z),
//   z = 2u / (3 chi (1-u)),  u = k_-/p_-,  eta = omega0 p_-/m^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fmcompton/bessel.hpp"
#include "fmcompton/constants.hpp"
#include "fmcompton/quadrature.hpp"

namespace fmc {

inline constexpr double kRatePrefactor = constants::alpha / (1.7320508075688772 * M_PI);

// F(chi, u) using the tabulated K_{5/3} tail (hot path).
inline double compton_spectral_density(double chi, double u) {
  if (!(chi > 0.0)) throw ValidationError("chi", "must be > 0");
  if (!(u > 0.0 && u < 1.0)) throw ValidationError("u", "must lie in (0, 1)");
  const double z = 2.0 * u / (3.0 * chi * (1.0 - u));
  if (z >= 700.0) return 0.0;
  return bessel_k53_tail(std::max(z, 1e-9)) +
         u * u / (1.0 - u) * detail::bessel_k_generic(2.0 / 3.0, z);
}

// Total nonlinear Breit-Wheeler pair-production rate factor for a photon:
//   R_bw(chi_g) = int_0^1 ds [ int_y^inf K_{5/3} + (1/(s(1-s)) - 2) K_{2/3}(y) ],
//   y = 2/(3 chi_g s (1-s));  d2P/dvphi = alpha/(sqrt(3) pi eta_g) R_bw.
// Exhibits the e^{-8/(3 chi_g)} suppression for chi_g << 1.
inline double breit_wheeler_total_rate(double chi_gamma) {
  if (!(chi_gamma >= 0.0)) throw ValidationError("chi_gamma", "must be >= 0");
  if (chi_gamma < 1e-2) return 0.0;  // rate < e^{-266}
  auto density = [chi_gamma](double s) {
    const double y = 2.0 / (3.0 * chi_gamma * s * (1.0 - s));
    if (y >= 700.0) return 0.0;
    return bessel_k53_tail(y) + (1.0 / (s * (1.0 - s)) - 2.0) * detail::bessel_k_generic(2.0 / 3.0, y);
  };
  return 2.0 * adaptive_simpson(density, 1e-9, 0.5, 1e-14);
}

struct ClampStats {
  std::uint64_t above = 0;
  std::uint64_t below = 0;
};

// Precomputed total emission rate R(chi) = int_0^1 F du on a log chi grid and
// per-chi inverse-CDF rows over [u_floor, 1).  Immutable after build.
class RateTable {
 public:
  static constexpr double kChiMin = 1e-5;
  static constexpr double kChiMax = 20.0;

  std::vector<double> chi_grid;    // log-spaced, >= 256 points
  std::vector<double> total_rate;  // R(chi) including the analytic sub-floor patch
  std::vector<double> inv_cdf;     // [n_chi][n_quantiles], u at equispaced quantiles
  std::size_t n_quantiles = 0;
  double u_floor = 1e-7;

  double rate(double chi, ClampStats* stats = nullptr) const {
    const double c = clamp_chi(chi, stats);
    const double t = (std::log(c) - log_chi_min_) / log_chi_step_;
    auto i = static_cast<std::size_t>(t);
    if (i + 1 >= chi_grid.size()) i = chi_grid.size() - 2;
    const double s = t - static_cast<double>(i);
    // log-log linear: exact in the small-chi linear regime
    const double r = std::exp(log_rate_[i] * (1.0 - s) + log_rate_[i + 1] * s);
    // R is linear in chi below the grid
    return (chi < kChiMin) ? r * (chi / kChiMin) : r;
  }

  // Inverse-CDF draw with bilinear interpolation in (log chi, quantile).
  double sample_u(double chi, double q, ClampStats* stats = nullptr) const {
    const double c = clamp_chi(chi, stats);
    if (!(q >= 0.0 && q < 1.0)) throw ValidationError("quantile", "must lie in [0, 1)");
    const double t = (std::log(c) - log_chi_min_) / log_chi_step_;
    auto i = static_cast<std::size_t>(t);
    if (i + 1 >= chi_grid.size()) i = chi_grid.size() - 2;
    const double s = t - static_cast<double>(i);
    const double qt = q * static_cast<double>(n_quantiles - 1);
    auto j = static_cast<std::size_t>(qt);
    if (j + 1 >= n_quantiles) j = n_quantiles - 2;
    const double r = qt - static_cast<double>(j);
    const double* row0 = &inv_cdf[i * n_quantiles];
    const double* row1 = &inv_cdf[(i + 1) * n_quantiles];
    const double u0 = row0[j] * (1.0 - r) + row0[j + 1] * r;
    const double u1 = row1[j] * (1.0 - r) + row1[j + 1] * r;
    return u0 * (1.0 - s) + u1 * s;
  }

  friend RateTable build_rate_table(double u_floor, std::size_t n_chi, std::size_t n_quantiles);

 private:
  std::vector<double> log_rate_;
  double log_chi_min_ = 0.0, log_chi_step_ = 0.0;

  double clamp_chi(double chi, ClampStats* stats) const {
    if (!(chi > 0.0)) throw ValidationError("chi", "must be > 0");
    if (chi > kChiMax) {
      if (stats) ++stats->above;
      return kChiMax;
    }
    if (chi < kChiMin) {
      if (stats) ++stats->below;
      return kChiMin;
    }
    return chi;
  }
};

// Builds the rate and inverse-CDF tables by quadrature of F over u (graded
// substitution u = w^3 tames the u^{-2/3} edge).  The energy carried below
// u_floor is < 1e-6 of the total; its count contribution enters total_rate
// through an analytic small-z patch so small-chi rates stay exact.
inline RateTable build_rate_table(double u_floor = 1e-7, std::size_t n_chi = 256,
                                  std::size_t n_quantiles = 4096) {
  if (!(u_floor > 0.0 && u_floor < 1e-3)) throw ValidationError("u_floor", "must lie in (0, 1e-3)");
  RateTable table;
  table.u_floor = u_floor;
  table.n_quantiles = n_quantiles;
  table.chi_grid.resize(n_chi);
  table.total_rate.resize(n_chi);
  table.log_rate_.resize(n_chi);
  table.inv_cdf.assign(n_chi * n_quantiles, 0.0);
  table.log_chi_min_ = std::log(RateTable::kChiMin);
  table.log_chi_step_ =
      (std::log(RateTable::kChiMax) - table.log_chi_min_) / static_cast<double>(n_chi - 1);

  const std::size_t nw = 4096;
  const double w_lo = std::cbrt(u_floor);
  const double w_hi = std::cbrt(1.0 - 1e-9);
  std::vector<double> w(nw), u(nw), fv(nw), cdf(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    w[k] = w_lo + (w_hi - w_lo) * static_cast<double>(k) / static_cast<double>(nw - 1);
    u[k] = w[k] * w[k] * w[k];
  }
  // int_x^inf K_{5/3}(y) dy = c0 x^{-2/3} - pi/sqrt(3) + O(x^{4/3}) as x -> 0
  const double small_z_coeff = 2.1495282415344787;
  const double small_z_const = -M_PI / std::sqrt(3.0);

  for (std::size_t i = 0; i < n_chi; ++i) {
    const double chi = std::exp(table.log_chi_min_ + table.log_chi_step_ * static_cast<double>(i));
    table.chi_grid[i] = chi;
    for (std::size_t k = 0; k < nw; ++k)
      fv[k] = compton_spectral_density(chi, u[k]) * 3.0 * w[k] * w[k];
    cdf[0] = 0.0;
    for (std::size_t k = 1; k < nw; ++k)
      cdf[k] = cdf[k - 1] + 0.5 * (fv[k] + fv[k - 1]) * (w[k] - w[k - 1]);
    const double interior = cdf[nw - 1];
    // analytic patch for int_0^{u_floor} F du from the small-z tail expansion
    const double patch =
        small_z_coeff * std::pow(1.5 * chi, 2.0 / 3.0) * 3.0 * std::cbrt(u_floor) +
        small_z_const * u_floor;
    table.total_rate[i] = interior + patch;
    table.log_rate_[i] = std::log(table.total_rate[i]);

    // invert the floored CDF at equispaced quantiles
    double* row = &table.inv_cdf[i * n_quantiles];
    std::size_t k = 0;
    for (std::size_t jq = 0; jq < n_quantiles; ++jq) {
      const double target =
          interior * static_cast<double>(jq) / static_cast<double>(n_quantiles - 1);
      while (k + 1 < nw && cdf[k + 1] < target) ++k;
      if (k + 1 >= nw) {
        row[jq] = u[nw - 1];
        continue;
      }
      const double seg = cdf[k + 1] - cdf[k];
      const double frac = (seg > 0.0) ? (target - cdf[k]) / seg : 0.0;
      const double wq = w[k] + (w[k + 1] - w[k]) * frac;
      row[jq] = wq * wq * wq;
    }
    row[0] = u_floor;
  }
  return table;
}

// Inverse-CDF draw from the table (free-function form).
inline double sample_photon_fraction(const RateTable& table, double chi, double q,
                                     ClampStats* stats = nullptr) {
  return table.sample_u(chi, q, stats);
}

// Log-spaced total-rate table for the Breit-Wheeler channel, used by the
// per-photon conversion bookkeeping.
class BreitWheelerTable {
 public:
  BreitWheelerTable() {
    const double lo = std::log(1e-2), hi = std::log(20.0);
    log_chi_.resize(kN);
    log_rate_.resize(kN);
    for (int i = 0; i < kN; ++i) {
      log_chi_[i] = lo + (hi - lo) * i / (kN - 1);
      log_rate_[i] = std::log(std::max(breit_wheeler_total_rate(std::exp(log_chi_[i])), 1e-300));
    }
  }

  double rate(double chi_gamma) const {
    if (!(chi_gamma >= 0.0)) throw ValidationError("chi_gamma", "must be >= 0");
    if (chi_gamma <= std::exp(log_chi_.front())) return 0.0;
    const double lc = std::min(std::log(chi_gamma), log_chi_.back());
    const double h = log_chi_[1] - log_chi_[0];
    auto i = static_cast<std::size_t>((lc - log_chi_.front()) / h);
    if (i + 1 >= log_chi_.size()) i = log_chi_.size() - 2;
    const double s = (lc - log_chi_[i]) / h;
    return std::exp(log_rate_[i] * (1.0 - s) + log_rate_[i + 1] * s);
  }

 private:
  static constexpr int kN = 384;
  std::vector<double> log_chi_, log_rate_;
};

}  // namespace fmc
