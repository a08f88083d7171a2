// One-dimensional stochastic kinetic Monte Carlo: each electron is described
// solely by its light-cone momentum p_- = eps - p_z ~ 2 eps, which stays
// constant except at emissions, where it drops by the photon light-cone
// momentum k_- = u p_-.  Emission probabilities are LCFA rates evaluated at
// the local chi(vphi) = |xi(vphi)| eta.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "fmcompton/constants.hpp"
#include "fmcompton/field.hpp"
#include "fmcompton/lcfa.hpp"
#include "fmcompton/params.hpp"
#include "fmcompton/rng.hpp"

namespace fmc {

struct ElectronState {
  double p_minus_eV;   // light-cone momentum, > 0, non-increasing
  double phi = 0.0;    // current dimensionless phase
  double weight = 1.0; // statistical weight
};

struct PhotonRecord {
  double energy_eV;     // omega_gamma = u p_- / 2 (pre-emission p_-)
  double emission_phi;
  double parent_chi;    // chi of the emitting electron (diagnostics)
};

struct StepControl {
  double dphi_cap = 0.2;       // also resolves the carrier
  double p_step_target = 1e-2; // refine steps until P_step <= this
  double p_step_hard = 5e-2;   // hard error beyond this, never silent bias
};

// Marches one electron from `state.phi` to the end of the grid.  Appends
// emitted photons; updates the state in place.
inline void simulate_electron(const FieldGrid& grid, const RateTable& table, ElectronState& state,
                              RngStream& rng, const StepControl& ctl,
                              std::vector<PhotonRecord>& photons, ClampStats* stats = nullptr) {
  if (!(state.p_minus_eV > 0.0)) throw ValidationError("p_minus", "must be > 0");
  const double omega0 = grid.pulse.omega0_eV;
  double eta = eta_parameter(state.p_minus_eV, omega0);
  double phi = std::max(state.phi, grid.phi_min);
  const double phi_end = grid.phi_max;

  while (phi < phi_end) {
    // step choice from the local rate, capped to resolve the carrier
    const double chi_here = std::abs(grid.xi_at(phi)) * eta;
    double rate_here = 0.0;
    if (chi_here > 0.0) rate_here = kRatePrefactor / eta * table.rate(chi_here, stats);
    double dphi = ctl.dphi_cap;
    if (rate_here > 0.0) dphi = std::min(dphi, ctl.p_step_target / rate_here);
    dphi = std::min(dphi, phi_end - phi);

    // midpoint evaluation; refine until the step probability meets the target
    double chi = 0.0, p_step = 0.0;
    for (int halvings = 0;; ++halvings) {
      chi = std::abs(grid.xi_at(phi + 0.5 * dphi)) * eta;
      p_step = (chi > 0.0) ? kRatePrefactor / eta * table.rate(chi, stats) * dphi : 0.0;
      if (p_step <= ctl.p_step_target) break;
      if (halvings >= 40)
        throw NumericalError("step-size violation: P_step could not be refined below target");
      dphi *= 0.5;
    }
    if (p_step > ctl.p_step_hard)
      throw NumericalError("step-size violation: P_step exceeded the hard limit");

    if (p_step > 0.0 && rng.uniform() < p_step) {
      const double u = table.sample_u(chi, rng.uniform(), stats);
      const double omega_gamma = 0.5 * u * state.p_minus_eV;
      photons.push_back({omega_gamma, phi + 0.5 * dphi, chi});
      state.p_minus_eV *= (1.0 - u);
      eta = eta_parameter(state.p_minus_eV, omega0);
    }
    phi += dphi;
  }
  state.phi = phi;
}

inline std::vector<PhotonRecord> simulate_electron(const FieldGrid& grid, const RateTable& table,
                                                   ElectronState state, RngStream& rng,
                                                   const StepControl& ctl = {}) {
  std::vector<PhotonRecord> photons;
  simulate_electron(grid, table, state, rng, ctl, photons);
  return photons;
}

struct BinSpec {
  double min_MeV = 0.0;
  double max_MeV = 4000.0;
  int n_bins = 160;
  bool log_bins = false;
};

struct SpectrumHist {
  std::vector<double> bin_edges;   // MeV, n_bins + 1 edges
  std::vector<double> dE_domega;   // per-electron differential emitted energy
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow_count = 0;
  std::uint64_t overflow_count = 0;   // photons above the last edge, never dropped
  double overflow_energy_MeV = 0.0;
  double underflow_energy_MeV = 0.0;
  double n_electrons = 0.0;

  double bin_center(std::size_t b) const { return 0.5 * (bin_edges[b] + bin_edges[b + 1]); }

  // energy integral of the histogram plus the explicit buckets
  double integral_MeV() const {
    double sum = 0.0;
    for (std::size_t b = 0; b < dE_domega.size(); ++b)
      sum += dE_domega[b] * (bin_edges[b + 1] - bin_edges[b]);
    return sum + (overflow_energy_MeV + underflow_energy_MeV) / n_electrons;
  }
};

inline SpectrumHist accumulate_spectrum(const std::vector<PhotonRecord>& photons,
                                        const BinSpec& spec, double n_electrons,
                                        double weight = 1.0) {
  if (spec.n_bins < 1) throw ValidationError("n_bins", "must be >= 1");
  if (!(spec.max_MeV > spec.min_MeV)) throw ValidationError("bin_max_MeV", "must exceed bin_min_MeV");
  if (spec.log_bins && !(spec.min_MeV > 0.0))
    throw ValidationError("bin_min_MeV", "log bins require a positive lower edge");
  if (!(n_electrons >= 1.0)) throw ValidationError("n_electrons", "must be >= 1");

  SpectrumHist h;
  h.n_electrons = n_electrons;
  h.bin_edges.resize(spec.n_bins + 1);
  for (int b = 0; b <= spec.n_bins; ++b) {
    const double t = static_cast<double>(b) / spec.n_bins;
    h.bin_edges[b] = spec.log_bins
                         ? spec.min_MeV * std::pow(spec.max_MeV / spec.min_MeV, t)
                         : spec.min_MeV + (spec.max_MeV - spec.min_MeV) * t;
  }
  h.dE_domega.assign(spec.n_bins, 0.0);
  h.counts.assign(spec.n_bins, 0);

  for (const auto& ph : photons) {
    const double e_MeV = ph.energy_eV * 1e-6;
    if (e_MeV < h.bin_edges.front()) {
      ++h.underflow_count;
      h.underflow_energy_MeV += e_MeV * weight;
      continue;
    }
    if (e_MeV >= h.bin_edges.back()) {
      ++h.overflow_count;
      h.overflow_energy_MeV += e_MeV * weight;
      continue;
    }
    const auto it = std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), e_MeV);
    const auto b = static_cast<std::size_t>(it - h.bin_edges.begin()) - 1;
    h.counts[b] += 1;
    h.dE_domega[b] += e_MeV * weight / (n_electrons * (h.bin_edges[b + 1] - h.bin_edges[b]));
  }
  return h;
}

struct RunSummary {
  double mean_emitted_energy_MeV = 0.0;
  double stderr_emitted_energy_MeV = 0.0;
  double mean_photon_count = 0.0;
  std::uint64_t pair_count = 0;
  double pulse_energy_J = 0.0;  // filled by the caller when spot/intensity are known
  std::uint64_t seed = 0;
  long n_electrons = 0;
  ClampStats clamp;
};

struct EnsembleOptions {
  std::uint64_t seed = 1;
  int workers = 1;
  BinSpec bins{};
  StepControl step{};
  bool breit_wheeler = true;
  bool keep_photons = false;
};

struct EnsembleResult {
  SpectrumHist spectrum;
  RunSummary summary;
  std::vector<PhotonRecord> photons;            // populated when keep_photons
  std::vector<double> per_electron_energy_MeV;  // emission total per electron
};

namespace detail {

// Pair-conversion probability bookkeeping for one photon: integrates the
// Breit-Wheeler rate over the remaining pulse.  suffix_max[i] bounds |xi| on
// [phi_i, end), so the march stops as soon as conversion becomes impossible.
inline double bw_optical_depth(const FieldGrid& grid, const BreitWheelerTable& bw,
                               const std::vector<double>& suffix_max, double eta_gamma,
                               double phi_start) {
  constexpr double kChiCut = 1.2e-2;
  const double dphi = 0.2;
  double depth = 0.0;
  double phi = std::max(phi_start, grid.phi_min);
  while (phi < grid.phi_max) {
    const auto i = static_cast<std::size_t>((phi - grid.phi_min) / grid.step);
    if (i >= suffix_max.size() || eta_gamma * suffix_max[i] < kChiCut) break;
    const double chi_g = eta_gamma * std::abs(grid.xi_at(phi + 0.5 * dphi));
    if (chi_g > kChiCut) depth += kRatePrefactor / eta_gamma * bw.rate(chi_g) * dphi;
    phi += dphi;
  }
  return depth;
}

}  // namespace detail

// Runs the full ensemble.  Bit-identical output for a fixed seed regardless
// of worker count: every electron draws from counter-based streams keyed by
// (seed, index, purpose) and reduction runs in fixed index order.
inline EnsembleResult run_ensemble(const FieldGrid& grid, const RateTable& table,
                                   const BeamParams& beam, const EnsembleOptions& opts,
                                   const BreitWheelerTable* bw = nullptr) {
  const auto n = static_cast<std::size_t>(beam.n_electrons);
  std::vector<std::vector<PhotonRecord>> photons(n);
  std::vector<double> e_rad(n, 0.0);
  std::vector<ClampStats> clamp(n);
  std::vector<std::uint64_t> pairs(n, 0);

  const BreitWheelerTable* bw_table = nullptr;
  std::vector<double> suffix_max;
  if (opts.breit_wheeler) {
    static const BreitWheelerTable shared_bw;
    bw_table = bw ? bw : &shared_bw;
    suffix_max.resize(grid.size());
    double running = 0.0;
    for (std::size_t i = grid.size(); i-- > 0;) {
      running = std::max(running, std::abs(grid.xi_values[i]));
      suffix_max[i] = running;
    }
  }

  auto process = [&](std::size_t i) {
    RngStream beam_rng(opts.seed, i, StreamPurpose::beam_sampling);
    const double eps = beam.mean_energy_eV + beam.sigma_energy_eV * beam_rng.truncated_normal(5.0);
    ElectronState st{2.0 * eps, grid.phi_min, 1.0};
    RngStream traj_rng(opts.seed, i, StreamPurpose::trajectory);
    simulate_electron(grid, table, st, traj_rng, opts.step, photons[i], &clamp[i]);
    double sum = 0.0;
    for (const auto& ph : photons[i]) sum += ph.energy_eV;
    e_rad[i] = sum;
    if (bw_table) {
      RngStream pair_rng(opts.seed, i, StreamPurpose::pair_decay);
      for (const auto& ph : photons[i]) {
        const double eta_g =
            grid.pulse.omega0_eV * (2.0 * ph.energy_eV) /
            (constants::m_e_eV * constants::m_e_eV);
        const double depth =
            detail::bw_optical_depth(grid, *bw_table, suffix_max, eta_g, ph.emission_phi);
        const double p_conv = -std::expm1(-depth);
        if (pair_rng.uniform() < p_conv) ++pairs[i];
      }
    }
  };

  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) process(i);
  } else {
    std::atomic<std::size_t> next_chunk{0};
    constexpr std::size_t kChunk = 64;
    auto worker = [&] {
      for (;;) {
        const std::size_t c = next_chunk.fetch_add(1);
        const std::size_t lo = c * kChunk;
        if (lo >= n) return;
        const std::size_t hi = std::min(lo + kChunk, n);
        for (std::size_t i = lo; i < hi; ++i) process(i);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // deterministic reduction in electron-index order
  EnsembleResult result;
  result.per_electron_energy_MeV.resize(n);
  std::vector<PhotonRecord> all;
  double total = 0.0;
  std::uint64_t n_photons = 0, pair_count = 0;
  ClampStats clamp_total;
  for (std::size_t i = 0; i < n; ++i) {
    result.per_electron_energy_MeV[i] = e_rad[i] * 1e-6;
    total += e_rad[i];
    n_photons += photons[i].size();
    pair_count += pairs[i];
    clamp_total.above += clamp[i].above;
    clamp_total.below += clamp[i].below;
  }
  all.reserve(n_photons);
  for (std::size_t i = 0; i < n; ++i)
    all.insert(all.end(), photons[i].begin(), photons[i].end());

  result.spectrum = accumulate_spectrum(all, opts.bins, static_cast<double>(n));
  auto& s = result.summary;
  s.mean_emitted_energy_MeV = total * 1e-6 / static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = result.per_electron_energy_MeV[i] - s.mean_emitted_energy_MeV;
    var += d * d;
  }
  s.stderr_emitted_energy_MeV =
      (n > 1) ? std::sqrt(var / (static_cast<double>(n) - 1.0) / static_cast<double>(n)) : 0.0;
  s.mean_photon_count = static_cast<double>(n_photons) / static_cast<double>(n);
  s.pair_count = pair_count;
  s.seed = opts.seed;
  s.n_electrons = static_cast<long>(n);
  s.clamp = clamp_total;
  if (opts.keep_photons) result.photons = std::move(all);
  return result;
}

}  // namespace fmc
