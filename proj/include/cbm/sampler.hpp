#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbm/partition.hpp"

namespace cbm::sampler {

// Random-walk Metropolis chain configuration. A sweep is n single-site
// updates at uniformly chosen sites; steps and burn_in count sweeps.
struct ChainConfig {
  unsigned n = 1;
  double beta = 2.0;
  std::uint64_t steps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
  double proposal_scale = 1.0;  // radians, in (0, pi]
  std::uint64_t seed = 0;

  // Defaults adequate at desk scale: proposal 0.8*(2*pi/n) clamped to pi,
  // burn-in 10^4 * n sweeps, thinning n.
  static ChainConfig with_defaults(unsigned n, double beta, std::uint64_t seed,
                                   std::uint64_t steps);

  void validate() const;  // throws std::invalid_argument
};

struct SampleBatch {
  ChainConfig config;
  std::vector<std::vector<double>> draws;  // angles in [0, 2*pi)
  double acceptance_rate = 0.0;            // over all proposals, burn-in included
};

// beta * sum_{j<k} log |sin((theta_j - theta_k)/2)|; -inf at coincident
// angles (the density vanishes there).
double log_density_unnormalized(std::span<const double> theta, double beta);

// Deterministic given config.seed; keeps every thin-th sweep after burn-in,
// so draws.size() == (steps - burn_in) / thin.
SampleBatch run_chain(const ChainConfig& config);

// p_mu(Z) = prod over parts r of mu of sum_j exp(i r theta_j); empty mu
// gives 1.
std::complex<double> power_sum_eval(std::span<const double> theta, const Partition& mu);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // batch-means standard error
  double imag_mean = 0.0;  // diagnostic; the exact value is real
};

// Sample mean of Re[p_mu(Z) conj(p_nu(Z))] with autocorrelation-aware
// (batch-means) standard error. Throws on an empty batch.
Estimate estimate_moment(const SampleBatch& batch, const Partition& mu, const Partition& nu);

// Plug-in estimate of I(m, n) = (E|p_m|^2 - n) / (n (n - 1)); needs n >= 2.
Estimate estimate_i(const SampleBatch& batch, unsigned m);

// One CSV row per draw, 17 significant digits; writes a JSON metadata
// sidecar at path + ".meta.json" with the full config.
void save_batch_csv(const SampleBatch& batch, const std::string& path);

}  // namespace cbm::sampler
