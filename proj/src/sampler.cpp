#include "cbm/sampler.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cbm/rng.hpp"

namespace cbm::sampler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0 ? x + kTwoPi : x;
}

}  // namespace

ChainConfig ChainConfig::with_defaults(unsigned n, double beta, std::uint64_t seed,
                                       std::uint64_t steps) {
  ChainConfig cfg;
  cfg.n = n;
  cfg.beta = beta;
  cfg.steps = steps;
  cfg.burn_in = 10000ull * n;
  cfg.thin = n;
  cfg.proposal_scale = std::min(0.8 * kTwoPi / std::max(1u, n), std::numbers::pi);
  cfg.seed = seed;
  return cfg;
}

void ChainConfig::validate() const {
  if (n < 1) throw std::invalid_argument("chain config: n must be at least 1");
  if (!(beta > 0)) throw std::invalid_argument("chain config: beta must be positive");
  if (steps <= burn_in) throw std::invalid_argument("chain config: steps must exceed burn_in");
  if (thin < 1) throw std::invalid_argument("chain config: thin must be at least 1");
  if (!(proposal_scale > 0) || proposal_scale > std::numbers::pi)
    throw std::invalid_argument("chain config: proposal_scale must lie in (0, pi]");
}

double log_density_unnormalized(std::span<const double> theta, double beta) {
  double sum = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j)
    for (std::size_t k = j + 1; k < theta.size(); ++k) {
      double s = std::sin((theta[j] - theta[k]) / 2.0);
      if (s == 0.0) return -std::numeric_limits<double>::infinity();
      sum += std::log(std::fabs(s));
    }
  return beta * sum;
}

SampleBatch run_chain(const ChainConfig& config) {
  config.validate();
  SplitMix64 rng(config.seed);
  const unsigned n = config.n;

  std::vector<double> theta(n);
  for (unsigned i = 0; i < n; ++i) theta[i] = kTwoPi * i / n;  // equispaced start

  std::uint64_t accepted = 0, proposed = 0;
  SampleBatch batch;
  batch.config = config;
  batch.draws.reserve((config.steps - config.burn_in) / config.thin);

  for (std::uint64_t sweep = 1; sweep <= config.steps; ++sweep) {
    for (unsigned rep = 0; rep < n; ++rep) {
      ++proposed;
      unsigned site = unsigned(rng.below(n));
      double offset = (2.0 * rng.uniform01() - 1.0) * config.proposal_scale;
      double proposal = wrap_angle(theta[site] + offset);
      double delta = 0.0;
      bool reject = false;
      for (unsigned k = 0; k < n; ++k) {
        if (k == site) continue;
        double s_new = std::sin((proposal - theta[k]) / 2.0);
        if (s_new == 0.0) {
          reject = true;  // density vanishes at coincident angles
          break;
        }
        double s_old = std::sin((theta[site] - theta[k]) / 2.0);
        delta += std::log(std::fabs(s_new)) - std::log(std::fabs(s_old));
      }
      if (reject) continue;
      delta *= config.beta;
      if (delta >= 0 || rng.uniform01() < std::exp(delta)) {
        theta[site] = proposal;
        ++accepted;
      }
    }
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thin == 0)
      batch.draws.push_back(theta);
  }
  batch.acceptance_rate = double(accepted) / double(proposed);
  return batch;
}

std::complex<double> power_sum_eval(std::span<const double> theta, const Partition& mu) {
  // Summing in sorted order makes the value exactly invariant under
  // permutations of the coordinates, not just up to rounding.
  std::vector<double> sorted(theta.begin(), theta.end());
  std::sort(sorted.begin(), sorted.end());
  std::complex<double> prod(1.0, 0.0);
  for (unsigned r : mu.parts()) {
    std::complex<double> trace(0.0, 0.0);
    for (double t : sorted) trace += std::complex<double>(std::cos(r * t), std::sin(r * t));
    prod *= trace;
  }
  return prod;
}

namespace {

double batch_means_std_error(const std::vector<double>& x) {
  const std::size_t count = x.size();
  if (count < 4) return std::numeric_limits<double>::infinity();
  std::size_t batches = std::size_t(std::sqrt(double(count)));
  if (batches < 2) batches = 2;
  std::size_t len = count / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += x[b * len + i];
    means[b] = s / double(len);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= double(batches);
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= double(batches - 1);
  return std::sqrt(var / double(batches));
}

}  // namespace

Estimate estimate_moment(const SampleBatch& batch, const Partition& mu, const Partition& nu) {
  if (batch.draws.empty()) throw std::invalid_argument("empty sample batch");
  std::vector<double> re, im;
  re.reserve(batch.draws.size());
  im.reserve(batch.draws.size());
  for (const auto& draw : batch.draws) {
    std::complex<double> w = power_sum_eval(draw, mu) * std::conj(power_sum_eval(draw, nu));
    re.push_back(w.real());
    im.push_back(w.imag());
  }
  Estimate out;
  for (double v : re) out.mean += v;
  out.mean /= double(re.size());
  for (double v : im) out.imag_mean += v;
  out.imag_mean /= double(im.size());
  out.std_error = batch_means_std_error(re);
  return out;
}

Estimate estimate_i(const SampleBatch& batch, unsigned m) {
  const unsigned n = batch.config.n;
  if (n < 2) throw std::domain_error("estimate_i requires n >= 2");
  Estimate sq = estimate_moment(batch, Partition{m}, Partition{m});
  double scale = double(n) * double(n - 1);
  return {(sq.mean - double(n)) / scale, sq.std_error / scale, sq.imag_mean / scale};
}

void save_batch_csv(const SampleBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[32];
  for (const auto& draw : batch.draws) {
    for (std::size_t i = 0; i < draw.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", draw[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
  nlohmann::ordered_json meta;
  meta["n"] = batch.config.n;
  meta["beta"] = batch.config.beta;
  meta["steps"] = batch.config.steps;
  meta["burn_in"] = batch.config.burn_in;
  meta["thin"] = batch.config.thin;
  meta["proposal_scale"] = batch.config.proposal_scale;
  meta["seed"] = batch.config.seed;
  meta["acceptance_rate"] = batch.acceptance_rate;
  meta["draws"] = batch.draws.size();
  std::ofstream side(path + ".meta.json");
  if (!side) throw std::runtime_error("cannot open " + path + ".meta.json");
  side << meta.dump(2) << '\n';
}

}  // namespace cbm::sampler
