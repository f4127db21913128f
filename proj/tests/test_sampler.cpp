#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cbm/moments.hpp"
#include "cbm/rng.hpp"
#include "cbm/sampler.hpp"

namespace fs = std::filesystem;
using namespace cbm;
using namespace cbm::sampler;

namespace {

constexpr double kPi = std::numbers::pi;

SampleBatch short_chain(unsigned n, double beta, std::uint64_t seed, std::uint64_t sweeps) {
  auto cfg = ChainConfig::with_defaults(n, beta, seed, sweeps);
  cfg.burn_in = std::min<std::uint64_t>(cfg.burn_in, sweeps / 4);
  return run_chain(cfg);
}

}  // namespace

TEST_CASE("log density: pinned values") {
  double t1[] = {0.0, kPi};
  CHECK(log_density_unnormalized(t1, 2.0) == doctest::Approx(0.0));
  double t2[] = {0.0, 0.0};
  CHECK(log_density_unnormalized(t2, 1.0) == -std::numeric_limits<double>::infinity());
  double t3[] = {0.0, 2 * kPi / 3, 4 * kPi / 3};
  CHECK(log_density_unnormalized(t3, 1.0) ==
        doctest::Approx(3.0 * std::log(std::sqrt(3.0) / 2.0)).epsilon(1e-12));
}

TEST_CASE("chain config validation") {
  auto cfg = ChainConfig::with_defaults(3, 1.0, 7, 100000);
  CHECK(cfg.burn_in == 30000);
  CHECK(cfg.thin == 3);
  CHECK(cfg.proposal_scale == doctest::Approx(0.8 * 2 * kPi / 3));
  CHECK(ChainConfig::with_defaults(1, 1.0, 7, 100000).proposal_scale == doctest::Approx(kPi));

  ChainConfig bad = cfg;
  bad.steps = bad.burn_in;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.thin = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.proposal_scale = 4.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(bad), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces the batch exactly") {
  auto a = short_chain(3, 1.0, 42, 4000);
  auto b = short_chain(3, 1.0, 42, 4000);
  CHECK(a.draws == b.draws);  // bitwise
  CHECK(a.acceptance_rate == b.acceptance_rate);
  auto c = short_chain(3, 1.0, 43, 4000);
  CHECK(a.draws != c.draws);
}

TEST_CASE("draw bookkeeping: count, range, acceptance") {
  ChainConfig cfg;
  cfg.n = 2;
  cfg.beta = 2.0;
  cfg.steps = 5000;
  cfg.burn_in = 1000;
  cfg.thin = 4;
  cfg.proposal_scale = 2.0;
  cfg.seed = 9;
  auto batch = run_chain(cfg);
  CHECK(batch.draws.size() == (5000 - 1000) / 4);
  for (const auto& draw : batch.draws) {
    REQUIRE(draw.size() == 2);
    for (double t : draw) {
      CHECK(t >= 0.0);
      CHECK(t < 2 * kPi);
    }
  }
  CHECK(batch.acceptance_rate > 0.0);
  CHECK(batch.acceptance_rate < 1.0);
}

TEST_CASE("power sums: pinned values") {
  double t[] = {0.0, kPi};
  CHECK(power_sum_eval(t, Partition{1}).real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(power_sum_eval(t, Partition{2}).real() == doctest::Approx(2.0));
  double u[] = {0.0, kPi / 2};
  auto w = power_sum_eval(u, Partition{1, 1});
  CHECK(w.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w.imag() == doctest::Approx(2.0));
  double v[] = {0.3, 5.1};
  CHECK(power_sum_eval(v, Partition{}) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("observables are exactly exchangeable and rotation-invariant to 1e-12") {
  auto batch = short_chain(3, 2.0, 11, 2000);
  const Partition two{2}, one_one{1, 1};
  SplitMix64 rng(5);
  for (std::size_t i = 0; i < std::min<std::size_t>(batch.draws.size(), 100); ++i) {
    const auto& draw = batch.draws[i];
    std::vector<double> permuted(draw.rbegin(), draw.rend());
    CHECK(power_sum_eval(draw, two) == power_sum_eval(permuted, two));
    CHECK(power_sum_eval(draw, one_one) == power_sum_eval(permuted, one_one));

    double b = rng.uniform01() * 2 * kPi;
    std::vector<double> rotated = draw;
    for (double& t : rotated) t = std::fmod(t + b, 2 * kPi);
    auto w0 = power_sum_eval(draw, two) * std::conj(power_sum_eval(draw, one_one));
    auto w1 = power_sum_eval(rotated, two) * std::conj(power_sum_eval(rotated, one_one));
    CHECK(std::abs(w0 - w1) <= 1e-12 * (1.0 + std::abs(w0)));
  }
}

TEST_CASE("n=1 marginal is uniform (Kolmogorov-Smirnov at the 1% level)") {
  ChainConfig cfg = ChainConfig::with_defaults(1, 2.0, 31, 110000);
  auto batch = run_chain(cfg);
  REQUIRE(batch.draws.size() == 100000);
  std::vector<double> u;
  u.reserve(batch.draws.size());
  for (const auto& d : batch.draws) u.push_back(d[0] / (2 * kPi));
  std::sort(u.begin(), u.end());
  double dmax = 0.0;
  const double inv = 1.0 / double(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    dmax = std::max(dmax, (double(i) + 1) * inv - u[i]);
    dmax = std::max(dmax, u[i] - double(i) * inv);
  }
  // 1% critical value 1.628 / sqrt(N)
  CHECK(dmax < 1.628 / std::sqrt(double(u.size())));
}

TEST_CASE("beta -> 0 looks like iid uniform angles") {
  auto batch = short_chain(3, 1e-6, 17, 30000);
  // At beta = 0 the pairwise angle gaps are uniform, so I(1, n) = 0.
  auto est = estimate_i(batch, 1);
  CHECK(std::fabs(est.mean) <= 3.0 * est.std_error);
}

TEST_CASE("estimates agree with exact values on a small grid") {
  const Partition one{1}, two{2}, one_one{1, 1};
  struct Case {
    double beta;
    const char* beta_str;
    unsigned n;
  };
  for (const Case& c : {Case{1.0, "1", 2}, Case{2.0, "2", 3}, Case{4.0, "4", 2}}) {
    auto batch = short_chain(c.n, c.beta, 101, 60000);
    auto p = moments::EnsembleParams::from_beta(c.n, rat_from_string(c.beta_str));
    auto e1 = estimate_moment(batch, one, one);
    CHECK(std::fabs(e1.mean - rat_to_double(moments::exact_moment(one, one, p))) <=
          5.0 * e1.std_error);
    CHECK(std::fabs(e1.imag_mean) <= 1e-12);  // |p_1|^2 is real pointwise
    auto e2 = estimate_moment(batch, two, one_one);
    CHECK(std::fabs(e2.mean - rat_to_double(moments::exact_moment(two, one_one, p))) <=
          5.0 * e2.std_error);
  }
}

TEST_CASE("agreement grid: >= 95% of cells within 4 standard errors") {
  const Partition observables[] = {Partition{1}, Partition{2}, Partition{1, 1}};
  unsigned cells = 0, within = 0;
  for (double beta : {1.0, 2.0, 4.0}) {
    const char* beta_str = beta == 1.0 ? "1" : beta == 2.0 ? "2" : "4";
    for (unsigned n : {2u, 3u, 4u}) {
      auto p = moments::EnsembleParams::from_beta(n, rat_from_string(beta_str));
      for (std::uint64_t seed : {501ull, 502ull}) {
        auto batch = run_chain(ChainConfig::with_defaults(n, beta, seed, 100000));
        for (const Partition& mu : observables)
          for (const Partition& nu : observables) {
            double exact = rat_to_double(moments::exact_moment(mu, nu, p));
            auto est = estimate_moment(batch, mu, nu);
            ++cells;
            if (std::fabs(est.mean - exact) <= 4.0 * est.std_error) ++within;
          }
      }
    }
  }
  CHECK(cells == 162);
  CHECK(within * 100 >= cells * 95);
}

TEST_CASE("estimate_i matches i_of") {
  auto batch = short_chain(3, 2.0, 202, 60000);
  auto est = estimate_i(batch, 1);
  double want = rat_to_double(moments::i_of(1, moments::EnsembleParams::from_beta(3, Rat(2))));
  CHECK(want == doctest::Approx(-1.0 / 3));
  CHECK(std::fabs(est.mean - want) <= 5.0 * est.std_error);
  auto single = short_chain(1, 2.0, 7, 2000);
  CHECK_THROWS_AS(estimate_i(single, 1), std::domain_error);
}

TEST_CASE("estimated I decays in m") {
  auto batch = short_chain(2, 1.0, 808, 60000);
  auto low = estimate_i(batch, 5);
  auto high = estimate_i(batch, 40);
  CHECK(std::fabs(high.mean) <= std::fabs(low.mean) + 4.0 * high.std_error);
}

TEST_CASE("weight-mismatched observables average to zero") {
  auto batch = short_chain(3, 1.0, 909, 60000);
  auto est = estimate_moment(batch, Partition{1}, Partition{2});
  CHECK(std::fabs(est.mean) <= 4.0 * est.std_error);
}

TEST_CASE("estimate_moment rejects an empty batch") {
  SampleBatch empty;
  empty.config = ChainConfig::with_defaults(2, 1.0, 1, 100);
  CHECK_THROWS_AS(estimate_moment(empty, Partition{1}, Partition{1}), std::invalid_argument);
}

TEST_CASE("batch dump: row shape, 17-digit round trip, metadata sidecar") {
  auto batch = short_chain(2, 2.0, 55, 800);
  fs::path path = fs::temp_directory_path() / "cbm-batch-dump.csv";
  save_batch_csv(batch, path.string());

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string fieldtext;
    std::size_t fields = 0;
    while (std::getline(row, fieldtext, ',')) {
      double parsed = std::strtod(fieldtext.c_str(), nullptr);
      CHECK(parsed == batch.draws[rows][fields]);  // %.17g round trips exactly
      ++fields;
    }
    CHECK(fields == 2);
    ++rows;
  }
  CHECK(rows == batch.draws.size());

  std::ifstream meta(path.string() + ".meta.json");
  REQUIRE(meta.good());
  std::stringstream buf;
  buf << meta.rdbuf();
  for (const char* key : {"\"n\"", "\"beta\"", "\"steps\"", "\"burn_in\"", "\"thin\"",
                          "\"proposal_scale\"", "\"seed\"", "\"acceptance_rate\""})
    CHECK(buf.str().find(key) != std::string::npos);
  fs::remove(path);
  fs::remove(path.string() + ".meta.json");
}
