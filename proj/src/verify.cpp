#include "cbm/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "cbm/jack.hpp"
#include "cbm/rng.hpp"

namespace cbm::verify {

namespace {

constexpr unsigned kMaxStoredFailures = 12;

std::string describe(const RandomCase& c) {
  return "mu=(" + c.mu.to_string() + ") nu=(" + c.nu.to_string() + ") n=" +
         std::to_string(c.n) + " alpha=" + rat_to_string(c.alpha);
}

Partition random_partition(SplitMix64& rng, unsigned weight_max) {
  unsigned k = 1 + unsigned(rng.below(weight_max));
  auto parts = enumerate_partitions(k);
  return parts[rng.below(parts.size())];
}

}  // namespace

void SuiteResult::tally(bool good, const std::string& description) {
  if (good) {
    ++passed;
  } else {
    ++failed;
    if (failures.size() < kMaxStoredFailures) failures.push_back(description);
  }
}

std::vector<RandomCase> random_cases(std::uint64_t seed, unsigned count, unsigned weight_max,
                                     bool n_at_least_2k) {
  SplitMix64 rng(seed);
  std::vector<RandomCase> cases;
  cases.reserve(count);
  while (cases.size() < count) {
    RandomCase c;
    c.mu = random_partition(rng, weight_max);
    c.nu = random_partition(rng, weight_max);
    unsigned K = std::max(c.mu.weight(), c.nu.weight());
    unsigned n_lo = n_at_least_2k ? 2 * K : K;
    c.n = n_lo + unsigned(rng.below(21));
    c.alpha = make_rat(1 + long(rng.below(8)), 1 + long(rng.below(8)));
    cases.push_back(std::move(c));
  }
  return cases;
}

SuiteResult orthogonality_suite(unsigned kmax) {
  SuiteResult result;
  result.name = "orthogonality";
  const Rat alphas[] = {make_rat(1, 2), Rat(1), Rat(2), make_rat(5, 3), Rat(7)};
  for (unsigned k = 1; k <= kmax; ++k) {
    for (const Rat& alpha : alphas) {
      auto defects = jack::verify_orthogonality(k, alpha);
      result.tally(defects.empty(), "orthogonality defect k=" + std::to_string(k) +
                                        " alpha=" + rat_to_string(alpha) + " (" +
                                        std::to_string(defects.size()) + " entries)");
    }
  }
  return result;
}

SuiteResult diaconis_evans_suite(unsigned weight_max, unsigned m_max) {
  SuiteResult result;
  result.name = "diaconis-evans";
  std::vector<Partition> pool;
  for (unsigned k = 0; k <= weight_max; ++k)
    for (const Partition& p : enumerate_partitions(k)) pool.push_back(p);

  for (const Partition& mu : pool) {
    for (const Partition& nu : pool) {
      unsigned K = std::max({1u, mu.weight(), nu.weight()});
      for (unsigned n : {K, K + 1, K + 3, m_max}) {
        if (n < std::max(mu.weight(), nu.weight())) continue;
        auto p = moments::EnsembleParams::from_beta(n, Rat(2));
        Rat got = moments::exact_moment(mu, nu, p);
        Rat want = (mu == nu) ? Rat(z_of(mu)) : Rat(0);
        result.tally(got == want, "mu=(" + mu.to_string() + ") nu=(" + nu.to_string() +
                                      ") n=" + std::to_string(n) + ": " + rat_to_string(got) +
                                      " != " + rat_to_string(want));
      }
    }
  }
  for (unsigned m = 1; m <= m_max; ++m) {
    for (unsigned n = 2; n <= m_max; ++n) {
      auto p = moments::EnsembleParams::from_beta(n, Rat(2));
      Rat got = moments::exact_moment(Partition{m}, Partition{m}, p);
      Rat want(long(std::min(m, n)));
      result.tally(got == want, "single row m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                    ": " + rat_to_string(got) + " != " + rat_to_string(want));
    }
  }
  return result;
}

SuiteResult sandwich_suite(std::uint64_t seed, unsigned count) {
  SuiteResult result;
  result.name = "sandwich";
  for (const RandomCase& c : random_cases(seed, count, 6, /*n_at_least_2k=*/false)) {
    auto p = moments::EnsembleParams::from_alpha(c.n, c.alpha);
    auto report = moments::sandwich_check(c.mu, p);
    bool chain = report.bounds.A && report.bounds.B && report.bounds.Gamma &&
                 report.bounds.gamma && report.normalized &&
                 *report.bounds.A <= *report.bounds.gamma &&
                 *report.bounds.gamma <= *report.normalized &&
                 *report.normalized <= *report.bounds.Gamma &&
                 *report.bounds.Gamma <= *report.bounds.B;
    result.tally(chain, "sandwich violated: " + describe({c.mu, c.mu, c.n, c.alpha}));
    if (c.nu != c.mu && c.n >= std::max(c.mu.weight(), c.nu.weight())) {
      auto cross = moments::cross_moment_bound_check(c.mu, c.nu, p);
      result.tally(cross.holds, "cross bound violated: " + describe(c));
    }
  }
  return result;
}

SuiteResult corollary_suite(std::uint64_t seed, unsigned count) {
  SuiteResult result;
  result.name = "corollary";
  for (const RandomCase& c : random_cases(seed, count, 6, /*n_at_least_2k=*/true)) {
    auto p = moments::EnsembleParams::from_alpha(c.n, c.alpha);
    Rat bound_mu = moments::corollary_bound(c.mu.weight(), p);
    auto report = moments::sandwich_check(c.mu, p);
    bool diag = report.normalized && abs(*report.normalized - 1) <= bound_mu;
    result.tally(diag, "corollary (a) violated: " + describe({c.mu, c.mu, c.n, c.alpha}));
    if (c.nu != c.mu) {
      unsigned K = std::max(c.mu.weight(), c.nu.weight());
      Rat bound = moments::corollary_bound(K, p);
      Rat value = moments::exact_moment(c.mu, c.nu, p);
      Rat rhs_sq = bound * bound * rat_pow(c.alpha, c.mu.length() + c.nu.length()) *
                   Rat(z_of(c.mu)) * Rat(z_of(c.nu));
      result.tally(value * value <= rhs_sq, "corollary (b) violated: " + describe(c));
    }
  }
  return result;
}

SuiteResult appendix_suite(unsigned n_lo, unsigned n_hi) {
  SuiteResult result;
  result.name = "appendix";
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    auto m = moments::coe_trace_second_moment(n);
    Rat want = make_rat(2 * mpz_class(n), mpz_class(n) + 1);
    bool good = m.consistent() && m.via_jack == want;
    result.tally(good, "coe identity broken at n=" + std::to_string(n) + ": " +
                           rat_to_string(m.via_dirichlet) + " / " +
                           rat_to_string(m.via_weingarten) + " / " +
                           rat_to_string(m.via_jack));
  }
  return result;
}

std::vector<SuiteResult> run_suites(const std::string& name, unsigned kmax, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  bool all = name == "all";
  bool known = false;
  if (all || name == "orthogonality") {
    out.push_back(orthogonality_suite(kmax));
    known = true;
  }
  if (all || name == "diaconis-evans") {
    out.push_back(diaconis_evans_suite());
    known = true;
  }
  if (all || name == "sandwich") {
    out.push_back(sandwich_suite(seed));
    known = true;
  }
  if (all || name == "corollary") {
    out.push_back(corollary_suite(seed));
    known = true;
  }
  if (all || name == "appendix") {
    out.push_back(appendix_suite());
    known = true;
  }
  if (!known) throw std::invalid_argument("unknown suite: " + name);
  return out;
}

}  // namespace cbm::verify
