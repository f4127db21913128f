#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbm/moments.hpp"
#include "cbm/partition.hpp"
#include "cbm/rational.hpp"

namespace cbm::verify {

struct SuiteResult {
  std::string name;
  unsigned passed = 0;
  unsigned failed = 0;
  std::vector<std::string> failures;  // first few offending cases, serialized

  bool ok() const { return failed == 0; }
  void tally(bool good, const std::string& description);
};

struct RandomCase {
  Partition mu, nu;
  unsigned n = 1;
  Rat alpha;
};

// Deterministic case stream shared by the sandwich and corollary suites.
// Weights are drawn in [1, weight_max]; n in [n_lo_factor*K, +20].
std::vector<RandomCase> random_cases(std::uint64_t seed, unsigned count, unsigned weight_max,
                                     bool n_at_least_2k);

// Exact orthogonality of every table with k <= kmax over the standard
// alpha panel {1/2, 1, 2, 5/3, 7}.
SuiteResult orthogonality_suite(unsigned kmax);

// beta = 2 recovery: delta_{mu nu} z_mu for all pairs with weights up to
// weight_max, plus min(m, n) for single rows m <= m_max, n in [2, m_max].
SuiteResult diaconis_evans_suite(unsigned weight_max = 6, unsigned m_max = 12);

// A <= gamma <= normalized <= Gamma <= B on `count` random diagonal cases.
SuiteResult sandwich_suite(std::uint64_t seed, unsigned count = 200);

// |normalized - 1| <= 6|1-alpha|K/n and the off-diagonal variant on random
// cases with n >= 2K.
SuiteResult corollary_suite(std::uint64_t seed, unsigned count = 200);

// Three-way second-moment identity for n in [n_lo, n_hi].
SuiteResult appendix_suite(unsigned n_lo = 2, unsigned n_hi = 50);

// Runs the named suite ("all" runs every one); throws std::invalid_argument
// for an unknown name.
std::vector<SuiteResult> run_suites(const std::string& name, unsigned kmax, std::uint64_t seed);

}  // namespace cbm::verify
