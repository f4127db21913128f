#pragma once

#include <gmpxx.h>

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cbm {

// 1-based coordinates of a Young-diagram cell: row i, column j with
// 1 <= i <= l(lambda) and 1 <= j <= lambda_i.
struct Cell {
  unsigned row = 0;
  unsigned col = 0;
};

// Integer partition: finite nonincreasing sequence of positive parts.
// The empty partition is a regular value with weight 0 and length 0.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<unsigned> parts);  // validates shape
  Partition(std::initializer_list<unsigned> parts);

  // "4,2,1" -> (4,2,1); "" -> empty partition.
  static Partition parse(std::string_view text);

  const std::vector<unsigned>& parts() const { return parts_; }
  unsigned length() const { return static_cast<unsigned>(parts_.size()); }
  unsigned weight() const;
  unsigned part(unsigned i) const;  // 1-based; 0 past the end
  unsigned multiplicity(unsigned value) const;
  bool empty() const { return parts_.empty(); }

  Partition conjugate() const;
  std::vector<Cell> cells() const;  // row-major
  std::string to_string() const;    // inverse of parse

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;  // lexicographic
  }

 private:
  std::vector<unsigned> parts_;
};

// Mutual dominance position of two partitions of equal weight.
// less: mu is dominated by nu (every prefix sum of mu <= that of nu).
enum class Dominance { equal, less, greater, incomparable };

// Throws std::invalid_argument when the weights differ.
Dominance compare_dominance(const Partition& mu, const Partition& nu);

// mu dominated by (or equal to) nu.
bool dominance_leq(const Partition& mu, const Partition& nu);

// All partitions of k, each exactly once, in descending lexicographic
// order: (k) first, (1^k) last. The order refines dominance downward,
// so a partition is always listed before everything it dominates.
// k = 0 yields the single empty partition.
std::vector<Partition> enumerate_partitions(unsigned k);

// z_lambda = prod_i i^{m_i(lambda)} m_i(lambda)!, the centralizer size of
// a permutation of cycle type lambda. Empty partition gives 1.
mpz_class z_of(const Partition& lambda);

}  // namespace cbm
