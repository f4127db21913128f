#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbm/partition.hpp"
#include "cbm/rational.hpp"

namespace cbm::jack {

// Weight limit for table construction; guards the exact linear algebra
// against accidental huge inputs. Default 12 (77 partitions).
unsigned k_max();
void set_k_max(unsigned k);

// C_lambda(alpha) = prod over cells (i,j) of lambda of
//   (alpha(lambda_i - j) + lambda'_j - i + 1) (alpha(lambda_i - j) + lambda'_j - i + alpha).
// Empty partition gives 1 (empty product). Requires alpha > 0.
Rat c_lambda(const Partition& lambda, const Rat& alpha);

// Exact power-sum expansion coefficients of the Jack polynomials of one
// weight k: theta[l][r] is the coefficient of p_{order[r]} in
// J_{order[l]}^(alpha), normalised so the coefficient of p_1^k is 1.
// order is enumerate_partitions(k); c_norm[l] is C_{order[l]}(alpha).
struct JackTable {
  unsigned weight = 0;
  Rat alpha;
  std::vector<Partition> order;
  std::vector<std::vector<Rat>> theta;
  std::vector<Rat> c_norm;

  std::size_t index_of(const Partition& p) const;  // throws when absent
  const Rat& theta_at(const Partition& lambda, const Partition& rho) const;
};

using JackTablePtr = std::shared_ptr<const JackTable>;

// Builds (or fetches) the complete table for weight k. Tables are memoised
// per (k, alpha) in-process; when a cache directory resolves they are also
// persisted as JSON and revalidated on load. CBM_CACHE_DIR overrides the
// location, which defaults to ${XDG_CACHE_HOME:-$HOME/.cache}/cbmoments;
// file-cache failures fall back to recomputation.
// Throws capacity_error for k > k_max(), std::domain_error for k < 1 or
// alpha <= 0.
JackTablePtr build_jack_table(unsigned k, const Rat& alpha);

// Single-entry lookup; |lambda| must equal |rho|.
Rat theta(const Partition& lambda, const Partition& rho, const Rat& alpha);

// Coefficient of J_lambda^(alpha) in p_rho:
//   Theta^lambda_rho = alpha^{l(rho)} z_rho theta^lambda_rho / C_lambda(alpha).
Rat big_theta(const Partition& lambda, const Partition& rho, const Rat& alpha);

struct TableDefect {
  // 'F' row orthogonality, 'M' dual orthogonality, 'N' normalisation,
  // 'C' norm-column mismatch or nonpositive entry.
  char relation = '?';
  Partition a, b;
  Rat lhs, rhs;
};

// Exact evaluation of both orthogonality identities over all pairs:
//   sum_rho z_rho alpha^{l(rho)} theta^lambda_rho theta^mu_rho = delta_{lambda mu} C_lambda
//   sum_lambda theta^lambda_rho theta^lambda_sigma / C_lambda = delta_{rho sigma} / (z_rho alpha^{l(rho)})
// Empty result means the table is consistent.
std::vector<TableDefect> verify_orthogonality(unsigned k, const Rat& alpha);

// Everything verify_orthogonality checks plus the structural invariants
// (theta_{(1^k)} column all ones, c_norm positive and equal to the cell
// product). Used to vet cache files before trusting them.
std::vector<TableDefect> check_table(const JackTable& table);

// Cache-file JSON document (also the `jack` CLI payload):
// {"k":..,"alpha":"p/q","order":[..],"theta":[[..]],"c":[..]}.
std::string table_to_json(const JackTable& table);

// Structural parse of the cache format; nullopt when malformed or when the
// declared order is not enumerate_partitions(k). Does not run check_table.
std::optional<JackTable> table_from_json(std::string_view text);

// Drops the in-process memo (cache files on disk are left alone).
void clear_cache();

namespace detail {

// Gram-Schmidt over the monomial basis in p-coordinates. processing_order
// must be a permutation of indices into enumerate_partitions(k) listing
// partitions in some linear extension of ascending dominance; the result
// is independent of which extension is chosen, and tests rely on this
// entry point to confirm that.
JackTable build_via_gram_schmidt(unsigned k, const Rat& alpha,
                                 std::span<const std::size_t> processing_order);

// Ascending dominance-compatible order used by build_jack_table: the
// reverse of the enumeration order.
std::vector<std::size_t> default_processing_order(unsigned k);

}  // namespace detail

}  // namespace cbm::jack
