#pragma once

#include <optional>
#include <vector>

#include "cbm/partition.hpp"
#include "cbm/rational.hpp"

namespace cbm::moments {

// Ensemble of n angles with repulsion exponent beta = 2/alpha. All exact
// computations are indexed by alpha.
struct EnsembleParams {
  unsigned n = 1;
  Rat alpha = Rat(1);

  static EnsembleParams from_alpha(unsigned n, const Rat& alpha);
  static EnsembleParams from_beta(unsigned n, const Rat& beta);
  Rat beta() const { return Rat(2) / alpha; }
};

// prod over cells (i,j) of lambda of (n + (j-1)alpha - (i-1)) / (n + j alpha - i).
// Requires l(lambda) <= n; empty partition gives 1.
Rat n_factor(const Partition& lambda, const EnsembleParams& p);

// E[p_mu(Z_n) conj(p_nu(Z_n))], exactly:
//   0 when |mu| != |nu|, 1 when both empty, otherwise
//   alpha^{l(mu)+l(nu)} z_mu z_nu sum over lambda of weight K with
//   l(lambda) <= n of theta^lambda_mu theta^lambda_nu N_lambda(n) / C_lambda.
// Throws capacity_error when the common weight exceeds jack::k_max().
Rat exact_moment(const Partition& mu, const Partition& nu, const EnsembleParams& p);

struct ABBounds {
  Rat A, B;  // A <= normalized second moment <= B whenever n >= K
};

// A = (1 - |alpha-1|/(n-K+alpha))^K for alpha >= 1 else 1;
// B = (1 + |alpha-1|/(n-K+alpha))^K for alpha < 1 else 1.
// Throws std::domain_error when n - K + alpha <= 0.
ABBounds ab_bounds(unsigned K, const EnsembleParams& p);

struct ExtremalNFactors {
  Rat Gamma;  // max of n_factor over lambda of weight K with l(lambda) <= n
  Rat gamma;  // min over the same set
};

ExtremalNFactors gamma_bounds(unsigned K, const EnsembleParams& p);

// 6 |1 - alpha| K / n; requires n >= 2K.
Rat corollary_bound(unsigned K, const EnsembleParams& p);

struct MomentBounds {
  std::optional<Rat> A, B;
  std::optional<Rat> Gamma, gamma;
  std::optional<Rat> corollary;  // present when n >= 2K
};

struct MomentReport {
  Partition mu, nu;
  EnsembleParams params;
  Rat value;
  std::optional<Rat> normalized;  // value / (alpha^{l(mu)} z_mu) when mu == nu
  MomentBounds bounds;

  // A <= gamma <= normalized <= Gamma <= B, with every absent piece
  // treated as vacuously fine.
  bool sandwich_holds() const;
};

// Total report builder used by the CLI: fills in whatever is computable.
MomentReport moment_report(const Partition& mu, const Partition& nu, const EnsembleParams& p);

// Diagonal report with the full sandwich; requires n >= |mu| >= 1.
MomentReport sandwich_check(const Partition& mu, const EnsembleParams& p);

struct CrossMomentCheck {
  Rat value;
  Rat lhs_sq;  // value^2
  Rat rhs_sq;  // max(|A-1|,|B-1|)^2 alpha^{l(mu)+l(nu)} z_mu z_nu
  bool holds;
};

// Off-diagonal bound, compared in squared form to stay rational.
// Requires mu != nu (std::invalid_argument) and n >= |mu| v |nu|.
CrossMomentCheck cross_moment_bound_check(const Partition& mu, const Partition& nu,
                                          const EnsembleParams& p);

// beta = 2 reference values: delta_{mu nu} z_mu when n >= |mu| v |nu|, and
// delta_{jk} min(j, n) for single-row mu = (j), nu = (k) at every n.
// nullopt outside both regimes.
std::optional<Rat> cue_expected(const Partition& mu, const Partition& nu, unsigned n);

struct ClosedForms {
  Rat p1_sq;    // E|p_1|^2
  Rat p1_quad;  // E|p_1|^4
  Rat p2_sq;    // E|p_2|^2
  Rat p2_p11;   // E[p_2 conj(p_1^2)]
};

// The four closed-form moments; requires n >= 2.
ClosedForms closed_forms(const EnsembleParams& p);

// I(m, n) = E[cos(m (theta_1 - theta_2))] = (E|p_m|^2 - n) / (n (n - 1)).
// Requires n >= 2 and m within capacity.
Rat i_of(unsigned m, const EnsembleParams& p);

struct TailRatePoint {
  unsigned m;
  Rat d;  // |E|p_m|^2 - n|
};

struct TailRateReport {
  std::vector<TailRatePoint> points;
  bool d_nonincreasing = false;  // across the requested range
  double exponent = 1.0;         // min(1, beta)
  double sup_weighted = 0.0;     // max of d_m * m^exponent
  unsigned sup_at = 0;
  // sup within twice the weighted value at the low end of the range.
  // Exact rational comparison when beta >= 1, double otherwise.
  bool weighted_bounded = false;
};

TailRateReport tail_rate_check(const EnsembleParams& p, unsigned m_lo, unsigned m_hi);

// E[xi_1^{a_1} ... ] for xi_i = X_i^2 / sum X_j^2 over n_vars iid standard
// normals: prod (2 a_i - 1)!! / prod_{i=1}^{A} (n_vars + 2i - 2), A = sum a_i.
Rat dirichlet_moment(const std::vector<unsigned>& a, unsigned n_vars);

struct CoeSecondMoment {
  Rat via_dirichlet;   // n^2 E|u_11|^4 from normalised chi-square moments
  Rat via_weingarten;  // 2 n^2 (Wg(id) + Wg(transposition))
  Rat via_jack;        // E|p_1|^2 at beta = 1
  bool consistent() const {
    return via_dirichlet == via_weingarten && via_weingarten == via_jack;
  }
};

// Three independent derivations of E|tr W_n|^2 = 2n/(n+1); requires n >= 2.
CoeSecondMoment coe_trace_second_moment(unsigned n);

struct LimitPoint {
  unsigned n;
  Rat value;
  Rat deviation;  // |value - target|
};

struct LimitRatePoint {
  unsigned n;
  Rat scaled;  // value * n^2
};

struct LimitReport {
  Rat target;  // delta_{mu nu} alpha^{l(mu)} z_mu
  std::vector<LimitPoint> points;
  bool deviations_nonincreasing = false;
  // Populated for {mu, nu} = {(2), (1,1)}: value * n^2 approaches
  // 2 alpha^2 (alpha - 1).
  std::optional<Rat> rate_target;
  std::vector<LimitRatePoint> rate_points;
};

LimitReport limit_check(const Partition& mu, const Partition& nu, const Rat& alpha,
                        const std::vector<unsigned>& n_schedule);

}  // namespace cbm::moments
