#include "cbm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbm/errors.hpp"
#include "cbm/jack.hpp"

namespace cbm::moments {

EnsembleParams EnsembleParams::from_alpha(unsigned n, const Rat& alpha) {
  if (n < 1) throw std::domain_error("matrix size must be at least 1");
  if (alpha <= 0) throw std::domain_error("alpha must be positive");
  return {n, alpha};
}

EnsembleParams EnsembleParams::from_beta(unsigned n, const Rat& beta) {
  if (beta <= 0) throw std::domain_error("beta must be positive");
  return from_alpha(n, Rat(2) / beta);
}

Rat n_factor(const Partition& lambda, const EnsembleParams& p) {
  if (lambda.length() > p.n)
    throw std::domain_error("n_factor requires l(lambda) <= n");
  Rat prod(1);
  for (const Cell& c : lambda.cells()) {
    Rat num = Rat(long(p.n) - long(c.row) + 1) + p.alpha * long(c.col - 1);
    Rat den = Rat(long(p.n) - long(c.row)) + p.alpha * long(c.col);
    prod *= num / den;
  }
  return prod;
}

Rat exact_moment(const Partition& mu, const Partition& nu, const EnsembleParams& p) {
  const unsigned K = mu.weight();
  if (K != nu.weight()) return Rat(0);
  if (K == 0) return Rat(1);
  auto table = jack::build_jack_table(K, p.alpha);
  std::size_t imu = table->index_of(mu);
  std::size_t inu = table->index_of(nu);
  Rat sum(0);
  for (std::size_t l = 0; l < table->order.size(); ++l) {
    if (table->order[l].length() > p.n) continue;
    const Rat& tm = table->theta[l][imu];
    const Rat& tn = table->theta[l][inu];
    if (tm == 0 || tn == 0) continue;
    sum += tm * tn / table->c_norm[l] * n_factor(table->order[l], p);
  }
  return rat_pow(p.alpha, mu.length() + nu.length()) * Rat(z_of(mu)) * Rat(z_of(nu)) * sum;
}

ABBounds ab_bounds(unsigned K, const EnsembleParams& p) {
  if (K < 1) throw std::domain_error("ab_bounds requires K >= 1");
  Rat margin = Rat(long(p.n)) - long(K) + p.alpha;
  if (margin <= 0) throw std::domain_error("ab_bounds requires n - K + alpha > 0");
  Rat t = abs(p.alpha - 1) / margin;
  ABBounds out{Rat(1), Rat(1)};
  if (p.alpha >= 1)
    out.A = rat_pow(1 - t, K);
  else
    out.B = rat_pow(1 + t, K);
  return out;
}

ExtremalNFactors gamma_bounds(unsigned K, const EnsembleParams& p) {
  if (K < 1) throw std::domain_error("gamma_bounds requires K >= 1");
  if (K > jack::k_max())
    throw capacity_error("capacity: weight " + std::to_string(K) + " exceeds K_max");
  bool first = true;
  ExtremalNFactors out;
  for (const Partition& lambda : enumerate_partitions(K)) {
    if (lambda.length() > p.n) continue;
    Rat v = n_factor(lambda, p);
    if (first) {
      out.Gamma = out.gamma = v;
      first = false;
    } else {
      if (v > out.Gamma) out.Gamma = v;
      if (v < out.gamma) out.gamma = v;
    }
  }
  return out;
}

Rat corollary_bound(unsigned K, const EnsembleParams& p) {
  if (K < 1) throw std::domain_error("corollary_bound requires K >= 1");
  if (p.n < 2 * K) throw std::domain_error("corollary_bound requires n >= 2K");
  return Rat(6) * abs(1 - p.alpha) * long(K) / long(p.n);
}

bool MomentReport::sandwich_holds() const {
  if (!normalized) return true;
  if (bounds.A && bounds.gamma && *bounds.A > *bounds.gamma) return false;
  if (bounds.gamma && *bounds.gamma > *normalized) return false;
  if (bounds.Gamma && *normalized > *bounds.Gamma) return false;
  if (bounds.Gamma && bounds.B && *bounds.Gamma > *bounds.B) return false;
  return true;
}

MomentReport moment_report(const Partition& mu, const Partition& nu, const EnsembleParams& p) {
  MomentReport r;
  r.mu = mu;
  r.nu = nu;
  r.params = p;
  r.value = exact_moment(mu, nu, p);
  if (mu == nu)
    r.normalized = r.value / (rat_pow(p.alpha, mu.length()) * Rat(z_of(mu)));
  unsigned K = std::max(mu.weight(), nu.weight());
  if (K >= 1) {
    Rat margin = Rat(long(p.n)) - long(K) + p.alpha;
    if (margin > 0) {
      ABBounds ab = ab_bounds(K, p);
      r.bounds.A = ab.A;
      r.bounds.B = ab.B;
    }
    if (K <= jack::k_max()) {
      ExtremalNFactors ex = gamma_bounds(K, p);
      r.bounds.Gamma = ex.Gamma;
      r.bounds.gamma = ex.gamma;
    }
    if (p.n >= 2 * K) r.bounds.corollary = corollary_bound(K, p);
  }
  return r;
}

MomentReport sandwich_check(const Partition& mu, const EnsembleParams& p) {
  if (mu.weight() < 1 || p.n < mu.weight())
    throw std::domain_error("sandwich_check requires n >= |mu| >= 1");
  return moment_report(mu, mu, p);
}

CrossMomentCheck cross_moment_bound_check(const Partition& mu, const Partition& nu,
                                          const EnsembleParams& p) {
  if (mu == nu) throw std::invalid_argument("cross_moment_bound_check requires mu != nu");
  unsigned K = std::max(mu.weight(), nu.weight());
  if (p.n < K) throw std::domain_error("cross_moment_bound_check requires n >= |mu| v |nu|");
  CrossMomentCheck out;
  out.value = exact_moment(mu, nu, p);
  out.lhs_sq = out.value * out.value;
  ABBounds ab = ab_bounds(K, p);
  Rat dev = std::max(abs(ab.A - 1), abs(ab.B - 1));
  out.rhs_sq = dev * dev * rat_pow(p.alpha, mu.length() + nu.length()) * Rat(z_of(mu)) *
               Rat(z_of(nu));
  out.holds = out.lhs_sq <= out.rhs_sq;
  return out;
}

std::optional<Rat> cue_expected(const Partition& mu, const Partition& nu, unsigned n) {
  if (mu.length() == 1 && nu.length() == 1) {
    if (mu.part(1) != nu.part(1)) return Rat(0);
    return Rat(std::min(mu.part(1), n));
  }
  if (n >= std::max(mu.weight(), nu.weight()))
    return mu == nu ? Rat(z_of(mu)) : Rat(0);
  return std::nullopt;
}

ClosedForms closed_forms(const EnsembleParams& p) {
  if (p.n < 2) throw std::domain_error("closed_forms requires n >= 2");
  const Rat& a = p.alpha;
  Rat n(long(p.n));
  Rat d1 = n + a - 1;
  Rat d2 = n + a - 2;
  Rat d3 = n + 2 * a - 1;
  ClosedForms out;
  out.p1_sq = a * n / d1;
  out.p1_quad = 2 * n * a * a * (n * n + 2 * (a - 1) * n - a) / (d1 * d2 * d3);
  out.p2_sq = 2 * a * n * (n * n + 2 * (a - 1) * n + a * a - 3 * a + 1) / (d1 * d3 * d2);
  out.p2_p11 = 2 * a * a * (a - 1) * n / (d1 * d3 * d2);
  return out;
}

Rat i_of(unsigned m, const EnsembleParams& p) {
  if (p.n < 2) throw std::domain_error("i_of requires n >= 2");
  if (m < 1) throw std::domain_error("i_of requires m >= 1");
  Rat moment = exact_moment(Partition{m}, Partition{m}, p);
  return (moment - long(p.n)) / (Rat(long(p.n)) * (long(p.n) - 1));
}

TailRateReport tail_rate_check(const EnsembleParams& p, unsigned m_lo, unsigned m_hi) {
  if (p.n < 2) throw std::domain_error("tail_rate_check requires n >= 2");
  if (m_lo < 1 || m_lo > m_hi) throw std::invalid_argument("bad m range");
  TailRateReport report;
  Rat beta = p.beta();
  bool exponent_is_one = beta >= 1;
  report.exponent = exponent_is_one ? 1.0 : rat_to_double(beta);
  for (unsigned m = m_lo; m <= m_hi; ++m) {
    Rat d = abs(exact_moment(Partition{m}, Partition{m}, p) - long(p.n));
    report.points.push_back({m, d});
  }
  report.d_nonincreasing = true;
  for (std::size_t i = 1; i < report.points.size(); ++i)
    if (report.points[i].d > report.points[i - 1].d) report.d_nonincreasing = false;

  if (exponent_is_one) {
    Rat low = report.points.front().d * long(m_lo);
    Rat sup = low;
    report.sup_at = m_lo;
    for (const auto& pt : report.points) {
      Rat w = pt.d * long(pt.m);
      if (w > sup) {
        sup = w;
        report.sup_at = pt.m;
      }
    }
    report.sup_weighted = rat_to_double(sup);
    report.weighted_bounded = sup <= 2 * low;
  } else {
    double e = report.exponent;
    double low = rat_to_double(report.points.front().d) * std::pow(double(m_lo), e);
    double sup = low;
    report.sup_at = m_lo;
    for (const auto& pt : report.points) {
      double w = rat_to_double(pt.d) * std::pow(double(pt.m), e);
      if (w > sup) {
        sup = w;
        report.sup_at = pt.m;
      }
    }
    report.sup_weighted = sup;
    report.weighted_bounded = sup <= 2 * low;
  }
  return report;
}

Rat dirichlet_moment(const std::vector<unsigned>& a, unsigned n_vars) {
  if (a.size() > n_vars)
    throw std::domain_error("dirichlet_moment requires length(a) <= n_vars");
  unsigned long total = 0;
  mpz_class num = 1;
  for (unsigned ai : a) {
    total += ai;
    if (ai > 0) {
      mpz_class df;
      mpz_2fac_ui(df.get_mpz_t(), 2 * ai - 1);
      num *= df;
    }
  }
  mpz_class den = 1;
  for (unsigned long i = 1; i <= total; ++i) den *= mpz_class(n_vars) + 2 * (i - 1);
  return make_rat(num, den);
}

CoeSecondMoment coe_trace_second_moment(unsigned n) {
  if (n < 2) throw std::domain_error("coe_trace_second_moment requires n >= 2");
  CoeSecondMoment out;
  Rat n2 = Rat(long(n)) * long(n);
  // |u_11|^2 is distributed as (X_1^2 + X_2^2) / sum of 2n squares.
  Rat xi_sq = dirichlet_moment({2}, 2 * n);
  Rat xi_cross = dirichlet_moment({1, 1}, 2 * n);
  out.via_dirichlet = n2 * (2 * xi_sq + 2 * xi_cross);
  Rat wg_id = make_rat(1, mpz_class(n) * n - 1);
  Rat wg_swap = -make_rat(1, mpz_class(n) * (mpz_class(n) * n - 1));
  out.via_weingarten = 2 * n2 * (wg_id + wg_swap);
  out.via_jack = exact_moment(Partition{1}, Partition{1}, EnsembleParams::from_beta(n, Rat(1)));
  return out;
}

LimitReport limit_check(const Partition& mu, const Partition& nu, const Rat& alpha,
                        const std::vector<unsigned>& n_schedule) {
  LimitReport report;
  report.target =
      mu == nu ? rat_pow(alpha, mu.length()) * Rat(z_of(mu)) : Rat(0);
  bool rate_pair = (mu == Partition{2} && nu == Partition{1, 1}) ||
                   (mu == Partition{1, 1} && nu == Partition{2});
  if (rate_pair) report.rate_target = 2 * alpha * alpha * (alpha - 1);
  for (unsigned n : n_schedule) {
    EnsembleParams p = EnsembleParams::from_alpha(n, alpha);
    Rat value = exact_moment(mu, nu, p);
    report.points.push_back({n, value, abs(value - report.target)});
    if (rate_pair) report.rate_points.push_back({n, value * long(n) * long(n)});
  }
  report.deviations_nonincreasing = true;
  for (std::size_t i = 1; i < report.points.size(); ++i)
    if (report.points[i].deviation > report.points[i - 1].deviation)
      report.deviations_nonincreasing = false;
  return report;
}

}  // namespace cbm::moments
