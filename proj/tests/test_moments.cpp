#include <doctest.h>

#include "cbm/errors.hpp"
#include "cbm/jack.hpp"
#include "cbm/moments.hpp"
#include "cbm/rng.hpp"
#include "cbm/verify.hpp"

using namespace cbm;
using namespace cbm::moments;

namespace {

EnsembleParams beta_params(unsigned n, const char* beta) {
  return EnsembleParams::from_beta(n, rat_from_string(beta));
}

}  // namespace

TEST_CASE("ensemble params") {
  auto p = beta_params(3, "4");
  CHECK(p.alpha == rat_from_string("1/2"));
  CHECK(p.beta() == Rat(4));
  CHECK_THROWS_AS(EnsembleParams::from_alpha(0, Rat(1)), std::domain_error);
  CHECK_THROWS_AS(EnsembleParams::from_alpha(2, Rat(0)), std::domain_error);
  CHECK_THROWS_AS(EnsembleParams::from_beta(2, Rat(-1)), std::domain_error);
}

TEST_CASE("n_factor: pinned values") {
  Rat a = rat_from_string("7/3");
  auto p = EnsembleParams::from_alpha(5, a);
  CHECK(n_factor(Partition{1}, p) == Rat(5) / (5 + a - 1));
  CHECK(n_factor(Partition{2}, p) == Rat(5) * (5 + a) / ((5 + a - 1) * (5 + 2 * a - 1)));
  CHECK(n_factor(Partition{}, p) == 1);
  // alpha = 1 telescopes to 1 for every shape
  auto p1 = EnsembleParams::from_alpha(4, Rat(1));
  for (unsigned k = 1; k <= 6; ++k)
    for (const Partition& lam : enumerate_partitions(k))
      if (lam.length() <= 4) CHECK(n_factor(lam, p1) == 1);
  CHECK_THROWS_AS(n_factor(Partition{1, 1, 1}, EnsembleParams::from_alpha(2, Rat(1))),
                  std::domain_error);
}

TEST_CASE("exact_moment: first moments against the printed closed form") {
  CHECK(exact_moment(Partition{1}, Partition{1}, beta_params(3, "1")) == rat_from_string("3/2"));
  CHECK(exact_moment(Partition{1}, Partition{1}, beta_params(3, "4")) == rat_from_string("3/5"));
  CHECK(exact_moment(Partition{1}, Partition{1}, beta_params(7, "2")) == 1);
}

TEST_CASE("exact_moment: beta=2 off-diagonals vanish") {
  for (unsigned n : {2u, 5u})
    CHECK(exact_moment(Partition{2}, Partition{1, 1}, beta_params(n, "2")) == 0);
  for (unsigned n : {3u, 6u})
    CHECK(exact_moment(Partition{3}, Partition{2, 1}, beta_params(n, "2")) == 0);
}

TEST_CASE("exact_moment: weight mismatch is structurally zero, empty weight is 1") {
  auto p = beta_params(4, "1");
  CHECK(exact_moment(Partition{1}, Partition{2}, p) == 0);
  CHECK(exact_moment(Partition{}, Partition{1}, p) == 0);
  CHECK(exact_moment(Partition{}, Partition{}, p) == 1);
}

TEST_CASE("exact_moment: degenerate n=1 gives 1 for every single row") {
  for (const char* beta : {"1", "2", "4", "2/3"}) {
    auto p = beta_params(1, beta);
    for (unsigned m = 1; m <= 6; ++m)
      CHECK(exact_moment(Partition{m}, Partition{m}, p) == 1);
  }
}

TEST_CASE("exact_moment: capacity error past K_max") {
  std::vector<unsigned> big(jack::k_max() + 1, 1);
  Partition mu(big);
  CHECK_THROWS_AS(exact_moment(mu, mu, beta_params(20, "1")), capacity_error);
}

TEST_CASE("closed forms: pinned rows") {
  auto b1 = closed_forms(beta_params(3, "1"));
  CHECK(b1.p1_sq == rat_from_string("3/2"));
  CHECK(b1.p1_quad == rat_from_string("13/3"));
  CHECK(b1.p2_sq == rat_from_string("7/3"));
  CHECK(b1.p2_p11 == rat_from_string("1/3"));
  for (unsigned n = 2; n <= 5; ++n) {
    auto b2 = closed_forms(beta_params(n, "2"));
    CHECK(b2.p1_sq == 1);
    CHECK(b2.p1_quad == 2);
    CHECK(b2.p2_sq == 2);
    CHECK(b2.p2_p11 == 0);
  }
  auto b4 = closed_forms(beta_params(3, "4"));
  CHECK(b4.p1_sq == rat_from_string("3/5"));
  CHECK(b4.p1_quad == rat_from_string("11/15"));
  CHECK(b4.p2_sq == rat_from_string("23/15"));
  CHECK(b4.p2_p11 == rat_from_string("-1/15"));
  CHECK(closed_forms(beta_params(2, "4")).p2_p11 == rat_from_string("-1/3"));
  CHECK_THROWS_AS(closed_forms(beta_params(1, "1")), std::domain_error);
}

TEST_CASE("exact equality of closed forms and the Jack route across the grid") {
  const Partition one{1}, two{2}, one_one{1, 1};
  for (const char* a : {"2", "1", "1/2", "3", "2/5"}) {
    for (unsigned n = 2; n <= 50; ++n) {
      auto p = EnsembleParams::from_alpha(n, rat_from_string(a));
      auto cf = closed_forms(p);
      CHECK(exact_moment(one, one, p) == cf.p1_sq);
      CHECK(exact_moment(one_one, one_one, p) == cf.p1_quad);
      CHECK(exact_moment(two, two, p) == cf.p2_sq);
      CHECK(exact_moment(two, one_one, p) == cf.p2_p11);
    }
  }
}

TEST_CASE("ab_bounds: pinned values and domain errors") {
  CHECK(ab_bounds(3, EnsembleParams::from_alpha(5, Rat(1))).A == 1);
  CHECK(ab_bounds(3, EnsembleParams::from_alpha(5, Rat(1))).B == 1);
  auto ab = ab_bounds(1, EnsembleParams::from_alpha(3, Rat(2)));
  CHECK(ab.A == rat_from_string("3/4"));
  CHECK(ab.B == 1);
  auto ab2 = ab_bounds(2, EnsembleParams::from_alpha(4, rat_from_string("1/2")));
  CHECK(ab2.A == 1);
  CHECK(ab2.B == rat_from_string("36/25"));
  CHECK_THROWS_AS(ab_bounds(3, EnsembleParams::from_alpha(2, rat_from_string("1/2"))),
                  std::domain_error);
}

TEST_CASE("gamma_bounds: pinned values") {
  for (unsigned K = 1; K <= 8; ++K) {
    auto ex = gamma_bounds(K, EnsembleParams::from_alpha(K + 2, Rat(1)));
    CHECK(ex.Gamma == 1);
    CHECK(ex.gamma == 1);
  }
  Rat a = rat_from_string("5/3");
  auto ex1 = gamma_bounds(1, EnsembleParams::from_alpha(4, a));
  CHECK(ex1.Gamma == Rat(4) / (4 + a - 1));
  CHECK(ex1.gamma == ex1.Gamma);
  auto ex2 = gamma_bounds(2, EnsembleParams::from_alpha(4, Rat(2)));
  CHECK(ex2.Gamma == rat_from_string("24/35"));
  CHECK(ex2.gamma == rat_from_string("3/5"));
}

TEST_CASE("sandwich_check: pinned reports") {
  auto r1 = sandwich_check(Partition{1}, EnsembleParams::from_alpha(3, Rat(2)));
  CHECK(*r1.normalized == rat_from_string("3/4"));
  CHECK(*r1.bounds.A == rat_from_string("3/4"));  // equality at A
  CHECK(*r1.bounds.B == 1);
  CHECK(r1.sandwich_holds());

  auto r2 = sandwich_check(Partition{1, 1}, beta_params(4, "2"));
  CHECK(*r2.normalized == 1);
  CHECK(r2.sandwich_holds());

  auto r3 = sandwich_check(Partition{2}, beta_params(3, "1"));
  CHECK(r3.value == rat_from_string("7/3"));
  CHECK(*r3.normalized == rat_from_string("7/12"));
  CHECK(*r3.bounds.A == rat_from_string("4/9"));
  CHECK(*r3.bounds.B == 1);
  CHECK(r3.sandwich_holds());

  CHECK_THROWS_AS(sandwich_check(Partition{}, beta_params(3, "1")), std::domain_error);
  CHECK_THROWS_AS(sandwich_check(Partition{2, 2}, beta_params(3, "1")), std::domain_error);
}

TEST_CASE("cross_moment_bound_check: pinned cases") {
  auto c1 = cross_moment_bound_check(Partition{2}, Partition{1, 1}, beta_params(4, "2"));
  CHECK(c1.lhs_sq == 0);
  CHECK(c1.rhs_sq == 0);
  CHECK(c1.holds);

  auto c2 = cross_moment_bound_check(Partition{2}, Partition{1, 1}, beta_params(4, "1"));
  CHECK(c2.value == rat_from_string("8/35"));
  CHECK(c2.lhs_sq == rat_from_string("64/1225"));
  CHECK(c2.rhs_sq == rat_from_string("49/8"));
  CHECK(c2.holds);

  CHECK(cross_moment_bound_check(Partition{3}, Partition{2, 1}, beta_params(6, "4")).holds);
  CHECK_THROWS_AS(cross_moment_bound_check(Partition{2}, Partition{2}, beta_params(4, "1")),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross_moment_bound_check(Partition{3}, Partition{2, 1}, beta_params(2, "1")),
                  std::domain_error);
}

TEST_CASE("corollary_bound: pinned values") {
  CHECK(corollary_bound(2, EnsembleParams::from_alpha(5, Rat(1))) == 0);
  auto p = EnsembleParams::from_alpha(2, Rat(2));
  CHECK(corollary_bound(1, p) == 3);
  auto r = sandwich_check(Partition{1}, p);
  CHECK(abs(*r.normalized - 1) <= Rat(3));
  CHECK(corollary_bound(2, EnsembleParams::from_alpha(4, rat_from_string("1/2"))) ==
        rat_from_string("3/2"));
  CHECK_THROWS_AS(corollary_bound(2, EnsembleParams::from_alpha(3, Rat(2))), std::domain_error);
}

TEST_CASE("cue_expected: regimes") {
  CHECK(*cue_expected(Partition{2, 1, 1}, Partition{2, 1, 1}, 4) == 4);
  CHECK(*cue_expected(Partition{5}, Partition{5}, 3) == 3);
  CHECK(*cue_expected(Partition{2}, Partition{3}, 1) == 0);
  CHECK(*cue_expected(Partition{2, 1}, Partition{3}, 3) == 0);
  CHECK(*cue_expected(Partition{}, Partition{}, 1) == 1);
  CHECK_FALSE(cue_expected(Partition{1, 1}, Partition{1, 1}, 1).has_value());
}

TEST_CASE("beta=2 recovers the unitary-group identity") {
  for (unsigned k = 0; k <= 4; ++k) {
    auto parts = enumerate_partitions(k);
    for (const Partition& mu : parts)
      for (const Partition& nu : parts)
        for (unsigned n = std::max(1u, k); n <= k + 2; ++n) {
          auto want = cue_expected(mu, nu, n);
          REQUIRE(want.has_value());
          CHECK(exact_moment(mu, nu, beta_params(n, "2")) == *want);
        }
  }
}

TEST_CASE("hermitian symmetry and Cauchy-Schwarz") {
  SplitMix64 rng(271828);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned k = 1 + unsigned(rng.below(6));
    auto parts = enumerate_partitions(k);
    const Partition& mu = parts[rng.below(parts.size())];
    const Partition& nu = parts[rng.below(parts.size())];
    unsigned n = 1 + unsigned(rng.below(7));
    Rat alpha = make_rat(1 + long(rng.below(6)), 1 + long(rng.below(6)));
    auto p = EnsembleParams::from_alpha(n, alpha);
    Rat m = exact_moment(mu, nu, p);
    CHECK(m == exact_moment(nu, mu, p));
    CHECK(m * m <= exact_moment(mu, mu, p) * exact_moment(nu, nu, p));
  }
}

TEST_CASE("randomized sandwich and corollary suites have no violations") {
  CHECK(verify::sandwich_suite(99, 60).ok());
  CHECK(verify::corollary_suite(99, 60).ok());
}

TEST_CASE("i_of: pinned values") {
  CHECK(i_of(1, beta_params(3, "2")) == rat_from_string("-1/3"));
  for (unsigned m = 2; m <= 6; ++m) CHECK(i_of(m, beta_params(2, "2")) == 0);
  CHECK(i_of(1, beta_params(2, "1")) == rat_from_string("-1/3"));
  CHECK_THROWS_AS(i_of(1, beta_params(1, "1")), std::domain_error);
}

TEST_CASE("tail rate: decay at n=2") {
  auto r2 = tail_rate_check(beta_params(2, "2"), 2, 8);
  for (const auto& pt : r2.points) CHECK(pt.d == 0);
  CHECK(r2.d_nonincreasing);
  CHECK(r2.weighted_bounded);

  auto r1 = tail_rate_check(beta_params(2, "1"), 1, 10);
  for (std::size_t i = 1; i < r1.points.size(); ++i)
    CHECK(r1.points[i].d < r1.points[i - 1].d);  // strictly decreasing here

  auto r4 = tail_rate_check(beta_params(2, "4"), 1, 10);
  CHECK(r4.weighted_bounded);
  CHECK(r4.exponent == 1.0);
}

TEST_CASE("dirichlet_moment: pinned values") {
  CHECK(dirichlet_moment({}, 5) == 1);
  for (unsigned n : {2u, 3u, 10u}) {
    CHECK(dirichlet_moment({1}, n) == make_rat(1, n));
    CHECK(dirichlet_moment({2}, 2 * n) == make_rat(3, mpz_class(2 * n) * (2 * n + 2)));
    CHECK(dirichlet_moment({1, 1}, 2 * n) == make_rat(1, mpz_class(2 * n) * (2 * n + 2)));
  }
  CHECK_THROWS_AS(dirichlet_moment({1, 1, 1}, 2), std::domain_error);
}

TEST_CASE("coe second moment: three routes agree") {
  auto m2 = coe_trace_second_moment(2);
  CHECK(m2.via_dirichlet == rat_from_string("4/3"));
  CHECK(m2.via_weingarten == rat_from_string("4/3"));
  CHECK(m2.via_jack == rat_from_string("4/3"));
  CHECK(coe_trace_second_moment(3).via_jack == rat_from_string("3/2"));
  auto big = coe_trace_second_moment(1000000);
  CHECK(big.consistent());
  CHECK(big.via_jack == rat_from_string("2000000/1000001"));
  CHECK_THROWS_AS(coe_trace_second_moment(1), std::domain_error);
}

TEST_CASE("limit_check: convergence data") {
  auto r = limit_check(Partition{1}, Partition{1}, Rat(2), {2, 5, 10, 100});
  CHECK(r.target == 2);
  for (const auto& pt : r.points) CHECK(pt.deviation == make_rat(2, pt.n + 1));
  CHECK(r.deviations_nonincreasing);

  auto rate = limit_check(Partition{2}, Partition{1, 1}, Rat(2), {1000});
  REQUIRE(rate.rate_target.has_value());
  CHECK(*rate.rate_target == 8);
  Rat rel = abs(rate.rate_points[0].scaled - 8) / Rat(8);
  CHECK(rel < rat_from_string("1/100"));

  auto flat = limit_check(Partition{2, 1}, Partition{2, 1}, Rat(1), {3, 4, 10});
  for (const auto& pt : flat.points) CHECK(pt.deviation == 0);
}
