#include <doctest.h>

#include "opcalc/error.hpp"
#include "opcalc/factorization.hpp"
#include "support/generators.hpp"

using namespace opcalc;

TEST_CASE("squaring construction for lambda = 2 + i") {
  const QuadraticFactor q = quadratic_factor(GaussianRational{2, 1});
  CHECK(q.m == 2);
  // (t^2 + 4t + 5)(t^4 + 6t^2 + 25)
  CHECK(q.p == RealPolynomial{125, 100, 55, 24, 11, 4, 1});
  CHECK(q.pq == RealPolynomial{625, 0, 0, 0, 14, 0, 0, 0, 1});
  // telescoping oracle: p (t - λ)(t - conj λ)
  CHECK(q.p * RealPolynomial{5, -4, 1} == q.pq);
}

TEST_CASE("lambda already in the left half plane gives p = 1") {
  const QuadraticFactor q = quadratic_factor(GaussianRational{-1, 3});
  CHECK(q.m == 0);
  CHECK(q.p == RealPolynomial{1});
  CHECK(q.pq == RealPolynomial{10, 2, 1});
}

TEST_CASE("random nonreal lambda: p and pq dominate zero exactly") {
  testing::Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    Rational re = testing::random_rational(rng, 30, 10);
    Rational im = testing::random_rational(rng, 30, 10);
    if (im == 0) im = Rational(1, 7);
    const QuadraticFactor q = quadratic_factor(GaussianRational{re, im});
    CHECK(strictly_dominates_zero(q.p));
    CHECK(strictly_dominates_zero(q.pq));
    const RealPolynomial quad{re * re + im * im, -2 * re, 1};
    CHECK(q.p * quad == q.pq);
  }
}

TEST_CASE("nonreal part of a product") {
  // (t^2 - t + 1)(t^2 + 2t + 5)
  const RealPolynomial q = RealPolynomial{1, -1, 1} * RealPolynomial{5, 2, 1};
  const RealPolynomial p = positive_factor_nonreal(q);
  CHECK(nonnegative_coeffs(p));
  CHECK(nonnegative_coeffs(p * q));
}

TEST_CASE("unit interval factor of 2 - t") {
  const UnitIntervalFactor u = positive_factor_unit_interval(RealPolynomial{2, -1});
  // u is a positive multiple of the geometric series 1/(1 - t/2)
  REQUIRE(u.u.size() > 10);
  for (std::size_t n = 1; n < 10; ++n) CHECK(u.u[n] / u.u[0] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(n))));
  const TruncatedSeries uq = series_mul(u.u, TruncatedSeries({2.0, -1.0}));
  CHECK(dominance_check(uq, TruncatedSeries::constant(0.0), 1e-9).relation != Dominance::refuted);
  CHECK_THROWS_AS(positive_factor_unit_interval(RealPolynomial{Rational(-1, 2), 1}), Error);
}

TEST_CASE("worked instance f = 1 - t + t^2") {
  const TruncatedSeries f({1.0, -1.0, 1.0});
  const FactorizationCertificate c = wiener_factorize(f);
  REQUIRE(c.ok());
  CHECK(c.verdict_g.relation == Dominance::strict);
  CHECK(c.verdict_fg.relation == Dominance::strict);
  CHECK(c.fg.tail_bound() <= 1e-10);
  // independent feasibility oracle: (1 - t + t^2)(1 + t + t^2) = 1 + t^2 + t^4
  CHECK(RealPolynomial{1, -1, 1} * RealPolynomial{1, 1, 1} == RealPolynomial{1, 0, 1, 0, 1});
}

TEST_CASE("factorization of several positive functions") {
  for (const auto& f : {TruncatedSeries({0.25, 0.0, 1.0}), TruncatedSeries({1.0}),
                        TruncatedSeries({1.0, -1.9, 1.0}), TruncatedSeries({3.0, -2.0, -0.5}, 1e-12)}) {
    const FactorizationCertificate c = wiener_factorize(f);
    CHECK(c.ok());
    CHECK(c.verdict_g.relation == Dominance::strict);
    CHECK(c.fg.tail_bound() <= 1e-10);
    CHECK(series_mul(f, c.g).size() > 0);
  }
}

TEST_CASE("a zero in [0,1] is rejected") {
  CHECK_THROWS_AS(wiener_factorize(TruncatedSeries({1.0, -2.0, 1.0})), Error);
  CHECK_THROWS_AS(wiener_factorize(TruncatedSeries({-0.5, 1.0})), Error);
}

TEST_CASE("float path of the squaring construction") {
  const QuadraticFactor q = quadratic_factor(std::complex<double>(0.5, std::sqrt(3.0) / 2));
  CHECK(q.m == 1);
  CHECK(nonnegative_coeffs(q.pq));
}
