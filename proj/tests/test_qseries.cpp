#include <oustat/exact.hpp>
#include <oustat/qseries.hpp>

#include <doctest.h>

using namespace oustat;

TEST_CASE("geometric factor multiply and divide are inverse passes") {
  TruncatedSeries s(30);
  for (std::size_t n = 0; n <= 30; ++n) s.coeff(n) = bigint(long(3 * n + 1));
  TruncatedSeries orig = s;
  s.mul_inv_onefactor(4);
  CHECK_FALSE(s == orig);
  s.mul_onefactor(4);
  CHECK(s == orig);
}

TEST_CASE("series_mul against a hand product") {
  // (1 + q) * (1 + q + q^2) = 1 + 2q + 2q^2 + q^3
  TruncatedSeries a(5), b(5);
  a.coeff(0) = 1;
  a.coeff(1) = 1;
  b.coeff(0) = 1;
  b.coeff(1) = 1;
  b.coeff(2) = 1;
  const TruncatedSeries p = series_mul(a, b);
  const long expect[] = {1, 2, 2, 1, 0, 0};
  for (std::size_t n = 0; n <= 5; ++n) CHECK(p.coeff(n) == expect[n]);
}

TEST_CASE("add_shifted_into is multiplication by a power of q") {
  TruncatedSeries s(10);
  for (std::size_t n = 0; n <= 10; ++n) s.coeff(n) = bigint(long(n * n + 1));
  TruncatedSeries acc(10);
  s.add_shifted_into(acc, 3);
  for (std::size_t n = 0; n <= 10; ++n)
    CHECK(acc.coeff(n) == (n >= 3 ? s.coeff(n - 3) : bigint(0)));
}

TEST_CASE("inv_factor over all gaps reproduces partition counts") {
  const TruncatedSeries gf = inv_factor(1, 1, -1, 1, 50);
  const auto p = partition_count(50);
  for (std::size_t n = 0; n <= 50; ++n) CHECK(gf.coeff(n) == p[n]);
}

TEST_CASE("inv_factor with power two squares the single factor") {
  // 1/(1-q^3)^2 has coefficient floor(n/3)+1 at multiples handled by the
  // stars-and-bars count of pairs summing to n in steps of 3.
  const TruncatedSeries gf = inv_factor(3, 5, 1, 2, 20);
  for (std::size_t n = 0; n <= 20; ++n)
    CHECK(gf.coeff(n) == ((n % 3 == 0) ? bigint(long(n / 3 + 1)) : bigint(0)));
}

TEST_CASE("rank factor on the unit gives pure powers") {
  // 1/(1 - zeta q): n parts of weight one, rank n, so mu_j(n) = n^j.
  MomentSeries s = MomentSeries::one(12, 3);
  s.mul_inv_rank_factor(+1, 1);
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(s.mu(0, n) == 1);
    CHECK(s.mu(1, n) == bigint(long(n)));
    CHECK(s.mu(2, n) == bigint(long(n * n)));
    CHECK(s.mu(3, n) == bigint(long(n * n * n)));
  }
}

TEST_CASE("moment_mul agrees with sequential in-place factors") {
  MomentSeries a = MomentSeries::one(20, 4);
  a.mul_inv_rank_factor(+1, 1);
  MomentSeries b = MomentSeries::one(20, 4);
  b.mul_inv_rank_factor(-1, 3);

  MomentSeries both = MomentSeries::one(20, 4);
  both.mul_inv_rank_factor(+1, 1);
  both.mul_inv_rank_factor(-1, 3);

  const MomentSeries prod = moment_mul(a, b);
  for (unsigned j = 0; j <= 4; ++j)
    for (std::size_t n = 0; n <= 20; ++n) CHECK(prod.mu(j, n) == both.mu(j, n));
}

TEST_CASE("moment series shift accumulates without touching ranks") {
  MomentSeries s = MomentSeries::one(10, 2);
  s.mul_inv_rank_factor(-1, 2);
  MomentSeries acc(10, 2);
  s.add_shifted_into(acc, 4);
  for (unsigned j = 0; j <= 2; ++j)
    for (std::size_t n = 0; n <= 10; ++n)
      CHECK(acc.mu(j, n) == (n >= 4 ? s.mu(j, n - 4) : bigint(0)));
}
