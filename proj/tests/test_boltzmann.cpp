#include <oustat/boltzmann.hpp>
#include <oustat/errors.hpp>

#include <doctest.h>

#include <cmath>
#include <set>

using namespace oustat;

namespace {
constexpr double kB = 0.77969680123439731;  // sqrt(6)/pi

// Weight of a record recomputed from its count arrays.
long long recomputed_weight(const SampleRecord& rec) {
  long long w = rec.peak();
  for (std::size_t i = 0; i < rec.x_left.size(); ++i)
    w += (2 * static_cast<long long>(i) + 1) * (rec.x_left[i] + rec.x_right[i]);
  return w;
}

long long largest_occupied(const std::vector<long long>& x) {
  for (std::size_t i = x.size(); i-- > 0;)
    if (x[i] > 0) return 2 * static_cast<long long>(i) + 1;
  return -1;
}
}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 g(0);
  const std::uint64_t a = g.next();
  const std::uint64_t b = g.next();
  const std::uint64_t c = g.next();
  CHECK(a == 0xE220A8397B1DCDAFULL);
  CHECK(b == 0x6E789E6AA1B965F4ULL);
  CHECK(c == 0x06C45D188009454FULL);
}

TEST_CASE("next_double stays in the half-open unit interval") {
  SplitMix64 g(123);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = g.next_double();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    mean += u;
  }
  mean /= 20000.0;
  CHECK(std::abs(mean - 0.5) < 0.01);
}

TEST_CASE("worker streams are the master's successive outputs") {
  const std::uint64_t seed = 99;
  SplitMix64 master(seed);
  std::set<std::uint64_t> states;
  for (std::uint64_t w = 0; w < 4; ++w) {
    const std::uint64_t expect = [&] {
      SplitMix64 g(seed);
      std::uint64_t s = 0;
      for (std::uint64_t i = 0; i <= w; ++i) s = g.next();
      return s;
    }();
    const SplitMix64 worker = stream_for(seed, w);
    CHECK(worker.state == expect);
    states.insert(worker.state);
  }
  CHECK(states.size() == 4);
}

TEST_CASE("sampling parameters") {
  const BoltzmannParams p = make_params(10'000);
  CHECK(p.n == 10'000);
  CHECK(p.bsn == doctest::Approx(kB * 100.0));
  CHECK(p.q == doctest::Approx(std::exp(-1.0 / (kB * 100.0))));
  CHECK(p.lnq == doctest::Approx(-1.0 / (kB * 100.0)));
  REQUIRE(!p.peak_cum.empty());
  CHECK(p.peak_cum.back() == 1.0);
  for (std::size_t i = 1; i < p.peak_cum.size(); ++i)
    CHECK(p.peak_cum[i] >= p.peak_cum[i - 1]);
  // the cutoff sits well past the typical peak index
  const double mode = 0.5 * (p.bsn * std::log(2.0 * p.bsn) - 1.0);
  CHECK(double(p.m_cutoff()) > mode);

  CHECK_NOTHROW(make_params(1));
  CHECK_THROWS_AS(make_params(0), std::invalid_argument);
}

TEST_CASE("free draws are internally consistent") {
  const BoltzmannParams p = make_params(500);
  SplitMix64 rng = stream_for(7, 0);
  for (int i = 0; i < 200; ++i) {
    const SampleRecord rec = sample_free(p, rng);
    CHECK(rec.full);
    CHECK(rec.m >= 0);
    REQUIRE(rec.x_left.size() == std::size_t(rec.m + 1));
    REQUIRE(rec.x_right.size() == std::size_t(rec.m + 1));
    CHECK(rec.total == recomputed_weight(rec));
    long long left = 0, right = 0;
    for (long long c : rec.x_left) left += c;
    for (long long c : rec.x_right) right += c;
    CHECK(rec.left_count == left);
    CHECK(rec.right_count == right);
    CHECK(rec.rank() == left - right);
    CHECK(rec.y1_left == largest_occupied(rec.x_left));
    CHECK(rec.y1_right == largest_occupied(rec.x_right));
    CHECK(rec.y1_left <= rec.peak());
  }
}

TEST_CASE("peak-only draws fill nothing else") {
  const BoltzmannParams p = make_params(500);
  SplitMix64 rng = stream_for(7, 1);
  const SampleRecord rec = sample_peak_only(p, rng);
  CHECK_FALSE(rec.full);
  CHECK(rec.x_left.empty());
  CHECK(rec.x_right.empty());
  CHECK(rec.y1_left == -2);
  CHECK(rec.y1_right == -2);
  CHECK(rec.m >= 0);
  CHECK(rec.m <= p.m_cutoff());
}

TEST_CASE("small-part draws fill a fixed window") {
  const BoltzmannParams p = make_params(500);
  SplitMix64 rng = stream_for(7, 2);
  for (int i = 0; i < 100; ++i) {
    const SampleRecord rec = sample_small_parts(p, rng, 3);
    CHECK_FALSE(rec.full);
    REQUIRE(rec.x_left.size() == 3);
    REQUIRE(rec.x_right.size() == 3);
    // sizes above the peak carry no parts
    for (long long k = rec.m + 2; k <= 3; ++k) {
      CHECK(rec.x_left[k - 1] == 0);
      CHECK(rec.x_right[k - 1] == 0);
    }
  }
  CHECK_THROWS_AS(sample_small_parts(p, rng, 0), std::invalid_argument);
}

TEST_CASE("side-largest draws report occupancy maxima") {
  const BoltzmannParams p = make_params(2'000);
  SplitMix64 rng = stream_for(7, 3);
  int empty_sides = 0;
  for (int i = 0; i < 200; ++i) {
    const SampleRecord rec = sample_side_largest(p, rng);
    CHECK_FALSE(rec.full);
    for (long long y : {rec.y1_left, rec.y1_right}) {
      CHECK(y >= -1);
      CHECK(y != 0);
      CHECK(y <= rec.peak());
      if (y == -1) ++empty_sides;
      if (y > 0) CHECK(y % 2 == 1);
    }
  }
  // empty sides happen but are rare at this size
  CHECK(empty_sides < 50);
}

TEST_CASE("single-size counts vanish above the peak") {
  const BoltzmannParams p = make_params(500);
  SplitMix64 rng = stream_for(7, 4);
  for (int i = 0; i < 50; ++i) CHECK(sample_count_at(p, rng, 12, 5) == 0);
  long long seen = 0;
  for (int i = 0; i < 50; ++i) seen += sample_count_at(p, rng, 1, 5);
  CHECK(seen > 0);
}

TEST_CASE("exact sampling conditions on the weight") {
  const BoltzmannParams p = make_params(30);
  SplitMix64 rng = stream_for(11, 0);
  for (int i = 0; i < 50; ++i) {
    const ExactSample s = sample_exact(p, rng, 1'000'000);
    CHECK(s.record.full);
    CHECK(s.record.total == 30);
    CHECK(s.record.total == recomputed_weight(s.record));
    CHECK(s.attempts >= 1);
  }
}

TEST_CASE("exact sampling respects its attempt budget") {
  const BoltzmannParams p = make_params(10'000);
  SplitMix64 rng = stream_for(9, 0);
  CHECK_THROWS_AS(sample_exact(p, rng, 1), resource_error);
}

TEST_CASE("statistics normalize as documented") {
  const BoltzmannParams p = make_params(40'000);
  SampleRecord rec;
  rec.m = 300;
  rec.left_count = 50;
  rec.right_count = 20;
  CHECK(peak_statistic(p, rec) ==
        doctest::Approx((601.0 - p.bsn * std::log(2.0 * p.bsn)) / p.bsn));
  CHECK(rank_statistic(p, rec) ==
        doctest::Approx(30.0 / std::sqrt(1.5 * 40'000.0)));
  CHECK(smallpart_exp_statistic(p, 2, 7) == doctest::Approx(21.0 / p.bsn));
  CHECK(smallpart_total_statistic(p, 5, 40) ==
        doctest::Approx((40.0 - p.bsn * std::log(9.0)) / p.bsn));
  CHECK(expected_peak(p) ==
        doctest::Approx(p.bsn *
                        (std::log(2.0 * p.bsn) + 0.5772156649015329 -
                         std::log(2.0))));
  double out = 0.0;
  CHECK_FALSE(side_largest_statistic(p, -1, out));
  CHECK(side_largest_statistic(p, 601, out));
  CHECK(out == doctest::Approx((601.0 - p.bsn * std::log(2.0 * p.bsn)) / p.bsn));
}

TEST_CASE("geometric marginal of a single size") {
  // X at size 1 is geometric with ratio q; its mean is q/(1-q).
  const BoltzmannParams p = make_params(40'000);
  SplitMix64 rng = stream_for(21, 0);
  const int draws = 20'000;
  double mean = 0.0;
  for (int i = 0; i < draws; ++i) mean += double(sample_count_at(p, rng, 1, 10));
  mean /= draws;
  const double target = p.q / (1.0 - p.q);
  const double sigma = std::sqrt(p.q) / (1.0 - p.q);
  CHECK(std::abs(mean - target) < 4.0 * sigma / std::sqrt(double(draws)));
}
