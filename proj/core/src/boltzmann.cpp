#include <oustat/boltzmann.hpp>

#include <oustat/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oustat {

namespace {

constexpr double kB = 0.77969680123439731;  // sqrt(6)/pi

// Geometric count with success 1 - q^{odd}: floor(log u / log q^{odd}),
// u uniform on (0, 1].  log q^{odd} = odd * lnq with lnq < 0.
long long geometric_count(double lnq, long long odd, SplitMix64& rng) {
  const double u = rng.next_double();
  return static_cast<long long>(
      std::floor(std::log(u) / (static_cast<double>(odd) * lnq)));
}

}  // namespace

SplitMix64 stream_for(std::uint64_t master_seed, std::uint64_t worker) {
  SplitMix64 g(master_seed);
  std::uint64_t s = 0;
  for (std::uint64_t i = 0; i <= worker; ++i) s = g.next();
  return SplitMix64(s);
}

BoltzmannParams make_params(long long n) {
  if (n < 1) throw std::invalid_argument("make_params: n must be >= 1");
  BoltzmannParams p;
  p.n = n;
  p.bsn = kB * std::sqrt(static_cast<double>(n));
  p.lnq = -1.0 / p.bsn;
  p.q = std::exp(p.lnq);

  /* Peak-index weights w_m = q^{2m+1} prod_{k<=m+1} (1-q^{2k-1})^{-2},
   * accumulated in log space because the product factor alone overflows
   * double for large n.  The sequence of log weights rises to a single
   * mode and then decays at rate approaching 2/(B sqrt n) per step, so we
   * can stop once we are past the mode and 46 nats below it: the rest of
   * the tail is bounded by a geometric series and carries less than 1e-12
   * of the total mass.
   */
  std::vector<double> logw;
  double lw = 0.0;
  double lw_max = -HUGE_VAL;
  for (long long m = 0;; ++m) {
    const double occupied = std::log1p(-std::exp(p.lnq * (2 * m + 1)));
    lw += (m == 0 ? p.lnq : 2 * p.lnq) - 2 * occupied;
    logw.push_back(lw);
    if (lw > lw_max) lw_max = lw;
    // While the weights still rise, lw equals the running max; once this
    // triggers the mode is behind us and the remaining tail is geometric.
    if (lw < lw_max - 46.0) break;
    if (logw.size() > 80'000'000)
      throw resource_error("make_params: peak weight table too large");
  }
  p.peak_cum.resize(logw.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    cum += std::exp(logw[i] - lw_max);
    p.peak_cum[i] = cum;
  }
  for (double& c : p.peak_cum) c /= cum;
  p.peak_cum.back() = 1.0;
  return p;
}

long long sample_peak_index(const BoltzmannParams& p, SplitMix64& rng) {
  const double u = rng.next_double();
  const auto it =
      std::lower_bound(p.peak_cum.begin(), p.peak_cum.end(), u);
  return static_cast<long long>(it - p.peak_cum.begin());
}

SampleRecord sample_peak_only(const BoltzmannParams& p, SplitMix64& rng) {
  SampleRecord rec;
  rec.m = sample_peak_index(p, rng);
  return rec;
}

SampleRecord sample_free(const BoltzmannParams& p, SplitMix64& rng) {
  SampleRecord rec;
  rec.m = sample_peak_index(p, rng);
  rec.full = true;
  rec.total = rec.peak();
  rec.x_left.resize(rec.m + 1);
  rec.x_right.resize(rec.m + 1);
  rec.y1_left = rec.y1_right = -1;
  for (long long k = 1; k <= rec.m + 1; ++k) {
    const long long odd = 2 * k - 1;
    const long long xl = geometric_count(p.lnq, odd, rng);
    const long long xr = geometric_count(p.lnq, odd, rng);
    rec.x_left[k - 1] = xl;
    rec.x_right[k - 1] = xr;
    rec.left_count += xl;
    rec.right_count += xr;
    rec.total += odd * (xl + xr);
    if (xl > 0) rec.y1_left = odd;
    if (xr > 0) rec.y1_right = odd;
  }
  return rec;
}

SampleRecord sample_small_parts(const BoltzmannParams& p, SplitMix64& rng,
                                long long k_limit) {
  if (k_limit < 1)
    throw std::invalid_argument("sample_small_parts: k_limit must be >= 1");
  SampleRecord rec;
  rec.m = sample_peak_index(p, rng);
  const long long kk = std::min(k_limit, rec.m + 1);
  rec.x_left.assign(k_limit, 0);
  rec.x_right.assign(k_limit, 0);
  for (long long k = 1; k <= kk; ++k) {
    const long long odd = 2 * k - 1;
    rec.x_left[k - 1] = geometric_count(p.lnq, odd, rng);
    rec.x_right[k - 1] = geometric_count(p.lnq, odd, rng);
  }
  return rec;
}

SampleRecord sample_side_largest(const BoltzmannParams& p, SplitMix64& rng) {
  SampleRecord rec;
  rec.m = sample_peak_index(p, rng);
  rec.y1_left = rec.y1_right = -1;
  // The largest occupied size on a side is the first k, scanning downward,
  // with X_{2k-1} >= 1; occupancy events are independent across k with
  // probability q^{2k-1}, so a Bernoulli scan reproduces the joint law of
  // the two maxima without sampling any counts.
  for (long long k = rec.m + 1; k >= 1 && rec.y1_left < 0; --k) {
    if (rng.next_double() <= std::exp(p.lnq * (2 * k - 1)))
      rec.y1_left = 2 * k - 1;
  }
  for (long long k = rec.m + 1; k >= 1 && rec.y1_right < 0; --k) {
    if (rng.next_double() <= std::exp(p.lnq * (2 * k - 1)))
      rec.y1_right = 2 * k - 1;
  }
  return rec;
}

long long sample_count_at(const BoltzmannParams& p, SplitMix64& rng,
                          long long k, long long m) {
  if (k < 1) throw std::invalid_argument("sample_count_at: k must be >= 1");
  if (k > m + 1) return 0;
  return geometric_count(p.lnq, 2 * k - 1, rng);
}

ExactSample sample_exact(const BoltzmannParams& p, SplitMix64& rng,
                         long long max_attempts) {
  ExactSample out;
  while (out.attempts < max_attempts) {
    ++out.attempts;
    const long long m = sample_peak_index(p, rng);
    if (2 * m + 1 > p.n) continue;
    SampleRecord rec;
    rec.m = m;
    rec.full = true;
    rec.total = rec.peak();
    rec.x_left.assign(m + 1, 0);
    rec.x_right.assign(m + 1, 0);
    rec.y1_left = rec.y1_right = -1;
    bool overshot = false;
    for (long long k = 1; k <= m + 1 && !overshot; ++k) {
      const long long odd = 2 * k - 1;
      const long long xl = geometric_count(p.lnq, odd, rng);
      const long long xr = geometric_count(p.lnq, odd, rng);
      rec.x_left[k - 1] = xl;
      rec.x_right[k - 1] = xr;
      rec.left_count += xl;
      rec.right_count += xr;
      rec.total += odd * (xl + xr);
      if (xl > 0) rec.y1_left = odd;
      if (xr > 0) rec.y1_right = odd;
      overshot = rec.total > p.n;
    }
    if (!overshot && rec.total == p.n) {
      out.record = std::move(rec);
      return out;
    }
  }
  throw resource_error("sample_exact: no accepted draw in " +
                       std::to_string(max_attempts) + " attempts");
}

double peak_statistic(const BoltzmannParams& p, const SampleRecord& rec) {
  return (static_cast<double>(rec.peak()) - p.bsn * std::log(2.0 * p.bsn)) /
         p.bsn;
}

double rank_statistic(const BoltzmannParams& p, const SampleRecord& rec) {
  return static_cast<double>(rec.rank()) /
         std::sqrt(1.5 * static_cast<double>(p.n));
}

bool side_largest_statistic(const BoltzmannParams& p, long long y1,
                            double& out) {
  if (y1 < 0) return false;
  out = (static_cast<double>(y1) - p.bsn * std::log(2.0 * p.bsn)) / p.bsn;
  return true;
}

double smallpart_exp_statistic(const BoltzmannParams& p, long long k,
                               long long count) {
  return static_cast<double>(2 * k - 1) * static_cast<double>(count) / p.bsn;
}

double smallpart_total_statistic(const BoltzmannParams& p, long long k_n,
                                 long long total_count) {
  return (static_cast<double>(total_count) -
          p.bsn * std::log(static_cast<double>(2 * k_n - 1))) /
         p.bsn;
}

double expected_peak(const BoltzmannParams& p) {
  return p.bsn * (std::log(2.0 * p.bsn) + std::numbers::egamma - std::numbers::ln2);
}

}  // namespace oustat
