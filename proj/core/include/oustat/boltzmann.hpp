#pragma once

#include <cstdint>
#include <vector>

namespace oustat {

/* Counter-free splittable generator (SplitMix64).  Chosen over the stdlib
 * engines because its output is a pure function of a 64-bit state, which
 * makes worker streams and cross-platform reproducibility trivial to
 * reason about.
 */
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: never returns 0, so it is safe inside log().
  double next_double() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }
};

// Disjoint per-worker stream derived from a master seed.  Worker i gets a
// state obtained by mixing the master stream i+1 times, so streams for
// different workers never share a state by construction of the mixer.
SplitMix64 stream_for(std::uint64_t master_seed, std::uint64_t worker);

/* Sampling parameters for weight target n.  The measure weights every
 * sequence by q^{weight}; with q = e^{-1/(B sqrt n)}, B = sqrt(6)/pi, the
 * expected weight is near n.  peak_cum[m] is the cumulative law of the
 * peak index, normalized so the last entry is 1; the truncated upper tail
 * carries less than 1e-12 of the mass.
 */
struct BoltzmannParams {
  long long n = 0;
  double q = 0;
  double lnq = 0;   // log q = -1/(B sqrt n)
  double bsn = 0;   // B sqrt n
  std::vector<double> peak_cum;

  long long m_cutoff() const {
    return static_cast<long long>(peak_cum.size()) - 1;
  }
};

BoltzmannParams make_params(long long n);

/* One sampled sequence in count form: x_left[k-1] and x_right[k-1] hold the
 * number of parts equal to 2k-1 on each side of the peak.  Full records
 * cover every k <= m+1; targeted modes fill only what they sampled and
 * leave the rest at their sentinels.  y1_* is the largest part on a side,
 * -1 when the side is empty, -2 when the mode did not sample it.
 */
struct SampleRecord {
  long long m = 0;            // peak part is 2m+1
  long long total = 0;        // weight of the sequence, 0 unless full
  long long left_count = 0;   // number of parts left of the peak
  long long right_count = 0;
  std::vector<long long> x_left, x_right;
  long long y1_left = -2, y1_right = -2;
  bool full = false;

  long long peak() const { return 2 * m + 1; }
  long long rank() const { return left_count - right_count; }
};

// Peak index drawn from peak_cum by inversion (binary search).
long long sample_peak_index(const BoltzmannParams& p, SplitMix64& rng);

// Complete draw: peak, then for k = 1..m+1 the left and right counts as
// independent geometrics with success 1 - q^{2k-1}, by inversion.
SampleRecord sample_free(const BoltzmannParams& p, SplitMix64& rng);

// Peak only; the count arrays stay empty.
SampleRecord sample_peak_only(const BoltzmannParams& p, SplitMix64& rng);

// Counts for part sizes 2k-1 with k <= k_limit only (both sides), the
// cheap mode for small-part statistics at large n.
SampleRecord sample_small_parts(const BoltzmannParams& p, SplitMix64& rng,
                                long long k_limit);

// Peak plus the largest part on each side, sampled by scanning k downward
// from m+1 and testing occupancy (probability q^{2k-1} per size).
SampleRecord sample_side_largest(const BoltzmannParams& p, SplitMix64& rng);

// One count X_{2k-1} for a single side given the peak index: the geometric
// draw when k <= m+1, exactly 0 beyond the peak.  Lets checks that care
// about a single part size skip the other k's entirely.
long long sample_count_at(const BoltzmannParams& p, SplitMix64& rng,
                          long long k, long long m);

/* Rejection to the uniform law on sequences of weight exactly n: free draws
 * are repeated until total == n.  Since the free measure weights every
 * sequence by q^{weight} alone, conditioning on the weight is exactly the
 * uniform law.  Attempts whose running total passes n abort early; such
 * draws could never be accepted, so the conditional law is untouched.
 */
struct ExactSample {
  SampleRecord record;
  long long attempts = 0;  // draws consumed, including the accepted one
};

ExactSample sample_exact(const BoltzmannParams& p, SplitMix64& rng,
                         long long max_attempts);

// Normalized statistics matching the limit laws under test.
double peak_statistic(const BoltzmannParams& p, const SampleRecord& rec);
double rank_statistic(const BoltzmannParams& p, const SampleRecord& rec);

// (y1 - B sqrt n log(2 B sqrt n)) / (B sqrt n); false when the side is empty.
bool side_largest_statistic(const BoltzmannParams& p, long long y1,
                            double& out);

// (2k-1) X / (B sqrt n), the small-part count scaled to its exponential limit.
double smallpart_exp_statistic(const BoltzmannParams& p, long long k,
                               long long count);

// (sum of counts over k <= k_n, minus B sqrt n log(2 k_n - 1)) / (B sqrt n).
double smallpart_total_statistic(const BoltzmannParams& p, long long k_n,
                                 long long total_count);

// B sqrt n (log(2 B sqrt n) + gamma - log 2), the peak expectation target.
double expected_peak(const BoltzmannParams& p);

}  // namespace oustat
