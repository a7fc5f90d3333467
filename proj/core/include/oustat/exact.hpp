#pragma once

#include <oustat/bigint.hpp>
#include <oustat/qseries.hpp>

#include <cstddef>
#include <map>
#include <vector>

namespace oustat {

/* A peak-marked sequence of odd parts: the parts in `left` weakly increase
 * up to the peak, the parts in `right` weakly decrease after it.  The peak
 * is a distinguished position, not a value: among equal parts, each choice
 * of marked position is a different object.  This is the convention forced
 * by the generating function (there are exactly two sequences of weight 2,
 * namely 1 before the marked 1 and 1 after it).
 */
struct OddUnimodalSeq {
  std::vector<int> left;   // weakly increasing, all odd, all <= peak
  int peak = 0;            // odd
  std::vector<int> right;  // weakly decreasing, all odd, all <= peak

  long weight() const;
  // Number of parts left of the peak minus number right of it.
  long rank() const { return static_cast<long>(left.size()) - static_cast<long>(right.size()); }
  bool valid() const;
  bool operator==(const OddUnimodalSeq&) const = default;
  bool operator<(const OddUnimodalSeq&) const;
};

// Exact counts ou(0..n_max) of odd unimodal sequences by weight.
// ou(0) = 0: the generating function has no constant term.
std::vector<bigint> ou_counts(std::size_t n_max);

// Number of odd unimodal sequences of weight n whose peak is 2m+1,
// i.e. the coefficient of q^n in q^{2m+1} / (q; q^2)_{m+1}^2.
bigint ou_by_peak(std::size_t n, std::size_t m);

// All peak-resolved counts of a fixed weight: entry m is ou_m(n_max),
// for 2m+1 <= n_max.  One shared product pass instead of a pass per peak.
std::vector<bigint> ou_by_peak_row(std::size_t n_max);

// Counts by rank at fixed weight: counts[m] = number of sequences of
// weight n and rank m.  Symmetric in m by left/right reflection.
struct RankDistribution {
  std::size_t n = 0;
  std::map<long, bigint> counts;
  bigint total() const;
};

RankDistribution rank_distribution(std::size_t n);

// Rank distributions indexed by weight, 0..n_max, from one shared pass.
// Entry 0 is empty: there is no sequence of weight zero.
std::vector<RankDistribution> rank_distribution_table(std::size_t n_max);

/* Exact rank power sums: row n holds mu_ell(n) = sum_m m^ell ou(m,n) for
 * 0 <= ell <= max_moment.  mu_0 is the plain count; odd moments vanish by
 * the reflection symmetry.  Computed by moment transport, so it reaches
 * weights far beyond what full rank distributions allow.
 */
std::vector<std::vector<bigint>> rank_moments(std::size_t n_max,
                                              unsigned max_moment);

// Every odd unimodal sequence of weight n, in a deterministic order.
// Exponential in n; refuses n > 44.
std::vector<OddUnimodalSeq> brute_force_enumerate(std::size_t n);

// Exact partition counts p(0..n_max), p(0) = 1.
std::vector<bigint> partition_count(std::size_t n_max);

/* Exact rank and crank counts for partitions of n, from their generating
 * series, cross-checkable against direct statistics of the partition list.
 * For n = 1 the crank series gives M(-1,1) = M(1,1) = 1, M(0,1) = -1,
 * which is the standard convention baked into the series.
 */
struct RankCrankTables {
  std::size_t n = 0;
  std::map<long, bigint> rank;   // N(m, n)
  std::map<long, bigint> crank;  // M(m, n)
};

RankCrankTables rank_crank_tables(std::size_t n);

// Direct statistics oracles over explicit partition lists (weakly
// decreasing positive parts).
std::vector<std::vector<int>> enumerate_partitions(std::size_t n);
long partition_dyson_rank(const std::vector<int>& parts);
long partition_crank(const std::vector<int>& parts);

}  // namespace oustat
