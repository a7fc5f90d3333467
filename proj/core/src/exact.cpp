#include <oustat/exact.hpp>

#include <oustat/errors.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oustat {

namespace {

/* Dense rank-graded coefficient table a(e, n) for |e| <= N, 0 <= n <= N,
 * with in-place multiplication by 1/(1 - zeta^w q^d).  The recurrence
 *   a'(e, n) = a(e, n) + a'(e - w, n - d)
 * only reads rows that an ascending pass over n has already finished,
 * so the update is in place.  Ranks can never exceed the weight spent
 * (every part weighs at least 1), which keeps the live band triangular.
 */
class RankGrid {
 public:
  explicit RankGrid(std::size_t order)
      : N_(static_cast<long>(order)), a_((2 * order + 1) * (order + 1)) {}

  bigint& at(long e, long n) { return a_[idx(e, n)]; }
  const bigint& at(long e, long n) const { return a_[idx(e, n)]; }
  long order() const { return N_; }

  void mul_inv_rank_factor(int w, long d) {
    for (long n = d; n <= N_; ++n) {
      const long lim = n - d;
      for (long e = -lim + w; e <= lim + w; ++e) {
        const bigint& src = a_[idx(e - w, n - d)];
        if (src != 0) a_[idx(e, n)] += src;
      }
    }
  }

  // acc(e, n) += this(e, n - shift)
  void add_shifted_into(RankGrid& acc, long shift) const {
    for (long n = shift; n <= N_; ++n) {
      const long lim = n - shift;
      for (long e = -lim; e <= lim; ++e) {
        const bigint& src = a_[idx(e, n - shift)];
        if (src != 0) acc.at(e, n) += src;
      }
    }
  }

 private:
  std::size_t idx(long e, long n) const {
    return static_cast<std::size_t>(e + N_) * (N_ + 1) + n;
  }

  long N_;
  std::vector<bigint> a_;
};

RankDistribution extract_row(const RankGrid& grid, std::size_t n) {
  RankDistribution dist;
  dist.n = n;
  const long nn = static_cast<long>(n);
  for (long e = -nn; e <= nn; ++e)
    if (grid.at(e, nn) != 0) dist.counts[e] = grid.at(e, nn);
  return dist;
}

// All partitions of `remaining` into odd parts <= maxpart, each emitted as
// a weakly decreasing list.
void odd_partitions_rec(int remaining, int maxpart, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  int start = std::min(maxpart, remaining);
  if (start % 2 == 0) --start;
  for (int p = start; p >= 1; p -= 2) {
    cur.push_back(p);
    odd_partitions_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

void partitions_rec(int remaining, int maxpart, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(maxpart, remaining); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

long OddUnimodalSeq::weight() const {
  long w = peak;
  for (int p : left) w += p;
  for (int p : right) w += p;
  return w;
}

bool OddUnimodalSeq::valid() const {
  if (peak < 1 || peak % 2 == 0) return false;
  for (int p : left)
    if (p < 1 || p % 2 == 0 || p > peak) return false;
  for (int p : right)
    if (p < 1 || p % 2 == 0 || p > peak) return false;
  if (!std::is_sorted(left.begin(), left.end())) return false;
  if (!std::is_sorted(right.rbegin(), right.rend())) return false;
  return true;
}

bool OddUnimodalSeq::operator<(const OddUnimodalSeq& o) const {
  if (peak != o.peak) return peak < o.peak;
  if (left != o.left) return left < o.left;
  return right < o.right;
}

std::vector<bigint> ou_counts(std::size_t n_max) {
  TruncatedSeries prod = TruncatedSeries::one(n_max);
  TruncatedSeries total(n_max);
  for (std::size_t m = 0; 2 * m + 1 <= n_max; ++m) {
    const std::size_t g = 2 * m + 1;
    prod.mul_inv_onefactor(g);
    prod.mul_inv_onefactor(g);
    prod.add_shifted_into(total, g);
  }
  std::vector<bigint> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) out[n] = total.coeff(n);
  return out;
}

bigint ou_by_peak(std::size_t n, std::size_t m) {
  const std::size_t peak = 2 * m + 1;
  if (n < 1) return bigint(0);
  if (peak > n) return bigint(0);
  const std::size_t rest = n - peak;
  TruncatedSeries prod = TruncatedSeries::one(rest);
  for (std::size_t k = 1; k <= m + 1; ++k) {
    const std::size_t g = 2 * k - 1;
    if (g > rest) break;
    prod.mul_inv_onefactor(g);
    prod.mul_inv_onefactor(g);
  }
  return prod.coeff(rest);
}

std::vector<bigint> ou_by_peak_row(std::size_t n_max) {
  std::vector<bigint> row;
  if (n_max < 1) return row;
  TruncatedSeries prod = TruncatedSeries::one(n_max);
  for (std::size_t m = 0; 2 * m + 1 <= n_max; ++m) {
    const std::size_t g = 2 * m + 1;
    prod.mul_inv_onefactor(g);
    prod.mul_inv_onefactor(g);
    row.push_back(prod.coeff(n_max - g));
  }
  return row;
}

bigint RankDistribution::total() const {
  bigint t = 0;
  for (const auto& [e, c] : counts) t += c;
  return t;
}

std::vector<RankDistribution> rank_distribution_table(std::size_t n_max) {
  RankGrid prod(n_max);
  prod.at(0, 0) = 1;
  RankGrid total(n_max);
  for (long m = 0; 2 * m + 1 <= static_cast<long>(n_max); ++m) {
    const long d = 2 * m + 1;
    prod.mul_inv_rank_factor(+1, d);
    prod.mul_inv_rank_factor(-1, d);
    prod.add_shifted_into(total, d);
  }
  std::vector<RankDistribution> table;
  table.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) table.push_back(extract_row(total, n));
  return table;
}

RankDistribution rank_distribution(std::size_t n) {
  if (n < 1) throw std::invalid_argument("rank_distribution: weight must be >= 1");
  return rank_distribution_table(n).back();
}

std::vector<std::vector<bigint>> rank_moments(std::size_t n_max,
                                              unsigned max_moment) {
  MomentSeries prod = MomentSeries::one(n_max, max_moment);
  MomentSeries total(n_max, max_moment);
  for (std::size_t m = 0; 2 * m + 1 <= n_max; ++m) {
    const std::size_t d = 2 * m + 1;
    prod.mul_inv_rank_factor(+1, d);
    prod.mul_inv_rank_factor(-1, d);
    prod.add_shifted_into(total, d);
  }
  std::vector<std::vector<bigint>> out(n_max + 1,
                                       std::vector<bigint>(max_moment + 1));
  for (std::size_t n = 0; n <= n_max; ++n)
    for (unsigned j = 0; j <= max_moment; ++j) out[n][j] = total.mu(j, n);
  return out;
}

std::vector<OddUnimodalSeq> brute_force_enumerate(std::size_t n) {
  if (n > 44)
    throw resource_error("brute_force_enumerate: n > 44 would enumerate too many sequences");
  std::vector<OddUnimodalSeq> out;
  if (n < 1) return out;
  for (int peak = 1; static_cast<std::size_t>(peak) <= n; peak += 2) {
    const int rest = static_cast<int>(n) - peak;
    // Pre-list the side partitions once per (budget, peak) pair.
    std::vector<std::vector<std::vector<int>>> by_sum(rest + 1);
    for (int s = 0; s <= rest; ++s) {
      std::vector<int> cur;
      odd_partitions_rec(s, peak, cur, by_sum[s]);
    }
    for (int s = 0; s <= rest; ++s)
      for (const auto& lhs : by_sum[s])
        for (const auto& rhs : by_sum[rest - s]) {
          OddUnimodalSeq seq;
          seq.left.assign(lhs.rbegin(), lhs.rend());  // ascending
          seq.peak = peak;
          seq.right = rhs;  // descending
          out.push_back(std::move(seq));
        }
  }
  return out;
}

std::vector<bigint> partition_count(std::size_t n_max) {
  TruncatedSeries p = inv_factor(1, 1, -1, 1, n_max);
  std::vector<bigint> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) out[n] = p.coeff(n);
  return out;
}

RankCrankTables rank_crank_tables(std::size_t n) {
  if (n < 1) throw std::invalid_argument("rank_crank_tables: weight must be >= 1");
  RankCrankTables tables;
  tables.n = n;

  // Rank series: sum over Durfee sides j of q^{j^2} with j rank-raising
  // and j rank-lowering column factors.
  {
    RankGrid prod(n);
    prod.at(0, 0) = 1;
    RankGrid total(n);
    total.at(0, 0) = 1;  // the empty partition, weight 0
    for (long j = 1; j * j <= static_cast<long>(n); ++j) {
      prod.mul_inv_rank_factor(+1, j);
      prod.mul_inv_rank_factor(-1, j);
      prod.add_shifted_into(total, j * j);
    }
    tables.rank = extract_row(total, n).counts;
  }

  // Crank series: (q; q)_inf over the two rank-graded Pochhammers.
  {
    TruncatedSeries euler = TruncatedSeries::one(n);
    for (std::size_t g = 1; g <= n; ++g) euler.mul_onefactor(g);
    RankGrid grid(n);
    for (std::size_t k = 0; k <= n; ++k)
      if (euler.coeff(k) != 0) grid.at(0, static_cast<long>(k)) = euler.coeff(k);
    for (long g = 1; g <= static_cast<long>(n); ++g) {
      grid.mul_inv_rank_factor(+1, g);
      grid.mul_inv_rank_factor(-1, g);
    }
    tables.crank = extract_row(grid, n).counts;
  }
  return tables;
}

std::vector<std::vector<int>> enumerate_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(static_cast<int>(n), static_cast<int>(n), cur, out);
  return out;
}

long partition_dyson_rank(const std::vector<int>& parts) {
  if (parts.empty()) throw std::invalid_argument("rank of the empty partition");
  return parts.front() - static_cast<long>(parts.size());
}

long partition_crank(const std::vector<int>& parts) {
  if (parts.empty()) throw std::invalid_argument("crank of the empty partition");
  const long ones = std::count(parts.begin(), parts.end(), 1);
  if (ones == 0) return parts.front();
  const long bigger =
      std::count_if(parts.begin(), parts.end(), [&](int p) { return p > ones; });
  return bigger - ones;
}

}  // namespace oustat
