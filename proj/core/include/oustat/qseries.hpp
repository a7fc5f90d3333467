#pragma once

#include <oustat/bigint.hpp>

#include <cstddef>
#include <vector>

namespace oustat {

/* Power series in q over the integers, truncated at a fixed order N.
 * coeff(n) is the coefficient of q^n for 0 <= n <= N.  Operations never
 * grow the order implicitly; combining series of different orders is an
 * error.  The free functions below return fresh values; the in-place
 * members exist for the hot accumulation loops and keep the same
 * semantics (the object is a value, not a shared handle).
 */
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : c_(order + 1) {}

  // The multiplicative unit 1 + 0*q + ...
  static TruncatedSeries one(std::size_t order) {
    TruncatedSeries s(order);
    s.c_[0] = 1;
    return s;
  }

  std::size_t order() const { return c_.size() - 1; }
  const bigint& coeff(std::size_t n) const { return c_[n]; }
  bigint& coeff(std::size_t n) { return c_[n]; }

  /* Multiply in place by (1 - q^g)^{-1}, the geometric series over gap g.
   * One ascending prefix pass: c(n) += c(n-g).
   */
  void mul_inv_onefactor(std::size_t g);

  // Multiply in place by (1 - q^g), the inverse of the pass above.
  void mul_onefactor(std::size_t g);

  // acc(n) += this(n - shift) for all n >= shift.
  void add_shifted_into(TruncatedSeries& acc, std::size_t shift) const;

  bool operator==(const TruncatedSeries& o) const { return c_ == o.c_; }

 private:
  std::vector<bigint> c_;
};

// Cauchy product truncated at the common order.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/* Truncation of prod_{k=0}^{t-1} (1 - q^{c + k*d})^{-p}.  A negative t
 * means "all factors with exponent c + k*d <= order".  Requires c >= 1,
 * d >= 1, p >= 1.
 */
TruncatedSeries inv_factor(std::size_t c, std::size_t d, long t,
                           std::size_t p, std::size_t order);

/* A power series whose coefficients carry a rank grading, stored as
 * power sums: mu_j(n) = sum_m m^j * a(m, n) where a(m, n) is the count
 * of objects of weight n and rank m.  Tracking the first L power sums
 * through products is enough for every moment-level quantity downstream
 * and avoids expanding a full Laurent polynomial in the rank variable.
 */
class MomentSeries {
 public:
  MomentSeries(std::size_t order, unsigned max_moment)
      : order_(order),
        max_moment_(max_moment),
        mu_(max_moment + 1, std::vector<bigint>(order + 1)) {}

  // The unit: one object of weight 0 and rank 0.
  static MomentSeries one(std::size_t order, unsigned max_moment) {
    MomentSeries s(order, max_moment);
    s.mu_[0][0] = 1;
    return s;
  }

  std::size_t order() const { return order_; }
  unsigned max_moment() const { return max_moment_; }
  const bigint& mu(unsigned j, std::size_t n) const { return mu_[j][n]; }
  bigint& mu(unsigned j, std::size_t n) { return mu_[j][n]; }

  /* Multiply in place by 1/(1 - zeta^w q^d) where zeta grades the rank and
   * w is +1 or -1: each new part adds d to the weight and w to the rank.
   * Shifting ranks by w turns power sums into the binomial mixture
   *   mu_j'(n) = mu_j(n) + sum_{i<=j} C(j,i) w^{j-i} mu_i'(n-d),
   * which an ascending pass over n applies in place.
   */
  void mul_inv_rank_factor(int w, std::size_t d);

  // acc.mu_j(n) += this.mu_j(n - shift): multiplication by q^shift
  // (no rank change) accumulated into acc.
  void add_shifted_into(MomentSeries& acc, std::size_t shift) const;

 private:
  std::size_t order_;
  unsigned max_moment_;
  std::vector<std::vector<bigint>> mu_;
};

/* Full product of two rank-graded series.  Ranks add, so power sums
 * combine binomially:
 *   mu_j(n) = sum_{n1+n2=n} sum_i C(j,i) mu_i^(a)(n1) mu_{j-i}^(b)(n2).
 */
MomentSeries moment_mul(const MomentSeries& a, const MomentSeries& b);

}  // namespace oustat
