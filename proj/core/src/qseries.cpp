#include <oustat/qseries.hpp>

#include <stdexcept>

namespace oustat {

void TruncatedSeries::mul_inv_onefactor(std::size_t g) {
  if (g == 0) throw std::invalid_argument("mul_inv_onefactor: gap must be >= 1");
  for (std::size_t n = g; n < c_.size(); ++n) c_[n] += c_[n - g];
}

void TruncatedSeries::mul_onefactor(std::size_t g) {
  if (g == 0) throw std::invalid_argument("mul_onefactor: gap must be >= 1");
  for (std::size_t n = c_.size(); n-- > g;) c_[n] -= c_[n - g];
}

void TruncatedSeries::add_shifted_into(TruncatedSeries& acc,
                                       std::size_t shift) const {
  if (acc.order() != order())
    throw std::invalid_argument("add_shifted_into: order mismatch");
  for (std::size_t n = shift; n < c_.size(); ++n) acc.c_[n] += c_[n - shift];
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.order() != b.order())
    throw std::invalid_argument("series_mul: order mismatch");
  const std::size_t N = a.order();
  TruncatedSeries r(N);
  for (std::size_t i = 0; i <= N; ++i) {
    if (a.coeff(i) == 0) continue;
    for (std::size_t j = 0; i + j <= N; ++j) {
      if (b.coeff(j) == 0) continue;
      r.coeff(i + j) += a.coeff(i) * b.coeff(j);
    }
  }
  return r;
}

TruncatedSeries inv_factor(std::size_t c, std::size_t d, long t,
                           std::size_t p, std::size_t order) {
  if (c < 1 || d < 1 || p < 1)
    throw std::invalid_argument("inv_factor: need c >= 1, d >= 1, p >= 1");
  TruncatedSeries r = TruncatedSeries::one(order);
  for (std::size_t k = 0;; ++k) {
    const std::size_t g = c + k * d;
    if (g > order) break;
    if (t >= 0 && k >= static_cast<std::size_t>(t)) break;
    for (std::size_t rep = 0; rep < p; ++rep) r.mul_inv_onefactor(g);
  }
  return r;
}

void MomentSeries::mul_inv_rank_factor(int w, std::size_t d) {
  if (w != 1 && w != -1)
    throw std::invalid_argument("mul_inv_rank_factor: rank weight must be +-1");
  if (d == 0) throw std::invalid_argument("mul_inv_rank_factor: gap must be >= 1");
  const unsigned L = max_moment_;
  // C(j,i) * w^{j-i} is small; precompute it as signed machine words.
  std::vector<std::vector<long>> cw(L + 1, std::vector<long>(L + 1, 0));
  for (unsigned j = 0; j <= L; ++j)
    for (unsigned i = 0; i <= j; ++i) {
      long b = binomial(j, i).get_si();
      cw[j][i] = ((j - i) % 2 == 1 && w < 0) ? -b : b;
    }
  for (std::size_t n = d; n <= order_; ++n)
    for (unsigned j = 0; j <= L; ++j) {
      bigint acc = 0;
      for (unsigned i = 0; i <= j; ++i) {
        if (mu_[i][n - d] == 0) continue;
        if (cw[j][i] >= 0)
          mpz_addmul_ui(acc.get_mpz_t(), mu_[i][n - d].get_mpz_t(),
                        static_cast<unsigned long>(cw[j][i]));
        else
          mpz_submul_ui(acc.get_mpz_t(), mu_[i][n - d].get_mpz_t(),
                        static_cast<unsigned long>(-cw[j][i]));
      }
      mu_[j][n] += acc;
    }
}

void MomentSeries::add_shifted_into(MomentSeries& acc,
                                    std::size_t shift) const {
  if (acc.order() != order_ || acc.max_moment() != max_moment_)
    throw std::invalid_argument("add_shifted_into: shape mismatch");
  for (unsigned j = 0; j <= max_moment_; ++j)
    for (std::size_t n = shift; n <= order_; ++n)
      acc.mu_[j][n] += mu_[j][n - shift];
}

MomentSeries moment_mul(const MomentSeries& a, const MomentSeries& b) {
  if (a.order() != b.order() || a.max_moment() != b.max_moment())
    throw std::invalid_argument("moment_mul: shape mismatch");
  const std::size_t N = a.order();
  const unsigned L = a.max_moment();
  MomentSeries r(N, L);
  for (unsigned j = 0; j <= L; ++j)
    for (unsigned i = 0; i <= j; ++i) {
      const bigint bc = binomial(j, i);
      for (std::size_t n1 = 0; n1 <= N; ++n1) {
        if (a.mu(i, n1) == 0) continue;
        const bigint f = bc * a.mu(i, n1);
        for (std::size_t n2 = 0; n1 + n2 <= N; ++n2) {
          if (b.mu(j - i, n2) == 0) continue;
          r.mu(j, n1 + n2) += f * b.mu(j - i, n2);
        }
      }
    }
  return r;
}

}  // namespace oustat
