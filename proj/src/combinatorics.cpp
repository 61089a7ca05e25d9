#include "partsim/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "partsim/numerics.hpp"

namespace partsim {

namespace {

double log_of_bigint(const BigInt& v) {
  if (v == 0) return neg_inf;
  return static_cast<double>(log(HighFloat(v)));
}

}  // namespace

Combinatorics::Combinatorics(std::uint64_t n_max, std::uint64_t k_max)
    : n_max_(n_max), k_cap_(k_max) {
  offset_.resize(n_max_ + 2);
  std::uint64_t total = 0;
  for (std::uint64_t n = 0; n <= n_max_; ++n) {
    offset_[n] = total;
    total += row_width(n) + 1;
  }
  offset_[n_max_ + 1] = total;
  log_s_.assign(total, neg_inf);

  const std::uint64_t exact_rows = std::min(n_max_, exact_threshold);
  exact_s_.resize(exact_rows + 1);
  for (std::uint64_t n = 0; n <= exact_rows; ++n)
    exact_s_[n].assign(row_width(n) + 1, BigInt(0));
  exact_s_[0][0] = 1;

  for (std::uint64_t n = 1; n <= exact_rows; ++n) {
    const std::uint64_t w = row_width(n), wp = row_width(n - 1);
    for (std::uint64_t k = 1; k <= w; ++k) {
      BigInt v = 0;
      if (k <= wp) v = BigInt(k) * exact_s_[n - 1][k];
      if (k - 1 <= wp) v += exact_s_[n - 1][k - 1];
      exact_s_[n][k] = v;
    }
  }
  for (std::uint64_t n = 0; n <= exact_rows; ++n)
    for (std::uint64_t k = 0; k <= row_width(n); ++k)
      log_s_[offset_[n] + k] = log_of_bigint(exact_s_[n][k]);

  for (std::uint64_t n = exact_rows + 1; n <= n_max_; ++n) {
    const std::uint64_t w = row_width(n), wp = row_width(n - 1);
    double* cur = &log_s_[offset_[n]];
    const double* prev = &log_s_[offset_[n - 1]];
    for (std::uint64_t k = 1; k <= w; ++k) {
      double same = k <= wp ? std::log(static_cast<double>(k)) + prev[k] : neg_inf;
      double open = k - 1 <= wp ? prev[k - 1] : neg_inf;
      cur[k] = log_add_exp(same, open);
    }
  }

  if (!capped()) {
    exact_bell_.resize(exact_rows + 1);
    for (std::uint64_t n = 0; n <= exact_rows; ++n) {
      BigInt b = 0;
      for (const BigInt& s : exact_s_[n]) b += s;
      exact_bell_[n] = b;
    }
    log_bell_.resize(n_max_ + 1);
    for (std::uint64_t n = 0; n <= n_max_; ++n) {
      if (n <= exact_rows) {
        log_bell_[n] = log_of_bigint(exact_bell_[n]);
        continue;
      }
      const double* r = row(n);
      double m = neg_inf;
      for (std::uint64_t k = 1; k <= n; ++k) m = std::max(m, r[k]);
      double acc = 0.0;
      for (std::uint64_t k = 1; k <= n; ++k) acc += std::exp(r[k] - m);
      log_bell_[n] = m + std::log(acc);
    }
  }
}

std::uint64_t Combinatorics::row_width(std::uint64_t n) const {
  return k_cap_ == 0 ? n : std::min(n, k_cap_);
}

double Combinatorics::log_stirling2(std::uint64_t n, std::uint64_t k) const {
  if (n > n_max_)
    throw std::domain_error("stirling2: n = " + std::to_string(n) +
                            " exceeds table size " + std::to_string(n_max_));
  if (k > n) return neg_inf;
  if (k > row_width(n))
    throw std::domain_error("stirling2: k = " + std::to_string(k) +
                            " exceeds column cap " + std::to_string(k_cap_));
  return row(n)[k];
}

const BigInt& Combinatorics::stirling2_exact(std::uint64_t n, std::uint64_t k) const {
  if (n >= exact_s_.size())
    throw std::domain_error("stirling2_exact: n = " + std::to_string(n) +
                            " exceeds the exact threshold");
  static const BigInt zero = 0;
  if (k > row_width(n)) {
    if (k > n) return zero;
    throw std::domain_error("stirling2_exact: k exceeds column cap");
  }
  return exact_s_[n][k];
}

double Combinatorics::log_bell(std::uint64_t n) const {
  if (capped())
    throw std::domain_error("bell numbers need an uncapped table (k_max = 0)");
  if (n > n_max_)
    throw std::domain_error("bell: n = " + std::to_string(n) +
                            " exceeds table size " + std::to_string(n_max_));
  return log_bell_[n];
}

const BigInt& Combinatorics::bell_exact(std::uint64_t n) const {
  if (capped())
    throw std::domain_error("bell numbers need an uncapped table (k_max = 0)");
  if (n >= exact_bell_.size())
    throw std::domain_error("bell_exact: n = " + std::to_string(n) +
                            " exceeds the exact threshold");
  return exact_bell_[n];
}

double Combinatorics::stirling_ratio(std::uint64_t n, std::uint64_t k) const {
  if (n < 1 || k < 1 || k > n)
    throw std::domain_error("stirling_ratio needs 1 <= k <= n");
  if (k == n) return 0.0;
  return std::exp(log_stirling2(n - 1, k) - log_stirling2(n, k));
}

double Combinatorics::bell_ratio(std::uint64_t n) const {
  if (n < 1) throw std::domain_error("bell_ratio needs n >= 1");
  return std::exp(log_bell(n - 1) - log_bell(n));
}

double Combinatorics::log_factorial(std::uint64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double Combinatorics::log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return neg_inf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

BigInt Combinatorics::binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double Combinatorics::hypergeom_log_pmf(std::uint64_t n, std::uint64_t big_n,
                                        std::uint64_t a, std::uint64_t b) {
  if (a > big_n || b > big_n)
    throw std::domain_error("hypergeom: subset sizes must not exceed N");
  if (n > std::min(a, b)) return neg_inf;
  if (a + b > big_n + n) return neg_inf;
  return log_binomial(b, n) + log_binomial(big_n - b, a - n) - log_binomial(big_n, a);
}

double Combinatorics::hypergeom_pmf(std::uint64_t n, std::uint64_t big_n,
                                    std::uint64_t a, std::uint64_t b) {
  return std::exp(hypergeom_log_pmf(n, big_n, a, b));
}

HypergeomScan::HypergeomScan(std::uint64_t big_n, std::uint64_t a, std::uint64_t b)
    : big_n_(big_n), a_(a), b_(b) {
  if (a > big_n || b > big_n)
    throw std::domain_error("hypergeom: subset sizes must not exceed N");
  n_ = a + b > big_n ? a + b - big_n : 0;
  hi_ = std::min(a, b);
  p_ = Combinatorics::hypergeom_pmf(n_, big_n, a, b);
}

}  // namespace partsim
