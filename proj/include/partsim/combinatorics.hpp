#pragma once

#include <cstdint>
#include <vector>

#include "partsim/exact.hpp"
#include "partsim/log_real.hpp"

namespace partsim {

/// Precomputed Stirling-number-of-the-second-kind and Bell-number tables.
///
/// Log-space tables cover n <= n_max. Rows up to exact_threshold are derived
/// from exact big-integer values (so the log entries there are correct to
/// 0.5 ulp); later rows extend the triangle with the recurrence
/// S(n+1, k) = k S(n, k) + S(n, k-1) evaluated with log-add-exp.
///
/// A column cap (k_max) bounds memory to O(n_max * k_max) for jobs that only
/// need fixed-K quantities at large N; Bell numbers need full rows and are
/// unavailable on a capped engine.
class Combinatorics {
 public:
  static constexpr std::uint64_t exact_threshold = 64;

  explicit Combinatorics(std::uint64_t n_max, std::uint64_t k_max = 0);

  std::uint64_t n_max() const { return n_max_; }
  bool capped() const { return k_cap_ != 0; }
  std::uint64_t k_max() const { return k_cap_; }

  /// log S(n, k); -inf where S(n, k) = 0.
  double log_stirling2(std::uint64_t n, std::uint64_t k) const;

  /// Exact S(n, k) for n <= min(n_max, exact_threshold).
  const BigInt& stirling2_exact(std::uint64_t n, std::uint64_t k) const;

  /// log B(n); requires an uncapped engine.
  double log_bell(std::uint64_t n) const;

  /// Exact B(n) for n <= min(n_max, exact_threshold) on an uncapped engine.
  const BigInt& bell_exact(std::uint64_t n) const;

  /// S(n-1, k) / S(n, k): the probability that a fixed element is in a given
  /// cluster's complement... equivalently the one-element deletion ratio used
  /// by the fixed-K expectations. Returns 0 when k = n.
  double stirling_ratio(std::uint64_t n, std::uint64_t k) const;

  /// B(n-1) / B(n).
  double bell_ratio(std::uint64_t n) const;

  static double log_factorial(std::uint64_t n);

  /// log C(n, k); -inf when k > n.
  static double log_binomial(std::uint64_t n, std::uint64_t k);

  /// Exact C(n, k) by the multiplicative formula.
  static BigInt binomial_exact(std::uint64_t n, std::uint64_t k);

  /// P(n overlap) for a size-a and a size-b subset of an N-set:
  /// C(b, n) C(N-b, a-n) / C(N, a). Zero outside the support
  /// [max(0, a+b-N), min(a, b)].
  static double hypergeom_pmf(std::uint64_t n, std::uint64_t big_n,
                              std::uint64_t a, std::uint64_t b);
  static double hypergeom_log_pmf(std::uint64_t n, std::uint64_t big_n,
                                  std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t row_width(std::uint64_t n) const;
  const double* row(std::uint64_t n) const { return &log_s_[offset_[n]]; }

  std::uint64_t n_max_;
  std::uint64_t k_cap_;
  std::vector<std::uint64_t> offset_;
  std::vector<double> log_s_;
  std::vector<double> log_bell_;
  std::vector<std::vector<BigInt>> exact_s_;
  std::vector<BigInt> exact_bell_;
};

/// Iterates the hypergeometric pmf over its support with the term-ratio
/// recurrence, so inner expectation loops cost O(1) per support point.
class HypergeomScan {
 public:
  HypergeomScan(std::uint64_t big_n, std::uint64_t a, std::uint64_t b);

  bool done() const { return n_ > hi_; }
  std::uint64_t overlap() const { return n_; }
  double pmf() const { return p_; }

  void advance() {
    double num = static_cast<double>(b_ - n_) * static_cast<double>(a_ - n_);
    double den = static_cast<double>(n_ + 1) *
                 static_cast<double>(big_n_ - a_ - b_ + n_ + 1);
    p_ *= num / den;
    ++n_;
  }

 private:
  std::uint64_t big_n_, a_, b_;
  std::uint64_t n_, hi_;
  double p_;
};

}  // namespace partsim
