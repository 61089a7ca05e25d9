#include "partsim/rand_index.hpp"

#include <cmath>
#include <stdexcept>

namespace partsim {

namespace {

double choose2(std::uint64_t s) {
  return 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
}

double agree_prob(double p_a, double p_b) { return p_a * p_b + (1.0 - p_a) * (1.0 - p_b); }

double intra_fraction(std::span<const std::uint64_t> sizes, std::uint64_t n) {
  if (n < 2) throw std::domain_error("rand expectations need n >= 2");
  return static_cast<double>(intra_pairs(sizes)) / choose2(n);
}

void check_sizes(std::span<const std::uint64_t> sizes, std::uint64_t n,
                 const char* who) {
  std::uint64_t total = 0;
  for (std::uint64_t s : sizes) {
    if (s == 0) throw std::domain_error(std::string(who) + ": empty cluster");
    total += s;
  }
  if (total != n)
    throw std::domain_error(std::string(who) + ": cluster sizes do not sum to n");
}

}  // namespace

double rand_index(const ContingencyTable& t) {
  if (t.n_elements < 2)
    throw std::domain_error("rand index needs at least two elements");
  PairCounts pc = pair_counts(t);
  return static_cast<double>(pc.n11 + pc.n00) / choose2(t.n_elements);
}

double rand_index(const Clustering& a, const Clustering& b) {
  return rand_index(contingency(a, b));
}

double expected_rand_perm(std::span<const std::uint64_t> sizes_a,
                          std::span<const std::uint64_t> sizes_b,
                          std::uint64_t n) {
  check_sizes(sizes_a, n, "expected_rand_perm");
  check_sizes(sizes_b, n, "expected_rand_perm");
  return agree_prob(intra_fraction(sizes_a, n), intra_fraction(sizes_b, n));
}

double expected_rand_num(std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n,
                         const Combinatorics& comb) {
  if (n < 2) throw std::domain_error("rand expectations need n >= 2");
  return agree_prob(comb.stirling_ratio(n, k_a), comb.stirling_ratio(n, k_b));
}

double expected_rand_num_approx(std::uint64_t k_a, std::uint64_t k_b) {
  if (k_a == 0 || k_b == 0) throw std::domain_error("cluster counts must be positive");
  return agree_prob(1.0 / static_cast<double>(k_a), 1.0 / static_cast<double>(k_b));
}

double expected_rand_all(std::uint64_t n, const Combinatorics& comb) {
  if (n < 2) throw std::domain_error("rand expectations need n >= 2");
  double r = comb.bell_ratio(n);
  return agree_prob(r, r);
}

double expected_rand_all_approx(std::uint64_t n) {
  if (n < 2) throw std::domain_error("rand expectations need n >= 2");
  double r = std::log(static_cast<double>(n)) / static_cast<double>(n);
  return agree_prob(r, r);
}

double expected_rand_num_one_sided(std::uint64_t k_random, std::uint64_t n,
                                   std::span<const std::uint64_t> ref_sizes,
                                   const Combinatorics& comb) {
  check_sizes(ref_sizes, n, "expected_rand_num_one_sided");
  return agree_prob(comb.stirling_ratio(n, k_random), intra_fraction(ref_sizes, n));
}

double expected_rand_all_one_sided(std::uint64_t n,
                                   std::span<const std::uint64_t> ref_sizes,
                                   const Combinatorics& comb) {
  check_sizes(ref_sizes, n, "expected_rand_all_one_sided");
  return agree_prob(comb.bell_ratio(n), intra_fraction(ref_sizes, n));
}

ScoreBreakdown rand_comparison(const Clustering& a, const Clustering& b,
                               const RandSpec& spec, const Combinatorics& comb) {
  ScoreBreakdown out;
  out.raw = rand_index(a, b);
  out.max_bound = 1.0;

  const std::uint64_t n = a.n_elements();
  const Clustering& ref = spec.reference_side == Side::a ? a : b;
  const Clustering& rnd = spec.reference_side == Side::a ? b : a;

  switch (spec.model) {
    case Model::none:
      out.expectation = 0.0;
      break;
    case Model::perm:
      // Permuting one side or both gives the same pair-agreement expectation.
      out.expectation = expected_rand_perm(a.sizes(), b.sizes(), n);
      break;
    case Model::num:
      if (spec.approx) {
        out.expectation = expected_rand_num_approx(rnd.n_clusters(), ref.n_clusters());
      } else if (spec.one_sided) {
        out.expectation =
            expected_rand_num_one_sided(rnd.n_clusters(), n, ref.sizes(), comb);
      } else {
        out.expectation = expected_rand_num(a.n_clusters(), b.n_clusters(), n, comb);
      }
      break;
    case Model::all:
      if (spec.approx) {
        out.expectation = expected_rand_all_approx(n);
      } else if (spec.one_sided) {
        out.expectation = expected_rand_all_one_sided(n, ref.sizes(), comb);
      } else {
        out.expectation = expected_rand_all(n, comb);
      }
      break;
  }
  out.adjusted = adjusted_score(out.raw, out.expectation, out.max_bound);
  return out;
}

double adjusted_rand(const Clustering& a, const Clustering& b,
                     const RandSpec& spec, const Combinatorics& comb) {
  return rand_comparison(a, b, spec, comb).adjusted;
}

}  // namespace partsim
