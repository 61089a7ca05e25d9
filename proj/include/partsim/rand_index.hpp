#pragma once

#include <cstdint>
#include <span>

#include "partsim/clustering.hpp"
#include "partsim/combinatorics.hpp"
#include "partsim/model.hpp"

namespace partsim {

/// Fraction of element pairs on which the two partitions agree.
double rand_index(const ContingencyTable& t);
double rand_index(const Clustering& a, const Clustering& b);

/// Expectation when both size sequences are fixed and labels are permuted.
double expected_rand_perm(std::span<const std::uint64_t> sizes_a,
                          std::span<const std::uint64_t> sizes_b,
                          std::uint64_t n);

/// Expectation when both sides are uniform over partitions with k_a resp.
/// k_b clusters.
double expected_rand_num(std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n,
                         const Combinatorics& comb);

/// Large-N form of the above, 1/(k_a k_b) + (1 - 1/k_a)(1 - 1/k_b).
double expected_rand_num_approx(std::uint64_t k_a, std::uint64_t k_b);

/// Expectation when both sides are uniform over all partitions of [n].
double expected_rand_all(std::uint64_t n, const Combinatorics& comb);

/// Large-N form using log(n)/n for the Bell ratio.
double expected_rand_all_approx(std::uint64_t n);

/// One-sided variants: the reference clustering (its size sequence) is held
/// fixed and only the other side is randomized.
double expected_rand_num_one_sided(std::uint64_t k_random, std::uint64_t n,
                                   std::span<const std::uint64_t> ref_sizes,
                                   const Combinatorics& comb);
double expected_rand_all_one_sided(std::uint64_t n,
                                   std::span<const std::uint64_t> ref_sizes,
                                   const Combinatorics& comb);

struct RandSpec {
  Model model = Model::perm;
  bool one_sided = false;
  Side reference_side = Side::b;  // which clustering stays fixed
  bool approx = false;            // use the asymptotic expectation forms
};

/// Rand index of (a, b) with expectation, max bound and adjusted value under
/// the requested ensemble. The max bound is always 1.
ScoreBreakdown rand_comparison(const Clustering& a, const Clustering& b,
                               const RandSpec& spec, const Combinatorics& comb);

double adjusted_rand(const Clustering& a, const Clustering& b,
                     const RandSpec& spec, const Combinatorics& comb);

}  // namespace partsim
