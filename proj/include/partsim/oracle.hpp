#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "partsim/clustering.hpp"
#include "partsim/combinatorics.hpp"
#include "partsim/exact.hpp"
#include "partsim/model.hpp"

namespace partsim::oracle {

/// Hard ceilings for brute-force enumeration. Partition streams walk B(n)
/// partitions, relabeling orbits walk n! permutations.
inline constexpr std::uint64_t enum_ceiling = 12;
inline constexpr std::uint64_t perm_ceiling = 8;

/// Visits every partition of [n] exactly once, as a restricted-growth code
/// (codes[i] = cluster of element i, clusters numbered by first appearance).
void for_each_partition(std::uint64_t n,
                        const std::function<void(std::span<const std::uint8_t>)>& visit);

/// Same restricted to partitions with exactly k clusters.
void for_each_partition_k(std::uint64_t n, std::uint64_t k,
                          const std::function<void(std::span<const std::uint8_t>)>& visit);

/// Visits membership under all n! element relabelings of `codes` (orbit
/// visits repeat partitions with the orbit multiplicity, which is what a
/// uniform-permutation average wants).
void for_each_relabeling(std::span<const std::uint8_t> codes,
                         const std::function<void(std::span<const std::uint8_t>)>& visit);

std::uint64_t count_partitions(std::uint64_t n);
std::uint64_t count_partitions_k(std::uint64_t n, std::uint64_t k);

/// All size sequences (descending) of partitions of n, lexicographically.
std::vector<std::vector<std::uint64_t>> size_sequences(std::uint64_t n);

/// Canonical clustering with the given cluster sizes: consecutive elements.
Clustering clustering_from_sizes(std::span<const std::uint64_t> sizes);

// Exact ensemble averages of the Rand index, as rationals. The `factored`
// variants compute the same value through the per-element-pair agreement
// probabilities instead of averaging per-partition scores; the two routes
// must agree exactly.
BigRat enum_rand_num(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b);
BigRat enum_rand_num_factored(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b);
BigRat enum_rand_all(std::uint64_t n);
BigRat enum_rand_all_factored(std::uint64_t n);
BigRat enum_rand_perm(std::span<const std::uint64_t> sizes_a,
                      std::span<const std::uint64_t> sizes_b);
BigRat enum_rand_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                               const Clustering& ref);
BigRat enum_rand_all_one_sided(std::uint64_t n, const Clustering& ref);

// High-precision ensemble averages of information measures (nats).
HighFloat enum_entropy_num(std::uint64_t n, std::uint64_t k);
HighFloat enum_entropy_all(std::uint64_t n);
HighFloat enum_joint_entropy_num(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b);
HighFloat enum_joint_entropy_all(std::uint64_t n);
HighFloat enum_mi_num(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b);
HighFloat enum_mi_all(std::uint64_t n);
HighFloat enum_mi_perm(std::span<const std::uint64_t> sizes_a,
                       std::span<const std::uint64_t> sizes_b);
HighFloat enum_mi_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                                const Clustering& ref);
HighFloat enum_mi_all_one_sided(std::uint64_t n, const Clustering& ref);
HighFloat enum_joint_entropy_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                                           const Clustering& ref);
HighFloat enum_joint_entropy_all_one_sided(std::uint64_t n, const Clustering& ref);
HighFloat enum_mi_perm_one_sided(const Clustering& random_side, const Clustering& ref);

/// One closed-form-vs-enumeration comparison family.
struct FormulaCheck {
  std::string name;
  std::uint64_t max_n = 0;      // enumeration ceiling actually used
  std::uint64_t cases = 0;      // parameter combinations compared
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  bool passed = false;
};

/// Compares every closed-form expectation in the library against the
/// enumeration oracle, each family up to min(its ceiling, max_n). `perturb`
/// scales all formula outputs by (1 + perturb) first; a perturbation larger
/// than a family's tolerance must turn that family red (negative control).
std::vector<FormulaCheck> verify_formulas(std::uint64_t max_n,
                                          const Combinatorics& comb,
                                          double perturb = 0.0);

}  // namespace partsim::oracle
