#pragma once

#include <cstdint>
#include <span>

#include "partsim/clustering.hpp"
#include "partsim/combinatorics.hpp"
#include "partsim/model.hpp"

namespace partsim {

/// Normalizer / maximum bound used for mutual information. The six choices
/// form a chain: min <= sqrt <= sum <= max <= max_log_k <= log_n.
enum class MiBound {
  min,        // min(H(A), H(B))
  sqrt,       // sqrt(H(A) H(B))
  sum,        // (H(A) + H(B)) / 2
  max,        // max(H(A), H(B))
  max_log_k,  // max(log K_A, log K_B)
  log_n,      // log N
};

std::string to_string(MiBound b);

/// I(A; B) in nats. Bitwise symmetric (terms accumulate in a canonical
/// order).
double mutual_information(const ContingencyTable& t);
double mutual_information(const Clustering& a, const Clustering& b);

/// Upper bound on I(A; B) usable as a normalizer or as the max bound of the
/// adjustment. Under Model::num the entropy-based choices degrade to their
/// log-K counterparts (cluster sizes are not fixed, only counts are); under
/// Model::all only log N remains valid.
double mi_max_bound(Model model, MiBound bound, double h_a, double h_b,
                    std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n);

/// I(A; B) / bound. Throws UndefinedAdjustmentError when the bound is zero.
double normalized_mutual_information(const Clustering& a, const Clustering& b,
                                     MiBound bound);

/// Expected MI when both size sequences are fixed and labels are permuted
/// (hypergeometric overlap distribution per cluster pair).
double expected_mi_perm(std::span<const std::uint64_t> sizes_a,
                        std::span<const std::uint64_t> sizes_b,
                        std::uint64_t n);

/// Expected entropies and MI over a uniform draw of partitions with a fixed
/// number of clusters. The joint kernel is O(N^3); `threads` splits its outer
/// loop into per-index slots reduced in a fixed order, so any thread count
/// produces bit-identical output.
double expected_entropy_num(std::uint64_t k, std::uint64_t n,
                            const Combinatorics& comb);
double expected_joint_entropy_num(std::uint64_t k_a, std::uint64_t k_b,
                                  std::uint64_t n, const Combinatorics& comb,
                                  unsigned threads = 1);
double expected_mi_num(std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n,
                       const Combinatorics& comb, unsigned threads = 1);

/// Same over a uniform draw of all partitions of [n].
double expected_entropy_all(std::uint64_t n, const Combinatorics& comb);
double expected_joint_entropy_all(std::uint64_t n, const Combinatorics& comb,
                                  unsigned threads = 1);
double expected_mi_all(std::uint64_t n, const Combinatorics& comb,
                       unsigned threads = 1);

/// One-sided variants against a fixed reference size sequence.
double expected_joint_entropy_num_one_sided(std::uint64_t k_random,
                                            std::uint64_t n,
                                            std::span<const std::uint64_t> ref_sizes,
                                            const Combinatorics& comb);
double expected_mi_num_one_sided(std::uint64_t k_random, std::uint64_t n,
                                 std::span<const std::uint64_t> ref_sizes,
                                 const Combinatorics& comb);
double expected_joint_entropy_all_one_sided(std::uint64_t n,
                                            std::span<const std::uint64_t> ref_sizes,
                                            const Combinatorics& comb);
double expected_mi_all_one_sided(std::uint64_t n,
                                 std::span<const std::uint64_t> ref_sizes,
                                 const Combinatorics& comb);

struct MiSpec {
  Model model = Model::perm;
  bool one_sided = false;
  Side reference_side = Side::b;
  MiBound bound = MiBound::max;
};

/// MI of (a, b) with expectation, max bound and adjusted value under the
/// requested ensemble. Model::none yields NMI (expectation 0).
ScoreBreakdown mi_comparison(const Clustering& a, const Clustering& b,
                             const MiSpec& spec, const Combinatorics& comb,
                             unsigned threads = 1);

double adjusted_mutual_information(const Clustering& a, const Clustering& b,
                                   const MiSpec& spec, const Combinatorics& comb,
                                   unsigned threads = 1);

}  // namespace partsim
