#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace partsim {

/// A hard partition of elements 0..N-1, stored as a restricted-growth
/// membership vector: cluster ids are assigned by first appearance, so two
/// partitions are equal iff their membership vectors are equal.
class Clustering {
 public:
  static Clustering from_membership(std::span<const std::uint32_t> membership);

  /// Groups elements by label value; cluster ids follow first appearance.
  template <typename Label>
  static Clustering from_labels(const std::vector<Label>& labels) {
    std::vector<std::uint32_t> memb(labels.size());
    std::map<Label, std::uint32_t> ids;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = ids.emplace(labels[i], static_cast<std::uint32_t>(ids.size()));
      (void)fresh;
      memb[i] = it->second;
    }
    return from_membership(memb);
  }

  std::uint64_t n_elements() const { return membership_.size(); }
  std::uint64_t n_clusters() const { return sizes_.size(); }
  const std::vector<std::uint32_t>& membership() const { return membership_; }
  const std::vector<std::uint64_t>& sizes() const { return sizes_; }
  std::vector<std::vector<std::uint32_t>> clusters() const;

  bool operator==(const Clustering&) const = default;

 private:
  Clustering() = default;

  std::vector<std::uint32_t> membership_;
  std::vector<std::uint64_t> sizes_;
};

struct ContingencyTable {
  struct Cell {
    std::uint32_t row;
    std::uint32_t col;
    std::uint64_t count;
  };

  std::uint64_t n_elements = 0;
  std::vector<std::uint64_t> row_sums;
  std::vector<std::uint64_t> col_sums;
  std::vector<Cell> cells;  // nonzero cells, row-major order
};

/// Joint cluster-overlap counts. Throws ElementMismatchError when the two
/// clusterings cover different numbers of elements.
ContingencyTable contingency(const Clustering& a, const Clustering& b);

/// Element-pair agreement counts between two partitions.
struct PairCounts {
  std::uint64_t n11 = 0;  // co-clustered in both
  std::uint64_t n10 = 0;  // co-clustered in A only
  std::uint64_t n01 = 0;  // co-clustered in B only
  std::uint64_t n00 = 0;  // separated in both
};

PairCounts pair_counts(const ContingencyTable& t);

/// Number of intra-cluster element pairs, sum of C(size, 2).
std::uint64_t intra_pairs(std::span<const std::uint64_t> sizes);

/// Shannon entropy of the size distribution, in nats.
double entropy_nats(std::span<const std::uint64_t> sizes, std::uint64_t n_total);

/// Joint entropy of the overlap distribution, in nats. Terms are accumulated
/// in a canonical (sorted) order so the result is bitwise symmetric in the
/// two clusterings.
double joint_entropy_nats(const ContingencyTable& t);

}  // namespace partsim
