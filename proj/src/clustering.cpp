#include "partsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "partsim/errors.hpp"
#include "partsim/numerics.hpp"

namespace partsim {

Clustering Clustering::from_membership(std::span<const std::uint32_t> membership) {
  if (membership.empty())
    throw std::domain_error("a clustering needs at least one element");

  Clustering c;
  c.membership_.resize(membership.size());
  constexpr std::uint32_t unseen = 0xffffffffu;
  std::uint32_t max_label = 0;
  for (std::uint32_t m : membership) max_label = std::max(max_label, m);
  std::vector<std::uint32_t> remap(static_cast<std::size_t>(max_label) + 1, unseen);

  std::uint32_t next = 0;
  for (std::size_t i = 0; i < membership.size(); ++i) {
    std::uint32_t& slot = remap[membership[i]];
    if (slot == unseen) {
      slot = next++;
      c.sizes_.push_back(0);
    }
    c.membership_[i] = slot;
    ++c.sizes_[slot];
  }
  return c;
}

std::vector<std::vector<std::uint32_t>> Clustering::clusters() const {
  std::vector<std::vector<std::uint32_t>> out(sizes_.size());
  for (std::size_t k = 0; k < sizes_.size(); ++k) out[k].reserve(sizes_[k]);
  for (std::size_t i = 0; i < membership_.size(); ++i)
    out[membership_[i]].push_back(static_cast<std::uint32_t>(i));
  return out;
}

ContingencyTable contingency(const Clustering& a, const Clustering& b) {
  if (a.n_elements() != b.n_elements()) {
    std::uint64_t diff = a.n_elements() > b.n_elements()
                             ? a.n_elements() - b.n_elements()
                             : b.n_elements() - a.n_elements();
    throw ElementMismatchError(
        "clusterings cover different element counts (" +
            std::to_string(a.n_elements()) + " vs " +
            std::to_string(b.n_elements()) + ")",
        diff);
  }

  ContingencyTable t;
  t.n_elements = a.n_elements();
  t.row_sums = a.sizes();
  t.col_sums = b.sizes();

  const std::uint64_t ka = a.n_clusters(), kb = b.n_clusters();
  const auto& ma = a.membership();
  const auto& mb = b.membership();

  if (ka * kb <= (1u << 22)) {
    std::vector<std::uint64_t> dense(ka * kb, 0);
    for (std::size_t i = 0; i < ma.size(); ++i)
      ++dense[static_cast<std::uint64_t>(ma[i]) * kb + mb[i]];
    for (std::uint64_t r = 0; r < ka; ++r)
      for (std::uint64_t c = 0; c < kb; ++c)
        if (std::uint64_t cnt = dense[r * kb + c])
          t.cells.push_back({static_cast<std::uint32_t>(r),
                             static_cast<std::uint32_t>(c), cnt});
  } else {
    std::unordered_map<std::uint64_t, std::uint64_t> sparse;
    sparse.reserve(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i)
      ++sparse[(static_cast<std::uint64_t>(ma[i]) << 32) | mb[i]];
    t.cells.reserve(sparse.size());
    for (const auto& [key, cnt] : sparse)
      t.cells.push_back({static_cast<std::uint32_t>(key >> 32),
                         static_cast<std::uint32_t>(key & 0xffffffffu), cnt});
    std::sort(t.cells.begin(), t.cells.end(), [](const auto& x, const auto& y) {
      return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
  }
  return t;
}

namespace {

std::uint64_t choose2(std::uint64_t s) { return s * (s - 1) / 2; }

}  // namespace

std::uint64_t intra_pairs(std::span<const std::uint64_t> sizes) {
  std::uint64_t q = 0;
  for (std::uint64_t s : sizes) q += choose2(s);
  return q;
}

PairCounts pair_counts(const ContingencyTable& t) {
  PairCounts pc;
  for (const auto& cell : t.cells) pc.n11 += choose2(cell.count);
  std::uint64_t q1a = intra_pairs(t.row_sums);
  std::uint64_t q1b = intra_pairs(t.col_sums);
  pc.n10 = q1a - pc.n11;
  pc.n01 = q1b - pc.n11;
  pc.n00 = choose2(t.n_elements) - q1a - q1b + pc.n11;
  return pc;
}

double entropy_nats(std::span<const std::uint64_t> sizes, std::uint64_t n_total) {
  if (n_total == 0) throw std::domain_error("entropy of an empty set");
  const double n = static_cast<double>(n_total);
  CompensatedSum h;
  for (std::uint64_t s : sizes) {
    if (s == 0) continue;
    double p = static_cast<double>(s) / n;
    h.add(-p * std::log(p));
  }
  return h.value();
}

double joint_entropy_nats(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n_elements);
  std::vector<double> terms;
  terms.reserve(t.cells.size());
  for (const auto& cell : t.cells) {
    double p = static_cast<double>(cell.count) / n;
    terms.push_back(-p * std::log(p));
  }
  std::sort(terms.begin(), terms.end());
  CompensatedSum h;
  for (double x : terms) h.add(x);
  return h.value();
}

}  // namespace partsim
