#include "partsim/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "partsim/mutual_info.hpp"
#include "partsim/rand_index.hpp"

namespace partsim::oracle {

namespace {

BigInt bell_number(std::uint64_t n) {
  // Bell triangle; only used for refusal messages and count checks.
  std::vector<BigInt> row{1};
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::vector<BigInt> next(i + 1);
    next[0] = row.back();
    for (std::uint64_t j = 0; j < i; ++j) next[j + 1] = next[j] + row[j];
    row = std::move(next);
  }
  return row[0];
}

BigInt factorial(std::uint64_t n) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_enum_ceiling(std::uint64_t n) {
  if (n < 1) throw std::domain_error("enumeration needs n >= 1");
  if (n > enum_ceiling)
    throw std::domain_error("refusing to enumerate B(" + std::to_string(n) +
                            ") = " + bell_number(n).str() +
                            " partitions (ceiling n = " +
                            std::to_string(enum_ceiling) + ")");
}

void check_perm_ceiling(std::uint64_t n) {
  if (n < 1) throw std::domain_error("enumeration needs n >= 1");
  if (n > perm_ceiling)
    throw std::domain_error("refusing to enumerate " + std::to_string(n) +
                            "! = " + factorial(n).str() +
                            " relabelings (ceiling n = " +
                            std::to_string(perm_ceiling) + ")");
}

using Visit = std::function<void(std::span<const std::uint8_t>)>;

void rgs_rec(std::vector<std::uint8_t>& codes, std::size_t i, std::uint8_t used,
             const Visit& visit) {
  if (i == codes.size()) {
    visit(codes);
    return;
  }
  for (std::uint8_t c = 0; c <= used; ++c) {
    codes[i] = c;
    rgs_rec(codes, i + 1, c == used ? used + 1 : used, visit);
  }
}

void rgs_rec_k(std::vector<std::uint8_t>& codes, std::size_t i, std::uint8_t used,
               std::uint8_t k, const Visit& visit) {
  if (i == codes.size()) {
    visit(codes);
    return;
  }
  const std::size_t remaining = codes.size() - i;
  if (remaining + used > k) {
    for (std::uint8_t c = 0; c < used; ++c) {
      codes[i] = c;
      rgs_rec_k(codes, i + 1, used, k, visit);
    }
  }
  if (used < k && remaining >= static_cast<std::size_t>(k - used)) {
    codes[i] = used;
    rgs_rec_k(codes, i + 1, used + 1, k, visit);
  }
}

std::vector<std::vector<std::uint8_t>> collect_partitions(std::uint64_t n) {
  std::vector<std::vector<std::uint8_t>> out;
  for_each_partition(n, [&](std::span<const std::uint8_t> c) {
    out.emplace_back(c.begin(), c.end());
  });
  return out;
}

std::vector<std::vector<std::uint8_t>> collect_partitions_k(std::uint64_t n,
                                                            std::uint64_t k) {
  std::vector<std::vector<std::uint8_t>> out;
  for_each_partition_k(n, k, [&](std::span<const std::uint8_t> c) {
    out.emplace_back(c.begin(), c.end());
  });
  return out;
}

std::vector<std::uint8_t> narrow_codes(const Clustering& c) {
  if (c.n_elements() > enum_ceiling)
    throw std::domain_error("reference clustering exceeds the enumeration ceiling");
  std::vector<std::uint8_t> codes(c.n_elements());
  for (std::size_t i = 0; i < codes.size(); ++i)
    codes[i] = static_cast<std::uint8_t>(c.membership()[i]);
  return codes;
}

// Co-membership of the C(n,2) element pairs as a two-word bitset (n <= 12
// gives at most 66 pairs).
struct PairMask {
  std::uint64_t lo = 0, hi = 0;
};

PairMask mask_of(std::span<const std::uint8_t> codes) {
  PairMask m;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = i + 1; j < codes.size(); ++j, ++idx)
      if (codes[i] == codes[j]) {
        if (idx < 64)
          m.lo |= 1ull << idx;
        else
          m.hi |= 1ull << (idx - 64);
      }
  return m;
}

std::uint64_t agreements(PairMask a, PairMask b, std::uint64_t total_pairs) {
  std::uint64_t both = std::popcount(a.lo & b.lo) + std::popcount(a.hi & b.hi);
  std::uint64_t either = std::popcount(a.lo | b.lo) + std::popcount(a.hi | b.hi);
  return both + (total_pairs - either);
}

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

std::vector<PairMask> masks_of(const std::vector<std::vector<std::uint8_t>>& list) {
  std::vector<PairMask> out;
  out.reserve(list.size());
  for (const auto& codes : list) out.push_back(mask_of(codes));
  return out;
}

BigRat mean_agreement(const std::vector<PairMask>& as, const std::vector<PairMask>& bs,
                      std::uint64_t n) {
  const std::uint64_t p = pairs_of(n);
  std::uint64_t sum = 0;
  for (PairMask a : as)
    for (PairMask b : bs) sum += agreements(a, b, p);
  return BigRat(BigInt(sum), BigInt(as.size()) * BigInt(bs.size()) * p);
}

/// Same mean through per-pair agreement probabilities: for each element pair,
/// count co-clustering partitions on both sides and combine
/// f_a f_b + (1 - f_a)(1 - f_b); average over pairs.
BigRat mean_agreement_factored(const std::vector<PairMask>& as,
                               const std::vector<PairMask>& bs, std::uint64_t n) {
  const std::uint64_t p = pairs_of(n);
  const BigInt ca = as.size(), cb = bs.size();
  std::vector<std::uint64_t> co_a(p, 0), co_b(p, 0);
  auto tally = [p](const std::vector<PairMask>& masks, std::vector<std::uint64_t>& co) {
    for (PairMask m : masks)
      for (std::uint64_t idx = 0; idx < p; ++idx) {
        std::uint64_t bit = idx < 64 ? (m.lo >> idx) & 1 : (m.hi >> (idx - 64)) & 1;
        co[idx] += bit;
      }
  };
  tally(as, co_a);
  tally(bs, co_b);
  BigInt numer = 0;
  for (std::uint64_t idx = 0; idx < p; ++idx) {
    BigInt fa = co_a[idx], fb = co_b[idx];
    numer += fa * fb + (ca - fa) * (cb - fb);
  }
  return BigRat(numer, ca * cb * p);
}

// High-precision information measures over small contingency tables.
struct InfoTables {
  explicit InfoTables(std::uint64_t n) : n(n), log_int(n * n + 1), frac(n + 1) {
    for (std::uint64_t i = 1; i <= n * n; ++i) log_int[i] = log(HighFloat(i));
    for (std::uint64_t i = 0; i <= n; ++i) frac[i] = HighFloat(i) / HighFloat(n);
  }
  std::uint64_t n;
  std::vector<HighFloat> log_int;
  std::vector<HighFloat> frac;
};

struct SmallTable {
  std::array<std::array<std::uint8_t, 12>, 12> cnt;
  std::array<std::uint8_t, 12> row, col;
  std::uint8_t ka = 0, kb = 0;
};

void fill_table(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                SmallTable& t) {
  for (auto& r : t.cnt) r.fill(0);
  t.row.fill(0);
  t.col.fill(0);
  t.ka = t.kb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++t.cnt[a[i]][b[i]];
    ++t.row[a[i]];
    ++t.col[b[i]];
    t.ka = std::max(t.ka, static_cast<std::uint8_t>(a[i] + 1));
    t.kb = std::max(t.kb, static_cast<std::uint8_t>(b[i] + 1));
  }
}

HighFloat mi_of(const SmallTable& t, const InfoTables& tab) {
  HighFloat mi = 0;
  for (std::uint8_t r = 0; r < t.ka; ++r)
    for (std::uint8_t c = 0; c < t.kb; ++c) {
      std::uint64_t x = t.cnt[r][c];
      if (x == 0) continue;
      mi += tab.frac[x] * (tab.log_int[x * tab.n] -
                           tab.log_int[static_cast<std::uint64_t>(t.row[r]) * t.col[c]]);
    }
  return mi;
}

HighFloat joint_of(const SmallTable& t, const InfoTables& tab) {
  HighFloat h = 0;
  for (std::uint8_t r = 0; r < t.ka; ++r)
    for (std::uint8_t c = 0; c < t.kb; ++c) {
      std::uint64_t x = t.cnt[r][c];
      if (x == 0) continue;
      h += tab.frac[x] * (tab.log_int[tab.n] - tab.log_int[x]);
    }
  return h;
}

HighFloat entropy_of(std::span<const std::uint8_t> codes, const InfoTables& tab) {
  std::array<std::uint8_t, 12> sizes{};
  for (std::uint8_t c : codes) ++sizes[c];
  HighFloat h = 0;
  for (std::uint8_t s : sizes)
    if (s) h += tab.frac[s] * (tab.log_int[tab.n] - tab.log_int[s]);
  return h;
}

void check_k(std::uint64_t n, std::uint64_t k) {
  if (k < 1 || k > n) throw std::domain_error("enumeration needs 1 <= k <= n");
}

enum class Info { mi, joint };

HighFloat mean_info(const std::vector<std::vector<std::uint8_t>>& as,
                    const std::vector<std::vector<std::uint8_t>>& bs,
                    std::uint64_t n, Info which) {
  InfoTables tab(n);
  SmallTable t;
  HighFloat sum = 0;
  for (const auto& a : as)
    for (const auto& b : bs) {
      fill_table(a, b, t);
      sum += which == Info::mi ? mi_of(t, tab) : joint_of(t, tab);
    }
  return sum / (HighFloat(as.size()) * HighFloat(bs.size()));
}

HighFloat mean_info_orbit(std::span<const std::uint8_t> fixed,
                          std::span<const std::uint8_t> orbit_codes,
                          std::uint64_t n, Info which) {
  check_perm_ceiling(n);
  InfoTables tab(n);
  SmallTable t;
  HighFloat sum = 0;
  std::uint64_t count = 0;
  for_each_relabeling(orbit_codes, [&](std::span<const std::uint8_t> r) {
    fill_table(fixed, r, t);
    sum += which == Info::mi ? mi_of(t, tab) : joint_of(t, tab);
    ++count;
  });
  return sum / HighFloat(count);
}

}  // namespace

void for_each_partition(std::uint64_t n, const Visit& visit) {
  check_enum_ceiling(n);
  std::vector<std::uint8_t> codes(n);
  codes[0] = 0;
  rgs_rec(codes, 1, 1, visit);
}

void for_each_partition_k(std::uint64_t n, std::uint64_t k, const Visit& visit) {
  check_enum_ceiling(n);
  check_k(n, k);
  std::vector<std::uint8_t> codes(n);
  codes[0] = 0;
  rgs_rec_k(codes, 1, 1, static_cast<std::uint8_t>(k), visit);
}

void for_each_relabeling(std::span<const std::uint8_t> codes, const Visit& visit) {
  check_perm_ceiling(codes.size());
  const std::size_t n = codes.size();
  std::vector<std::uint8_t> perm(n), rel(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint8_t>(i);
  do {
    for (std::size_t i = 0; i < n; ++i) rel[i] = codes[perm[i]];
    visit(rel);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::uint64_t count_partitions(std::uint64_t n) {
  std::uint64_t c = 0;
  for_each_partition(n, [&](std::span<const std::uint8_t>) { ++c; });
  return c;
}

std::uint64_t count_partitions_k(std::uint64_t n, std::uint64_t k) {
  std::uint64_t c = 0;
  for_each_partition_k(n, k, [&](std::span<const std::uint8_t>) { ++c; });
  return c;
}

std::vector<std::vector<std::uint64_t>> size_sequences(std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> cur;
  auto rec = [&](auto&& self, std::uint64_t left, std::uint64_t max_part) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint64_t p = std::min(left, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, left - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

Clustering clustering_from_sizes(std::span<const std::uint64_t> sizes) {
  std::vector<std::uint32_t> memb;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    memb.insert(memb.end(), sizes[k], static_cast<std::uint32_t>(k));
  return Clustering::from_membership(memb);
}

BigRat enum_rand_num(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  check_k(n, k_a);
  check_k(n, k_b);
  auto as = masks_of(collect_partitions_k(n, k_a));
  auto bs = k_a == k_b ? as : masks_of(collect_partitions_k(n, k_b));
  return mean_agreement(as, bs, n);
}

BigRat enum_rand_num_factored(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  check_k(n, k_a);
  check_k(n, k_b);
  auto as = masks_of(collect_partitions_k(n, k_a));
  auto bs = k_a == k_b ? as : masks_of(collect_partitions_k(n, k_b));
  return mean_agreement_factored(as, bs, n);
}

BigRat enum_rand_all(std::uint64_t n) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  auto masks = masks_of(collect_partitions(n));
  return mean_agreement(masks, masks, n);
}

BigRat enum_rand_all_factored(std::uint64_t n) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  auto masks = masks_of(collect_partitions(n));
  return mean_agreement_factored(masks, masks, n);
}

BigRat enum_rand_perm(std::span<const std::uint64_t> sizes_a,
                      std::span<const std::uint64_t> sizes_b) {
  std::uint64_t n = 0;
  for (std::uint64_t s : sizes_a) n += s;
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  check_perm_ceiling(n);
  Clustering a = clustering_from_sizes(sizes_a);
  Clustering b = clustering_from_sizes(sizes_b);
  if (b.n_elements() != n)
    throw std::domain_error("size sequences cover different element counts");
  PairMask ma = mask_of(narrow_codes(a));
  const std::uint64_t p = pairs_of(n);
  std::uint64_t sum = 0, count = 0;
  for_each_relabeling(narrow_codes(b), [&](std::span<const std::uint8_t> rel) {
    sum += agreements(ma, mask_of(rel), p);
    ++count;
  });
  return BigRat(BigInt(sum), BigInt(count) * p);
}

BigRat enum_rand_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                               const Clustering& ref) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  check_k(n, k_random);
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  auto as = masks_of(collect_partitions_k(n, k_random));
  return mean_agreement(as, {mask_of(narrow_codes(ref))}, n);
}

BigRat enum_rand_all_one_sided(std::uint64_t n, const Clustering& ref) {
  if (n < 2) throw std::domain_error("rand enumeration needs n >= 2");
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  auto as = masks_of(collect_partitions(n));
  return mean_agreement(as, {mask_of(narrow_codes(ref))}, n);
}

HighFloat enum_entropy_num(std::uint64_t n, std::uint64_t k) {
  check_enum_ceiling(n);
  check_k(n, k);
  InfoTables tab(n);
  HighFloat sum = 0;
  std::uint64_t count = 0;
  for_each_partition_k(n, k, [&](std::span<const std::uint8_t> c) {
    sum += entropy_of(c, tab);
    ++count;
  });
  return sum / HighFloat(count);
}

HighFloat enum_entropy_all(std::uint64_t n) {
  check_enum_ceiling(n);
  InfoTables tab(n);
  HighFloat sum = 0;
  std::uint64_t count = 0;
  for_each_partition(n, [&](std::span<const std::uint8_t> c) {
    sum += entropy_of(c, tab);
    ++count;
  });
  return sum / HighFloat(count);
}

HighFloat enum_joint_entropy_num(std::uint64_t n, std::uint64_t k_a,
                                 std::uint64_t k_b) {
  check_k(n, k_a);
  check_k(n, k_b);
  auto as = collect_partitions_k(n, k_a);
  auto bs = k_a == k_b ? as : collect_partitions_k(n, k_b);
  return mean_info(as, bs, n, Info::joint);
}

HighFloat enum_joint_entropy_all(std::uint64_t n) {
  auto list = collect_partitions(n);
  return mean_info(list, list, n, Info::joint);
}

HighFloat enum_mi_num(std::uint64_t n, std::uint64_t k_a, std::uint64_t k_b) {
  check_k(n, k_a);
  check_k(n, k_b);
  auto as = collect_partitions_k(n, k_a);
  auto bs = k_a == k_b ? as : collect_partitions_k(n, k_b);
  return mean_info(as, bs, n, Info::mi);
}

HighFloat enum_mi_all(std::uint64_t n) {
  auto list = collect_partitions(n);
  return mean_info(list, list, n, Info::mi);
}

HighFloat enum_mi_perm(std::span<const std::uint64_t> sizes_a,
                       std::span<const std::uint64_t> sizes_b) {
  Clustering a = clustering_from_sizes(sizes_a);
  Clustering b = clustering_from_sizes(sizes_b);
  if (a.n_elements() != b.n_elements())
    throw std::domain_error("size sequences cover different element counts");
  return mean_info_orbit(narrow_codes(a), narrow_codes(b), a.n_elements(), Info::mi);
}

HighFloat enum_mi_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                                const Clustering& ref) {
  check_k(n, k_random);
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  return mean_info(collect_partitions_k(n, k_random), {narrow_codes(ref)}, n,
                   Info::mi);
}

HighFloat enum_mi_all_one_sided(std::uint64_t n, const Clustering& ref) {
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  return mean_info(collect_partitions(n), {narrow_codes(ref)}, n, Info::mi);
}

HighFloat enum_joint_entropy_num_one_sided(std::uint64_t n, std::uint64_t k_random,
                                           const Clustering& ref) {
  check_k(n, k_random);
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  return mean_info(collect_partitions_k(n, k_random), {narrow_codes(ref)}, n,
                   Info::joint);
}

HighFloat enum_joint_entropy_all_one_sided(std::uint64_t n, const Clustering& ref) {
  if (ref.n_elements() != n)
    throw std::domain_error("reference does not cover n elements");
  return mean_info(collect_partitions(n), {narrow_codes(ref)}, n, Info::joint);
}

HighFloat enum_mi_perm_one_sided(const Clustering& random_side, const Clustering& ref) {
  if (random_side.n_elements() != ref.n_elements())
    throw std::domain_error("clusterings cover different element counts");
  return mean_info_orbit(narrow_codes(ref), narrow_codes(random_side),
                         ref.n_elements(), Info::mi);
}

}  // namespace partsim::oracle
