#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "partsim/mutual_info.hpp"
#include "partsim/oracle.hpp"
#include "partsim/rand_index.hpp"

namespace partsim::oracle {

namespace {

double rel_err(double formula, double truth) {
  if (truth == 0.0) return std::abs(formula);
  return std::abs(formula - truth) / std::abs(truth);
}

double as_double(const BigRat& r) { return r.convert_to<double>(); }
double as_double(const HighFloat& r) { return r.convert_to<double>(); }

BigInt pairs2(std::uint64_t n) { return BigInt(n) * (n - 1) / 2; }

BigRat agree_rat(const BigRat& pa, const BigRat& pb) {
  return pa * pb + (1 - pa) * (1 - pb);
}

BigRat exact_rand_perm(std::span<const std::uint64_t> sa,
                       std::span<const std::uint64_t> sb, std::uint64_t n) {
  BigInt c2 = pairs2(n), qa = intra_pairs(sa), qb = intra_pairs(sb);
  return BigRat(qa * qb + (c2 - qa) * (c2 - qb), c2 * c2);
}

BigRat exact_stirling_ratio(const Combinatorics& comb, std::uint64_t n,
                            std::uint64_t k) {
  return BigRat(comb.stirling2_exact(n - 1, k), comb.stirling2_exact(n, k));
}

BigRat exact_bell_ratio(const Combinatorics& comb, std::uint64_t n) {
  return BigRat(comb.bell_exact(n - 1), comb.bell_exact(n));
}

BigRat intra_fraction_rat(std::span<const std::uint64_t> sizes, std::uint64_t n) {
  return BigRat(BigInt(intra_pairs(sizes)), pairs2(n));
}

}  // namespace

std::vector<FormulaCheck> verify_formulas(std::uint64_t max_n,
                                          const Combinatorics& comb,
                                          double perturb) {
  const double scale = 1.0 + perturb;
  const BigRat scale_rat(scale);  // doubles convert exactly
  std::vector<FormulaCheck> checks;

  auto add = [&](const char* name, std::uint64_t ceiling, std::uint64_t min_n,
                 double tol, auto&& body) {
    FormulaCheck fc;
    fc.name = name;
    fc.max_n = std::min(ceiling, max_n);
    fc.tolerance = tol;
    auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t n = min_n; n <= fc.max_n; ++n) body(fc, n);
    fc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fc.passed = fc.max_rel_error <= tol;
    checks.push_back(std::move(fc));
  };
  auto bump = [](FormulaCheck& fc, double err) {
    fc.max_rel_error = std::max(fc.max_rel_error, err);
    ++fc.cases;
  };
  auto bump_exact = [&](FormulaCheck& fc, const BigRat& formula, const BigRat& truth) {
    fc.max_rel_error = std::max(fc.max_rel_error,
                                formula * scale_rat == truth ? 0.0 : 1.0);
    ++fc.cases;
  };

  add("partition-counts", 10, 1, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, count_partitions(n) == comb.bell_exact(n) ? 0.0 : 1.0);
    for (std::uint64_t k = 1; k <= n; ++k)
      bump(fc, count_partitions_k(n, k) == comb.stirling2_exact(n, k) ? 0.0 : 1.0);
  });

  add("rand-perm", 7, 2, 1e-12, [&](FormulaCheck& fc, std::uint64_t n) {
    auto shapes = size_sequences(n);
    for (const auto& sa : shapes)
      for (const auto& sb : shapes)
        bump(fc, rel_err(scale * expected_rand_perm(sa, sb, n),
                         as_double(enum_rand_perm(sa, sb))));
  });

  add("rand-perm-exact", 7, 2, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    auto shapes = size_sequences(n);
    for (const auto& sa : shapes)
      for (const auto& sb : shapes)
        bump_exact(fc, exact_rand_perm(sa, sb, n), enum_rand_perm(sa, sb));
  });

  add("rand-num", 8, 2, 1e-12, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (std::uint64_t kb = 1; kb <= n; ++kb)
        bump(fc, rel_err(scale * expected_rand_num(ka, kb, n, comb),
                         as_double(enum_rand_num(n, ka, kb))));
  });

  add("rand-num-exact", 8, 2, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka) {
      BigRat pa = exact_stirling_ratio(comb, n, ka);
      for (std::uint64_t kb = 1; kb <= n; ++kb)
        bump_exact(fc, agree_rat(pa, exact_stirling_ratio(comb, n, kb)),
                   enum_rand_num(n, ka, kb));
      for (const auto& shape : size_sequences(n))
        bump_exact(fc, agree_rat(pa, intra_fraction_rat(shape, n)),
                   enum_rand_num_one_sided(n, ka, clustering_from_sizes(shape)));
    }
  });

  add("rand-num-dual-route", 8, 2, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (std::uint64_t kb = 1; kb <= n; ++kb)
        bump(fc, enum_rand_num(n, ka, kb) == enum_rand_num_factored(n, ka, kb)
                     ? 0.0
                     : 1.0);
  });

  add("rand-all", 7, 2, 1e-12, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, rel_err(scale * expected_rand_all(n, comb),
                     as_double(enum_rand_all(n))));
  });

  add("rand-all-exact", 7, 2, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    BigRat r = exact_bell_ratio(comb, n);
    bump_exact(fc, agree_rat(r, r), enum_rand_all(n));
    for (const auto& shape : size_sequences(n))
      bump_exact(fc, agree_rat(r, intra_fraction_rat(shape, n)),
                 enum_rand_all_one_sided(n, clustering_from_sizes(shape)));
  });

  add("rand-all-dual-route", 7, 2, 0.0, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, enum_rand_all(n) == enum_rand_all_factored(n) ? 0.0 : 1.0);
  });

  add("rand-num-one-sided", 8, 2, 1e-12, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (const auto& shape : size_sequences(n))
        bump(fc, rel_err(scale * expected_rand_num_one_sided(ka, n, shape, comb),
                         as_double(enum_rand_num_one_sided(
                             n, ka, clustering_from_sizes(shape)))));
  });

  add("rand-all-one-sided", 8, 2, 1e-12, [&](FormulaCheck& fc, std::uint64_t n) {
    for (const auto& shape : size_sequences(n))
      bump(fc, rel_err(scale * expected_rand_all_one_sided(n, shape, comb),
                       as_double(enum_rand_all_one_sided(
                           n, clustering_from_sizes(shape)))));
  });

  add("entropy-num", 7, 1, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t k = 1; k <= n; ++k)
      bump(fc, rel_err(scale * expected_entropy_num(k, n, comb),
                       as_double(enum_entropy_num(n, k))));
  });

  add("entropy-all", 7, 1, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, rel_err(scale * expected_entropy_all(n, comb),
                     as_double(enum_entropy_all(n))));
  });

  add("joint-num", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (std::uint64_t kb = 1; kb <= n; ++kb)
        bump(fc, rel_err(scale * expected_joint_entropy_num(ka, kb, n, comb),
                         as_double(enum_joint_entropy_num(n, ka, kb))));
  });

  add("mi-num", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (std::uint64_t kb = 1; kb <= n; ++kb)
        bump(fc, rel_err(scale * expected_mi_num(ka, kb, n, comb),
                         as_double(enum_mi_num(n, ka, kb))));
  });

  add("joint-all", 6, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, rel_err(scale * expected_joint_entropy_all(n, comb),
                     as_double(enum_joint_entropy_all(n))));
  });

  add("mi-all", 6, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    bump(fc, rel_err(scale * expected_mi_all(n, comb),
                     as_double(enum_mi_all(n))));
  });

  add("mi-perm", 6, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    auto shapes = size_sequences(n);
    for (const auto& sa : shapes)
      for (const auto& sb : shapes)
        bump(fc, rel_err(scale * expected_mi_perm(sa, sb, n),
                         as_double(enum_mi_perm(sa, sb))));
  });

  add("mi-num-one-sided", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (const auto& shape : size_sequences(n))
        bump(fc, rel_err(scale * expected_mi_num_one_sided(ka, n, shape, comb),
                         as_double(enum_mi_num_one_sided(
                             n, ka, clustering_from_sizes(shape)))));
  });

  add("joint-num-one-sided", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (std::uint64_t ka = 1; ka <= n; ++ka)
      for (const auto& shape : size_sequences(n))
        bump(fc,
             rel_err(scale * expected_joint_entropy_num_one_sided(ka, n, shape, comb),
                     as_double(enum_joint_entropy_num_one_sided(
                         n, ka, clustering_from_sizes(shape)))));
  });

  add("mi-all-one-sided", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (const auto& shape : size_sequences(n))
      bump(fc, rel_err(scale * expected_mi_all_one_sided(n, shape, comb),
                       as_double(enum_mi_all_one_sided(
                           n, clustering_from_sizes(shape)))));
  });

  add("joint-all-one-sided", 7, 2, 1e-10, [&](FormulaCheck& fc, std::uint64_t n) {
    for (const auto& shape : size_sequences(n))
      bump(fc,
           rel_err(scale * expected_joint_entropy_all_one_sided(n, shape, comb),
                   as_double(enum_joint_entropy_all_one_sided(
                       n, clustering_from_sizes(shape)))));
  });

  // A fixed reference is equivalent to permuting both sides, to full
  // precision: the one-sided orbit average must match the two-sided formula.
  add("mi-perm-one-sided-equivalence", 6, 2, 1e-12,
      [&](FormulaCheck& fc, std::uint64_t n) {
        auto shapes = size_sequences(n);
        for (const auto& sa : shapes)
          for (const auto& sb : shapes)
            bump(fc, rel_err(scale * expected_mi_perm(sa, sb, n),
                             as_double(enum_mi_perm_one_sided(
                                 clustering_from_sizes(sa),
                                 clustering_from_sizes(sb)))));
      });

  return checks;
}

}  // namespace partsim::oracle
