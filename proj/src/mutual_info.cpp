#include "partsim/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "partsim/numerics.hpp"
#include "partsim/parallel.hpp"

namespace partsim {

namespace {

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

void check_nk(std::uint64_t k, std::uint64_t n, const char* who) {
  if (n < 1 || k < 1 || k > n)
    throw std::domain_error(std::string(who) + ": needs 1 <= k <= n");
}

/// -(j/n) log(j/n) for j = 0..n; the per-cluster entropy contribution of a
/// cluster (or overlap) of size j.
std::vector<double> entropy_terms(std::uint64_t n) {
  std::vector<double> h(n + 1, 0.0);
  const double dn = static_cast<double>(n);
  for (std::uint64_t j = 1; j < n; ++j) {
    double p = static_cast<double>(j) / dn;
    h[j] = -p * std::log(p);
  }
  return h;
}

/// Expected number of clusters of each size under the fixed-K ensemble:
/// W(a) = C(n, a) S(n-a, k-1) / S(n, k). Sums to k.
std::vector<double> size_weights_num(std::uint64_t k, std::uint64_t n,
                                     const Combinatorics& comb) {
  std::vector<double> w(n + 1, 0.0);
  const double log_total = comb.log_stirling2(n, k);
  for (std::uint64_t a = 1; a + k <= n + 1; ++a) {
    double lw = Combinatorics::log_binomial(n, a) +
                comb.log_stirling2(n - a, k - 1) - log_total;
    w[a] = std::exp(lw);
  }
  return w;
}

/// Same under the all-partitions ensemble: W(a) = C(n, a) B(n-a) / B(n).
std::vector<double> size_weights_all(std::uint64_t n, const Combinatorics& comb) {
  std::vector<double> w(n + 1, 0.0);
  const double log_total = comb.log_bell(n);
  for (std::uint64_t a = 1; a <= n; ++a) {
    double lw = Combinatorics::log_binomial(n, a) + comb.log_bell(n - a) - log_total;
    w[a] = std::exp(lw);
  }
  return w;
}

/// E[h(overlap)] for independent clusters of sizes a and b:
/// sum over the hypergeometric support of pmf * hterm[overlap].
double overlap_expectation(std::uint64_t n, std::uint64_t a, std::uint64_t b,
                           std::span<const double> hterm) {
  CompensatedSum s;
  for (HypergeomScan sc(n, a, b); !sc.done(); sc.advance())
    if (sc.overlap() > 0) s.add(sc.pmf() * hterm[sc.overlap()]);
  return s.value();
}

double weighted_entropy(std::span<const double> weights, std::uint64_t n) {
  std::vector<double> hterm = entropy_terms(n);
  CompensatedSum s;
  for (std::uint64_t a = 1; a <= n; ++a)
    if (weights[a] != 0.0) s.add(weights[a] * hterm[a]);
  return s.value();
}

/// E[H(A, B)] = sum_a sum_b W_A(a) W_B(b) E[h(overlap of a, b)].
double weighted_joint(const std::vector<double>& wa, const std::vector<double>& wb,
                      std::uint64_t n, unsigned threads) {
  std::vector<double> hterm = entropy_terms(n);
  std::vector<double> slots(n, 0.0);
  parallel_for_slots(n, threads, [&](std::size_t i) {
    const std::uint64_t a = i + 1;
    if (wa[a] == 0.0) return;
    CompensatedSum sb;
    for (std::uint64_t b = 1; b <= n; ++b)
      if (wb[b] != 0.0) sb.add(wb[b] * overlap_expectation(n, a, b, hterm));
    slots[i] = wa[a] * sb.value();
  });
  CompensatedSum total;
  for (double v : slots) total.add(v);
  return total.value();
}

/// Symmetric variant (both sides share the weight vector): only pairs with
/// a <= b are evaluated, off-diagonal terms doubled.
double weighted_joint_symmetric(const std::vector<double>& w, std::uint64_t n,
                                unsigned threads) {
  std::vector<double> hterm = entropy_terms(n);
  std::vector<double> slots(n, 0.0);
  parallel_for_slots(n, threads, [&](std::size_t i) {
    const std::uint64_t a = i + 1;
    if (w[a] == 0.0) return;
    CompensatedSum sb;
    for (std::uint64_t b = a; b <= n; ++b) {
      if (w[b] == 0.0) continue;
      double factor = b == a ? w[b] : 2.0 * w[b];
      sb.add(factor * overlap_expectation(n, a, b, hterm));
    }
    slots[i] = w[a] * sb.value();
  });
  CompensatedSum total;
  for (double v : slots) total.add(v);
  return total.value();
}

/// One-sided joint: the reference side contributes its actual cluster sizes.
double weighted_joint_one_sided(const std::vector<double>& wa,
                                std::span<const std::uint64_t> ref_sizes,
                                std::uint64_t n) {
  std::vector<double> hterm = entropy_terms(n);
  CompensatedSum total;
  for (std::uint64_t a = 1; a <= n; ++a) {
    if (wa[a] == 0.0) continue;
    CompensatedSum sb;
    for (std::uint64_t g : ref_sizes) sb.add(overlap_expectation(n, a, g, hterm));
    total.add(wa[a] * sb.value());
  }
  return total.value();
}

}  // namespace

std::string to_string(MiBound b) {
  switch (b) {
    case MiBound::min: return "min";
    case MiBound::sqrt: return "sqrt";
    case MiBound::sum: return "sum";
    case MiBound::max: return "max";
    case MiBound::max_log_k: return "max_logk";
    case MiBound::log_n: return "log_n";
  }
  return "?";
}

double mutual_information(const ContingencyTable& t) {
  const double n = static_cast<double>(t.n_elements);
  std::vector<double> terms;
  terms.reserve(t.cells.size());
  for (const auto& cell : t.cells) {
    double joint = static_cast<double>(cell.count) * n;
    double indep = static_cast<double>(t.row_sums[cell.row]) *
                   static_cast<double>(t.col_sums[cell.col]);
    terms.push_back(static_cast<double>(cell.count) / n * std::log(joint / indep));
  }
  std::sort(terms.begin(), terms.end());
  CompensatedSum s;
  for (double x : terms) s.add(x);
  return s.value();
}

double mutual_information(const Clustering& a, const Clustering& b) {
  return mutual_information(contingency(a, b));
}

double mi_max_bound(Model model, MiBound bound, double h_a, double h_b,
                    std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n) {
  const double la = std::log(static_cast<double>(k_a));
  const double lb = std::log(static_cast<double>(k_b));
  const double ln = std::log(static_cast<double>(n));
  if (model == Model::all) return ln;
  if (model == Model::num) {
    switch (bound) {
      case MiBound::min: return std::min(la, lb);
      case MiBound::sqrt: return std::sqrt(la * lb);
      case MiBound::sum: return 0.5 * (la + lb);
      case MiBound::max:
      case MiBound::max_log_k: return std::max(la, lb);
      case MiBound::log_n: return ln;
    }
  }
  switch (bound) {
    case MiBound::min: return std::min(h_a, h_b);
    case MiBound::sqrt: return std::sqrt(h_a * h_b);
    case MiBound::sum: return 0.5 * (h_a + h_b);
    case MiBound::max: return std::max(h_a, h_b);
    case MiBound::max_log_k: return std::max(la, lb);
    case MiBound::log_n: return ln;
  }
  throw std::logic_error("unreachable");
}

double normalized_mutual_information(const Clustering& a, const Clustering& b,
                                     MiBound bound) {
  double mi = mutual_information(a, b);
  double h_a = entropy_nats(a.sizes(), a.n_elements());
  double h_b = entropy_nats(b.sizes(), b.n_elements());
  double denom = mi_max_bound(Model::none, bound, h_a, h_b, a.n_clusters(),
                              b.n_clusters(), a.n_elements());
  if (!(denom > 0.0))
    throw UndefinedAdjustmentError("nmi normalizer " + to_string(bound) +
                                   " is zero (trivial partitions)");
  return mi / denom;
}

double expected_mi_perm(std::span<const std::uint64_t> sizes_a,
                        std::span<const std::uint64_t> sizes_b,
                        std::uint64_t n) {
  check_sizes(sizes_a, n, "expected_mi_perm");
  check_sizes(sizes_b, n, "expected_mi_perm");
  const double dn = static_cast<double>(n);
  CompensatedSum total;
  for (std::uint64_t a : sizes_a) {
    for (std::uint64_t b : sizes_b) {
      const double log_ab = std::log(static_cast<double>(a) * static_cast<double>(b));
      for (HypergeomScan sc(n, a, b); !sc.done(); sc.advance()) {
        const std::uint64_t m = sc.overlap();
        if (m == 0) continue;
        double info = std::log(dn * static_cast<double>(m)) - log_ab;
        total.add(sc.pmf() * (static_cast<double>(m) / dn) * info);
      }
    }
  }
  return total.value();
}

double expected_entropy_num(std::uint64_t k, std::uint64_t n,
                            const Combinatorics& comb) {
  check_nk(k, n, "expected_entropy_num");
  return weighted_entropy(size_weights_num(k, n, comb), n);
}

double expected_joint_entropy_num(std::uint64_t k_a, std::uint64_t k_b,
                                  std::uint64_t n, const Combinatorics& comb,
                                  unsigned threads) {
  check_nk(k_a, n, "expected_joint_entropy_num");
  check_nk(k_b, n, "expected_joint_entropy_num");
  return weighted_joint(size_weights_num(k_a, n, comb),
                        size_weights_num(k_b, n, comb), n, threads);
}

double expected_mi_num(std::uint64_t k_a, std::uint64_t k_b, std::uint64_t n,
                       const Combinatorics& comb, unsigned threads) {
  return expected_entropy_num(k_a, n, comb) + expected_entropy_num(k_b, n, comb) -
         expected_joint_entropy_num(k_a, k_b, n, comb, threads);
}

double expected_entropy_all(std::uint64_t n, const Combinatorics& comb) {
  if (n < 1) throw std::domain_error("expected_entropy_all: needs n >= 1");
  return weighted_entropy(size_weights_all(n, comb), n);
}

double expected_joint_entropy_all(std::uint64_t n, const Combinatorics& comb,
                                  unsigned threads) {
  if (n < 1) throw std::domain_error("expected_joint_entropy_all: needs n >= 1");
  return weighted_joint_symmetric(size_weights_all(n, comb), n, threads);
}

double expected_mi_all(std::uint64_t n, const Combinatorics& comb,
                       unsigned threads) {
  return 2.0 * expected_entropy_all(n, comb) -
         expected_joint_entropy_all(n, comb, threads);
}

double expected_joint_entropy_num_one_sided(std::uint64_t k_random,
                                            std::uint64_t n,
                                            std::span<const std::uint64_t> ref_sizes,
                                            const Combinatorics& comb) {
  check_nk(k_random, n, "expected_joint_entropy_num_one_sided");
  check_sizes(ref_sizes, n, "expected_joint_entropy_num_one_sided");
  return weighted_joint_one_sided(size_weights_num(k_random, n, comb), ref_sizes, n);
}

double expected_mi_num_one_sided(std::uint64_t k_random, std::uint64_t n,
                                 std::span<const std::uint64_t> ref_sizes,
                                 const Combinatorics& comb) {
  return expected_entropy_num(k_random, n, comb) + entropy_nats(ref_sizes, n) -
         expected_joint_entropy_num_one_sided(k_random, n, ref_sizes, comb);
}

double expected_joint_entropy_all_one_sided(std::uint64_t n,
                                            std::span<const std::uint64_t> ref_sizes,
                                            const Combinatorics& comb) {
  check_sizes(ref_sizes, n, "expected_joint_entropy_all_one_sided");
  return weighted_joint_one_sided(size_weights_all(n, comb), ref_sizes, n);
}

double expected_mi_all_one_sided(std::uint64_t n,
                                 std::span<const std::uint64_t> ref_sizes,
                                 const Combinatorics& comb) {
  return expected_entropy_all(n, comb) + entropy_nats(ref_sizes, n) -
         expected_joint_entropy_all_one_sided(n, ref_sizes, comb);
}

ScoreBreakdown mi_comparison(const Clustering& a, const Clustering& b,
                             const MiSpec& spec, const Combinatorics& comb,
                             unsigned threads) {
  ScoreBreakdown out;
  out.raw = mutual_information(a, b);

  const std::uint64_t n = a.n_elements();
  const double h_a = entropy_nats(a.sizes(), n);
  const double h_b = entropy_nats(b.sizes(), b.n_elements());
  out.max_bound = mi_max_bound(spec.model, spec.bound, h_a, h_b, a.n_clusters(),
                               b.n_clusters(), n);

  const Clustering& ref = spec.reference_side == Side::a ? a : b;
  const Clustering& rnd = spec.reference_side == Side::a ? b : a;

  switch (spec.model) {
    case Model::none:
      out.expectation = 0.0;
      break;
    case Model::perm:
      // One- and two-sided expectations coincide under permutation.
      out.expectation = expected_mi_perm(a.sizes(), b.sizes(), n);
      break;
    case Model::num:
      out.expectation =
          spec.one_sided
              ? expected_mi_num_one_sided(rnd.n_clusters(), n, ref.sizes(), comb)
              : expected_mi_num(a.n_clusters(), b.n_clusters(), n, comb, threads);
      break;
    case Model::all:
      out.expectation = spec.one_sided
                            ? expected_mi_all_one_sided(n, ref.sizes(), comb)
                            : expected_mi_all(n, comb, threads);
      break;
  }
  out.adjusted = adjusted_score(out.raw, out.expectation, out.max_bound);
  return out;
}

double adjusted_mutual_information(const Clustering& a, const Clustering& b,
                                   const MiSpec& spec, const Combinatorics& comb,
                                   unsigned threads) {
  return mi_comparison(a, b, spec, comb, threads).adjusted;
}

}  // namespace partsim
