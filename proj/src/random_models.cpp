#include "partsim/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "partsim/rand_index.hpp"
#include "partsim/mutual_info.hpp"

namespace partsim {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("Rng::below(0)");
  // Reject draws below 2^64 mod bound; the rest split into equal classes.
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

Clustering sample_perm(const Clustering& shape, Rng& rng) {
  const std::uint64_t n = shape.n_elements();
  std::vector<std::uint32_t> perm(n);
  for (std::uint64_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  for (std::uint64_t i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<std::uint32_t> memb(n);
  const auto& src = shape.membership();
  for (std::uint64_t i = 0; i < n; ++i) memb[perm[i]] = src[i];
  return Clustering::from_membership(memb);
}

Clustering sample_num(std::uint64_t n, std::uint64_t k, const Combinatorics& comb,
                      Rng& rng) {
  if (n < 1 || k < 1 || k > n)
    throw std::domain_error("sample_num: needs 1 <= k <= n");

  // Walk i = n..1 deciding whether element i opens a block among the
  // partition of 1..i (probability S(i-1, budget-1)/S(i, budget)) or joins
  // one of the `budget` blocks of 1..i-1. Draws happen at decision time so
  // the stream is replayable.
  constexpr std::uint64_t join_mark = ~0ull;
  std::vector<std::uint64_t> decision(n);  // join_mark = opens a block, else block index
  std::uint64_t budget = k;
  for (std::uint64_t i = n; i >= 1; --i) {
    bool opens;
    if (budget == i) {
      opens = true;
    } else if (budget == 1) {
      opens = false;
    } else {
      double p_open = std::exp(comb.log_stirling2(i - 1, budget - 1) -
                               comb.log_stirling2(i, budget));
      opens = rng.next_double() < p_open;
    }
    if (opens) {
      decision[i - 1] = join_mark;
      --budget;
    } else {
      decision[i - 1] = rng.below(budget);
    }
  }

  // Blocks are created in order of their minimal element, so the membership
  // below is already in canonical first-appearance form.
  std::vector<std::uint32_t> memb(n);
  std::uint32_t blocks = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (decision[i] == join_mark) {
      memb[i] = blocks++;
    } else {
      memb[i] = static_cast<std::uint32_t>(decision[i]);
    }
  }
  return Clustering::from_membership(memb);
}

Clustering sample_all(std::uint64_t n, const Combinatorics& comb, Rng& rng) {
  if (n < 1) throw std::domain_error("sample_all: needs n >= 1");
  const double log_bell = comb.log_bell(n);
  double x = rng.next_double();
  std::uint64_t k = n;
  double cum = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) {
    cum += std::exp(comb.log_stirling2(n, j) - log_bell);
    if (x < cum) {
      k = j;
      break;
    }
  }
  return sample_num(n, k, comb, rng);
}

Clustering sample_clustering(const EnsembleSpec& spec, const Combinatorics& comb,
                             Rng& rng) {
  switch (spec.model) {
    case Model::perm:
      if (!spec.perm_shape)
        throw std::domain_error("perm ensemble needs a shape clustering");
      return sample_perm(*spec.perm_shape, rng);
    case Model::num:
      return sample_num(spec.n, spec.k, comb, rng);
    case Model::all:
      return sample_all(spec.n, comb, rng);
    case Model::none:
      break;
  }
  throw std::domain_error("ensemble model must be perm, num or all");
}

MonteCarloEstimate monte_carlo_expectation(Measure measure, const EnsembleSpec& spec,
                                           const std::optional<Clustering>& reference,
                                           std::uint64_t samples,
                                           const Combinatorics& comb, Rng& rng) {
  if (samples < 2) throw std::domain_error("need at least 2 samples");
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Clustering a = sample_clustering(spec, comb, rng);
    Clustering b = reference ? *reference : sample_clustering(spec, comb, rng);
    double v = measure == Measure::rand ? rand_index(a, b) : mutual_information(a, b);
    double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) /
                            static_cast<double>(samples));
  return est;
}

std::vector<PaPoint> pa_randomize(const Clustering& start, std::uint64_t steps,
                                  std::uint64_t record_every,
                                  const Combinatorics& comb, Rng& rng) {
  if (record_every == 0) throw std::domain_error("record_every must be positive");
  const std::uint64_t n = start.n_elements();
  const std::uint64_t k = start.n_clusters();
  if (k < 2) throw std::domain_error("the walk needs at least two clusters");

  std::vector<std::uint32_t> memb = start.membership();
  std::vector<std::uint64_t> sizes = start.sizes();
  const double e_num = expected_rand_num(k, k, n, comb);

  std::vector<PaPoint> points;
  auto record = [&](std::uint64_t step) {
    Clustering current = Clustering::from_membership(memb);
    PaPoint p;
    p.step = step;
    p.entropy_bits = entropy_nats(current.sizes(), n) / std::log(2.0);
    double ri = rand_index(start, current);
    p.ari_perm = adjusted_score(
        ri, expected_rand_perm(start.sizes(), current.sizes(), n), 1.0);
    p.ari_num = adjusted_score(ri, e_num, 1.0);
    points.push_back(p);
  };

  record(0);
  for (std::uint64_t step = 1; step <= steps; ++step) {
    std::uint64_t element = rng.below(n);
    // Pick the target with probability size/n; sizes sum to n, so an integer
    // draw walks the cumulative sizes exactly.
    std::uint64_t r = rng.below(n);
    std::uint32_t target = 0;
    std::uint64_t cum = sizes[0];
    while (r >= cum) cum += sizes[++target];

    std::uint32_t from = memb[element];
    if (target != from && sizes[from] > 1) {
      --sizes[from];
      ++sizes[target];
      memb[element] = target;
    }
    if (step % record_every == 0) record(step);
  }
  return points;
}

}  // namespace partsim
