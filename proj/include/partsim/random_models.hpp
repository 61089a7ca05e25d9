#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "partsim/clustering.hpp"
#include "partsim/combinatorics.hpp"
#include "partsim/model.hpp"

namespace partsim {

/// Deterministic random source. Same seed, same platform-independent stream:
/// the engine is std::mt19937_64 (fully specified by the standard), bounded
/// draws use 64-bit rejection sampling, and doubles take the top 53 bits of
/// one draw. Parallel stream i of seed s is seeded with s xor i.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ index);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound), unbiased via rejection.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Uniform random relabeling of `shape`: the size sequence is kept, element
/// assignments are shuffled.
Clustering sample_perm(const Clustering& shape, Rng& rng);

/// Uniform over all partitions of [n] into exactly k nonempty clusters,
/// by sequential Stirling-ratio decisions.
Clustering sample_num(std::uint64_t n, std::uint64_t k, const Combinatorics& comb,
                      Rng& rng);

/// Uniform over all partitions of [n]: draws K with P(K) = S(n, K)/B(n), then
/// samples within fixed K.
Clustering sample_all(std::uint64_t n, const Combinatorics& comb, Rng& rng);

/// An ensemble to draw clusterings from.
struct EnsembleSpec {
  Model model = Model::all;  // perm | num | all
  std::uint64_t n = 0;
  std::uint64_t k = 0;                      // num only
  std::optional<Clustering> perm_shape;     // perm only
};

Clustering sample_clustering(const EnsembleSpec& spec, const Combinatorics& comb,
                             Rng& rng);

enum class Measure { rand, mi };

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Sample mean of the raw measure over pairs drawn from `spec` (both sides
/// independently), or against a fixed `reference` when given.
MonteCarloEstimate monte_carlo_expectation(Measure measure, const EnsembleSpec& spec,
                                           const std::optional<Clustering>& reference,
                                           std::uint64_t samples,
                                           const Combinatorics& comb, Rng& rng);

struct PaPoint {
  std::uint64_t step = 0;
  double entropy_bits = 0.0;  // size-sequence entropy, log base 2
  double ari_perm = 0.0;      // adjusted Rand vs the start, permutation model
  double ari_num = 0.0;       // adjusted Rand vs the start, fixed-K model
};

/// Sized-biased reshuffling walk: each step moves a uniformly chosen element
/// to a cluster chosen with probability proportional to its current size
/// (the moving element still counted). Moves that would empty the source
/// cluster are rejected; self-moves count as accepted no-ops. The number of
/// clusters is invariant. Records a point every `record_every` steps,
/// starting at step 0.
std::vector<PaPoint> pa_randomize(const Clustering& start, std::uint64_t steps,
                                  std::uint64_t record_every,
                                  const Combinatorics& comb, Rng& rng);

}  // namespace partsim
