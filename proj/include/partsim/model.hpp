#pragma once

#include <string>

#include "partsim/errors.hpp"

namespace partsim {

/// Random ensemble a similarity score is corrected against.
///   none: no correction (raw score)
///   perm: random permutations of element labels; both size sequences fixed
///   num:  uniform over partitions with the observed numbers of clusters
///   all:  uniform over all partitions of the element set
enum class Model { none, perm, num, all };

/// Which side of a one-sided comparison stays fixed (the reference).
enum class Side { a, b };

std::string to_string(Model m);
std::string to_string(Side s);

/// (score - expectation) / (max_bound - expectation). Equals the raw score
/// when expectation = 0 and max_bound = 1, which is how the uncorrected case
/// is folded in.
double adjusted_score(double score, double expectation, double max_bound);

/// One comparison, fully itemized.
struct ScoreBreakdown {
  double raw = 0.0;
  double expectation = 0.0;
  double max_bound = 1.0;
  double adjusted = 0.0;
};

}  // namespace partsim
