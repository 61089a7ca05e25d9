#include "partsim/model.hpp"

namespace partsim {

std::string to_string(Model m) {
  switch (m) {
    case Model::none: return "none";
    case Model::perm: return "perm";
    case Model::num: return "num";
    case Model::all: return "all";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::a ? "a" : "b"; }

double adjusted_score(double score, double expectation, double max_bound) {
  double denom = max_bound - expectation;
  if (!(denom > 0.0))
    throw UndefinedAdjustmentError(
        "adjustment undefined: expected score " + std::to_string(expectation) +
        " reaches the maximum bound " + std::to_string(max_bound));
  return (score - expectation) / denom;
}

}  // namespace partsim
