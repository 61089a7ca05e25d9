#pragma once

#include <string>
#include <vector>

#include "partsim/clustering.hpp"

namespace partsim {

/// A clustering file: one `element_id<TAB>cluster_label` record per line,
/// blank lines and `#` comments ignored, UTF-8, ids and labels arbitrary
/// strings. Element order is first appearance.
struct LabeledClustering {
  std::vector<std::string> element_ids;
  std::vector<std::string> labels;  // parallel to element_ids

  Clustering clustering() const { return Clustering::from_labels(labels); }
};

/// Throws ParseError (with the 1-based line) on malformed or duplicate
/// records, std::runtime_error when the file cannot be opened.
LabeledClustering read_clustering_file(const std::string& path);

/// Writes `element<TAB>label` records. Ids come from `element_ids` when
/// given (must cover n elements), otherwise e0..e{n-1}; labels are c<cluster>.
void write_clustering_file(const std::string& path, const Clustering& c,
                           const std::vector<std::string>& element_ids = {});

/// Restates two labeled clusterings over the shared element set (matched by
/// id; the first file's order decides element indices). Throws
/// ElementMismatchError naming the symmetric difference size.
struct AlignedPair {
  std::vector<std::string> element_ids;
  Clustering a;
  Clustering b;
};

AlignedPair align(const LabeledClustering& a, const LabeledClustering& b);

}  // namespace partsim
