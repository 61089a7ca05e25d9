#include "partsim/io.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "partsim/errors.hpp"

namespace partsim {

LabeledClustering read_clustering_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  LabeledClustering out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;

    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                           ": expected element_id<TAB>cluster_label",
                       lineno);
    std::string id = line.substr(start, tab - start);
    std::string label = line.substr(tab + 1);
    if (id.empty() || label.empty())
      throw ParseError(path + ":" + std::to_string(lineno) +
                           ": empty element id or cluster label",
                       lineno);
    if (!seen.insert(id).second)
      throw ParseError(path + ":" + std::to_string(lineno) +
                           ": duplicate element id '" + id + "'",
                       lineno);
    out.element_ids.push_back(std::move(id));
    out.labels.push_back(std::move(label));
  }
  if (out.element_ids.empty())
    throw ParseError(path + ": no records", lineno);
  return out;
}

void write_clustering_file(const std::string& path, const Clustering& c,
                           const std::vector<std::string>& element_ids) {
  if (!element_ids.empty() && element_ids.size() != c.n_elements())
    throw std::domain_error("element id list does not cover the clustering");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < c.n_elements(); ++i) {
    if (element_ids.empty())
      out << 'e' << i;
    else
      out << element_ids[i];
    out << '\t' << 'c' << c.membership()[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

AlignedPair align(const LabeledClustering& a, const LabeledClustering& b) {
  std::unordered_map<std::string, std::size_t> index_b;
  index_b.reserve(b.element_ids.size());
  for (std::size_t i = 0; i < b.element_ids.size(); ++i)
    index_b.emplace(b.element_ids[i], i);

  std::size_t missing_in_b = 0;
  std::vector<std::string> labels_b_aligned;
  labels_b_aligned.reserve(a.element_ids.size());
  std::size_t matched = 0;
  for (const std::string& id : a.element_ids) {
    auto it = index_b.find(id);
    if (it == index_b.end()) {
      ++missing_in_b;
    } else {
      ++matched;
      labels_b_aligned.push_back(b.labels[it->second]);
    }
  }
  std::size_t missing_in_a = b.element_ids.size() - matched;
  if (missing_in_b + missing_in_a != 0)
    throw ElementMismatchError(
        "element sets differ: symmetric difference has " +
            std::to_string(missing_in_b + missing_in_a) + " element(s) (" +
            std::to_string(missing_in_b) + " only in the first file, " +
            std::to_string(missing_in_a) + " only in the second)",
        missing_in_b + missing_in_a);

  return AlignedPair{a.element_ids, a.clustering(),
                     Clustering::from_labels(labels_b_aligned)};
}

}  // namespace partsim
