#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aggsent/category.hpp"
#include "aggsent/corpus/document.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// Percent agreement: share of positions with identical categories.
inline double compute_agreement(std::span<const Category> a, std::span<const Category> b) {
  if (a.size() != b.size()) throw InputError("agreement: label lists differ in length");
  if (a.empty()) throw InputError("agreement: empty label lists");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

/// One row of the label CSV.
struct LabelRow {
  std::string doc_id;
  Category category;
  std::optional<std::string> coder_id;
};

struct MergedLabels {
  std::vector<std::pair<std::string, Category>> labels;  // in first-seen document order
  std::vector<std::string> dropped_ties;
};

/// Collapses multiple coders' labels to one label per document by strict
/// majority; documents without a strict majority are dropped.
inline MergedLabels merge_labels(std::span<const LabelRow> rows) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::array<int, kCategoryCount>> votes;
  for (const auto& r : rows) {
    auto [it, fresh] = votes.try_emplace(r.doc_id, std::array<int, kCategoryCount>{});
    if (fresh) order.push_back(r.doc_id);
    ++it->second[static_cast<std::size_t>(r.category)];
  }
  MergedLabels out;
  for (const auto& id : order) {
    const auto& v = votes.at(id);
    int total = 0;
    for (int x : v) total += x;
    auto best = std::max_element(v.begin(), v.end());
    if (2 * *best > total)
      out.labels.emplace_back(id, static_cast<Category>(best - v.begin()));
    else
      out.dropped_ties.push_back(id);
  }
  return out;
}

/// Joins merged labels with documents by id. Unknown ids are an input error.
inline TrainingSet make_training_set(const MergedLabels& merged, std::span<const Document> docs) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : docs) by_id.emplace(d.id, &d);
  TrainingSet ts;
  for (const auto& [id, cat] : merged.labels) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError("training label refers to unknown document id '" + id + "'");
    ts.items.push_back({*it->second, cat});
  }
  return ts;
}

/// Size >= number of categories and every requested category present.
inline void validate_training_set(const TrainingSet& ts, std::span<const Category> cats) {
  if (ts.size() < cats.size())
    throw InputError("training set smaller than the number of categories");
  for (Category c : cats) {
    bool found = std::any_of(ts.items.begin(), ts.items.end(), [c](const auto& it) { return it.label == c; });
    if (!found) throw EstimationError("category " + std::string(to_string(c)) + " has no training documents");
  }
}

}  // namespace aggsent
