#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace aggsent {

/// Sorted set of vocabulary indices present in a document (presence, not
/// counts).
using TokenProfile = std::vector<std::uint32_t>;

/// Fixed ordered term list.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }

  /// Terms occurring at least `min_count` times over all token lists,
  /// ordered by descending document frequency (ties: lexicographic), capped
  /// at `max_size`.
  static Vocabulary build(std::span<const std::vector<std::string>> docs, std::size_t min_count = 2,
                          std::size_t max_size = 2000) {
    struct Stat {
      std::size_t count = 0, df = 0;
    };
    std::unordered_map<std::string, Stat> stats;
    std::unordered_set<std::string_view> seen;
    for (const auto& toks : docs) {
      seen.clear();
      for (const auto& t : toks) {
        auto& st = stats[t];
        ++st.count;
      }
      for (const auto& t : toks)
        if (seen.insert(t).second) ++stats[t].df;
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [t, st] : stats)
      if (st.count >= min_count) kept.emplace_back(t, st.df);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (kept.size() > max_size) kept.resize(max_size);
    std::vector<std::string> terms;
    terms.reserve(kept.size());
    for (auto& k : kept) terms.push_back(std::move(k.first));
    return Vocabulary(std::move(terms));
  }

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& operator[](std::size_t i) const { return terms_[i]; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  std::optional<std::uint32_t> index(const std::string& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// bits = { index(v) : v in vocab and v in tokens }.
inline TokenProfile profile(std::span<const std::string> tokens, const Vocabulary& vocab) {
  TokenProfile p;
  for (const auto& t : tokens)
    if (auto i = vocab.index(t)) p.push_back(*i);
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

}  // namespace aggsent
