#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "aggsent/corpus/text.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// OR-disjunction of literal terms. Terms are stored NFC-normalized and
/// case-folded so matching is a plain substring search.
class QuerySpec {
 public:
  explicit QuerySpec(const std::vector<std::string>& terms) {
    for (const auto& t : terms) {
      std::string n = text::fold_nfc_utf8(trim(t));
      if (!n.empty()) terms_.push_back(std::move(n));
    }
    if (terms_.empty()) throw ConfigError("query has no terms");
  }

  const std::vector<std::string>& terms() const noexcept { return terms_; }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  std::vector<std::string> terms_;
};

/// True iff any query term occurs in the normalized text.
inline bool match_query(std::string_view text_utf8, const QuerySpec& q) {
  const std::string norm = text::fold_nfc_utf8(text_utf8);
  for (const auto& t : q.terms())
    if (norm.find(t) != std::string::npos) return true;
  return false;
}

/// One term per line; blank lines and lines starting with '#' are ignored.
inline QuerySpec read_query(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    terms.push_back(line);
  }
  return QuerySpec(terms);
}

}  // namespace aggsent
