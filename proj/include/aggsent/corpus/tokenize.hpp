#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>

#include "aggsent/corpus/text.hpp"

namespace aggsent {

struct NormConfig {
  bool strip_urls = true;
  bool strip_mentions = true;
  bool strip_hashtag_marks = true;  // "#tag" -> "tag"
  bool arabic_folding = true;
};

namespace detail {

inline bool is_edge_punct(UChar32 c, bool keep_marks) {
  if (keep_marks && (c == '#' || c == '@')) return false;
  return u_ispunct(c) != 0;
}

inline bool starts_with_ci(const icu::UnicodeString& s, const char* ascii) {
  icu::UnicodeString p(ascii, -1, icu::UnicodeString::kInvariant);
  return s.startsWith(p) != 0;
}

inline bool is_url(const icu::UnicodeString& s) {
  return starts_with_ci(s, "http://") || starts_with_ci(s, "https://") || starts_with_ci(s, "www.");
}

/// Reduces one whitespace-delimited chunk to a token, or returns an empty
/// string when the chunk is dropped. Runs to a fixed point so the result
/// is stable under re-normalization.
inline icu::UnicodeString clean_token(icu::UnicodeString t, const NormConfig& cfg) {
  auto trim_trailing = [](icu::UnicodeString& s) {
    while (s.length() > 0) {
      UChar32 c = s.char32At(s.moveIndex32(s.length(), -1));
      if (!u_ispunct(c)) break;
      s.truncate(s.moveIndex32(s.length(), -1));
    }
  };
  for (;;) {
    while (t.length() > 0 && is_edge_punct(t.char32At(0), true)) t.remove(0, U16_LENGTH(t.char32At(0)));
    trim_trailing(t);
    if (t.length() == 0) return t;
    UChar32 first = t.char32At(0);
    if (first == '@') {
      if (cfg.strip_mentions) return {};
      t.remove(0, 1);
      continue;
    }
    if (cfg.strip_urls && is_url(t)) return {};
    if (first == '#') {
      t.remove(0, 1);  // hashtag body is kept either way; the flag only controls the mark
      if (!cfg.strip_hashtag_marks) return icu::UnicodeString("#") + t;
      continue;
    }
    return t;
  }
}

}  // namespace detail

/// NFC + case folding, URL/mention removal, hashtag mark removal, optional
/// Arabic letter folding, whitespace tokenization with edge punctuation
/// trimmed. No stemming.
inline std::vector<std::string> normalize_tokens(std::string_view utf8, const NormConfig& cfg = {}) {
  std::vector<std::string> out;
  icu::UnicodeString u = text::fold_nfc(utf8);
  if (cfg.arabic_folding) u = text::arabic_fold(u);
  int32_t i = 0;
  const int32_t n = u.length();
  while (i < n) {
    while (i < n && u_isUWhiteSpace(u.char32At(i))) i = u.moveIndex32(i, 1);
    int32_t start = i;
    while (i < n && !u_isUWhiteSpace(u.char32At(i))) i = u.moveIndex32(i, 1);
    if (i == start) break;
    icu::UnicodeString tok = detail::clean_token(u.tempSubStringBetween(start, i), cfg);
    if (tok.length() > 0) out.push_back(text::to_utf8(tok));
  }
  return out;
}

inline std::string join_tokens(const std::vector<std::string>& toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) s.push_back(' ');
    s += toks[i];
  }
  return s;
}

}  // namespace aggsent
