#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "aggsent/error.hpp"

namespace aggsent::text {

inline const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* n = [] {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* p = icu::Normalizer2::getNFCInstance(ec);
    if (U_FAILURE(ec)) throw ConfigError("ICU NFC normalizer unavailable");
    return p;
  }();
  return *n;
}

inline icu::UnicodeString to_unicode(std::string_view utf8) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

inline std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

/// NFC, then full case folding (a no-op for caseless scripts such as Arabic),
/// then NFC again since folding can denormalize.
inline icu::UnicodeString fold_nfc(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  icu::UnicodeString u = nfc().normalize(to_unicode(utf8), ec);
  u.foldCase();
  u = nfc().normalize(u, ec);
  if (U_FAILURE(ec)) throw InputError("unicode normalization failed");
  return u;
}

inline std::string fold_nfc_utf8(std::string_view utf8) { return to_utf8(fold_nfc(utf8)); }

inline bool is_tashkeel(UChar32 c) { return (c >= 0x064B && c <= 0x0652) || c == 0x0670; }

/// Arabic letter folding: alef variants to bare alef, ta marbuta to ha,
/// tashkeel removed.
inline icu::UnicodeString arabic_fold(const icu::UnicodeString& in) {
  icu::UnicodeString out;
  for (int32_t i = 0; i < in.length();) {
    UChar32 c = in.char32At(i);
    i += U16_LENGTH(c);
    if (is_tashkeel(c)) continue;
    switch (c) {
      case 0x0622:  // alef with madda
      case 0x0623:  // alef with hamza above
      case 0x0625:  // alef with hamza below
      case 0x0671:  // alef wasla
        out.append(static_cast<UChar32>(0x0627));
        break;
      case 0x0629:  // ta marbuta
        out.append(static_cast<UChar32>(0x0647));
        break;
      default:
        out.append(c);
    }
  }
  return out;
}

}  // namespace aggsent::text
