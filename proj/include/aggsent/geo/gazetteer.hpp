#pragma once

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aggsent/corpus/document.hpp"
#include "aggsent/corpus/tokenize.hpp"
#include "aggsent/error.hpp"
#include "aggsent/util/csv.hpp"

namespace aggsent {

using CountryCode = std::string;  // ISO 3166-1 alpha-2, upper case

/// Place-name normalization shared by gazetteer entries and profile
/// locations: case folding, Arabic letter folding, edge punctuation removed.
inline std::vector<std::string> place_tokens(std::string_view s) {
  NormConfig cfg;
  return normalize_tokens(s, cfg);
}

inline CountryCode normalize_iso2(std::string_view s, const std::string& source, std::size_t line) {
  if (s.size() != 2 || !std::isalpha(static_cast<unsigned char>(s[0])) || !std::isalpha(static_cast<unsigned char>(s[1])))
    throw ParseError(source, line, "bad ISO2 code '" + std::string(s) + "'");
  CountryCode c(s);
  for (char& ch : c) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return c;
}

struct CountryBox {
  CountryCode country;
  double min_lat, min_lon, max_lat, max_lon;

  bool contains(GeoPoint p) const noexcept {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }
};

/// Place names and coordinate boxes. Names may map to several countries;
/// boxes are tested in file order and the first containing box wins.
class Gazetteer {
 public:
  void add_name(std::string_view name, const CountryCode& c) {
    auto toks = place_tokens(name);
    if (toks.empty()) return;
    max_phrase_ = std::max(max_phrase_, toks.size());
    names_[join_tokens(toks)].insert(c);
  }
  void add_box(CountryBox b) { boxes_.push_back(std::move(b)); }

  /// Countries whose names occur as whole-token phrases in `location`.
  std::set<CountryCode> match_location(std::string_view location) const {
    std::set<CountryCode> out;
    const auto toks = place_tokens(location);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      std::string phrase;
      for (std::size_t len = 1; len <= max_phrase_ && i + len <= toks.size(); ++len) {
        if (len > 1) phrase.push_back(' ');
        phrase += toks[i + len - 1];
        if (auto it = names_.find(phrase); it != names_.end()) out.insert(it->second.begin(), it->second.end());
      }
    }
    return out;
  }

  std::optional<CountryCode> locate(GeoPoint p) const {
    for (const auto& b : boxes_)
      if (b.contains(p)) return b.country;
    return std::nullopt;
  }

  std::size_t name_count() const noexcept { return names_.size(); }
  const std::vector<CountryBox>& boxes() const noexcept { return boxes_; }

 private:
  std::map<std::string, std::set<CountryCode>> names_;
  std::vector<CountryBox> boxes_;
  std::size_t max_phrase_ = 0;
};

/// Name CSV: `normalized_name,iso2`.
inline void read_gazetteer_names(Gazetteer& gz, std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const auto ni = t.require("normalized_name"), ci = t.require("iso2");
  for (const auto& r : t.rows) {
    if (r.fields[ni].empty()) throw ParseError(source, r.line, "empty name");
    gz.add_name(r.fields[ni], normalize_iso2(r.fields[ci], source, r.line));
  }
}

/// Box CSV: `iso2,min_lat,min_lon,max_lat,max_lon`.
inline void read_gazetteer_boxes(Gazetteer& gz, std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const std::size_t idx[5] = {t.require("iso2"), t.require("min_lat"), t.require("min_lon"), t.require("max_lat"),
                              t.require("max_lon")};
  for (const auto& r : t.rows) {
    CountryBox b{normalize_iso2(r.fields[idx[0]], source, r.line), csv::to_double(r.fields[idx[1]], source, r.line),
                 csv::to_double(r.fields[idx[2]], source, r.line), csv::to_double(r.fields[idx[3]], source, r.line),
                 csv::to_double(r.fields[idx[4]], source, r.line)};
    if (!(b.min_lat <= b.max_lat && b.min_lon <= b.max_lon) || b.min_lat < -90 || b.max_lat > 90 ||
        b.min_lon < -180 || b.max_lon > 180)
      throw ParseError(source, r.line, "invalid box");
    gz.add_box(std::move(b));
  }
}

/// Time-zone table: UTC offsets (minutes) or zone names to candidate
/// countries.
class TimeZoneTable {
 public:
  void add_offset(std::int32_t minutes, const CountryCode& c) { offsets_[minutes].insert(c); }
  void add_name(std::string_view name, const CountryCode& c) {
    auto toks = place_tokens(name);
    if (!toks.empty()) names_[join_tokens(toks)].insert(c);
  }

  const std::set<CountryCode>* by_offset(std::int32_t minutes) const {
    auto it = offsets_.find(minutes);
    return it == offsets_.end() ? nullptr : &it->second;
  }
  const std::set<CountryCode>* by_name(std::string_view name) const {
    auto it = names_.find(join_tokens(place_tokens(name)));
    return it == names_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::int32_t, std::set<CountryCode>> offsets_;
  std::map<std::string, std::set<CountryCode>> names_;
};

/// CSV `offset_minutes_or_name,iso2`; integer keys (optionally signed) are
/// offsets, anything else is a zone name.
inline TimeZoneTable read_timezones(std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const auto ki = t.require("offset_minutes_or_name"), ci = t.require("iso2");
  TimeZoneTable tz;
  for (const auto& r : t.rows) {
    const std::string& k = r.fields[ki];
    const CountryCode c = normalize_iso2(r.fields[ci], source, r.line);
    std::string_view num = k;
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    std::int32_t v = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (!num.empty() && ec == std::errc{} && p == num.data() + num.size())
      tz.add_offset(v, c);
    else if (!k.empty())
      tz.add_name(k, c);
    else
      throw ParseError(source, r.line, "empty time-zone key");
  }
  return tz;
}

}  // namespace aggsent
