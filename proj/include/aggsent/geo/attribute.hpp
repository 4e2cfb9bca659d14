#pragma once

#include <optional>
#include <set>
#include <string_view>

#include "aggsent/corpus/document.hpp"
#include "aggsent/geo/gazetteer.hpp"

namespace aggsent {

enum class GeoTier : std::uint8_t { Coordinates, ProfileLocation, TimeZone, Unresolved };

inline constexpr std::string_view to_string(GeoTier t) {
  switch (t) {
    case GeoTier::Coordinates: return "coordinates";
    case GeoTier::ProfileLocation: return "profile_location";
    case GeoTier::TimeZone: return "time_zone";
    case GeoTier::Unresolved: return "unresolved";
  }
  return "?";
}

struct Attribution {
  std::optional<CountryCode> country;
  GeoTier tier = GeoTier::Unresolved;

  bool us_flag() const { return country && *country == "US"; }
};

/// Coordinates, then profile location, then time zone; each tier is used
/// only if it yields exactly one country. A zone name known to the table
/// takes priority over the numeric offset.
inline Attribution attribute_country(const Document& d, const Gazetteer& gz, const TimeZoneTable& tz) {
  if (d.geo)
    if (auto c = gz.locate(*d.geo)) return {*c, GeoTier::Coordinates};
  if (d.user_location) {
    auto cs = gz.match_location(*d.user_location);
    if (cs.size() == 1) return {*cs.begin(), GeoTier::ProfileLocation};
  }
  const std::set<CountryCode>* cand = nullptr;
  if (d.time_zone) cand = tz.by_name(*d.time_zone);
  if (!cand && d.utc_offset) cand = tz.by_offset(*d.utc_offset);
  if (cand && cand->size() == 1) return {*cand->begin(), GeoTier::TimeZone};
  return {};
}

}  // namespace aggsent
