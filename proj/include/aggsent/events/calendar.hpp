#pragma once

#include <array>
#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aggsent/error.hpp"
#include "aggsent/util/csv.hpp"
#include "aggsent/util/date.hpp"

namespace aggsent {

enum class EventKind : std::uint8_t {
  MosqueImamAttack,
  MilitaryVictory,
  MilitaryDefeat,
  BeheadingWestern,
  BeheadingNonWestern,
  MuslimUnitySpeech,
  CharlieHebdo,
};

inline constexpr std::array<EventKind, 7> kAllEventKinds{
    EventKind::MosqueImamAttack,  EventKind::MilitaryVictory,     EventKind::MilitaryDefeat,
    EventKind::BeheadingWestern,  EventKind::BeheadingNonWestern, EventKind::MuslimUnitySpeech,
    EventKind::CharlieHebdo};

/// The six kinds entered in every model, in table order.
inline constexpr std::array<EventKind, 6> kCoreEventKinds{
    EventKind::MosqueImamAttack, EventKind::MilitaryVictory,     EventKind::MilitaryDefeat,
    EventKind::BeheadingWestern, EventKind::BeheadingNonWestern, EventKind::MuslimUnitySpeech};

/// snake_case name used in CSV files and as a regressor name.
inline constexpr std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::MosqueImamAttack: return "mosque_imam_attack";
    case EventKind::MilitaryVictory: return "military_victory";
    case EventKind::MilitaryDefeat: return "military_defeat";
    case EventKind::BeheadingWestern: return "beheading_western";
    case EventKind::BeheadingNonWestern: return "beheading_non_western";
    case EventKind::MuslimUnitySpeech: return "muslim_unity_speech";
    case EventKind::CharlieHebdo: return "charlie_hebdo";
  }
  return "?";
}

/// Accepts snake_case or CamelCase spellings, case-insensitive.
inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  auto squash = [](std::string_view v) {
    std::string k;
    for (char ch : v)
      if (std::isalnum(static_cast<unsigned char>(ch))) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return k;
  };
  const std::string k = squash(s);
  for (EventKind e : kAllEventKinds)
    if (squash(to_string(e)) == k) return e;
  if (k == "mosqueimam") return EventKind::MosqueImamAttack;
  if (k == "beheadingnonwestern") return EventKind::BeheadingNonWestern;
  if (k == "muslimunity") return EventKind::MuslimUnitySpeech;
  return std::nullopt;
}

struct EventEntry {
  Day date;
  EventKind kind;
};

struct EventCalendar {
  std::vector<EventEntry> entries;

  std::size_t count(EventKind k) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.kind == k;
    return n;
  }

  bool occurs(EventKind k, Day d) const {
    for (const auto& e : entries)
      if (e.kind == k && e.date == d) return true;
    return false;
  }

  void require_within(DayWindow w) const {
    for (const auto& e : entries)
      if (!w.contains(e.date))
        throw InputError("event " + std::string(to_string(e.kind)) + " on " + e.date.iso() + " is outside the window " +
                         w.first.iso() + ".." + w.last.iso());
  }
};

/// CSV with columns `date,kind`.
inline EventCalendar read_calendar(std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const auto di = t.require("date"), ki = t.require("kind");
  EventCalendar cal;
  for (const auto& r : t.rows) {
    auto d = parse_day(r.fields[di]);
    if (!d) throw ParseError(source, r.line, "bad date '" + r.fields[di] + "'");
    auto k = parse_event_kind(r.fields[ki]);
    if (!k) throw ParseError(source, r.line, "unknown event kind '" + r.fields[ki] + "'");
    cal.entries.push_back({*d, *k});
  }
  return cal;
}

/// Daily online-news article counts.
using NewsSeries = std::map<Day, double>;

/// CSV with columns `date,article_count`.
inline NewsSeries read_news(std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const auto di = t.require("date"), ci = t.require("article_count");
  NewsSeries news;
  for (const auto& r : t.rows) {
    auto d = parse_day(r.fields[di]);
    if (!d) throw ParseError(source, r.line, "bad date '" + r.fields[di] + "'");
    const double c = csv::to_double(r.fields[ci], source, r.line);
    if (c < 0.0) throw ParseError(source, r.line, "negative article count");
    if (!news.emplace(*d, c).second) throw ParseError(source, r.line, "duplicate date " + d->iso());
  }
  return news;
}

}  // namespace aggsent
