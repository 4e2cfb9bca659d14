#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "aggsent/corpus/document.hpp"
#include "aggsent/corpus/training.hpp"
#include "aggsent/util/csv.hpp"

namespace aggsent {

namespace detail {

template <class T>
std::optional<T> opt_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace detail

/// Parses one JSON object into a Document. Unknown fields are ignored.
/// `timestamp` may be an ISO-8601 string or integer epoch seconds; `geo`
/// is an object {lat, lon}.
inline Document parse_document(const nlohmann::json& j, const std::string& source, std::size_t line) {
  auto fail = [&](const std::string& w) { return ParseError(source, line, w); };
  if (!j.is_object()) throw fail("record is not a JSON object");
  Document d;
  try {
    auto id = j.find("id");
    if (id == j.end()) throw fail("missing field 'id'");
    d.id = id->is_string() ? id->get<std::string>() : id->dump();
    if (d.id.empty()) throw fail("empty id");
    auto ts = j.find("timestamp");
    if (ts == j.end()) throw fail("missing field 'timestamp'");
    if (ts->is_number_integer()) {
      d.timestamp = UtcTime{std::chrono::seconds{ts->get<std::int64_t>()}};
    } else {
      auto t = parse_timestamp(ts->get<std::string>());
      if (!t) throw fail("unparseable timestamp '" + ts->get<std::string>() + "'");
      d.timestamp = *t;
    }
    d.text = j.value("text", std::string{});
    d.lang = detail::opt_field<std::string>(j, "lang");
    if (auto g = j.find("geo"); g != j.end() && !g->is_null()) {
      GeoPoint p{g->at("lat").get<double>(), g->at("lon").get<double>()};
      if (p.lat < -90 || p.lat > 90 || p.lon < -180 || p.lon > 180) throw fail("geo coordinates out of range");
      d.geo = p;
    }
    d.user_location = detail::opt_field<std::string>(j, "user_location");
    d.utc_offset = detail::opt_field<std::int32_t>(j, "utc_offset");
    d.time_zone = detail::opt_field<std::string>(j, "time_zone");
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  return d;
}

/// Reads JSON-lines documents; enforces id uniqueness.
inline std::vector<Document> read_documents(std::istream& in, const std::string& source) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, lineno, e.what());
    }
    Document d = parse_document(j, source, lineno);
    if (!ids.insert(d.id).second) throw ParseError(source, lineno, "duplicate id '" + d.id + "'");
    docs.push_back(std::move(d));
  }
  return docs;
}

inline nlohmann::ordered_json to_json(const Document& d) {
  nlohmann::ordered_json j;
  j["id"] = d.id;
  j["timestamp"] = iso_timestamp(d.timestamp);
  j["text"] = d.text;
  if (d.lang) j["lang"] = *d.lang;
  if (d.geo) j["geo"] = {{"lat", d.geo->lat}, {"lon", d.geo->lon}};
  if (d.user_location) j["user_location"] = *d.user_location;
  if (d.utc_offset) j["utc_offset"] = *d.utc_offset;
  if (d.time_zone) j["time_zone"] = *d.time_zone;
  return j;
}

inline void write_documents(std::ostream& os, const std::vector<Document>& docs) {
  for (const auto& d : docs) os << to_json(d).dump() << '\n';
}

/// CSV `doc_id,category[,coder_id]`, with a header row.
inline std::vector<LabelRow> read_label_rows(std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  auto id_col = t.require("doc_id");
  auto cat_col = t.require("category");
  auto coder_col = t.find("coder_id");
  std::vector<LabelRow> rows;
  for (const auto& r : t.rows) {
    auto cat = parse_category(r.fields[cat_col]);
    if (!cat) throw ParseError(source, r.line, "unknown category '" + r.fields[cat_col] + "'");
    LabelRow lr{r.fields[id_col], *cat, std::nullopt};
    if (lr.doc_id.empty()) throw ParseError(source, r.line, "empty doc_id");
    if (coder_col && !r.fields[*coder_col].empty()) lr.coder_id = r.fields[*coder_col];
    rows.push_back(std::move(lr));
  }
  return rows;
}

}  // namespace aggsent
