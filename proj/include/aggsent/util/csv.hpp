#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aggsent/error.hpp"

namespace aggsent::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC-4180 reader. Lines starting with '#' outside quotes are comments;
/// blank lines are skipped.
class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::optional<Record> next() {
    for (;;) {
      int c = in_.peek();
      if (c == EOF) return std::nullopt;
      if (c == '#') {
        std::string skip;
        std::getline(in_, skip);
        ++line_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        in_.get();
        if (c == '\r' && in_.peek() == '\n') in_.get();
        ++line_;
        continue;
      }
      break;
    }
    Record rec;
    rec.line = line_;
    std::string field;
    bool quoted = false, was_quoted = false;
    for (;;) {
      int c = in_.get();
      if (c == EOF) {
        if (quoted) throw ParseError(source_, rec.line, "unterminated quoted field");
        rec.fields.push_back(std::move(field));
        return rec;
      }
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"') {
        if (!field.empty() || was_quoted) throw ParseError(source_, line_, "stray quote inside field");
        quoted = was_quoted = true;
      } else if (ch == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (ch == '\r' || ch == '\n') {
        if (ch == '\r' && in_.peek() == '\n') in_.get();
        ++line_;
        rec.fields.push_back(std::move(field));
        return rec;
      } else {
        if (was_quoted) throw ParseError(source_, line_, "characters after closing quote");
        field.push_back(ch);
      }
    }
  }

  const std::string& source() const noexcept { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 1;
};

/// Table with a header row; column lookup by name.
struct Table {
  std::vector<std::string> header;
  std::vector<Record> rows;
  std::string source;

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
  std::size_t require(std::string_view name) const {
    auto i = find(name);
    if (!i) throw ParseError(source, 1, "missing column '" + std::string(name) + "'");
    return *i;
  }
};

inline Table read_table(std::istream& in, const std::string& source) {
  Reader r(in, source);
  Table t;
  t.source = source;
  auto head = r.next();
  if (!head) throw ParseError(source, 1, "empty file (header expected)");
  t.header = std::move(head->fields);
  while (auto rec = r.next()) {
    if (rec->fields.size() != t.header.size())
      throw ParseError(source, rec->line,
                       "expected " + std::to_string(t.header.size()) + " fields, got " +
                           std::to_string(rec->fields.size()));
    t.rows.push_back(std::move(*rec));
  }
  return t;
}

inline double to_double(const std::string& s, const std::string& source, std::size_t line) {
  double v = 0.0;
  auto b = s.data(), e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) throw ParseError(source, line, "not a number: '" + s + "'");
  return v;
}

inline std::int64_t to_int(const std::string& s, const std::string& source, std::size_t line) {
  std::int64_t v = 0;
  auto b = s.data(), e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) throw ParseError(source, line, "not an integer: '" + s + "'");
  return v;
}

inline std::string quote(std::string_view s) {
  bool need = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!need) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << quote(fields[i]);
  }
  os << '\n';
}

/// Shortest round-trip representation; output is locale-independent.
inline std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// Fixed number of significant digits, for human-facing tables.
inline std::string fmt_sig(double v, int digits) {
  char buf[48];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, p);
}

}  // namespace aggsent::csv
