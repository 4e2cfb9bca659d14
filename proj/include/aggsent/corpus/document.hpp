#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggsent/category.hpp"
#include "aggsent/util/date.hpp"

namespace aggsent {

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

/// One ingested social-media record.
struct Document {
  std::string id;
  UtcTime timestamp{};
  std::string text;
  std::optional<std::string> lang;
  std::optional<GeoPoint> geo;
  std::optional<std::string> user_location;
  std::optional<std::int32_t> utc_offset;  // minutes
  std::optional<std::string> time_zone;    // e.g. "Riyadh", as attached by the platform

  Day day() const { return utc_day(timestamp); }
};

struct LabeledDocument {
  Document doc;
  Category label;
};

/// Labeled documents, one merged label per document.
struct TrainingSet {
  std::vector<LabeledDocument> items;

  std::size_t size() const noexcept { return items.size(); }

  std::vector<Category> categories_present() const {
    std::vector<Category> out;
    for (Category c : kAllCategories)
      for (const auto& it : items)
        if (it.label == c) {
          out.push_back(c);
          break;
        }
    return out;
  }
};

}  // namespace aggsent
