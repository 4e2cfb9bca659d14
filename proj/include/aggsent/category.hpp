#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aggsent/error.hpp"

namespace aggsent {

enum class Category : std::uint8_t { Positive = 0, Negative = 1, Neutral = 2, OffTopic = 3 };

inline constexpr std::size_t kCategoryCount = 4;
inline constexpr std::array<Category, kCategoryCount> kAllCategories{
    Category::Positive, Category::Negative, Category::Neutral, Category::OffTopic};

constexpr std::string_view to_string(Category c) {
  switch (c) {
    case Category::Positive: return "Positive";
    case Category::Negative: return "Negative";
    case Category::Neutral: return "Neutral";
    case Category::OffTopic: return "OffTopic";
  }
  return "?";
}

/// Case-insensitive; accepts "off-topic"/"off_topic" spellings as well.
inline std::optional<Category> parse_category(std::string_view s) {
  std::string k;
  for (char ch : s) {
    if (ch == '-' || ch == '_' || ch == ' ') continue;
    k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (k == "positive" || k == "pos") return Category::Positive;
  if (k == "negative" || k == "neg") return Category::Negative;
  if (k == "neutral" || k == "neu") return Category::Neutral;
  if (k == "offtopic" || k == "off") return Category::OffTopic;
  return std::nullopt;
}

/// Probability vector over an ordered subset of categories.
class CategoryDistribution {
 public:
  CategoryDistribution() = default;

  /// Throws if the vector is not on the simplex (tolerance 1e-9).
  CategoryDistribution(std::vector<Category> cats, std::vector<double> probs)
      : cats_(std::move(cats)), probs_(std::move(probs)) {
    if (cats_.size() != probs_.size() || cats_.empty())
      throw EstimationError("category distribution: size mismatch");
    double s = 0.0;
    for (double p : probs_) {
      if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
        throw EstimationError("category distribution: entry outside [0,1]");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw EstimationError("category distribution: does not sum to 1");
    for (double& p : probs_) p = std::clamp(p, 0.0, 1.0);
  }

  const std::vector<Category>& categories() const noexcept { return cats_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return cats_.size(); }

  /// Mass of `c`; categories not estimated carry zero mass.
  double operator[](Category c) const noexcept {
    for (std::size_t i = 0; i < cats_.size(); ++i)
      if (cats_[i] == c) return probs_[i];
    return 0.0;
  }

 private:
  std::vector<Category> cats_;
  std::vector<double> probs_;
};

}  // namespace aggsent
