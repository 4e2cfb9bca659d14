#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/error.hpp"
#include "aggsent/events/calendar.hpp"
#include "aggsent/series/daily.hpp"

namespace aggsent {

enum class EventModel { M1 = 1, M2 = 2, M3 = 3 };

inline constexpr const char* kLagName = "sentiment_deviation_lag";
inline constexpr const char* kAttentionName = "attention_deviation_per_10k";
inline constexpr const char* kNewsLagName = "news_online_lag";

struct DesignMatrix {
  std::vector<Day> dates;
  std::vector<std::string> names;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // sentiment deviation

  Eigen::Index col(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw InputError("design matrix has no column '" + name + "'");
  }
  Eigen::VectorXd column(const std::string& name) const { return X.col(col(name)); }
};

/// Regressors for the daily event-study models.
///   M1: lagged deviation, six event dummies, constant
///   M2: + attention deviation / 10000, Charlie Hebdo dummy
///   M3: + previous calendar day's news article count
/// The lag is the previous retained row; the first row is dropped.
/// Dummies are binary. Events must fall inside `window` (default: first to
/// last row date).
inline DesignMatrix build_regressors(const EventCalendar& cal, const std::vector<DailySeriesRow>& rows,
                                     const NewsSeries* news, EventModel model,
                                     std::optional<DayWindow> window = std::nullopt) {
  if (rows.size() < 2) throw InputError("event regressors: need at least two daily rows");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i - 1].date < rows[i].date)) throw InputError("event regressors: dates must be strictly increasing");
  const DayWindow w = window.value_or(DayWindow{rows.front().date, rows.back().date});
  cal.require_within(w);
  if (model == EventModel::M3 && news == nullptr) throw InputError("model 3 requires a news series");

  DesignMatrix dm;
  dm.names.push_back(kLagName);
  for (EventKind k : kCoreEventKinds) dm.names.emplace_back(to_string(k));
  if (model != EventModel::M1) {
    dm.names.push_back(kAttentionName);
    dm.names.emplace_back(to_string(EventKind::CharlieHebdo));
  }
  if (model == EventModel::M3) dm.names.push_back(kNewsLagName);
  dm.names.push_back("const");

  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  dm.X.resize(n, static_cast<Eigen::Index>(dm.names.size()));
  dm.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i) + 1];
    const auto& prev = rows[static_cast<std::size_t>(i)];
    dm.dates.push_back(r.date);
    dm.y[i] = r.sentiment_deviation;
    Eigen::Index c = 0;
    dm.X(i, c++) = prev.sentiment_deviation;
    for (EventKind k : kCoreEventKinds) dm.X(i, c++) = cal.occurs(k, r.date) ? 1.0 : 0.0;
    if (model != EventModel::M1) {
      dm.X(i, c++) = r.attention_deviation / 10000.0;
      dm.X(i, c++) = cal.occurs(EventKind::CharlieHebdo, r.date) ? 1.0 : 0.0;
    }
    if (model == EventModel::M3) {
      const Day d = r.date - 1;
      auto it = news->find(d);
      if (it == news->end()) throw InputError("news series has no count for " + d.iso());
      dm.X(i, c++) = it->second;
    }
    dm.X(i, c++) = 1.0;
  }
  return dm;
}

}  // namespace aggsent
