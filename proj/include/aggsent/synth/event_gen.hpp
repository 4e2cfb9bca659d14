#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "aggsent/corpus/document.hpp"
#include "aggsent/error.hpp"
#include "aggsent/events/calendar.hpp"
#include "aggsent/synth/corpus_gen.hpp"
#include "aggsent/util/random.hpp"

namespace aggsent::synth {

/// Additive effects on the daily positive share, by event kind. Defaults are
/// the first-model coefficients of the daily regression table.
inline std::map<EventKind, double> default_event_effects() {
  return {{EventKind::MosqueImamAttack, -0.046}, {EventKind::MilitaryVictory, -0.047},
          {EventKind::MilitaryDefeat, -0.007},   {EventKind::BeheadingWestern, 0.116},
          {EventKind::BeheadingNonWestern, -0.049}, {EventKind::MuslimUnitySpeech, -0.043}};
}

struct EventEffectSpec {
  double baseline = 0.25;
  std::map<EventKind, double> effects = default_event_effects();
  double noise_sd = 0.0;
  EventCalendar calendar;
  std::size_t docs_per_day = 5000;
  // Shares of the two non-sentiment categories; the rest is split between
  // Positive and Negative by the day's sentiment.
  double neutral_share = 0.3;
  double offtopic_share = 0.1;
};

struct TruthDay {
  Day date;
  double sentiment = 0.0;           // share implied by the spec, after clamping
  double realized_sentiment = 0.0;  // Positive / (Positive + Negative) among drawn labels
  std::size_t n_docs = 0;
  bool clamped = false;
};

struct EventStream {
  TrainingSet train;
  std::vector<Document> stream;
  std::vector<TruthDay> truth;
  std::size_t clamped_days = 0;
};

inline constexpr double kSentimentFloor = 0.01;
inline constexpr double kSentimentCeil = 0.99;

/// Daily document stream whose positive share on day d is baseline + sum of
/// effects of events on d + N(0, noise_sd), clamped to [0.01, 0.99]. Specs
/// that clamp more than 5% of days are rejected. The training set uses
/// `corpus.train_priors` and `corpus.n_train`, drawn from the same language
/// model; `corpus.test_priors` and `corpus.n_test` are not used.
inline EventStream gen_event_stream(const EventEffectSpec& spec, const GeneratorSpec& corpus, DayWindow window) {
  const auto& lm = corpus.language;
  lm.validate();
  if (window.last < window.first) throw ConfigError("empty window");
  spec.calendar.require_within(window);
  if (spec.neutral_share < 0.0 || spec.offtopic_share < 0.0 || spec.neutral_share + spec.offtopic_share >= 1.0)
    throw ConfigError("neutral and off-topic shares must be nonnegative and sum below 1");
  if (spec.noise_sd < 0.0) throw ConfigError("noise_sd must be nonnegative");
  DocumentSampler sampler(lm, corpus.length);
  const std::size_t ip = sampler.category_index(Category::Positive);
  const std::size_t in = sampler.category_index(Category::Negative);
  std::optional<std::size_t> iu, io;
  for (std::size_t c = 0; c < lm.categories.size(); ++c) {
    if (lm.categories[c] == Category::Neutral) iu = c;
    if (lm.categories[c] == Category::OffTopic) io = c;
  }
  if ((spec.neutral_share > 0.0 && !iu) || (spec.offtopic_share > 0.0 && !io))
    throw ConfigError("language model lacks a category with nonzero share");
  check_priors(corpus.train_priors, lm.categories.size(), "train_priors");

  EventStream out;
  DiscreteSampler train_mix(corpus.train_priors);
  for (std::size_t i = 0; i < corpus.n_train; ++i) {
    Rng rng = Rng::substream(corpus.seed, {3, i});
    const std::size_t c = train_mix(rng);
    const auto day = static_cast<int>(rng.below(static_cast<std::uint64_t>(window.length())));
    Document d;
    d.id = "train-" + std::to_string(i);
    d.timestamp = UtcTime{(window.first + day).sys()} + std::chrono::seconds(rng.below(86400));
    d.text = sampler.text(c, rng);
    out.train.items.push_back({std::move(d), lm.categories[c]});
  }

  const double sent_mass = 1.0 - spec.neutral_share - spec.offtopic_share;
  std::size_t di = 0;
  for (Day day = window.first; day <= window.last; day = day + 1, ++di) {
    Rng day_rng = Rng::substream(corpus.seed, {4, di});
    double s = spec.baseline;
    for (const auto& [kind, eff] : spec.effects)
      if (spec.calendar.occurs(kind, day)) s += eff;
    if (spec.noise_sd > 0.0) s += spec.noise_sd * day_rng.normal();
    TruthDay t;
    t.date = day;
    t.clamped = s < kSentimentFloor || s > kSentimentCeil;
    t.sentiment = std::clamp(s, kSentimentFloor, kSentimentCeil);
    out.clamped_days += t.clamped;

    std::vector<double> mix(lm.categories.size(), 0.0);
    mix[ip] = sent_mass * t.sentiment;
    mix[in] = sent_mass * (1.0 - t.sentiment);
    if (iu) mix[*iu] = spec.neutral_share;
    if (io) mix[*io] = spec.offtopic_share;
    DiscreteSampler day_mix(mix);
    std::size_t pos = 0, neg = 0;
    for (std::size_t k = 0; k < spec.docs_per_day; ++k) {
      Rng rng = Rng::substream(corpus.seed, {5, di, k});
      const std::size_t c = day_mix(rng);
      pos += c == ip;
      neg += c == in;
      Document d;
      d.id = "d" + day.iso() + "-" + std::to_string(k);
      d.timestamp = UtcTime{day.sys()} + std::chrono::seconds(rng.below(86400));
      d.text = sampler.text(c, rng);
      out.stream.push_back(std::move(d));
    }
    t.n_docs = spec.docs_per_day;
    t.realized_sentiment = pos + neg > 0 ? static_cast<double>(pos) / static_cast<double>(pos + neg) : 0.0;
    out.truth.push_back(t);
  }
  if (static_cast<double>(out.clamped_days) > 0.05 * static_cast<double>(out.truth.size()))
    throw ConfigError("event spec rejected: sentiment clamped on " + std::to_string(out.clamped_days) + " of " +
                      std::to_string(out.truth.size()) + " days");
  return out;
}

/// Calendar with `per_kind` events of each listed kind on distinct random
/// days of the window.
inline EventCalendar random_calendar(DayWindow window, const std::vector<EventKind>& kinds, std::size_t per_kind,
                                     std::uint64_t seed) {
  const auto len = static_cast<std::uint32_t>(window.length());
  const std::size_t need = kinds.size() * per_kind;
  if (need > len) throw ConfigError("calendar: more events than days");
  Rng rng = Rng::substream(seed, {6});
  auto days = sample_without_replacement(len, static_cast<std::uint32_t>(need), rng);
  EventCalendar cal;
  std::size_t k = 0;
  for (EventKind kind : kinds)
    for (std::size_t i = 0; i < per_kind; ++i) cal.entries.push_back({window.first + static_cast<int>(days[k++]), kind});
  std::sort(cal.entries.begin(), cal.entries.end(),
            [](const EventEntry& a, const EventEntry& b) { return a.date < b.date; });
  return cal;
}

}  // namespace aggsent::synth
