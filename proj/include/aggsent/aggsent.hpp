#pragma once

#include "aggsent/category.hpp"
#include "aggsent/corpus/io.hpp"
#include "aggsent/corpus/query.hpp"
#include "aggsent/corpus/tokenize.hpp"
#include "aggsent/corpus/training.hpp"
#include "aggsent/corpus/vocabulary.hpp"
#include "aggsent/econometrics/country_model.hpp"
#include "aggsent/econometrics/negbin.hpp"
#include "aggsent/econometrics/ols.hpp"
#include "aggsent/econometrics/predict.hpp"
#include "aggsent/error.hpp"
#include "aggsent/events/calendar.hpp"
#include "aggsent/events/regressors.hpp"
#include "aggsent/geo/attribute.hpp"
#include "aggsent/geo/gazetteer.hpp"
#include "aggsent/geo/panel.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/bootstrap.hpp"
#include "aggsent/quantifier/classify_count.hpp"
#include "aggsent/quantifier/ensemble.hpp"
#include "aggsent/quantifier/quantify.hpp"
#include "aggsent/quantifier/sentiment.hpp"
#include "aggsent/series/daily.hpp"
#include "aggsent/series/smooth.hpp"
#include "aggsent/synth/corpus_gen.hpp"
#include "aggsent/synth/event_gen.hpp"
#include "aggsent/synth/language_model.hpp"
#include "aggsent/synth/oracles.hpp"
#include "aggsent/synth/panel_gen.hpp"
#include "aggsent/synth/validate.hpp"
#include "aggsent/cli/config.hpp"
#include "aggsent/cli/app.hpp"
