// Copyright 2026 The bench_audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bench_audit/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bench_audit/error.hpp"

namespace bench_audit::forecasters {

void ForecastSet::add(Forecast forecast) {
  Key key{forecast.model_id, forecast.dataset_name, forecast.series_id};
  if (index_.contains(key)) {
    throw Error(ErrorCode::DuplicateTriple,
                "duplicate forecast for (" + forecast.model_id + ", " +
                    forecast.dataset_name + ", " + forecast.series_id + ")");
  }
  if (std::find(models_.begin(), models_.end(), forecast.model_id) == models_.end()) {
    models_.push_back(forecast.model_id);
  }
  index_.emplace(std::move(key), forecasts_.size());
  forecasts_.push_back(std::move(forecast));
}

void ForecastSet::merge(const ForecastSet& other) {
  for (const auto& f : other.forecasts_) add(f);
}

const Forecast* ForecastSet::find(std::string_view model, std::string_view dataset,
                                  std::string_view series_id) const {
  auto it = index_.find(Key{std::string(model), std::string(dataset),
                            std::string(series_id)});
  return it == index_.end() ? nullptr : &forecasts_[it->second];
}

namespace {

void require_length(std::span<const double> train, std::size_t minimum,
                    const char* method) {
  if (train.size() < minimum) {
    throw Error(ErrorCode::SeriesTooShort,
                std::string(method) + " needs at least " + std::to_string(minimum) +
                    " observations, got " + std::to_string(train.size()));
  }
}

double ses_level(std::span<const double> y, double alpha) {
  double level = y[0];
  for (std::size_t i = 1; i < y.size(); ++i) level += alpha * (y[i] - level);
  return level;
}

double ses_sse(std::span<const double> y, double alpha) {
  double level = y[0];
  double sse = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double err = y[i] - level;
    sse += err * err;
    level += alpha * (y[i] - level);
  }
  return sse;
}

}  // namespace

std::vector<double> snaive(std::span<const double> train, std::size_t seasonal_period,
                           std::size_t horizon) {
  if (seasonal_period == 0) {
    throw Error(ErrorCode::SeriesTooShort, "seasonal period must be positive");
  }
  require_length(train, seasonal_period, "snaive");
  const std::size_t start = train.size() - seasonal_period;
  std::vector<double> out(horizon);
  for (std::size_t j = 0; j < horizon; ++j) out[j] = train[start + j % seasonal_period];
  return out;
}

std::vector<double> rwd(std::span<const double> train, std::size_t horizon) {
  require_length(train, 2, "rwd");
  const double last = train.back();
  const double drift = (last - train.front()) / static_cast<double>(train.size() - 1);
  std::vector<double> out(horizon);
  for (std::size_t j = 0; j < horizon; ++j) out[j] = last + static_cast<double>(j + 1) * drift;
  return out;
}

double ses_auto_alpha(std::span<const double> train) {
  require_length(train, 1, "ses");
  double best_alpha = 0.01;
  double best_sse = ses_sse(train, best_alpha);
  for (int k = 2; k <= 100; ++k) {
    const double alpha = k / 100.0;
    const double sse = ses_sse(train, alpha);
    if (sse < best_sse) {
      best_sse = sse;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

std::vector<double> ses(std::span<const double> train, Alpha alpha, std::size_t horizon) {
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidAlpha,
                "ses alpha must lie in [0, 1], got " + std::to_string(*alpha));
  }
  require_length(train, 1, "ses");
  const double a = alpha ? *alpha : ses_auto_alpha(train);
  return std::vector<double>(horizon, ses_level(train, a));
}

std::vector<double> theta(std::span<const double> train, std::size_t horizon) {
  require_length(train, 3, "theta");
  const std::size_t t = train.size();
  const double n = static_cast<double>(t);
  const double x_mean = (n + 1.0) / 2.0;
  double y_mean = 0.0;
  for (double v : train) y_mean += v;
  y_mean /= n;

  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const double dx = static_cast<double>(i + 1) - x_mean;
    sxy += dx * (train[i] - y_mean);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  const double intercept = y_mean - slope * x_mean;

  std::vector<double> theta2(t);
  for (std::size_t i = 0; i < t; ++i) {
    theta2[i] = 2.0 * train[i] - (intercept + slope * static_cast<double>(i + 1));
  }
  const double level = ses_level(theta2, ses_auto_alpha(theta2));

  std::vector<double> out(horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    const double trend = intercept + slope * static_cast<double>(t + j + 1);
    out[j] = 0.5 * trend + 0.5 * level;
  }
  return out;
}

std::vector<double> croston(std::span<const double> train, double alpha,
                            std::size_t horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha,
                "croston alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i] < 0.0) {
      throw Error(ErrorCode::NegativeDemand,
                  "negative demand " + std::to_string(train[i]) + " at index " +
                      std::to_string(i));
    }
  }

  bool seen = false;
  double size = 0.0;
  double interval = 0.0;
  std::size_t previous = 0;  // 1-based index of the last nonzero demand
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i] == 0.0) continue;
    const std::size_t index = i + 1;
    if (!seen) {
      size = train[i];
      interval = static_cast<double>(index);
      seen = true;
    } else {
      size = alpha * train[i] + (1.0 - alpha) * size;
      interval = alpha * static_cast<double>(index - previous) + (1.0 - alpha) * interval;
    }
    previous = index;
  }
  if (!seen) throw Error(ErrorCode::AllZeroSeries, "series has no nonzero demand");
  return std::vector<double>(horizon, size / interval);
}

const std::vector<std::string>& registry() {
  static const std::vector<std::string> names{"snaive", "rwd", "ses", "theta", "croston"};
  return names;
}

bool is_registered(std::string_view model_id) {
  const auto& names = registry();
  return std::find(names.begin(), names.end(), model_id) != names.end();
}

namespace {

std::vector<double> run_model(std::string_view model, std::span<const double> train,
                              std::size_t seasonal_period, std::size_t horizon,
                              const ForecastOptions& options) {
  if (model == "snaive") return snaive(train, seasonal_period, horizon);
  if (model == "rwd") return rwd(train, horizon);
  if (model == "ses") return ses(train, std::nullopt, horizon);
  if (model == "theta") return theta(train, horizon);
  return croston(train, options.croston_alpha, horizon);
}

}  // namespace

ForecastSet forecast_all(const series::DatasetCollection& collection,
                         const std::vector<std::string>& model_ids,
                         const ForecastOptions& options) {
  std::set<std::string_view> seen;
  for (const auto& id : model_ids) {
    if (!is_registered(id)) {
      throw Error(ErrorCode::UnknownModel,
                  "'" + id + "' is not a built-in model (snaive, rwd, ses, theta, "
                  "croston); supply its forecasts as an external file");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::DuplicateModel, "model '" + id + "' requested twice");
    }
  }

  ForecastSet set;
  std::vector<std::string> gaps;
  for (const auto& model : model_ids) {
    for (const auto& dataset : collection.datasets) {
      for (const auto& s : dataset.series) {
        try {
          auto [train, test] = series::train_test_split(s, dataset.horizon);
          auto values = run_model(model, train.values, dataset.seasonal_period,
                                  dataset.horizon, options);
          set.add({model, dataset.name, s.id, std::move(values)});
        } catch (const Error& e) {
          gaps.push_back(model + "/" + dataset.name + "/" + s.id + ": " + e.what());
        }
      }
    }
  }
  if (!gaps.empty()) {
    throw Error(ErrorCode::ForecastGaps,
                std::to_string(gaps.size()) + " forecast(s) could not be produced",
                gaps);
  }
  return set;
}

}  // namespace bench_audit::forecasters
