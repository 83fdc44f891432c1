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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "bench_audit/series.hpp"

namespace bench_audit::forecasters {

struct Forecast {
  std::string model_id;
  std::string dataset_name;
  std::string series_id;
  std::vector<double> values;

  bool operator==(const Forecast&) const = default;
};

/// Point forecasts keyed by (model, dataset, series). Insertion order of
/// models is kept as the model order of any score matrix built from it.
class ForecastSet {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;

  /// Throws DuplicateTriple if the triple is already present.
  void add(Forecast forecast);
  /// Adds every forecast of `other`; duplicate triples throw.
  void merge(const ForecastSet& other);

  [[nodiscard]] const Forecast* find(std::string_view model, std::string_view dataset,
                                     std::string_view series_id) const;
  [[nodiscard]] const std::vector<std::string>& models() const noexcept {
    return models_;
  }
  [[nodiscard]] const std::vector<Forecast>& forecasts() const noexcept {
    return forecasts_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return forecasts_.size(); }

 private:
  std::vector<Forecast> forecasts_;
  std::vector<std::string> models_;
  std::map<Key, std::size_t, std::less<>> index_;
};

constexpr double kDefaultCrostonAlpha = 0.1;

/// Smoothing parameter: a fixed value in [0, 1], or nullopt for grid search.
using Alpha = std::optional<double>;

/// Repeats the last full season. Throws SeriesTooShort when train is shorter
/// than one season.
std::vector<double> snaive(std::span<const double> train, std::size_t seasonal_period,
                           std::size_t horizon);

/// Random walk with drift. Needs at least two observations.
std::vector<double> rwd(std::span<const double> train, std::size_t horizon);

/// Simple exponential smoothing with l1 = y1. With an automatic alpha, picks
/// the value on {0.01, ..., 1.00} minimising in-sample one-step SSE (ties go
/// to the smaller alpha).
std::vector<double> ses(std::span<const double> train, Alpha alpha, std::size_t horizon);

/// Alpha selected by the automatic SES grid search.
double ses_auto_alpha(std::span<const double> train);

/// Equal-weight combination of the theta=0 line (OLS trend) and SES on the
/// theta=2 line.
std::vector<double> theta(std::span<const double> train, std::size_t horizon);

/// Croston's method for intermittent demand; alpha must lie in (0, 1).
std::vector<double> croston(std::span<const double> train, double alpha,
                            std::size_t horizon);

/// Built-in registry names, in canonical order.
const std::vector<std::string>& registry();
bool is_registered(std::string_view model_id);

struct ForecastOptions {
  double croston_alpha = kDefaultCrostonAlpha;
};

/// Splits each series by its dataset horizon and forecasts the held-out part
/// with every requested model. Throws UnknownModel for ids outside the
/// registry, and ForecastGaps (one detail per failed triple) if any model
/// fails on any series.
ForecastSet forecast_all(const series::DatasetCollection& collection,
                         const std::vector<std::string>& model_ids,
                         const ForecastOptions& options = {});

}  // namespace bench_audit::forecasters
