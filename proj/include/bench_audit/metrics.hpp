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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bench_audit/forecasters.hpp"
#include "bench_audit/series.hpp"

namespace bench_audit::metrics {

enum class Metric { Smape, Mase };

std::string_view to_string(Metric metric) noexcept;
/// Accepts "smape" or "mase"; throws InvalidConfig otherwise.
Metric parse_metric(std::string_view name);

/// Models x datasets error scores, lower is better. Row-major storage.
struct ScoreMatrix {
  std::vector<std::string> model_ids;
  std::vector<std::string> dataset_names;
  std::vector<double> scores;
  std::string metric_name;

  [[nodiscard]] std::size_t models() const noexcept { return model_ids.size(); }
  [[nodiscard]] std::size_t datasets() const noexcept { return dataset_names.size(); }
  [[nodiscard]] double at(std::size_t model, std::size_t dataset) const {
    return scores[model * dataset_names.size() + dataset];
  }
  double& at(std::size_t model, std::size_t dataset) {
    return scores[model * dataset_names.size() + dataset];
  }
  [[nodiscard]] std::span<const double> row(std::size_t model) const {
    return std::span<const double>(scores).subspan(model * datasets(), datasets());
  }

  bool operator==(const ScoreMatrix&) const = default;
};

/// Checks shape, label uniqueness, finiteness and (for smape) the [0, 200]
/// range. Throws ShapeMismatch, DuplicateLabel, NonFiniteScore or InvalidMatrix.
void validate(const ScoreMatrix& matrix);

/// Symmetric MAPE on the 0-200 scale. Terms where both values are zero
/// contribute 0.
double smape(std::span<const double> actual, std::span<const double> forecast);

/// Mean absolute error over the horizon scaled by the in-sample
/// seasonal-naive mean absolute error of `train`.
double mase(std::span<const double> actual, std::span<const double> forecast,
            std::span<const double> train, std::size_t seasonal_period);

/// Macro average of the per-series metric over one dataset.
double dataset_score(const forecasters::ForecastSet& forecasts,
                     const series::DatasetCollection& collection, Metric metric,
                     std::string_view model, std::string_view dataset);

/// Every (model, dataset) score; rows follow forecasts.models(), columns the
/// collection order. Throws MissingCoverage listing every missing triple.
ScoreMatrix build_score_matrix(const forecasters::ForecastSet& forecasts,
                               const series::DatasetCollection& collection,
                               Metric metric);

}  // namespace bench_audit::metrics
