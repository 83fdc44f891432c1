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

#include "bench_audit/metrics.hpp"

#include <cmath>
#include <set>

#include "bench_audit/error.hpp"

namespace bench_audit::metrics {

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::Smape ? "smape" : "mase";
}

Metric parse_metric(std::string_view name) {
  if (name == "smape") return Metric::Smape;
  if (name == "mase") return Metric::Mase;
  throw Error(ErrorCode::InvalidConfig,
              "unknown metric '" + std::string(name) + "' (expected smape or mase)");
}

void validate(const ScoreMatrix& matrix) {
  if (matrix.model_ids.empty() || matrix.dataset_names.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "score matrix needs at least one model and one dataset");
  }
  if (matrix.scores.size() != matrix.models() * matrix.datasets()) {
    throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(matrix.models()) + "x" +
                    std::to_string(matrix.datasets()) + " scores, got " +
                    std::to_string(matrix.scores.size()));
  }
  auto check_unique = [](const std::vector<std::string>& labels, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& label : labels) {
      if (!seen.insert(label).second) {
        throw Error(ErrorCode::DuplicateLabel,
                    std::string("duplicate ") + what + " label '" + label + "'");
      }
    }
  };
  check_unique(matrix.model_ids, "model");
  check_unique(matrix.dataset_names, "dataset");

  const bool is_smape = matrix.metric_name == "smape";
  for (std::size_t i = 0; i < matrix.models(); ++i) {
    for (std::size_t j = 0; j < matrix.datasets(); ++j) {
      const double v = matrix.at(i, j);
      const std::string cell = "(" + matrix.model_ids[i] + ", " + matrix.dataset_names[j] + ")";
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteScore, "score at " + cell + " is not finite");
      }
      if (is_smape && (v < 0.0 || v > 200.0)) {
        throw Error(ErrorCode::InvalidMatrix,
                    "smape score at " + cell + " is outside [0, 200]: " + std::to_string(v));
      }
    }
  }
}

namespace {

void check_pair(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "actual has " + std::to_string(actual.size()) + " values, forecast has " +
                    std::to_string(forecast.size()));
  }
  if (actual.empty()) throw Error(ErrorCode::EmptyInput, "no values to score");
}

}  // namespace

double smape(std::span<const double> actual, std::span<const double> forecast) {
  check_pair(actual, forecast);
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double denom = (std::abs(forecast[i]) + std::abs(actual[i])) / 2.0;
    if (denom == 0.0) continue;
    total += std::abs(forecast[i] - actual[i]) / denom;
  }
  return 100.0 * total / static_cast<double>(actual.size());
}

double mase(std::span<const double> actual, std::span<const double> forecast,
            std::span<const double> train, std::size_t seasonal_period) {
  check_pair(actual, forecast);
  if (seasonal_period == 0 || train.size() <= seasonal_period) {
    throw Error(ErrorCode::LengthMismatch,
                "mase needs more than " + std::to_string(seasonal_period) +
                    " training values, got " + std::to_string(train.size()));
  }
  double scale = 0.0;
  for (std::size_t i = seasonal_period; i < train.size(); ++i) {
    scale += std::abs(train[i] - train[i - seasonal_period]);
  }
  scale /= static_cast<double>(train.size() - seasonal_period);
  if (scale == 0.0) {
    throw Error(ErrorCode::ZeroScale, "in-sample seasonal-naive error is zero");
  }
  double error = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) error += std::abs(actual[i] - forecast[i]);
  error /= static_cast<double>(actual.size());
  return error / scale;
}

namespace {

const series::Dataset& require_dataset(const series::DatasetCollection& collection,
                                       std::string_view name) {
  const auto* dataset = collection.find(name);
  if (dataset == nullptr) {
    throw Error(ErrorCode::MissingCoverage, "unknown dataset '" + std::string(name) + "'");
  }
  return *dataset;
}

// Missing triples for one (model, dataset) pair.
std::vector<std::string> coverage_gaps(const forecasters::ForecastSet& forecasts,
                                       const series::Dataset& dataset,
                                       std::string_view model) {
  std::vector<std::string> gaps;
  for (const auto& s : dataset.series) {
    if (forecasts.find(model, dataset.name, s.id) == nullptr) {
      gaps.push_back(std::string(model) + "/" + dataset.name + "/" + s.id);
    }
  }
  return gaps;
}

}  // namespace

double dataset_score(const forecasters::ForecastSet& forecasts,
                     const series::DatasetCollection& collection, Metric metric,
                     std::string_view model, std::string_view dataset_name) {
  const auto& dataset = require_dataset(collection, dataset_name);
  if (auto gaps = coverage_gaps(forecasts, dataset, model); !gaps.empty()) {
    throw Error(ErrorCode::MissingCoverage,
                "no forecasts for " + gaps.front() +
                    (gaps.size() > 1 ? " and " + std::to_string(gaps.size() - 1) + " more" : ""),
                gaps);
  }
  double total = 0.0;
  for (const auto& s : dataset.series) {
    const auto* forecast = forecasts.find(model, dataset.name, s.id);
    const std::string triple = std::string(model) + "/" + dataset.name + "/" + s.id;
    if (forecast->values.size() != dataset.horizon) {
      throw Error(ErrorCode::HorizonMismatch,
                  triple + " has " + std::to_string(forecast->values.size()) +
                      " steps, dataset horizon is " + std::to_string(dataset.horizon));
    }
    auto [train, test] = series::train_test_split(s, dataset.horizon);
    try {
      total += metric == Metric::Smape
                   ? smape(test.values, forecast->values)
                   : mase(test.values, forecast->values, train.values, dataset.seasonal_period);
    } catch (const Error& e) {
      throw Error(e.code(), triple + ": " + e.what(), {triple});
    }
  }
  return total / static_cast<double>(dataset.series.size());
}

ScoreMatrix build_score_matrix(const forecasters::ForecastSet& forecasts,
                               const series::DatasetCollection& collection,
                               Metric metric) {
  std::vector<std::string> gaps;
  for (const auto& model : forecasts.models()) {
    for (const auto& dataset : collection.datasets) {
      auto missing = coverage_gaps(forecasts, dataset, model);
      gaps.insert(gaps.end(), missing.begin(), missing.end());
    }
  }
  if (forecasts.models().empty()) {
    throw Error(ErrorCode::MissingCoverage, "forecast set has no models");
  }
  if (!gaps.empty()) {
    throw Error(ErrorCode::MissingCoverage,
                std::to_string(gaps.size()) + " (model, dataset, series) triple(s) missing",
                gaps);
  }

  ScoreMatrix matrix;
  matrix.model_ids = forecasts.models();
  for (const auto& dataset : collection.datasets) matrix.dataset_names.push_back(dataset.name);
  matrix.metric_name = std::string(to_string(metric));
  matrix.scores.reserve(matrix.models() * matrix.datasets());
  for (const auto& model : matrix.model_ids) {
    for (const auto& dataset : matrix.dataset_names) {
      matrix.scores.push_back(dataset_score(forecasts, collection, metric, model, dataset));
    }
  }
  return matrix;
}

}  // namespace bench_audit::metrics
