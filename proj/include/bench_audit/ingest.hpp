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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "bench_audit/forecasters.hpp"
#include "bench_audit/metrics.hpp"
#include "bench_audit/series.hpp"

namespace bench_audit::ingest {

namespace fs = std::filesystem;

/// Parses a `series_id,step,value` file into a Dataset without checking value
/// finiteness or dataset invariants. Series keep first-appearance order and
/// values are placed in step order. Throws ParseError (with line number),
/// NonContiguousSteps or EmptyFile.
series::Dataset read_dataset_csv(const fs::path& path, std::string name,
                                 std::size_t horizon, std::size_t seasonal_period);

/// read_dataset_csv plus validation: NonFiniteValue for NaN/inf values and
/// InvalidDataset (one detail per violation) for any other broken invariant.
series::Dataset load_dataset_csv(const fs::path& path, std::string name,
                                 std::size_t horizon, std::size_t seasonal_period);

/// Parses a `model,dataset,series_id,step,value` file. Throws ParseError,
/// NonContiguousSteps, NonFiniteValue, EmptyFile or DuplicateTriple.
forecasters::ForecastSet load_forecasts_csv(const fs::path& path);
forecasters::ForecastSet parse_forecasts_csv(std::string_view text);

std::string forecasts_to_csv(const forecasters::ForecastSet& forecasts);
void write_forecasts_csv(const forecasters::ForecastSet& forecasts, const fs::path& path);

/// Throws HorizonMismatch listing every triple whose length differs from the
/// horizon of its dataset.
void check_forecast_horizons(const forecasters::ForecastSet& forecasts,
                             const series::DatasetCollection& collection);

/// `{"metric": str, "models": [str], "datasets": [str], "scores": [[float]]}`.
/// Throws ParseError, ShapeMismatch, NonFiniteScore or DuplicateLabel.
metrics::ScoreMatrix parse_score_matrix_json(std::string_view text);
metrics::ScoreMatrix load_score_matrix_json(const fs::path& path);
std::string score_matrix_to_json(const metrics::ScoreMatrix& matrix);
void write_score_matrix_json(const metrics::ScoreMatrix& matrix, const fs::path& path);

/// Row-concatenates parts that share metric and dataset order. Throws
/// MetricMismatch, DatasetMismatch or DuplicateModel; never reorders columns.
metrics::ScoreMatrix merge_scores(std::span<const metrics::ScoreMatrix> parts);

}  // namespace bench_audit::ingest
