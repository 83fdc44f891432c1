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
#include <string_view>
#include <string>
#include <utility>
#include <vector>

namespace bench_audit::series {

/// Regular, index-based univariate series. Timestamps are not stored.
struct TimeSeries {
  std::string id;
  std::vector<double> values;
  std::size_t seasonal_period = 1;
  std::string unit;

  [[nodiscard]] std::size_t length() const noexcept { return values.size(); }
  bool operator==(const TimeSeries&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<TimeSeries> series;
  std::size_t horizon = 1;
  std::size_t seasonal_period = 1;

  [[nodiscard]] const TimeSeries* find(std::string_view series_id) const;
  bool operator==(const Dataset&) const = default;
};

/// Ordered collection of datasets. Column positions in score matrices and
/// subset bitmasks follow this order.
struct DatasetCollection {
  std::vector<Dataset> datasets;

  [[nodiscard]] std::size_t count() const noexcept { return datasets.size(); }
  [[nodiscard]] const Dataset* find(std::string_view name) const;
};

/// One supervised example: `lags` are most-recent-first (y[i-1], ..., y[i-p]).
struct SupervisedPair {
  double target = 0.0;
  std::vector<double> lags;
  std::string origin_series;

  bool operator==(const SupervisedPair&) const = default;
};

struct Violation {
  enum class Kind { NonFinite, DuplicateName, TooShort, PeriodMismatch, Empty };
  Kind kind;
  std::string dataset;
  std::string series;  // empty for dataset-level violations
  std::size_t index = 0;  // value index for NonFinite
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Throws HorizonTooLarge unless series.length() > horizon.
std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries& series,
                                                   std::size_t horizon);

/// Throws EmbedOrderTooLarge unless series.length() > order.
std::vector<SupervisedPair> time_delay_embed(const TimeSeries& series,
                                             std::size_t order);

/// Pairs for every series of every dataset, collection order then series order.
std::vector<SupervisedPair> concat_global(const DatasetCollection& collection,
                                          std::size_t order);

ValidationReport validate_collection(const DatasetCollection& collection);

}  // namespace bench_audit::series
