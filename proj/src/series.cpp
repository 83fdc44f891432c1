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

#include "bench_audit/series.hpp"

#include <cmath>
#include <set>

#include "bench_audit/error.hpp"

namespace bench_audit::series {

const TimeSeries* Dataset::find(std::string_view series_id) const {
  for (const auto& s : series) {
    if (s.id == series_id) return &s;
  }
  return nullptr;
}

const Dataset* DatasetCollection::find(std::string_view name) const {
  for (const auto& d : datasets) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries& series,
                                                   std::size_t horizon) {
  if (series.length() <= horizon) {
    throw Error(ErrorCode::HorizonTooLarge,
                "series '" + series.id + "' has length " +
                    std::to_string(series.length()) +
                    ", which must exceed horizon " + std::to_string(horizon));
  }
  const auto cut = static_cast<std::ptrdiff_t>(series.length() - horizon);
  TimeSeries train{series.id, {series.values.begin(), series.values.begin() + cut},
                   series.seasonal_period, series.unit};
  TimeSeries test{series.id, {series.values.begin() + cut, series.values.end()},
                  series.seasonal_period, series.unit};
  return {std::move(train), std::move(test)};
}

std::vector<SupervisedPair> time_delay_embed(const TimeSeries& series,
                                             std::size_t order) {
  if (order == 0 || series.length() <= order) {
    throw Error(ErrorCode::EmbedOrderTooLarge,
                "series '" + series.id + "' has length " +
                    std::to_string(series.length()) +
                    ", which must exceed embedding order " + std::to_string(order));
  }
  const auto& y = series.values;
  std::vector<SupervisedPair> pairs;
  pairs.reserve(y.size() - order);
  for (std::size_t i = order; i < y.size(); ++i) {
    SupervisedPair pair{y[i], {}, series.id};
    pair.lags.reserve(order);
    for (std::size_t lag = 1; lag <= order; ++lag) pair.lags.push_back(y[i - lag]);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<SupervisedPair> concat_global(const DatasetCollection& collection,
                                          std::size_t order) {
  std::vector<SupervisedPair> all;
  for (const auto& dataset : collection.datasets) {
    for (const auto& s : dataset.series) {
      auto pairs = time_delay_embed(s, order);
      all.insert(all.end(), std::make_move_iterator(pairs.begin()),
                 std::make_move_iterator(pairs.end()));
    }
  }
  return all;
}

ValidationReport validate_collection(const DatasetCollection& collection) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, const std::string& dataset,
                 const std::string& series, std::size_t index, std::string msg) {
    report.violations.push_back({kind, dataset, series, index, std::move(msg)});
  };

  std::set<std::string> names;
  for (const auto& dataset : collection.datasets) {
    if (!names.insert(dataset.name).second) {
      add(Violation::Kind::DuplicateName, dataset.name, "", 0,
          "duplicate dataset name '" + dataset.name + "'");
    }
    if (dataset.series.empty()) {
      add(Violation::Kind::Empty, dataset.name, "", 0,
          "dataset '" + dataset.name + "' has no series");
    }
    for (const auto& s : dataset.series) {
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
          add(Violation::Kind::NonFinite, dataset.name, s.id, i,
              "series '" + s.id + "' has a non-finite value at index " +
                  std::to_string(i));
        }
      }
      if (s.length() <= dataset.horizon) {
        add(Violation::Kind::TooShort, dataset.name, s.id, 0,
            "series '" + s.id + "' has length " + std::to_string(s.length()) +
                " <= horizon " + std::to_string(dataset.horizon));
      }
      if (s.seasonal_period != dataset.seasonal_period || s.seasonal_period == 0) {
        add(Violation::Kind::PeriodMismatch, dataset.name, s.id, 0,
            "series '" + s.id + "' has seasonal period " +
                std::to_string(s.seasonal_period) + ", dataset declares " +
                std::to_string(dataset.seasonal_period));
      }
    }
  }
  return report;
}

}  // namespace bench_audit::series
