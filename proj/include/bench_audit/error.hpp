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

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bench_audit {

enum class ErrorCode {
  // series_core
  HorizonTooLarge,
  EmbedOrderTooLarge,
  // forecasters
  SeriesTooShort,
  InvalidAlpha,
  AllZeroSeries,
  NegativeDemand,
  UnknownModel,
  ForecastGaps,
  // metrics
  LengthMismatch,
  EmptyInput,
  ZeroScale,
  MissingCoverage,
  HorizonMismatch,
  InvalidMatrix,
  // rank_engine
  EmptySubset,
  UnknownColumns,
  InvalidSize,
  InvalidConfig,
  // ingest
  ParseError,
  NonContiguousSteps,
  NonFiniteValue,
  EmptyFile,
  DuplicateTriple,
  ShapeMismatch,
  NonFiniteScore,
  DuplicateLabel,
  MetricMismatch,
  DatasetMismatch,
  DuplicateModel,
  InvalidDataset,
  // report
  IoError,
  MismatchedCurveLengths,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `details` carries one entry per
/// offending item (series, triple, gap) when the error aggregates several.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        details_(std::move(details)) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::vector<std::string>& details() const noexcept {
    return details_;
  }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace bench_audit
