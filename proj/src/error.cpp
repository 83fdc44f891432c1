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

#include "bench_audit/error.hpp"

namespace bench_audit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::EmbedOrderTooLarge: return "EmbedOrderTooLarge";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::AllZeroSeries: return "AllZeroSeries";
    case ErrorCode::NegativeDemand: return "NegativeDemand";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::ForecastGaps: return "ForecastGaps";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::MissingCoverage: return "MissingCoverage";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::UnknownColumns: return "UnknownColumns";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonContiguousSteps: return "NonContiguousSteps";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::DuplicateTriple: return "DuplicateTriple";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::DatasetMismatch: return "DatasetMismatch";
    case ErrorCode::DuplicateModel: return "DuplicateModel";
    case ErrorCode::InvalidDataset: return "InvalidDataset";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MismatchedCurveLengths: return "MismatchedCurveLengths";
  }
  return "Unknown";
}

}  // namespace bench_audit
