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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bench_audit/metrics.hpp"
#include "bench_audit/rank_engine.hpp"

namespace bench_audit::report {

namespace fs = std::filesystem;

inline constexpr std::string_view kReportSchema = "bench_audit_report_v1";

/// Versioned, key-sorted JSON; byte-identical for equal reports.
std::string report_to_json(const rank::AuditReport& report);
/// Inverse of report_to_json. Throws ParseError on malformed documents.
rank::AuditReport report_from_json(std::string_view text);

void emit_json(const rank::AuditReport& report, const fs::path& path);
rank::AuditReport load_report_json(const fs::path& path);

/// Linear-interpolation quantile of sorted data (position q * (n - 1)).
double quantile(std::span<const double> sorted, double q);

struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest value within 1.5 IQR of q1
  double whisker_high = 0.0;  // largest value within 1.5 IQR of q3
  std::vector<double> outliers;
};

BoxStats box_stats(std::span<const double> values);

/// One box glyph per model over its per-dataset ranks, sorted by median rank.
std::string rank_boxplot_svg(const metrics::ScoreMatrix& matrix);
void emit_rank_boxplot_svg(const metrics::ScoreMatrix& matrix, const fs::path& path);

/// One row of panels per curve and one panel per subset size. Each panel
/// shows every model's rank on the curve's witness subset; the curve's own
/// model is highlighted. Throws MismatchedCurveLengths for an empty list or
/// curves of different lengths.
std::string cherrypick_panels_svg(std::span<const rank::CherryPickCurve> curves,
                                  std::span<const std::string> model_ids);
void emit_cherrypick_panels_svg(std::span<const rank::CherryPickCurve> curves,
                                std::span<const std::string> model_ids, const fs::path& path);

/// Bars grouped by subset size, one per k, on a 0-100% axis.
std::string topk_bars_svg(std::span<const rank::TopKCell> table);
void emit_topk_bars_svg(std::span<const rank::TopKCell> table, const fs::path& path);

}  // namespace bench_audit::report
