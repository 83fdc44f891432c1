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

#include "bench_audit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <json.hpp>

#include "bench_audit/error.hpp"
#include "text.hpp"

namespace bench_audit::report {

using nlohmann::json;

namespace {

json outcome_to_json(const rank::RankingOutcome& outcome,
                     const std::vector<std::string>& model_ids) {
  return {{"subset", outcome.subset.mask()},
          {"aggregation", rank::to_string(outcome.aggregation)},
          {"tie_policy", rank::to_string(outcome.tie_policy)},
          {"aggregates", outcome.aggregates},
          {"ranks", outcome.ranks},
          {"winner", model_ids.at(outcome.winner)}};
}

std::vector<std::string> subset_names(rank::SubsetId subset,
                                      const std::vector<std::string>& datasets) {
  std::vector<std::string> names;
  for (auto c : subset.columns()) names.push_back(datasets.at(c));
  return names;
}

std::size_t index_of(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(ErrorCode::ParseError, "unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

std::string report_to_json(const rank::AuditReport& report) {
  const auto& config = report.config;
  json doc;
  doc["schema"] = kReportSchema;
  doc["config"] = {{"aggregation", rank::to_string(config.policies.aggregation)},
                   {"cherry_pick_ties", rank::to_string(config.policies.cherry_pick_ties)},
                   {"winner_ties", "deterministic"},
                   {"distribution_ties", "average"},
                   {"n_max", config.n_max},
                   {"k", config.ks},
                   {"budget", config.budget},
                   {"seed", config.seed}};
  doc["metric"] = report.metric;
  doc["models"] = report.model_ids;
  doc["datasets"] = report.dataset_names;
  doc["baseline"] = outcome_to_json(report.baseline, report.model_ids);

  doc["curves"] = json::array();
  for (const auto& curve : report.curves) {
    json entries = json::array();
    for (const auto& e : curve.entries) {
      entries.push_back({{"n", e.size},
                         {"best_rank", e.best_rank},
                         {"witness", e.witness.mask()},
                         {"witness_datasets", subset_names(e.witness, report.dataset_names)},
                         {"gap", e.gap},
                         {"witness_ranks", e.witness_ranks}});
    }
    doc["curves"].push_back({{"model", curve.model_id}, {"entries", std::move(entries)}});
  }

  doc["top_k"] = json::array();
  for (const auto& cell : report.top_k_table) {
    doc["top_k"].push_back({{"n", cell.size}, {"k", cell.k}, {"fraction", cell.fraction}});
  }

  doc["sizes"] = json::array();
  for (const auto& s : report.sizes) {
    json item{{"n", s.size},
              {"mode", rank::to_string(s.mode)},
              {"subsets_evaluated", s.subsets_evaluated},
              {"risk", s.risk}};
    if (s.mode == rank::EnumerationMode::Sampled) {
      item["seed"] = config.seed;
      item["sample_count"] = s.subsets_evaluated;
    }
    doc["sizes"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

rank::AuditReport report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != kReportSchema) {
      throw Error(ErrorCode::ParseError,
                  "unsupported report schema '" + doc.at("schema").get<std::string>() + "'");
    }
    rank::AuditReport report;
    const auto& config = doc.at("config");
    report.config.policies.aggregation =
        rank::parse_aggregation(config.at("aggregation").get<std::string>());
    report.config.policies.cherry_pick_ties =
        rank::parse_tie_policy(config.at("cherry_pick_ties").get<std::string>());
    report.config.n_max = config.at("n_max").get<std::size_t>();
    report.config.ks = config.at("k").get<std::vector<std::size_t>>();
    report.config.budget = config.at("budget").get<std::uint64_t>();
    report.config.seed = config.at("seed").get<std::uint64_t>();
    report.metric = doc.at("metric").get<std::string>();
    report.model_ids = doc.at("models").get<std::vector<std::string>>();
    report.dataset_names = doc.at("datasets").get<std::vector<std::string>>();

    const auto& baseline = doc.at("baseline");
    report.baseline.subset = rank::SubsetId(baseline.at("subset").get<std::uint64_t>());
    report.baseline.aggregation =
        rank::parse_aggregation(baseline.at("aggregation").get<std::string>());
    report.baseline.tie_policy = rank::parse_tie_policy(baseline.at("tie_policy").get<std::string>());
    report.baseline.aggregates = baseline.at("aggregates").get<std::vector<double>>();
    report.baseline.ranks = baseline.at("ranks").get<std::vector<double>>();
    report.baseline.winner = index_of(report.model_ids, baseline.at("winner").get<std::string>());

    for (const auto& c : doc.at("curves")) {
      rank::CherryPickCurve curve;
      curve.model_id = c.at("model").get<std::string>();
      curve.model = index_of(report.model_ids, curve.model_id);
      for (const auto& e : c.at("entries")) {
        curve.entries.push_back({e.at("n").get<std::size_t>(), e.at("best_rank").get<double>(),
                                 rank::SubsetId(e.at("witness").get<std::uint64_t>()),
                                 e.at("gap").get<double>(),
                                 e.at("witness_ranks").get<std::vector<double>>()});
      }
      report.curves.push_back(std::move(curve));
    }
    for (const auto& cell : doc.at("top_k")) {
      report.top_k_table.push_back({cell.at("n").get<std::size_t>(), cell.at("k").get<std::size_t>(),
                                    cell.at("fraction").get<double>()});
    }
    for (const auto& s : doc.at("sizes")) {
      const auto mode = s.at("mode").get<std::string>();
      if (mode != "exact" && mode != "sampled") {
        throw Error(ErrorCode::ParseError, "unknown enumeration mode '" + mode + "'");
      }
      report.sizes.push_back({s.at("n").get<std::size_t>(),
                              mode == "exact" ? rank::EnumerationMode::Exact
                                              : rank::EnumerationMode::Sampled,
                              s.at("subsets_evaluated").get<std::size_t>(),
                              s.at("risk").get<double>()});
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

void emit_json(const rank::AuditReport& report, const fs::path& path) {
  detail::write_file(path, report_to_json(report));
}

rank::AuditReport load_report_json(const fs::path& path) {
  return report_from_json(detail::read_file(path));
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of no values");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats stats;
  stats.q1 = quantile(sorted, 0.25);
  stats.median = quantile(sorted, 0.5);
  stats.q3 = quantile(sorted, 0.75);
  const double fence = 1.5 * (stats.q3 - stats.q1);
  const double low_fence = stats.q1 - fence;
  const double high_fence = stats.q3 + fence;
  stats.whisker_low = stats.q1;
  stats.whisker_high = stats.q3;
  for (double v : sorted) {
    if (v < low_fence || v > high_fence) {
      stats.outliers.push_back(v);
    } else {
      stats.whisker_low = std::min(stats.whisker_low, v);
      stats.whisker_high = std::max(stats.whisker_high, v);
    }
  }
  return stats;
}

namespace {

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open(double width, double height, std::string_view title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<title>" + escape(title) + "</title>\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" fill=\"white\"/>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view cls,
                 std::string_view stroke = "black") {
  return "<line class=\"" + std::string(cls) + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) +
         "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + std::string(stroke) +
         "\"/>\n";
}

std::string text(double x, double y, std::string_view content, std::string_view anchor = "start",
                 std::string_view cls = "label") {
  return "<text class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" text-anchor=\"" + std::string(anchor) + "\">" + escape(content) + "</text>\n";
}

std::string rect(double x, double y, double w, double h, std::string_view cls,
                 std::string_view fill, std::string_view extra = "") {
  return "<rect class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"" + std::string(fill) +
         "\" stroke=\"black\"" + std::string(extra) + "/>\n";
}

}  // namespace

std::string rank_boxplot_svg(const metrics::ScoreMatrix& matrix) {
  metrics::validate(matrix);
  const std::size_t m = matrix.models();

  struct Row {
    std::size_t model;
    BoxStats stats;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back({i, box_stats(rank::rank_distribution(matrix, matrix.model_ids[i]))});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.stats.median < b.stats.median;
  });

  constexpr double left = 140.0, plot_width = 520.0, top = 40.0, row_height = 28.0;
  const double width = left + plot_width + 30.0;
  const double height = top + row_height * static_cast<double>(m) + 50.0;
  const double lo = 0.5, hi = static_cast<double>(m) + 0.5;
  auto x = [&](double r) { return left + (r - lo) / (hi - lo) * plot_width; };

  std::string svg = svg_open(width, height, "Rank distribution across datasets");
  svg += text(width / 2.0, 20.0, "Rank distribution across datasets", "middle", "title");
  const double axis_y = top + row_height * static_cast<double>(m) + 8.0;
  svg += line(x(lo), axis_y, x(hi), axis_y, "axis");
  for (std::size_t r = 1; r <= m; ++r) {
    svg += line(x(static_cast<double>(r)), axis_y, x(static_cast<double>(r)), axis_y + 4.0, "tick");
    svg += text(x(static_cast<double>(r)), axis_y + 16.0, std::to_string(r), "middle", "tick-label");
  }
  svg += text(x((lo + hi) / 2.0), axis_y + 34.0, "rank (1 = best)", "middle", "axis-label");

  for (std::size_t row = 0; row < rows.size(); ++row) {
    const auto& [model, s] = rows[row];
    const double cy = top + row_height * (static_cast<double>(row) + 0.5);
    const double box_h = row_height * 0.6;
    svg += "<g class=\"box-glyph\" data-model=\"" + escape(matrix.model_ids[model]) + "\">\n";
    svg += text(left - 8.0, cy + 4.0, matrix.model_ids[model], "end");
    svg += line(x(s.whisker_low), cy, x(s.q1), cy, "whisker");
    svg += line(x(s.q3), cy, x(s.whisker_high), cy, "whisker");
    svg += line(x(s.whisker_low), cy - box_h / 4.0, x(s.whisker_low), cy + box_h / 4.0, "whisker-cap");
    svg += line(x(s.whisker_high), cy - box_h / 4.0, x(s.whisker_high), cy + box_h / 4.0, "whisker-cap");
    svg += rect(x(s.q1), cy - box_h / 2.0, x(s.q3) - x(s.q1), box_h, "box", "#9ecae1");
    svg += line(x(s.median), cy - box_h / 2.0, x(s.median), cy + box_h / 2.0, "median", "#08306b");
    for (double v : s.outliers) {
      svg += "<circle class=\"outlier\" cx=\"" + num(x(v)) + "\" cy=\"" + num(cy) +
             "\" r=\"3.00\" fill=\"none\" stroke=\"black\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_rank_boxplot_svg(const metrics::ScoreMatrix& matrix, const fs::path& path) {
  detail::write_file(path, rank_boxplot_svg(matrix));
}

std::string cherrypick_panels_svg(std::span<const rank::CherryPickCurve> curves,
                                  std::span<const std::string> model_ids) {
  if (curves.empty()) {
    throw Error(ErrorCode::MismatchedCurveLengths, "no curves to draw");
  }
  const std::size_t n_max = curves.front().entries.size();
  for (const auto& curve : curves) {
    if (curve.entries.size() != n_max || n_max == 0) {
      throw Error(ErrorCode::MismatchedCurveLengths,
                  "curve for '" + curve.model_id + "' has " + std::to_string(curve.entries.size()) +
                      " sizes, expected " + std::to_string(n_max));
    }
  }
  const std::size_t m = curves.front().entries.front().witness_ranks.size();

  constexpr double panel_w = 150.0, panel_h = 140.0, gap = 16.0, left = 20.0, top = 40.0;
  constexpr double label_h = 34.0, title_h = 22.0;
  const double width = left + static_cast<double>(n_max) * (panel_w + gap);
  const double row_h = title_h + panel_h + label_h;
  const double height = top + static_cast<double>(curves.size()) * row_h + 10.0;

  std::string svg = svg_open(width, height, "Best achievable rank on cherry-picked subsets");
  svg += text(width / 2.0, 20.0, "Best achievable rank on cherry-picked subsets", "middle", "title");
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const double row_top = top + static_cast<double>(c) * row_h;
    svg += text(left, row_top + 14.0, "cherry-picking for " + curve.model_id, "start", "row-title");
    for (std::size_t p = 0; p < n_max; ++p) {
      const auto& entry = curve.entries[p];
      if (entry.witness_ranks.size() != m) {
        throw Error(ErrorCode::MismatchedCurveLengths, "witness rank vectors differ in length");
      }
      const double px = left + static_cast<double>(p) * (panel_w + gap);
      const double py = row_top + title_h;
      svg += "<g class=\"panel\" data-model=\"" + escape(curve.model_id) + "\" data-n=\"" +
             std::to_string(entry.size) + "\">\n";
      svg += rect(px, py, panel_w, panel_h, "frame", "none");
      svg += text(px + panel_w / 2.0, py + 12.0,
                  "n = " + std::to_string(entry.size) + ", rank " + num(entry.best_rank), "middle",
                  "panel-title");
      const double slot = panel_w / static_cast<double>(m);
      const double base = py + panel_h;
      const double usable = panel_h - 20.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = entry.witness_ranks[i];
        const double h = usable * r / static_cast<double>(m);
        const bool highlighted = i == curve.model;
        const std::string name = i < model_ids.size() ? model_ids[i] : std::to_string(i + 1);
        svg += "<rect class=\"" + std::string(highlighted ? "bar highlight" : "bar") +
               "\" data-model=\"" + escape(name) + "\" data-rank=\"" + num(r) + "\" x=\"" +
               num(px + slot * static_cast<double>(i) + slot * 0.1) + "\" y=\"" + num(base - h) +
               "\" width=\"" + num(slot * 0.8) + "\" height=\"" + num(h) + "\" fill=\"" +
               (highlighted ? "#d62728" : "#7f7f7f") + "\"/>\n";
      }
      svg += "</g>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

void emit_cherrypick_panels_svg(std::span<const rank::CherryPickCurve> curves,
                                std::span<const std::string> model_ids, const fs::path& path) {
  detail::write_file(path, cherrypick_panels_svg(curves, model_ids));
}

std::string topk_bars_svg(std::span<const rank::TopKCell> table) {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> ks;
  for (const auto& cell : table) {
    if (!(cell.fraction >= 0.0 && cell.fraction <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "top-k fraction outside [0, 1]");
    }
    if (std::find(sizes.begin(), sizes.end(), cell.size) == sizes.end()) sizes.push_back(cell.size);
    if (std::find(ks.begin(), ks.end(), cell.k) == ks.end()) ks.push_back(cell.k);
  }
  std::sort(sizes.begin(), sizes.end());
  std::sort(ks.begin(), ks.end());

  static constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                             "#66a61e", "#e6ab02"};
  constexpr double left = 60.0, top = 40.0, plot_h = 260.0, bar_w = 22.0, group_gap = 24.0;
  const double group_w = bar_w * static_cast<double>(std::max<std::size_t>(ks.size(), 1)) + group_gap;
  const double plot_w = std::max(group_w * static_cast<double>(sizes.size()), 200.0);
  const double width = left + plot_w + 120.0;
  const double height = top + plot_h + 60.0;
  const double base = top + plot_h;

  std::string svg = svg_open(width, height, "Models reportable as top-k");
  svg += text(width / 2.0, 20.0, "Models reportable as top-k", "middle", "title");
  svg += line(left, base, left + plot_w, base, "axis");
  svg += line(left, top, left, base, "axis");
  for (int pct = 0; pct <= 100; pct += 25) {
    const double y = base - plot_h * pct / 100.0;
    svg += line(left - 4.0, y, left, y, "tick");
    svg += text(left - 6.0, y + 4.0, std::to_string(pct) + "%", "end", "tick-label");
  }
  svg += text(left + plot_w / 2.0, base + 40.0, "number of datasets", "middle", "axis-label");

  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const double gx = left + group_gap / 2.0 + static_cast<double>(g) * group_w;
    svg += text(gx + bar_w * static_cast<double>(ks.size()) / 2.0, base + 16.0,
                std::to_string(sizes[g]), "middle", "tick-label");
    for (const auto& cell : table) {
      if (cell.size != sizes[g]) continue;
      const auto slot = static_cast<std::size_t>(std::find(ks.begin(), ks.end(), cell.k) - ks.begin());
      const double h = plot_h * cell.fraction;
      const double bx = gx + bar_w * static_cast<double>(slot);
      svg += "<rect class=\"bar\" data-n=\"" + std::to_string(cell.size) + "\" data-k=\"" +
             std::to_string(cell.k) + "\" x=\"" + num(bx) + "\" y=\"" + num(base - h) +
             "\" width=\"" + num(bar_w - 2.0) + "\" height=\"" + num(h) + "\" fill=\"" +
             kPalette[slot % std::size(kPalette)] + "\"/>\n";
      svg += text(bx + (bar_w - 2.0) / 2.0, base - h - 3.0,
                  std::to_string(std::lround(cell.fraction * 100.0)) + "%", "middle", "bar-label");
    }
  }
  for (std::size_t s = 0; s < ks.size(); ++s) {
    const double ly = top + 16.0 * static_cast<double>(s);
    svg += rect(left + plot_w + 20.0, ly, 10.0, 10.0, "legend-swatch", kPalette[s % std::size(kPalette)]);
    svg += text(left + plot_w + 36.0, ly + 9.0, "top " + std::to_string(ks[s]), "start", "legend");
  }
  svg += "</svg>\n";
  return svg;
}

void emit_topk_bars_svg(std::span<const rank::TopKCell> table, const fs::path& path) {
  detail::write_file(path, topk_bars_svg(table));
}

}  // namespace bench_audit::report
