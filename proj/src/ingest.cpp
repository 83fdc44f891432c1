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

#include "bench_audit/ingest.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "bench_audit/error.hpp"
#include "text.hpp"

namespace bench_audit::ingest {

namespace {

using nlohmann::json;

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string_view> fields;
};

std::string describe(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

// Splits text into data rows after checking the header. Blank lines are
// skipped; a UTF-8 BOM and CR line endings are tolerated.
std::vector<CsvRow> parse_csv(std::string_view text, std::string_view expected_header,
                              std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRow> rows;
  const std::size_t columns = detail::split_fields(expected_header).size();
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != expected_header) {
        throw Error(ErrorCode::ParseError, describe(source, line_no) + ": expected header '" +
                                               std::string(expected_header) + "', got '" +
                                               std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    auto fields = detail::split_fields(line);
    if (fields.size() != columns) {
      throw Error(ErrorCode::ParseError, describe(source, line_no) + ": expected " +
                                             std::to_string(columns) + " fields, got " +
                                             std::to_string(fields.size()));
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (!header_seen) throw Error(ErrorCode::EmptyFile, std::string(source) + " is empty");
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, std::string(source) + " has no data rows");
  return rows;
}

long long parse_step(std::string_view field, std::string_view source, std::size_t line) {
  long long step = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), step);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError,
                describe(source, line) + ": invalid step '" + std::string(field) + "'");
  }
  return step;
}

double parse_value(std::string_view field, std::string_view source, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::ParseError,
                describe(source, line) + ": invalid value '" + std::string(field) + "'");
  }
  return value;
}

std::string require_label(std::string_view field, const char* what, std::string_view source,
                          std::size_t line) {
  if (field.empty()) {
    throw Error(ErrorCode::ParseError, describe(source, line) + ": empty " + what);
  }
  return std::string(field);
}

// Orders (step, value) points and checks steps run 1..n without gaps.
std::vector<double> contiguous_values(std::vector<std::pair<long long, double>> points,
                                      const std::string& owner) {
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> values;
  values.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto expected = static_cast<long long>(i + 1);
    if (points[i].first != expected) {
      throw Error(ErrorCode::NonContiguousSteps,
                  owner + ": expected step " + std::to_string(expected) + ", found step " +
                      std::to_string(points[i].first));
    }
    values.push_back(points[i].second);
  }
  return values;
}

}  // namespace

series::Dataset read_dataset_csv(const fs::path& path, std::string name, std::size_t horizon,
                                 std::size_t seasonal_period) {
  const std::string text = detail::read_file(path);
  const std::string source = path.string();
  const auto rows = parse_csv(text, "series_id,step,value", source);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<long long, double>>, std::less<>> points;
  for (const auto& row : rows) {
    auto id = require_label(row.fields[0], "series_id", source, row.line);
    const auto step = parse_step(row.fields[1], source, row.line);
    const auto value = parse_value(row.fields[2], source, row.line);
    auto [it, inserted] = points.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.emplace_back(step, value);
  }

  series::Dataset dataset{std::move(name), {}, horizon, seasonal_period};
  for (const auto& id : order) {
    auto values = contiguous_values(std::move(points[id]), "series '" + id + "'");
    dataset.series.push_back({id, std::move(values), seasonal_period, ""});
  }
  return dataset;
}

series::Dataset load_dataset_csv(const fs::path& path, std::string name, std::size_t horizon,
                                 std::size_t seasonal_period) {
  auto dataset = read_dataset_csv(path, std::move(name), horizon, seasonal_period);
  for (const auto& s : dataset.series) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!std::isfinite(s.values[i])) {
        throw Error(ErrorCode::NonFiniteValue,
                    path.string() + ": series '" + s.id + "' step " + std::to_string(i + 1) +
                        " is not finite");
      }
    }
  }
  const auto report = series::validate_collection({{dataset}});
  if (!report.ok()) {
    std::vector<std::string> details;
    for (const auto& v : report.violations) details.push_back(v.message);
    throw Error(ErrorCode::InvalidDataset,
                "dataset '" + dataset.name + "': " + details.front(), details);
  }
  return dataset;
}

forecasters::ForecastSet parse_forecasts_csv(std::string_view text) {
  constexpr std::string_view source = "forecasts";
  const auto rows = parse_csv(text, "model,dataset,series_id,step,value", source);

  using Key = forecasters::ForecastSet::Key;
  std::vector<Key> order;
  std::map<Key, std::vector<std::pair<long long, double>>> points;
  std::set<std::pair<Key, long long>> seen;
  for (const auto& row : rows) {
    Key key{require_label(row.fields[0], "model", source, row.line),
            require_label(row.fields[1], "dataset", source, row.line),
            require_label(row.fields[2], "series_id", source, row.line)};
    const auto step = parse_step(row.fields[3], source, row.line);
    const auto value = parse_value(row.fields[4], source, row.line);
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFiniteValue,
                  describe(source, row.line) + ": forecast value is not finite");
    }
    if (!seen.emplace(key, step).second) {
      throw Error(ErrorCode::DuplicateTriple,
                  describe(source, row.line) + ": duplicate row for (" + std::get<0>(key) +
                      ", " + std::get<1>(key) + ", " + std::get<2>(key) + ", step " +
                      std::to_string(step) + ")");
    }
    auto [it, inserted] = points.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.emplace_back(step, value);
  }

  forecasters::ForecastSet set;
  for (const auto& key : order) {
    const auto& [model, dataset, series_id] = key;
    auto values = contiguous_values(std::move(points[key]),
                                    "forecast (" + model + ", " + dataset + ", " + series_id + ")");
    set.add({model, dataset, series_id, std::move(values)});
  }
  return set;
}

forecasters::ForecastSet load_forecasts_csv(const fs::path& path) {
  try {
    return parse_forecasts_csv(detail::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what(), e.details());
  }
}

std::string forecasts_to_csv(const forecasters::ForecastSet& forecasts) {
  std::string out = "model,dataset,series_id,step,value\n";
  for (const auto& f : forecasts.forecasts()) {
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      out += f.model_id + ',' + f.dataset_name + ',' + f.series_id + ',' +
             std::to_string(j + 1) + ',' + detail::format_double(f.values[j]) + '\n';
    }
  }
  return out;
}

void write_forecasts_csv(const forecasters::ForecastSet& forecasts, const fs::path& path) {
  detail::write_file(path, forecasts_to_csv(forecasts));
}

void check_forecast_horizons(const forecasters::ForecastSet& forecasts,
                             const series::DatasetCollection& collection) {
  std::vector<std::string> mismatches;
  for (const auto& f : forecasts.forecasts()) {
    const auto* dataset = collection.find(f.dataset_name);
    if (dataset == nullptr || f.values.size() == dataset->horizon) continue;
    mismatches.push_back("(" + f.model_id + ", " + f.dataset_name + ", " + f.series_id +
                         ") has " + std::to_string(f.values.size()) + " steps, horizon is " +
                         std::to_string(dataset->horizon));
  }
  if (!mismatches.empty()) {
    throw Error(ErrorCode::HorizonMismatch, mismatches.front(), mismatches);
  }
}

namespace {

std::vector<std::string> string_list(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : doc[key]) {
    if (!item.is_string()) {
      throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

metrics::ScoreMatrix parse_score_matrix_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "score matrix must be a JSON object");
  if (!doc.contains("metric") || !doc["metric"].is_string()) {
    throw Error(ErrorCode::ParseError, "field 'metric' must be a string");
  }

  metrics::ScoreMatrix matrix;
  matrix.metric_name = doc["metric"].get<std::string>();
  matrix.model_ids = string_list(doc, "models");
  matrix.dataset_names = string_list(doc, "datasets");
  if (!doc.contains("scores") || !doc["scores"].is_array()) {
    throw Error(ErrorCode::ParseError, "field 'scores' must be an array of rows");
  }
  const auto& rows = doc["scores"];
  if (rows.size() != matrix.models()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(matrix.models()) + " models but " +
                                              std::to_string(rows.size()) + " score rows");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != matrix.datasets()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "score row " + std::to_string(i) + " ('" + matrix.model_ids[i] +
                      "') must hold " + std::to_string(matrix.datasets()) + " numbers");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const auto& cell = rows[i][j];
      if (cell.is_null()) {
        throw Error(ErrorCode::NonFiniteScore, "score at (" + matrix.model_ids[i] + ", " +
                                                   matrix.dataset_names[j] + ") is null");
      }
      if (!cell.is_number()) {
        throw Error(ErrorCode::ParseError, "score at (" + matrix.model_ids[i] + ", " +
                                               matrix.dataset_names[j] + ") is not a number");
      }
      matrix.scores.push_back(cell.get<double>());
    }
  }
  metrics::validate(matrix);
  return matrix;
}

metrics::ScoreMatrix load_score_matrix_json(const fs::path& path) {
  try {
    return parse_score_matrix_json(detail::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what(), e.details());
  }
}

std::string score_matrix_to_json(const metrics::ScoreMatrix& matrix) {
  json doc;
  doc["metric"] = matrix.metric_name;
  doc["models"] = matrix.model_ids;
  doc["datasets"] = matrix.dataset_names;
  doc["scores"] = json::array();
  for (std::size_t i = 0; i < matrix.models(); ++i) {
    auto row = matrix.row(i);
    doc["scores"].push_back(std::vector<double>(row.begin(), row.end()));
  }
  return doc.dump(2) + "\n";
}

void write_score_matrix_json(const metrics::ScoreMatrix& matrix, const fs::path& path) {
  detail::write_file(path, score_matrix_to_json(matrix));
}

metrics::ScoreMatrix merge_scores(std::span<const metrics::ScoreMatrix> parts) {
  if (parts.empty()) throw Error(ErrorCode::ShapeMismatch, "nothing to merge");
  metrics::ScoreMatrix merged;
  merged.metric_name = parts.front().metric_name;
  merged.dataset_names = parts.front().dataset_names;
  std::set<std::string> models;
  for (const auto& part : parts) {
    if (part.metric_name != merged.metric_name) {
      throw Error(ErrorCode::MetricMismatch,
                  "cannot merge '" + part.metric_name + "' scores into '" + merged.metric_name + "'");
    }
    if (part.dataset_names != merged.dataset_names) {
      throw Error(ErrorCode::DatasetMismatch,
                  "dataset labels or their order differ between parts");
    }
    for (const auto& id : part.model_ids) {
      if (!models.insert(id).second) {
        throw Error(ErrorCode::DuplicateModel, "model '" + id + "' appears in more than one part");
      }
    }
    merged.model_ids.insert(merged.model_ids.end(), part.model_ids.begin(), part.model_ids.end());
    merged.scores.insert(merged.scores.end(), part.scores.begin(), part.scores.end());
  }
  return merged;
}

}  // namespace bench_audit::ingest
