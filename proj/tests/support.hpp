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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bench_audit/metrics.hpp"

namespace test_support {

using bench_audit::metrics::ScoreMatrix;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bench_audit_" + std::string(tag) + "_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

inline std::vector<std::string> labels(std::string_view prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::string(prefix) + std::to_string(i + 1));
  return out;
}

inline ScoreMatrix make_matrix(std::vector<std::vector<double>> rows, std::string metric = "smape") {
  ScoreMatrix m;
  m.model_ids = labels("M", rows.size());
  m.dataset_names = labels("D", rows.empty() ? 0 : rows.front().size());
  m.metric_name = std::move(metric);
  for (const auto& r : rows) m.scores.insert(m.scores.end(), r.begin(), r.end());
  return m;
}

// The 3x3 worked example used across rank-engine tests.
inline ScoreMatrix example_3x3() { return make_matrix({{1, 3, 3}, {2, 1, 2}, {3, 2, 1}}); }

// Uniform continuous scores in [0, 100); with `ties`, cells are drawn from a
// four-value set so exact ties are common.
inline ScoreMatrix random_matrix(std::mt19937_64& rng, std::size_t models, std::size_t datasets,
                                 bool ties) {
  std::uniform_real_distribution<double> cont(0.0, 100.0);
  std::uniform_int_distribution<int> small(1, 4);
  std::vector<std::vector<double>> rows(models, std::vector<double>(datasets));
  for (auto& r : rows) {
    for (auto& v : r) v = ties ? 10.0 * small(rng) : cont(rng);
  }
  return make_matrix(std::move(rows));
}

// Minimal well-formedness check: balanced tags, quoted attributes, known
// entities, single root element.
bool is_well_formed_xml(std::string_view doc, std::string* why = nullptr);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

// Seeded 13x13 fixture mirroring a benchmark with robust and volatile
// models. Procedure (splitmix64 stream from seed 20240917):
//   skill_i  = -0.3 + 0.6 * u                 (13 draws, model order)
//   spread_i = 0.1 + 0.06 * i                 (model index i = 0..12)
//   diff_j   = -0.5 + 1.0 * u                 (13 draws, dataset order)
//   z_ij     = sum of four u, minus 2, times sqrt(3)   (row-major)
//   score_ij = round6(10 * exp(skill_i + spread_i * z_ij + diff_j))
// where u = (next() >> 11) * 2^-53 and round6 rounds to 6 decimals.
ScoreMatrix make_fixture_matrix();

}  // namespace test_support
