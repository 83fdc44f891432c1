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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bench_audit/metrics.hpp"

namespace bench_audit::rank {

using metrics::ScoreMatrix;

/// Maximum number of datasets a subset bitmask can address.
inline constexpr std::size_t kMaxDatasets = 64;
inline constexpr std::uint64_t kDefaultBudget = 100'000;

/// Set of dataset columns; bit j selects column j of the score matrix.
class SubsetId {
 public:
  constexpr SubsetId() = default;
  constexpr explicit SubsetId(std::uint64_t mask) : mask_(mask) {}

  /// All columns 0..count-1.
  static SubsetId full(std::size_t count);
  static SubsetId of(std::span<const std::size_t> columns);

  [[nodiscard]] constexpr std::uint64_t mask() const noexcept { return mask_; }
  [[nodiscard]] constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  [[nodiscard]] constexpr bool contains(std::size_t column) const noexcept {
    return column < 64 && ((mask_ >> column) & 1U) != 0;
  }
  [[nodiscard]] std::vector<std::size_t> columns() const;

  constexpr auto operator<=>(const SubsetId&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

enum class Aggregation { MeanRank, MeanScore };
enum class TiePolicy { Average, Competition, Deterministic };

std::string_view to_string(Aggregation aggregation) noexcept;
std::string_view to_string(TiePolicy policy) noexcept;
/// "mean_rank" | "mean_score"; throws InvalidConfig otherwise.
Aggregation parse_aggregation(std::string_view name);
/// "average" | "competition" | "deterministic"; throws InvalidConfig otherwise.
TiePolicy parse_tie_policy(std::string_view name);

/// Ranks ascending values (1 = smallest). Deterministic resolves ties by
/// position, Competition gives tied entries the best shared position and
/// Average their mean position.
std::vector<double> rank_values(std::span<const double> values, TiePolicy policy);

struct RankingOutcome {
  SubsetId subset;
  Aggregation aggregation = Aggregation::MeanRank;
  TiePolicy tie_policy = TiePolicy::Deterministic;
  std::vector<double> aggregates;  // per model, lower is better
  std::vector<double> ranks;       // per model
  std::size_t winner = 0;          // smallest aggregate, first in model order

  bool operator==(const RankingOutcome&) const = default;
};

RankingOutcome rank_on_subset(const ScoreMatrix& matrix, SubsetId subset,
                              Aggregation aggregation, TiePolicy tie_policy);

RankingOutcome baseline_ranking(const ScoreMatrix& matrix, Aggregation aggregation,
                                TiePolicy tie_policy);

/// Per-dataset rank (average ties) of one model, in column order.
std::vector<double> rank_distribution(const ScoreMatrix& matrix, std::string_view model);

enum class EnumerationMode { Exact, Sampled };
std::string_view to_string(EnumerationMode mode) noexcept;

struct SubsetEnumeration {
  std::vector<SubsetId> subsets;
  EnumerationMode mode = EnumerationMode::Exact;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k) noexcept;

/// Every size-`size` subset of `count` columns in ascending bitmask order when
/// C(count, size) <= budget; otherwise `budget` distinct subsets drawn
/// uniformly without replacement from a generator seeded with `seed`.
SubsetEnumeration enumerate_subsets(std::size_t count, std::size_t size,
                                    std::uint64_t budget, std::uint64_t seed);

/// Ranking choices for cherry-pick statistics. Distributions always use
/// average ties; winner-based statistics always use deterministic ties.
struct Policies {
  Aggregation aggregation = Aggregation::MeanRank;
  TiePolicy cherry_pick_ties = TiePolicy::Competition;

  bool operator==(const Policies&) const = default;
};

struct SearchOptions {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // does not affect results
};

struct CurveEntry {
  std::size_t size = 0;
  double best_rank = 0.0;
  SubsetId witness;
  /// Smallest aggregate among the other models minus the model's own; larger
  /// is a more convincing witness. Zero for single-model matrices.
  double gap = 0.0;
  /// Every model's rank on the witness subset.
  std::vector<double> witness_ranks;

  bool operator==(const CurveEntry&) const = default;
};

struct CherryPickCurve {
  std::string model_id;
  std::size_t model = 0;
  std::vector<CurveEntry> entries;  // sizes 1..n_max

  bool operator==(const CherryPickCurve&) const = default;
};

/// Best achievable rank of `model` for each subset size 1..n_max. Witness ties
/// are broken by larger gap, then by smaller bitmask.
CherryPickCurve best_rank_curve(const ScoreMatrix& matrix, std::string_view model,
                                std::size_t n_max, const Policies& policies,
                                const SearchOptions& options = {});

/// Fraction of models that reach rank <= k on some size-n subset.
double top_k_reportable(const ScoreMatrix& matrix, std::size_t n, std::size_t k,
                        const Policies& policies, const SearchOptions& options = {});

/// Fraction of size-n subsets whose winner differs from the full-collection
/// winner.
double misidentification_risk(const ScoreMatrix& matrix, std::size_t n,
                              const Policies& policies, const SearchOptions& options = {});

struct AuditConfig {
  std::size_t n_max = 1;
  std::vector<std::size_t> ks{1, 2, 3};
  Policies policies;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;

  bool operator==(const AuditConfig&) const = default;
};

struct TopKCell {
  std::size_t size = 0;
  std::size_t k = 0;
  double fraction = 0.0;

  bool operator==(const TopKCell&) const = default;
};

struct SizeSummary {
  std::size_t size = 0;
  EnumerationMode mode = EnumerationMode::Exact;
  std::size_t subsets_evaluated = 0;
  double risk = 0.0;  // misidentification risk at this size

  bool operator==(const SizeSummary&) const = default;
};

struct AuditReport {
  AuditConfig config;
  std::string metric;
  std::vector<std::string> model_ids;
  std::vector<std::string> dataset_names;
  RankingOutcome baseline;  // deterministic ties
  std::vector<CherryPickCurve> curves;  // one per model, matrix order
  std::vector<TopKCell> top_k_table;    // size-major, then config.ks order
  std::vector<SizeSummary> sizes;       // risk curve and enumeration mode per size

  bool operator==(const AuditReport&) const = default;
};

/// Baseline, all curves, the top-k table and the risk curve. Throws
/// InvalidConfig for n_max outside [1, N], k outside [1, m] or an empty k list.
AuditReport run_audit(const ScoreMatrix& matrix, const AuditConfig& config,
                      unsigned threads = 1);

}  // namespace bench_audit::rank
