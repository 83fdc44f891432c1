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

#include "bench_audit/rank_engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "bench_audit/error.hpp"

namespace bench_audit::rank {

SubsetId SubsetId::full(std::size_t count) {
  if (count > kMaxDatasets) {
    throw Error(ErrorCode::InvalidSize,
                "at most " + std::to_string(kMaxDatasets) + " datasets are supported");
  }
  return SubsetId(count == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1);
}

SubsetId SubsetId::of(std::span<const std::size_t> columns) {
  std::uint64_t mask = 0;
  for (auto c : columns) {
    if (c >= kMaxDatasets) {
      throw Error(ErrorCode::UnknownColumns, "column " + std::to_string(c) + " out of range");
    }
    mask |= std::uint64_t{1} << c;
  }
  return SubsetId(mask);
}

std::vector<std::size_t> SubsetId::columns() const {
  std::vector<std::size_t> out;
  for (std::uint64_t rest = mask_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

std::string_view to_string(Aggregation aggregation) noexcept {
  return aggregation == Aggregation::MeanRank ? "mean_rank" : "mean_score";
}

std::string_view to_string(TiePolicy policy) noexcept {
  switch (policy) {
    case TiePolicy::Average: return "average";
    case TiePolicy::Competition: return "competition";
    case TiePolicy::Deterministic: return "deterministic";
  }
  return "deterministic";
}

std::string_view to_string(EnumerationMode mode) noexcept {
  return mode == EnumerationMode::Exact ? "exact" : "sampled";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "mean_rank") return Aggregation::MeanRank;
  if (name == "mean_score") return Aggregation::MeanScore;
  throw Error(ErrorCode::InvalidConfig, "unknown aggregation '" + std::string(name) +
                                            "' (expected mean_rank or mean_score)");
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "average") return TiePolicy::Average;
  if (name == "competition") return TiePolicy::Competition;
  if (name == "deterministic") return TiePolicy::Deterministic;
  throw Error(ErrorCode::InvalidConfig,
              "unknown tie policy '" + std::string(name) +
                  "' (expected average, competition or deterministic)");
}

std::vector<double> rank_values(std::span<const double> values, TiePolicy policy) {
  const std::size_t count = values.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(count);
  std::size_t start = 0;
  while (start < count) {
    std::size_t end = start + 1;
    while (end < count && values[order[end]] == values[order[start]]) ++end;
    for (std::size_t pos = start; pos < end; ++pos) {
      double r = 0.0;
      switch (policy) {
        case TiePolicy::Deterministic: r = static_cast<double>(pos + 1); break;
        case TiePolicy::Competition: r = static_cast<double>(start + 1); break;
        case TiePolicy::Average: r = static_cast<double>(start + 1 + end) / 2.0; break;
      }
      ranks[order[pos]] = r;
    }
    start = end;
  }
  return ranks;
}

namespace {

std::size_t argmin_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

std::size_t model_index(const ScoreMatrix& matrix, std::string_view model) {
  for (std::size_t i = 0; i < matrix.models(); ++i) {
    if (matrix.model_ids[i] == model) return i;
  }
  throw Error(ErrorCode::UnknownModel, "model '" + std::string(model) + "' not in score matrix");
}

// Shared per-matrix state: within-column average ranks computed once.
class Ranker {
 public:
  explicit Ranker(const ScoreMatrix& matrix) : matrix_(matrix) {
    if (matrix.models() == 0 || matrix.datasets() == 0 ||
        matrix.scores.size() != matrix.models() * matrix.datasets()) {
      throw Error(ErrorCode::ShapeMismatch, "score matrix is empty or misshapen");
    }
    if (matrix.datasets() > kMaxDatasets) {
      throw Error(ErrorCode::InvalidSize,
                  "at most " + std::to_string(kMaxDatasets) + " datasets are supported");
    }
    column_ranks_.assign(matrix.models() * matrix.datasets(), 0.0);
    std::vector<double> column(matrix.models());
    for (std::size_t j = 0; j < matrix.datasets(); ++j) {
      for (std::size_t i = 0; i < matrix.models(); ++i) column[i] = matrix.at(i, j);
      auto ranks = rank_values(column, TiePolicy::Average);
      for (std::size_t i = 0; i < matrix.models(); ++i) {
        column_ranks_[i * matrix.datasets() + j] = ranks[i];
      }
    }
  }

  [[nodiscard]] std::size_t models() const { return matrix_.models(); }
  [[nodiscard]] std::size_t datasets() const { return matrix_.datasets(); }

  void check(SubsetId subset) const {
    if (subset.mask() == 0) throw Error(ErrorCode::EmptySubset, "subset is empty");
    if ((subset.mask() & ~SubsetId::full(datasets()).mask()) != 0) {
      throw Error(ErrorCode::UnknownColumns,
                  "subset selects columns beyond the " + std::to_string(datasets()) +
                      " datasets of the matrix");
    }
  }

  // Mean over the subset, summed in ascending column order.
  void aggregate(SubsetId subset, Aggregation aggregation, std::vector<double>& out) const {
    const auto& source = aggregation == Aggregation::MeanRank ? column_ranks_ : matrix_.scores;
    const std::size_t n = datasets();
    const double size = static_cast<double>(subset.size());
    out.resize(models());
    for (std::size_t i = 0; i < models(); ++i) {
      double sum = 0.0;
      for (std::uint64_t rest = subset.mask(); rest != 0; rest &= rest - 1) {
        sum += source[i * n + static_cast<std::size_t>(std::countr_zero(rest))];
      }
      out[i] = sum / size;
    }
  }

  [[nodiscard]] RankingOutcome outcome(SubsetId subset, Aggregation aggregation,
                                       TiePolicy tie_policy) const {
    check(subset);
    RankingOutcome result{subset, aggregation, tie_policy, {}, {}, 0};
    aggregate(subset, aggregation, result.aggregates);
    result.ranks = rank_values(result.aggregates, tie_policy);
    result.winner = argmin_first(result.aggregates);
    return result;
  }

  [[nodiscard]] std::vector<double> distribution(std::size_t model) const {
    return {column_ranks_.begin() + static_cast<std::ptrdiff_t>(model * datasets()),
            column_ranks_.begin() + static_cast<std::ptrdiff_t>((model + 1) * datasets())};
  }

 private:
  const ScoreMatrix& matrix_;
  std::vector<double> column_ranks_;
};

struct Candidate {
  bool found = false;
  double rank = 0.0;
  double gap = 0.0;
  SubsetId subset;

  // Lower rank, then larger gap, then smaller bitmask.
  [[nodiscard]] bool beats(const Candidate& other) const {
    if (!other.found) return found;
    if (!found) return false;
    if (rank != other.rank) return rank < other.rank;
    if (gap != other.gap) return gap > other.gap;
    return subset < other.subset;
  }
};

struct SizeSweep {
  SubsetEnumeration enumeration;
  std::vector<Candidate> best;  // per model
  std::uint64_t misidentified = 0;
};

struct Partial {
  std::vector<Candidate> best;
  std::uint64_t misidentified = 0;
};

void scan(const Ranker& ranker, std::span<const SubsetId> subsets, const Policies& policies,
          std::size_t baseline_winner, Partial& partial) {
  const std::size_t m = ranker.models();
  partial.best.assign(m, Candidate{});
  std::vector<double> aggregates;
  for (const SubsetId subset : subsets) {
    ranker.aggregate(subset, policies.aggregation, aggregates);
    const auto ranks = rank_values(aggregates, policies.cherry_pick_ties);
    const std::size_t winner = argmin_first(aggregates);
    if (winner != baseline_winner) ++partial.misidentified;

    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (i != winner) runner_up = std::min(runner_up, aggregates[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double other_best = i == winner ? runner_up : aggregates[winner];
      const double gap = m == 1 ? 0.0 : other_best - aggregates[i];
      const Candidate candidate{true, ranks[i], gap, subset};
      if (candidate.beats(partial.best[i])) partial.best[i] = candidate;
    }
  }
}

SizeSweep sweep(const Ranker& ranker, std::size_t size, const Policies& policies,
                const SearchOptions& options, std::size_t baseline_winner) {
  SizeSweep result;
  result.enumeration = enumerate_subsets(ranker.datasets(), size, options.budget, options.seed);
  const auto& subsets = result.enumeration.subsets;

  const std::size_t workers = std::clamp<std::size_t>(
      options.threads == 0 ? 1 : options.threads, 1, std::max<std::size_t>(1, subsets.size() / 256));
  std::vector<Partial> partials(workers);
  const std::size_t chunk = (subsets.size() + workers - 1) / workers;
  auto run = [&](std::size_t w) {
    const std::size_t begin = std::min(subsets.size(), w * chunk);
    const std::size_t end = std::min(subsets.size(), begin + chunk);
    scan(ranker, std::span(subsets).subspan(begin, end - begin), policies, baseline_winner,
         partials[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  result.best.assign(ranker.models(), Candidate{});
  for (const auto& partial : partials) {
    result.misidentified += partial.misidentified;
    for (std::size_t i = 0; i < partial.best.size(); ++i) {
      if (partial.best[i].beats(result.best[i])) result.best[i] = partial.best[i];
    }
  }
  return result;
}

void check_size(std::size_t n, std::size_t count) {
  if (n == 0 || n > count) {
    throw Error(ErrorCode::InvalidSize, "subset size " + std::to_string(n) +
                                            " must lie in [1, " + std::to_string(count) + "]");
  }
}

std::size_t baseline_winner(const Ranker& ranker, Aggregation aggregation) {
  return ranker.outcome(SubsetId::full(ranker.datasets()), aggregation, TiePolicy::Deterministic)
      .winner;
}

CurveEntry make_entry(const Ranker& ranker, std::size_t size, const Candidate& best,
                      const Policies& policies) {
  auto outcome = ranker.outcome(best.subset, policies.aggregation, policies.cherry_pick_ties);
  return CurveEntry{size, best.rank, best.subset, best.gap, std::move(outcome.ranks)};
}

}  // namespace

RankingOutcome rank_on_subset(const ScoreMatrix& matrix, SubsetId subset,
                              Aggregation aggregation, TiePolicy tie_policy) {
  return Ranker(matrix).outcome(subset, aggregation, tie_policy);
}

RankingOutcome baseline_ranking(const ScoreMatrix& matrix, Aggregation aggregation,
                                TiePolicy tie_policy) {
  return rank_on_subset(matrix, SubsetId::full(matrix.datasets()), aggregation, tie_policy);
}

std::vector<double> rank_distribution(const ScoreMatrix& matrix, std::string_view model) {
  const std::size_t index = model_index(matrix, model);
  return Ranker(matrix).distribution(index);
}

std::uint64_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using Wide = unsigned __int128;
  Wide result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// Unbiased draw from [0, bound) that does not depend on the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

// Floyd's algorithm: one uniformly random size-k subset of [0, n).
std::uint64_t random_subset(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uint64_t mask = 0;
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(uniform_below(rng, j + 1));
    const std::uint64_t bit = std::uint64_t{1} << t;
    mask |= (mask & bit) != 0 ? std::uint64_t{1} << j : bit;
  }
  return mask;
}

}  // namespace

SubsetEnumeration enumerate_subsets(std::size_t count, std::size_t size,
                                    std::uint64_t budget, std::uint64_t seed) {
  check_size(size, count);
  if (count > kMaxDatasets) {
    throw Error(ErrorCode::InvalidSize,
                "at most " + std::to_string(kMaxDatasets) + " datasets are supported");
  }
  if (budget == 0) throw Error(ErrorCode::InvalidConfig, "subset budget must be positive");

  SubsetEnumeration result;
  const std::uint64_t total = binomial(count, size);
  if (total <= budget) {
    result.mode = EnumerationMode::Exact;
    result.subsets.reserve(total);
    // Gosper's hack walks same-popcount masks in ascending order.
    std::uint64_t mask = SubsetId::full(size).mask();
    for (std::uint64_t emitted = 0; emitted < total; ++emitted) {
      result.subsets.emplace_back(mask);
      if (emitted + 1 == total) break;
      const std::uint64_t lowest = mask & (0 - mask);
      const std::uint64_t ripple = mask + lowest;
      mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
    return result;
  }

  result.mode = EnumerationMode::Sampled;
  result.subsets.reserve(budget);
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(budget);
  while (result.subsets.size() < budget) {
    const std::uint64_t mask = random_subset(rng, count, size);
    if (seen.insert(mask).second) result.subsets.emplace_back(mask);
  }
  return result;
}

CherryPickCurve best_rank_curve(const ScoreMatrix& matrix, std::string_view model,
                                std::size_t n_max, const Policies& policies,
                                const SearchOptions& options) {
  const std::size_t index = model_index(matrix, model);
  const Ranker ranker(matrix);
  check_size(n_max, ranker.datasets());
  const std::size_t winner = baseline_winner(ranker, policies.aggregation);

  CherryPickCurve curve{std::string(model), index, {}};
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto result = sweep(ranker, n, policies, options, winner);
    curve.entries.push_back(make_entry(ranker, n, result.best[index], policies));
  }
  return curve;
}

double top_k_reportable(const ScoreMatrix& matrix, std::size_t n, std::size_t k,
                        const Policies& policies, const SearchOptions& options) {
  const Ranker ranker(matrix);
  check_size(n, ranker.datasets());
  check_size(k, ranker.models());
  const auto result = sweep(ranker, n, policies, options, baseline_winner(ranker, policies.aggregation));
  const auto reportable = std::count_if(result.best.begin(), result.best.end(), [&](const Candidate& c) {
    return c.rank <= static_cast<double>(k);
  });
  return static_cast<double>(reportable) / static_cast<double>(ranker.models());
}

double misidentification_risk(const ScoreMatrix& matrix, std::size_t n,
                              const Policies& policies, const SearchOptions& options) {
  const Ranker ranker(matrix);
  check_size(n, ranker.datasets());
  const auto result = sweep(ranker, n, policies, options, baseline_winner(ranker, policies.aggregation));
  return static_cast<double>(result.misidentified) /
         static_cast<double>(result.enumeration.subsets.size());
}

AuditReport run_audit(const ScoreMatrix& matrix, const AuditConfig& config, unsigned threads) {
  const Ranker ranker(matrix);
  const std::size_t m = ranker.models();
  if (config.n_max == 0 || config.n_max > ranker.datasets()) {
    throw Error(ErrorCode::InvalidConfig, "n_max " + std::to_string(config.n_max) +
                                              " must lie in [1, " +
                                              std::to_string(ranker.datasets()) + "]");
  }
  if (config.ks.empty()) throw Error(ErrorCode::InvalidConfig, "k list is empty");
  for (std::size_t i = 0; i < config.ks.size(); ++i) {
    const std::size_t k = config.ks[i];
    if (k == 0 || k > m) {
      throw Error(ErrorCode::InvalidConfig,
                  "k " + std::to_string(k) + " must lie in [1, " + std::to_string(m) + "]");
    }
    if (std::find(config.ks.begin(), config.ks.begin() + static_cast<std::ptrdiff_t>(i), k) !=
        config.ks.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error(ErrorCode::InvalidConfig, "k " + std::to_string(k) + " listed twice");
    }
  }
  if (config.budget == 0) throw Error(ErrorCode::InvalidConfig, "subset budget must be positive");

  AuditReport report;
  report.config = config;
  report.metric = matrix.metric_name;
  report.model_ids = matrix.model_ids;
  report.dataset_names = matrix.dataset_names;
  report.baseline = ranker.outcome(SubsetId::full(ranker.datasets()),
                                   config.policies.aggregation, TiePolicy::Deterministic);
  for (std::size_t i = 0; i < m; ++i) report.curves.push_back({matrix.model_ids[i], i, {}});

  const SearchOptions options{config.budget, config.seed, threads};
  for (std::size_t n = 1; n <= config.n_max; ++n) {
    const auto result = sweep(ranker, n, config.policies, options, report.baseline.winner);
    for (std::size_t i = 0; i < m; ++i) {
      report.curves[i].entries.push_back(make_entry(ranker, n, result.best[i], config.policies));
    }
    for (const std::size_t k : config.ks) {
      const auto reportable = std::count_if(result.best.begin(), result.best.end(),
                                            [&](const Candidate& c) {
                                              return c.rank <= static_cast<double>(k);
                                            });
      report.top_k_table.push_back(
          {n, k, static_cast<double>(reportable) / static_cast<double>(m)});
    }
    const std::size_t evaluated = result.enumeration.subsets.size();
    report.sizes.push_back({n, result.enumeration.mode, evaluated,
                            static_cast<double>(result.misidentified) /
                                static_cast<double>(evaluated)});
  }
  return report;
}

}  // namespace bench_audit::rank
