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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "bench_audit/error.hpp"
#include "bench_audit/rank_engine.hpp"
#include "bench_audit/report.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace bench_audit;
using namespace bench_audit::rank;
using test_support::example_3x3;
using test_support::make_matrix;
using Vec = std::vector<double>;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected bench_audit::Error");
  return ErrorCode::IoError;
}

SubsetId cols(std::initializer_list<std::size_t> c) {
  const std::vector<std::size_t> v(c);
  return SubsetId::of(v);
}

}  // namespace

TEST_SUITE("rank_engine") {

TEST_CASE("rank_values tie policies") {
  const Vec v{3.0, 1.0, 3.0, 2.0};
  CHECK(rank_values(v, TiePolicy::Average) == Vec{3.5, 1, 3.5, 2});
  CHECK(rank_values(v, TiePolicy::Competition) == Vec{3, 1, 3, 2});
  CHECK(rank_values(v, TiePolicy::Deterministic) == Vec{3, 1, 4, 2});
}

TEST_CASE("rank_on_subset worked example") {
  const auto m = example_3x3();
  const auto full = rank_on_subset(m, SubsetId::full(3), Aggregation::MeanRank,
                                   TiePolicy::Deterministic);
  CHECK(full.aggregates[0] == doctest::Approx(7.0 / 3.0));
  CHECK(full.aggregates[1] == doctest::Approx(5.0 / 3.0));
  CHECK(full.aggregates[2] == 2.0);
  CHECK(full.ranks == Vec{3, 1, 2});
  CHECK(full.winner == 1);

  for (auto agg : {Aggregation::MeanRank, Aggregation::MeanScore}) {
    CHECK(rank_on_subset(m, cols({0}), agg, TiePolicy::Competition).ranks == Vec{1, 2, 3});
  }

  const auto tied = rank_on_subset(m, cols({0, 2}), Aggregation::MeanRank, TiePolicy::Competition);
  CHECK(tied.aggregates == Vec{2, 2, 2});
  CHECK(tied.ranks == Vec{1, 1, 1});
  CHECK(tied.winner == 0);
  CHECK(rank_on_subset(m, cols({0, 2}), Aggregation::MeanRank, TiePolicy::Average).ranks ==
        Vec{2, 2, 2});
  CHECK(rank_on_subset(m, cols({0, 2}), Aggregation::MeanRank, TiePolicy::Deterministic).ranks ==
        Vec{1, 2, 3});

  CHECK(code_of([&] {
          rank_on_subset(m, SubsetId{}, Aggregation::MeanRank, TiePolicy::Average);
        }) == ErrorCode::EmptySubset);
  CHECK(code_of([&] {
          rank_on_subset(m, cols({0, 5}), Aggregation::MeanRank, TiePolicy::Average);
        }) == ErrorCode::UnknownColumns);
}

TEST_CASE("baseline ranking") {
  CHECK(baseline_ranking(example_3x3(), Aggregation::MeanRank, TiePolicy::Deterministic).winner == 1);
  const auto dominant = make_matrix({{5, 9, 1}, {1, 2, 0.5}, {7, 3, 2}});
  for (auto agg : {Aggregation::MeanRank, Aggregation::MeanScore}) {
    const auto b = baseline_ranking(dominant, agg, TiePolicy::Competition);
    CHECK(b.ranks[1] == 1.0);
    CHECK(b.winner == 1);
  }
  const auto single = make_matrix({{4, 8, 1, 3}});
  CHECK(baseline_ranking(single, Aggregation::MeanRank, TiePolicy::Deterministic).ranks == Vec{1});
}

TEST_CASE("mean_score ranks raw score means") {
  const auto m = make_matrix({{1, 100}, {10, 20}});
  // mean ranks tie at 1.5 each; mean scores 50.5 vs 15
  const auto by_rank = rank_on_subset(m, SubsetId::full(2), Aggregation::MeanRank,
                                      TiePolicy::Competition);
  CHECK(by_rank.ranks == Vec{1, 1});
  const auto by_score = rank_on_subset(m, SubsetId::full(2), Aggregation::MeanScore,
                                       TiePolicy::Competition);
  CHECK(by_score.aggregates == Vec{50.5, 15});
  CHECK(by_score.ranks == Vec{2, 1});
}

TEST_CASE("enumerate_subsets counts and ordering") {
  const auto four = enumerate_subsets(4, 2, 6, 0);
  CHECK(four.mode == EnumerationMode::Exact);
  REQUIRE(four.subsets.size() == 6);
  std::vector<std::uint64_t> masks;
  for (auto s : four.subsets) masks.push_back(s.mask());
  CHECK(masks == std::vector<std::uint64_t>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100});

  const auto thirteen = enumerate_subsets(13, 4, 715, 0);
  CHECK(thirteen.mode == EnumerationMode::Exact);
  CHECK(thirteen.subsets.size() == 715);
  std::set<std::uint64_t> unique;
  for (auto s : thirteen.subsets) {
    CHECK(s.size() == 4);
    unique.insert(s.mask());
  }
  CHECK(unique.size() == 715);
  CHECK(std::is_sorted(thirteen.subsets.begin(), thirteen.subsets.end()));

  const auto sampled = enumerate_subsets(30, 15, 1000, 7);
  CHECK(sampled.mode == EnumerationMode::Sampled);
  CHECK(sampled.subsets.size() == 1000);
  std::set<std::uint64_t> distinct;
  for (auto s : sampled.subsets) {
    CHECK(s.size() == 15);
    CHECK(s.mask() < (std::uint64_t{1} << 30));
    distinct.insert(s.mask());
  }
  CHECK(distinct.size() == 1000);
  CHECK(enumerate_subsets(30, 15, 1000, 7).subsets == sampled.subsets);
  CHECK(enumerate_subsets(30, 15, 1000, 8).subsets != sampled.subsets);

  CHECK(code_of([] { enumerate_subsets(4, 5, 10, 0); }) == ErrorCode::InvalidSize);
  CHECK(code_of([] { enumerate_subsets(4, 0, 10, 0); }) == ErrorCode::InvalidSize);
}

TEST_CASE("exact enumeration matches the full combination list") {
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const auto e = enumerate_subsets(n, k, kDefaultBudget, 0);
      REQUIRE(e.subsets.size() == oracle::combinations(n, k).size());
      std::set<std::uint64_t> mine, theirs;
      for (auto s : e.subsets) mine.insert(s.mask());
      for (const auto& c : oracle::combinations(n, k)) theirs.insert(oracle::mask_of(c));
      CHECK(mine == theirs);
    }
  }
  CHECK(binomial(13, 4) == 715);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  CHECK(binomial(200, 100) == UINT64_MAX);
  CHECK(enumerate_subsets(64, 64, 1, 0).subsets.front().mask() == UINT64_MAX);
}

TEST_CASE("sampled subsets are roughly uniform") {
  // 10 choose 3 = 120 subsets; sample 60 per seed over many seeds and check
  // per-column inclusion frequency stays near 3/10.
  std::vector<std::size_t> hits(10, 0);
  std::size_t draws = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (auto s : enumerate_subsets(10, 3, 60, seed).subsets) {
      for (auto c : s.columns()) ++hits[c];
      ++draws;
    }
  }
  for (auto h : hits) CHECK(static_cast<double>(h) / static_cast<double>(draws) == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("best_rank_curve worked example") {
  const auto curve = best_rank_curve(example_3x3(), "M1", 3, Policies{});
  REQUIRE(curve.entries.size() == 3);
  CHECK(curve.entries[0].best_rank == 1.0);
  CHECK(curve.entries[0].witness == cols({0}));
  CHECK(curve.entries[1].best_rank == 1.0);
  CHECK(curve.entries[1].witness == cols({0, 2}));
  CHECK(curve.entries[1].witness_ranks == Vec{1, 1, 1});
  CHECK(curve.entries[2].best_rank == 3.0);
  CHECK(code_of([] { best_rank_curve(example_3x3(), "nope", 1, Policies{}); }) ==
        ErrorCode::UnknownModel);
}

TEST_CASE("dominant models give flat curves") {
  const auto m = make_matrix({{5, 9, 1, 4}, {1, 2, 0.5, 1}, {7, 3, 2, 9}, {9, 10, 8, 10}});
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(best_rank_curve(m, "M2", 4, Policies{}).entries[n - 1].best_rank == 1.0);
    CHECK(best_rank_curve(m, "M4", 4, Policies{}).entries[n - 1].best_rank == 4.0);
    CHECK(misidentification_risk(m, n, Policies{}) == 0.0);
  }
}

TEST_CASE("top_k_reportable and misidentification_risk worked example") {
  const auto m = example_3x3();
  CHECK(top_k_reportable(m, 1, 1, Policies{}) == 1.0);
  CHECK(top_k_reportable(m, 3, 1, Policies{Aggregation::MeanRank, TiePolicy::Deterministic}) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(top_k_reportable(m, 2, 3, Policies{}) == 1.0);
  CHECK(misidentification_risk(m, 2, Policies{}) == doctest::Approx(1.0 / 3.0));
  CHECK(misidentification_risk(m, 3, Policies{}) == 0.0);
  CHECK(code_of([&] { top_k_reportable(m, 4, 1, Policies{}); }) == ErrorCode::InvalidSize);
  CHECK(code_of([&] { top_k_reportable(m, 1, 4, Policies{}); }) == ErrorCode::InvalidSize);
  CHECK(code_of([&] { misidentification_risk(m, 0, Policies{}); }) == ErrorCode::InvalidSize);
}

TEST_CASE("rank_distribution") {
  const auto m = example_3x3();
  CHECK(rank_distribution(m, "M1") == Vec{1, 3, 3});
  CHECK(rank_distribution(make_matrix({{1, 1}, {2, 3}}), "M1") == Vec{1, 1});
  CHECK(rank_distribution(make_matrix({{1, 5}, {1, 3}}), "M1") == Vec{1.5, 2});
  CHECK(code_of([&] { rank_distribution(m, "M9"); }) == ErrorCode::UnknownModel);
}

TEST_CASE("engine agrees with the brute-force oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t models = 1 + rng() % 6;
    const std::size_t datasets = 1 + rng() % 8;
    const bool ties = trial % 3 == 0;
    const auto m = test_support::random_matrix(rng, models, datasets, ties);
    for (auto agg : {Aggregation::MeanRank, Aggregation::MeanScore}) {
      const bool mean_rank = agg == Aggregation::MeanRank;
      const Policies policies{agg, TiePolicy::Competition};
      for (std::size_t n = 1; n <= datasets; ++n) {
        const auto best = oracle::best_per_model(m, n, mean_rank, oracle::Ties::Competition);
        for (std::size_t i = 0; i < models; ++i) {
          const auto entry = best_rank_curve(m, m.model_ids[i], n, policies).entries.back();
          CHECK(entry.best_rank == best[i].rank);
          CHECK(entry.gap == best[i].gap);
          CHECK(entry.witness.mask() == best[i].mask);
        }
        for (std::size_t k = 1; k <= models; ++k) {
          CHECK(top_k_reportable(m, n, k, policies) ==
                static_cast<double>(oracle::top_k_count(m, n, k, mean_rank, oracle::Ties::Competition)) /
                    static_cast<double>(models));
        }
        const auto risk = oracle::risk_count(m, n, mean_rank);
        CHECK(misidentification_risk(m, n, policies) ==
              static_cast<double>(risk.misidentified) / static_cast<double>(risk.total));
      }
    }
  }
}

TEST_CASE("permutation equivariance on tie-free matrices") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t models = 2 + rng() % 5;
    const std::size_t datasets = 2 + rng() % 6;
    const auto m = test_support::random_matrix(rng, models, datasets, false);
    std::vector<std::size_t> row_perm(models), col_perm(datasets);
    std::iota(row_perm.begin(), row_perm.end(), std::size_t{0});
    std::iota(col_perm.begin(), col_perm.end(), std::size_t{0});
    std::shuffle(row_perm.begin(), row_perm.end(), rng);
    std::shuffle(col_perm.begin(), col_perm.end(), rng);
    metrics::ScoreMatrix p = m;
    for (std::size_t i = 0; i < models; ++i) {
      p.model_ids[i] = m.model_ids[row_perm[i]];
      for (std::size_t j = 0; j < datasets; ++j) p.at(i, j) = m.at(row_perm[i], col_perm[j]);
    }
    for (std::size_t j = 0; j < datasets; ++j) p.dataset_names[j] = m.dataset_names[col_perm[j]];

    // Competition-based outputs are tie-safe under either aggregation; winner
    // based outputs are compared only under mean_score, where continuous
    // scores leave no exact aggregate ties.
    for (auto agg : {Aggregation::MeanRank, Aggregation::MeanScore}) {
      const AuditConfig config{datasets, {1, 2}, Policies{agg, TiePolicy::Competition},
                               kDefaultBudget, 0};
      const auto a = run_audit(m, config);
      const auto b = run_audit(p, config);
      CHECK(a.top_k_table == b.top_k_table);
      for (std::size_t i = 0; i < models; ++i) {
        const auto& ca = a.curves[row_perm[i]];
        const auto& cb = b.curves[i];
        REQUIRE(ca.model_id == cb.model_id);
        for (std::size_t n = 0; n < datasets; ++n) {
          CHECK(ca.entries[n].best_rank == cb.entries[n].best_rank);
        }
      }
      if (agg == Aggregation::MeanScore) {
        CHECK(a.model_ids[a.baseline.winner] == b.model_ids[b.baseline.winner]);
        for (std::size_t s = 0; s < a.sizes.size(); ++s) CHECK(a.sizes[s].risk == b.sizes[s].risk);
      }
    }
  }
}

TEST_CASE("mean_rank depends only on within-column order") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = test_support::random_matrix(rng, 2 + rng() % 5, 2 + rng() % 6, trial % 2 == 0);
    auto t = m;
    for (std::size_t j = 0; j < m.datasets(); ++j) {
      const double a = 0.1 + static_cast<double>(rng() % 100);
      const double b = static_cast<double>(rng() % 50);
      const bool cube = rng() % 2 == 0;
      for (std::size_t i = 0; i < m.models(); ++i) {
        const double x = m.at(i, j);
        t.at(i, j) = cube ? x * x * x + b : a * x + b;
      }
    }
    const AuditConfig config{m.datasets(), {1, 2}, Policies{}, kDefaultBudget, 3};
    CHECK(report::report_to_json(run_audit(m, config)) == report::report_to_json(run_audit(t, config)));
  }
}

TEST_CASE("run_audit structure and degeneracies") {
  std::mt19937_64 rng(4);
  const auto m = test_support::random_matrix(rng, 13, 13, false);
  const AuditConfig config{6, {1, 2, 3}, Policies{}, kDefaultBudget, 0};
  const auto report = run_audit(m, config);
  CHECK(report.top_k_table.size() == 18);
  for (const auto& cell : report.top_k_table) {
    CHECK(cell.fraction >= 0.0);
    CHECK(cell.fraction <= 1.0);
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(report.sizes[n - 1].subsets_evaluated == binomial(13, n));
    CHECK(report.sizes[n - 1].mode == EnumerationMode::Exact);
    // top-k is monotone in k
    CHECK(report.top_k_table[(n - 1) * 3].fraction <= report.top_k_table[(n - 1) * 3 + 1].fraction);
    CHECK(report.top_k_table[(n - 1) * 3 + 1].fraction <= report.top_k_table[(n - 1) * 3 + 2].fraction);
  }
  CHECK(run_audit(m, config) == report);
  CHECK(run_audit(m, config, 4) == report);

  const AuditConfig full{13, {13}, Policies{}, kDefaultBudget, 0};
  const auto whole = run_audit(m, full);
  CHECK(whole.sizes.back().risk == 0.0);
  for (const auto& cell : whole.top_k_table) CHECK(cell.fraction == 1.0);
  const auto baseline = baseline_ranking(m, Aggregation::MeanRank, TiePolicy::Competition);
  for (std::size_t i = 0; i < 13; ++i) {
    CHECK(whole.curves[i].entries.back().best_rank == baseline.ranks[i]);
  }

  CHECK(code_of([&] { run_audit(m, AuditConfig{14, {1}, Policies{}, 10, 0}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { run_audit(m, AuditConfig{2, {14}, Policies{}, 10, 0}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { run_audit(m, AuditConfig{2, {}, Policies{}, 10, 0}); }) ==
        ErrorCode::InvalidConfig);
  metrics::ScoreMatrix empty{{}, {"D1"}, {}, "smape"};
  CHECK(code_of([&] { run_audit(empty, AuditConfig{}); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("sampled audits are reproducible and thread independent") {
  std::mt19937_64 rng(9);
  const auto m = test_support::random_matrix(rng, 8, 20, false);
  const AuditConfig config{6, {1, 3}, Policies{}, 5000, 42};
  const auto a = run_audit(m, config, 1);
  const auto b = run_audit(m, config, 3);
  CHECK(a == b);
  CHECK(a.sizes[3].mode == EnumerationMode::Exact);
  CHECK(a.sizes[3].subsets_evaluated == 4845);
  CHECK(a.sizes[4].mode == EnumerationMode::Sampled);
  CHECK(a.sizes[4].subsets_evaluated == 5000);
}

}  // TEST_SUITE
