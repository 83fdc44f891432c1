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

#include <cmath>
#include <random>

#include "bench_audit/error.hpp"
#include "bench_audit/forecasters.hpp"
#include "bench_audit/metrics.hpp"

using namespace bench_audit;
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

// Forecast value whose SMAPE against 100 equals `target` percent (0 <= target < 200).
double forecast_for_smape(double target) {
  const double r = target / 100.0;
  return 100.0 * (1.0 + r / 2.0) / (1.0 - r / 2.0);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("smape hand cases") {
  // 100/2 * (10/105 + 10/45) = 1000/63
  CHECK(std::abs(metrics::smape(Vec{100, 50}, Vec{110, 40}) - 1000.0 / 63.0) <= 1e-9);
  CHECK(std::round(metrics::smape(Vec{100, 50}, Vec{110, 40}) * 1e4) / 1e4 == 15.8730);
  CHECK(metrics::smape(Vec{3, 7}, Vec{3, 7}) == 0.0);
  CHECK(metrics::smape(Vec{100}, Vec{0}) == 200.0);
  CHECK(metrics::smape(Vec{0, 4}, Vec{0, 4}) == 0.0);
  CHECK(code_of([] { metrics::smape(Vec{1, 2}, Vec{1}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { metrics::smape(Vec{}, Vec{}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("smape symmetry, scale invariance and range") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec a(1 + rng() % 20);
    Vec f(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng() % 10 == 0 ? 0.0 : value(rng);
      f[i] = rng() % 10 == 0 ? 0.0 : value(rng);
    }
    const double s = metrics::smape(a, f);
    CHECK(s == metrics::smape(f, a));
    CHECK(s >= 0.0);
    CHECK(s <= 200.0);
    const double c = scale(rng);
    Vec ca = a, cf = f;
    for (auto& v : ca) v *= c;
    for (auto& v : cf) v *= c;
    CHECK(std::abs(metrics::smape(ca, cf) - s) <= 1e-9);
  }
}

TEST_CASE("mase hand cases") {
  CHECK(metrics::mase(Vec{5}, Vec{4}, Vec{1, 2, 3, 4}, 1) == 1.0);
  CHECK(metrics::mase(Vec{5, 6}, Vec{5, 6}, Vec{1, 3, 2, 4}, 1) == 0.0);
  CHECK(code_of([] { metrics::mase(Vec{5}, Vec{4}, Vec{4, 4, 4, 4}, 1); }) == ErrorCode::ZeroScale);
  CHECK(code_of([] { metrics::mase(Vec{5}, Vec{4, 1}, Vec{1, 2, 3}, 1); }) ==
        ErrorCode::LengthMismatch);
  // seasonal scale: |3-1| and |4-2| -> 2
  CHECK(metrics::mase(Vec{9}, Vec{5}, Vec{1, 2, 3, 4}, 2) == 2.0);
}

TEST_CASE("mase is zero exactly for exact forecasts") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> value(0.0, 50.0);
  for (int trial = 0; trial < 300; ++trial) {
    Vec train(5 + rng() % 20);
    for (auto& v : train) v = value(rng);
    Vec actual(1 + rng() % 6);
    for (auto& v : actual) v = value(rng);
    CHECK(metrics::mase(actual, actual, train, 1) == 0.0);
    Vec off = actual;
    off[0] += 1.0;
    CHECK(metrics::mase(actual, off, train, 1) > 0.0);
  }
}

namespace {

struct Fixture {
  series::DatasetCollection collection;
  forecasters::ForecastSet forecasts;
};

// One dataset, horizon 1, test value 100 in every series; each forecast is
// chosen to hit the requested per-series SMAPE.
Fixture smape_fixture(const Vec& targets) {
  Fixture f;
  series::Dataset dataset{"D", {}, 1, 1};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string id = "s" + std::to_string(i);
    dataset.series.push_back({id, {90, 95, 100}, 1, ""});
    f.forecasts.add({"m", "D", id, {forecast_for_smape(targets[i])}});
  }
  f.collection.datasets.push_back(dataset);
  return f;
}

}  // namespace

TEST_CASE("dataset_score is the unweighted mean over series") {
  auto two = smape_fixture({10.0, 30.0});
  CHECK(std::abs(metrics::dataset_score(two.forecasts, two.collection, metrics::Metric::Smape,
                                        "m", "D") - 20.0) <= 1e-9);
  auto one = smape_fixture({42.0});
  CHECK(metrics::dataset_score(one.forecasts, one.collection, metrics::Metric::Smape, "m", "D") ==
        metrics::smape(Vec{100}, Vec{forecast_for_smape(42.0)}));
  auto three = smape_fixture({0.0, 0.0, 15.0});
  CHECK(std::abs(metrics::dataset_score(three.forecasts, three.collection, metrics::Metric::Smape,
                                        "m", "D") - 5.0) <= 1e-9);
  CHECK(code_of([&] {
          metrics::dataset_score(three.forecasts, three.collection, metrics::Metric::Smape, "x", "D");
        }) == ErrorCode::MissingCoverage);
}

TEST_CASE("dataset_score names the series behind a metric failure") {
  series::DatasetCollection collection{{{"Flat", {{"const", {4, 4, 4, 4, 5}, 1, ""}}, 1, 1}}};
  forecasters::ForecastSet set;
  set.add({"m", "Flat", "const", {4}});
  try {
    metrics::dataset_score(set, collection, metrics::Metric::Mase, "m", "Flat");
    FAIL("expected ZeroScale");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroScale);
    CHECK(std::string(e.what()).find("m/Flat/const") != std::string::npos);
  }
}

TEST_CASE("build_score_matrix shape, bounds and coverage") {
  series::DatasetCollection collection;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> value(1.0, 100.0);
  for (int d = 0; d < 13; ++d) {
    series::Dataset dataset{"D" + std::to_string(d), {}, 3, 1};
    for (int s = 0; s < 2; ++s) {
      Vec values(12);
      for (auto& v : values) v = value(rng);
      dataset.series.push_back({"s" + std::to_string(s), values, 1, ""});
    }
    collection.datasets.push_back(dataset);
  }
  const auto forecasts = forecasters::forecast_all(collection, forecasters::registry());
  const auto matrix = metrics::build_score_matrix(forecasts, collection, metrics::Metric::Smape);
  CHECK(matrix.models() == 5);
  CHECK(matrix.datasets() == 13);
  CHECK(matrix.dataset_names.front() == "D0");
  for (double v : matrix.scores) {
    CHECK(v >= 0.0);
    CHECK(v <= 200.0);
  }
  CHECK_NOTHROW(metrics::validate(matrix));

  // Perfect forecasts everywhere give an all-zero matrix.
  forecasters::ForecastSet perfect;
  for (const auto& dataset : collection.datasets) {
    for (const auto& s : dataset.series) {
      perfect.add({"oracle", dataset.name, s.id, Vec(s.values.end() - 3, s.values.end())});
    }
  }
  const auto zeros = metrics::build_score_matrix(perfect, collection, metrics::Metric::Smape);
  for (double v : zeros.scores) CHECK(v == 0.0);

  // Drop one (model, dataset) pair.
  forecasters::ForecastSet partial;
  for (const auto& f : perfect.forecasts()) {
    if (f.dataset_name != "D7") partial.add(f);
  }
  try {
    metrics::build_score_matrix(partial, collection, metrics::Metric::Smape);
    FAIL("expected MissingCoverage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCoverage);
    REQUIRE(e.details().size() == 2);
    CHECK(e.details()[0] == "oracle/D7/s0");
  }
}

TEST_CASE("validate rejects malformed matrices") {
  metrics::ScoreMatrix m{{"a", "b"}, {"x"}, {1.0, 2.0}, "smape"};
  CHECK_NOTHROW(metrics::validate(m));
  auto shape = m;
  shape.scores.pop_back();
  CHECK(code_of([&] { metrics::validate(shape); }) == ErrorCode::ShapeMismatch);
  auto dup = m;
  dup.model_ids[1] = "a";
  CHECK(code_of([&] { metrics::validate(dup); }) == ErrorCode::DuplicateLabel);
  auto nan = m;
  nan.scores[0] = NAN;
  CHECK(code_of([&] { metrics::validate(nan); }) == ErrorCode::NonFiniteScore);
  auto range = m;
  range.scores[0] = 250.0;
  CHECK(code_of([&] { metrics::validate(range); }) == ErrorCode::InvalidMatrix);
  range.metric_name = "mase";
  CHECK_NOTHROW(metrics::validate(range));
}

}  // TEST_SUITE
