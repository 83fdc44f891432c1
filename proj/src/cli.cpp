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

#include "bench_audit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "bench_audit/error.hpp"
#include "bench_audit/forecasters.hpp"
#include "bench_audit/ingest.hpp"
#include "bench_audit/metrics.hpp"
#include "bench_audit/rank_engine.hpp"
#include "bench_audit/report.hpp"

namespace bench_audit::cli {

namespace {

namespace fs = std::filesystem;

// NAME,PATH,HORIZON,PERIOD
struct DatasetSpec {
  std::string name;
  fs::path path;
  std::size_t horizon = 0;
  std::size_t seasonal_period = 0;
};

DatasetSpec parse_dataset_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream stream(spec);
  for (std::string item; std::getline(stream, item, ',');) parts.push_back(item);
  auto positive = [&](const std::string& field, const char* what) {
    std::size_t consumed = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(field, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != field.size() || value == 0 || field.starts_with('-')) {
      throw CLI::ValidationError("--dataset", std::string(what) + " must be a positive integer in '" + spec + "'");
    }
    return static_cast<std::size_t>(value);
  };
  if (parts.size() != 4 || parts[0].empty() || parts[1].empty()) {
    throw CLI::ValidationError("--dataset", "expected NAME,PATH,HORIZON,PERIOD, got '" + spec + "'");
  }
  return {parts[0], parts[1], positive(parts[2], "horizon"), positive(parts[3], "period")};
}

void print_error(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << "\n";
  for (const auto& detail : e.details()) err << "  - " << detail << "\n";
}

bool is_parse_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::EmptyFile:
    case ErrorCode::NonContiguousSteps:
    case ErrorCode::DuplicateTriple:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

series::DatasetCollection read_collection(const std::vector<std::string>& specs, bool validated) {
  series::DatasetCollection collection;
  for (const auto& text : specs) {
    const auto spec = parse_dataset_spec(text);
    collection.datasets.push_back(
        validated ? ingest::load_dataset_csv(spec.path, spec.name, spec.horizon, spec.seasonal_period)
                  : ingest::read_dataset_csv(spec.path, spec.name, spec.horizon, spec.seasonal_period));
  }
  return collection;
}

unsigned threads_from_env() {
  const char* value = std::getenv("BENCH_AUDIT_THREADS");
  if (value == nullptr) return 1;
  const long parsed = std::strtol(value, nullptr, 10);
  return parsed > 0 ? static_cast<unsigned>(parsed) : 1;
}

std::string percent(double fraction) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << fraction * 100.0 << "%";
  return s.str();
}

struct ValidateArgs {
  std::vector<std::string> datasets;
};

struct ForecastArgs {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::string out;
  double croston_alpha = forecasters::kDefaultCrostonAlpha;
};

struct ScoreArgs {
  std::vector<std::string> datasets;
  std::vector<std::string> forecasts;
  std::string metric = "smape";
  std::string out;
};

struct AuditArgs {
  std::vector<std::string> scores;
  std::size_t n_max = 0;
  std::vector<std::size_t> ks{1, 2, 3};
  std::string aggregation = "mean_rank";
  std::string ties = "competition";
  std::uint64_t budget = rank::kDefaultBudget;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  unsigned threads = 0;
};

int cmd_validate(const ValidateArgs& args, std::ostream& out) {
  const auto collection = read_collection(args.datasets, false);
  const auto report = series::validate_collection(collection);
  for (const auto& v : report.violations) out << v.dataset << ": " << v.message << "\n";
  out << report.violations.size() << " violations\n";
  return report.ok() ? kExitOk : kExitFailure;
}

int cmd_forecast(const ForecastArgs& args, std::ostream& out, std::ostream& err) {
  for (const auto& model : args.models) {
    if (!forecasters::is_registered(model)) {
      err << "error: unknown model '" << model << "'. Built-in models are snaive, rwd, ses, "
          << "theta, croston; pass forecasts from other models to `score` with "
          << "--external-forecasts.\n";
      return kExitUsage;
    }
  }
  const auto collection = read_collection(args.datasets, true);
  forecasters::ForecastOptions options;
  options.croston_alpha = args.croston_alpha;
  const auto set = forecasters::forecast_all(collection, args.models, options);
  ingest::write_forecasts_csv(set, args.out);
  out << "wrote " << set.size() << " forecasts for " << set.models().size() << " model(s) to "
      << args.out << "\n";
  return kExitOk;
}

int cmd_score(const ScoreArgs& args, std::ostream& out) {
  const auto metric = metrics::parse_metric(args.metric);
  const auto collection = read_collection(args.datasets, true);
  forecasters::ForecastSet merged;
  for (const auto& path : args.forecasts) merged.merge(ingest::load_forecasts_csv(path));
  ingest::check_forecast_horizons(merged, collection);
  const auto matrix = metrics::build_score_matrix(merged, collection, metric);
  ingest::write_score_matrix_json(matrix, args.out);
  out << "wrote " << matrix.models() << "x" << matrix.datasets() << " " << matrix.metric_name
      << " score matrix to " << args.out << "\n";
  return kExitOk;
}

int cmd_audit(const AuditArgs& args, std::ostream& out, std::ostream& err) {
  metrics::ScoreMatrix matrix;
  try {
    std::vector<metrics::ScoreMatrix> parts;
    for (const auto& path : args.scores) parts.push_back(ingest::load_score_matrix_json(path));
    matrix = ingest::merge_scores(parts);
    metrics::validate(matrix);
  } catch (const Error& e) {
    print_error(err, e);
    return kExitUsage;
  }

  rank::AuditConfig config;
  config.n_max = args.n_max == 0 ? std::min<std::size_t>(6, matrix.datasets()) : args.n_max;
  config.ks = args.ks;
  config.policies.aggregation = rank::parse_aggregation(args.aggregation);
  config.policies.cherry_pick_ties = rank::parse_tie_policy(args.ties);
  config.budget = args.budget;
  config.seed = args.seed;
  const unsigned threads = args.threads != 0 ? args.threads : threads_from_env();

  const auto audit = rank::run_audit(matrix, config, threads);

  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  report::emit_json(audit, dir / "report.json");
  report::emit_rank_boxplot_svg(matrix, dir / "rank_boxplot.svg");
  report::emit_cherrypick_panels_svg(audit.curves, audit.model_ids, dir / "cherrypick.svg");
  report::emit_topk_bars_svg(audit.top_k_table, dir / "topk_bars.svg");

  out << "models: " << matrix.models() << ", datasets: " << matrix.datasets()
      << ", metric: " << matrix.metric_name << "\n";
  out << "baseline winner: " << audit.model_ids[audit.baseline.winner] << " ("
      << rank::to_string(config.policies.aggregation) << ")\n";
  out << "top-k reportable (" << rank::to_string(config.policies.cherry_pick_ties) << " ties):\n";
  for (const auto& cell : audit.top_k_table) {
    out << "  n=" << cell.size << " k=" << cell.k << "  " << percent(cell.fraction) << "\n";
  }
  out << "misidentification risk:\n";
  for (const auto& s : audit.sizes) {
    out << "  n=" << s.size << "  " << percent(s.risk) << "  (" << rank::to_string(s.mode) << ", "
        << s.subsets_evaluated << " subsets)\n";
  }
  out << "wrote report.json, rank_boxplot.svg, cherrypick.svg, topk_bars.svg to " << dir.string()
      << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit forecasting benchmarks for dataset-selection bias", "bench_audit"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check dataset files against series invariants");
  validate->add_option("--dataset", validate_args.datasets, "NAME,PATH,HORIZON,PERIOD")
      ->required()->take_all();

  ForecastArgs forecast_args;
  auto* forecast = app.add_subcommand("forecast", "Run built-in forecasters over datasets");
  forecast->add_option("--dataset", forecast_args.datasets, "NAME,PATH,HORIZON,PERIOD")
      ->required()->take_all();
  forecast->add_option("--models", forecast_args.models, "Comma-separated model ids")
      ->required()->delimiter(',');
  forecast->add_option("--out", forecast_args.out, "Forecast CSV to write")->required();
  forecast->add_option("--croston-alpha", forecast_args.croston_alpha, "Croston smoothing")
      ->capture_default_str();

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Score forecasts into a models x datasets matrix");
  score->add_option("--dataset", score_args.datasets, "NAME,PATH,HORIZON,PERIOD")
      ->required()->take_all();
  score->add_option("--forecasts,--external-forecasts", score_args.forecasts,
                    "Forecast CSV files (built-in or external)")
      ->required()->take_all();
  score->add_option("--metric", score_args.metric, "smape or mase")->capture_default_str();
  score->add_option("--out", score_args.out, "Score matrix JSON to write")->required();

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Run the cherry-picking audit on a score matrix");
  audit->add_option("--scores", audit_args.scores, "Score matrix JSON files, merged in order")
      ->required()->take_all();
  audit->add_option("--nmax", audit_args.n_max, "Largest subset size (default min(6, N))");
  audit->add_option("--k", audit_args.ks, "Comma-separated top-k thresholds")
      ->delimiter(',')->capture_default_str();
  audit->add_option("--aggregation", audit_args.aggregation, "mean_rank or mean_score")
      ->capture_default_str();
  audit->add_option("--ties", audit_args.ties,
                    "Tie policy for cherry-pick ranks: competition, average or deterministic")
      ->capture_default_str();
  audit->add_option("--budget", audit_args.budget, "Subsets per size before sampling")
      ->capture_default_str();
  audit->add_option("--seed", audit_args.seed, "Sampling seed")->capture_default_str();
  audit->add_option("--out-dir", audit_args.out_dir, "Output directory")->capture_default_str();
  audit->add_option("--threads", audit_args.threads,
                    "Worker threads (default BENCH_AUDIT_THREADS or 1); never changes results");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_args, out);
    if (*forecast) return cmd_forecast(forecast_args, out, err);
    if (*score) return cmd_score(score_args, out);
    return cmd_audit(audit_args, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    print_error(err, e);
    return is_parse_error(e.code()) ? kExitUsage : kExitFailure;
  }
}

}  // namespace bench_audit::cli
