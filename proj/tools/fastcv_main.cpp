// fastcv command-line harness: verify | bench | run.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastcv/bench.hpp"
#include "fastcv/csv_io.hpp"
#include "fastcv/errors.hpp"
#include "fastcv/fastcv_binary.hpp"
#include "fastcv/fastcv_multiclass.hpp"
#include "fastcv/lda_oracle.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/metrics.hpp"
#include "fastcv/synthgen.hpp"
#include "fastcv/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitArgument = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw fastcv::IoError("cannot open output file: " + out_path);
  os << text;
  if (!os) throw fastcv::IoError("write failed: " + out_path);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw fastcv::IoError("cannot open config file: " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw fastcv::ParseError("config is not valid JSON: " + std::string(e.what()),
                             0);
  }
}

// Seed precedence: --seed flag, then config file, then FASTCV_SEED, then 1.
std::uint64_t resolve_seed(bool flag_set, std::uint64_t flag_value,
                           const json& config) {
  if (flag_set) return flag_value;
  if (config.contains("seed")) return config["seed"].get<std::uint64_t>();
  if (const char* env = std::getenv("FASTCV_SEED")) {
    try {
      std::size_t pos = 0;
      std::uint64_t v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw fastcv::ArgumentError("FASTCV_SEED is not a valid u64");
    }
  }
  return 1;
}

double parse_lambda(const std::string& text) {
  if (text == "auto") return -1.0;
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size() || v < 0.0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw fastcv::ArgumentError("--lambda must be a non-negative float or 'auto'");
  }
}

// ---------------------------------------------------------------- verify ----

int cmd_verify(std::uint64_t seed, bool inject_fault, const std::string& out,
               const std::string& format) {
  fastcv::VerifyOptions opt;
  opt.seed = seed;
  opt.skip_bias_adjust = inject_fault;
  auto reports = fastcv::run_verification(opt);

  bool all_pass = true;
  std::ostringstream text;
  json jrep = json::array();
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    text << (r.pass ? "PASS" : "FAIL") << "  " << r.name
         << "  max_deviation=" << r.max_deviation
         << "  tolerance=" << r.tolerance;
    if (!r.detail.empty()) text << "  (" << r.detail << ")";
    text << '\n';
    jrep.push_back({{"name", r.name},
                    {"pass", r.pass},
                    {"max_deviation", r.max_deviation},
                    {"tolerance", r.tolerance},
                    {"detail", r.detail}});
  }
  if (format == "json")
    write_output(out, json{{"properties", jrep}, {"pass", all_pass}}.dump(2) +
                          "\n");
  else
    write_output(out, text.str());
  return all_pass ? kExitOk : kExitVerifyFail;
}

// ----------------------------------------------------------------- bench ----

std::vector<int> grid_from(const json& config, const std::string& key,
                           std::vector<int> fallback) {
  if (!config.contains(key)) return fallback;
  auto v = config[key].get<std::vector<int>>();
  if (v.empty()) throw fastcv::ArgumentError("empty grid: " + key);
  return v;
}

int cmd_bench(const json& config, std::uint64_t seed, const std::string& out,
              const std::string& format, int threads) {
  // Desk-scale default grid.
  auto n_grid = grid_from(config, "n_grid", {100, 1000});
  auto p_grid = grid_from(config, "p_grid", {10, 100, 1000});
  auto c_grid = grid_from(config, "c_grid", {2});
  auto k_grid = grid_from(config, "k_grid", {5, 10, 0});  // 0 = leave-one-out
  auto t_grid = grid_from(config, "t_grid", {1, 100});
  int repeats = config.value("repeats", 3);
  if (repeats < 1) throw fastcv::ArgumentError("repeats must be >= 1");
  double lambda = parse_lambda(config.value("lambda", std::string("auto")));

  std::vector<fastcv::BenchCell> cells;
  for (int c : c_grid)
    for (int n : n_grid)
      for (int p : p_grid)
        for (int k : k_grid)
          for (int t : t_grid)
            for (int r = 0; r < repeats; ++r) {
              fastcv::BenchCell cell;
              cell.task = c == 2 ? fastcv::BenchTask::binary
                                 : fastcv::BenchTask::multiclass;
              cell.n_samples = n;
              cell.n_features = p;
              cell.n_classes = c;
              cell.n_folds = k;
              cell.n_permutations = t;
              cell.repeat_index = r;
              cell.lambda = lambda;
              cells.push_back(cell);
            }

  // Cells are independent; output order stays the deterministic grid order
  // regardless of the worker count. Timed regions are single-threaded.
  std::vector<std::pair<fastcv::BenchRecord, fastcv::BenchRecord>> results(
      cells.size());
  int n_workers = std::max(1, std::min<int>(threads, cells.size()));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      results[i] = fastcv::run_bench_cell(cells[i], seed);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < n_workers; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < cells.size(); i += n_workers)
          results[i] = fastcv::run_bench_cell(cells[i], seed);
      });
    for (auto& th : workers) th.join();
  }

  if (format == "json") {
    json rows = json::array();
    for (const auto& [standard, analytic] : results)
      for (const auto* rec : {&standard, &analytic})
        rows.push_back({{"method", rec->method},
                        {"task", rec->task},
                        {"n_samples", rec->n_samples},
                        {"n_features", rec->n_features},
                        {"n_classes", rec->n_classes},
                        {"n_folds", rec->n_folds},
                        {"n_permutations", rec->n_permutations},
                        {"repeat", rec->repeat_index},
                        {"seed", rec->seed},
                        {"wall_time_seconds", rec->wall_time_seconds},
                        {"performance_mean", rec->performance_mean},
                        {"input_hash", rec->input_hash},
                        {"error", rec->error},
                        {"error_message", rec->error_message}});
    write_output(out, rows.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << fastcv::bench_csv_header() << '\n';
    for (const auto& [standard, analytic] : results) {
      if (standard.error) continue;  // marked and skipped; the run continues
      csv << fastcv::bench_csv_row(standard) << '\n'
          << fastcv::bench_csv_row(analytic) << '\n';
    }
    write_output(out, csv.str());
  }
  return kExitOk;
}

// ------------------------------------------------------------------- run ----

int cmd_run(const std::string& csv_path, const std::string& task, int folds,
            const std::string& lambda_text, int permutations,
            const std::string& metric_name, bool stratify, std::uint64_t seed,
            const std::string& out) {
  fastcv::Dataset ds = fastcv::load_csv(csv_path);
  const int n = ds.n_samples();
  if (folds < 2 || folds > n)
    throw fastcv::ArgumentError("--folds must be in [2, n_samples]");
  if (permutations < 0)
    throw fastcv::ArgumentError("--permutations must be >= 0");

  const bool binary = task == "binary";
  if (binary && ds.n_classes != 2)
    throw fastcv::ArgumentError("--task binary requires a two-class dataset");
  if (!binary && metric_name == "auc")
    throw fastcv::ArgumentError("--metric auc is binary-only");
  fastcv::Metric metric = metric_name == "auc" ? fastcv::Metric::auc
                                               : fastcv::Metric::accuracy;

  double lambda = parse_lambda(lambda_text);
  if (lambda < 0.0) {
    double nu =
        fastcv::scatter_trace_scale(fastcv::scatter_matrices(ds).s_w);
    lambda = nu > 0.0 ? 1e-3 * nu : 1e-3;
  }

  fastcv::FoldPartition part =
      fastcv::make_folds(n, folds, seed, stratify ? &ds.labels : nullptr);
  auto hat =
      fastcv::hat_matrix(fastcv::augment(ds.features), fastcv::RidgeSpec{lambda});

  std::vector<double> perf;
  try {
    if (binary) {
      fastcv::PermutationPlan plan =
          fastcv::make_permutation_plan(permutations + 1, n, seed);
      perf = fastcv::permutation_test_binary(hat,
                                             fastcv::labels_to_pm1(ds.labels),
                                             part, plan, metric,
                                             /*adjust=*/true);
    } else {
      fastcv::PermutationPlan plan =
          fastcv::make_permutation_plan(permutations + 1, n, seed);
      perf = fastcv::permutation_test_multiclass(hat, ds.labels, ds.n_classes,
                                                 part, plan);
    }
  } catch (const fastcv::DegenerateFoldError& e) {
    throw fastcv::DegenerateFoldError(
        std::string(e.what()) + " (consider --stratify)", e.fold);
  }

  // Per-fold performance for the unpermuted labels.
  std::vector<double> fold_perf;
  {
    if (binary) {
      Eigen::VectorXd y = fastcv::labels_to_pm1(ds.labels);
      fastcv::CvResult res = fastcv::cv_decision_values(hat, y, part);
      fastcv::adjust_bias(hat, y, part, res);
      for (const auto& te : part.folds) {
        Eigen::VectorXd v(te.size()), yt(te.size());
        for (std::size_t i = 0; i < te.size(); ++i) {
          v(static_cast<Eigen::Index>(i)) = res.adjusted_values(te[i]);
          yt(static_cast<Eigen::Index>(i)) = y(te[i]);
        }
        fold_perf.push_back(fastcv::binary_metric(metric, v, yt));
      }
    } else {
      fastcv::CvResult res =
          fastcv::multiclass_crossval(hat, ds.labels, ds.n_classes, part);
      fold_perf = res.fold_performance;
    }
  }

  json result = {{"task", task},
                 {"metric", metric_name},
                 {"n_samples", n},
                 {"n_features", ds.n_features()},
                 {"n_classes", ds.n_classes},
                 {"n_folds", folds},
                 {"lambda", lambda},
                 {"seed", seed},
                 {"stratify", stratify},
                 {"fold_performance", fold_perf},
                 {"mean_performance", perf[0]}};
  if (permutations > 0) {
    std::vector<double> null_dist(perf.begin() + 1, perf.end());
    int ge = 0;
    for (double v : null_dist)
      if (v >= perf[0]) ++ge;
    result["permutations"] = permutations;
    result["null_distribution"] = null_dist;
    result["p_value"] = (1.0 + ge) / static_cast<double>(permutations + 1);
  }
  write_output(out, result.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical cross-validation and permutation testing for "
               "least-squares classifiers"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string config_path, out_path, format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    return sub->add_option("--seed", seed, "master RNG seed");
  };

  auto* verify = app.add_subcommand("verify", "run the property suites");
  bool inject_fault = false;
  auto* verify_seed = add_common(verify);
  verify->add_flag("--inject-fault", inject_fault)->group("");  // hidden

  auto* bench = app.add_subcommand("bench", "time standard vs analytic CV");
  int threads = 1;
  auto* bench_seed = add_common(bench);
  bench->add_option("--threads", threads, "parallel grid cells")
      ->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "cross-validate a CSV dataset");
  std::string csv_path, task = "binary", lambda_text = "auto",
              metric_name = "accuracy";
  int folds = 5, permutations = 0;
  bool stratify = false;
  run->add_option("dataset", csv_path, "CSV: label column, then features")
      ->required();
  run->add_option("--task", task)->check(CLI::IsMember({"binary", "multiclass"}));
  run->add_option("--folds", folds, "number of folds");
  run->add_option("--lambda", lambda_text, "ridge penalty or 'auto'");
  run->add_option("--permutations", permutations, "permutation count T");
  run->add_option("--metric", metric_name)
      ->check(CLI::IsMember({"accuracy", "auc"}));
  run->add_flag("--stratify", stratify, "class-stratified folds");
  auto* run_seed = add_common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    json config = load_config(config_path);
    if (*verify) {
      std::string fmt = format == "json" ? "json" : "text";
      return cmd_verify(resolve_seed(verify_seed->count() > 0, seed, config),
                        inject_fault, out_path, fmt);
    }
    if (*bench)
      return cmd_bench(config, resolve_seed(bench_seed->count() > 0, seed, config),
                       out_path, format, threads);
    return cmd_run(csv_path, task, folds, lambda_text, permutations,
                   metric_name, stratify,
                   resolve_seed(run_seed->count() > 0, seed, config), out_path);
  } catch (const fastcv::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const fastcv::ParseError& e) {
    std::cerr << "error (line " << e.line << "): " << e.what() << '\n';
    return kExitIo;
  } catch (const fastcv::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fastcv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
