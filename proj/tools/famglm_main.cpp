/*
 * Copyright 2026 The famglm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: simulate | fit | predict | reconstruct | evaluate.
// Exit codes: 0 success, 2 usage or configuration problem, 3 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "famglm/famglm.hpp"

namespace fs = std::filesystem;
using namespace famglm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::optional<std::pair<int, int>> parse_ranks(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  require(comma != std::string::npos, errc::config_mismatch,
          "--ranks expects k1,k2");
  return std::make_pair(static_cast<int>(parse_float(text.substr(0, comma))),
                        static_cast<int>(parse_float(text.substr(comma + 1))));
}

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& rows) {
  CsvWriter csv(path);
  csv.write_row({"method", "metric", "mean", "stderr"});
  for (const auto& row : rows) {
    csv.write_row({row.method, row.metric, format_float(row.mean),
                   format_float(row.stddev)});
  }
}

void write_curve_csv(const fs::path& path,
                     const std::vector<std::pair<double, double>>& points) {
  CsvWriter csv(path);
  csv.write_row({"x", "y"});
  for (const auto& [x, y] : points) {
    csv.write_row({format_float(x), format_float(y)});
  }
}

struct SimulateArgs {
  std::string scenario;
  std::string config_file;
  int p1 = 0, p2 = 0;
  int n = 0;
  double rho = 0.0;
  std::string family = "binomial";
  std::uint64_t seed = 0;
  int replicates = 1;
  int folds = 5;
  std::string ranks;
  bool center = false;
  bool fixed_truth = false;
  bool timing = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args, const CLI::App& cmd) {
  ScenarioConfig config;
  const bool from_file = !args.config_file.empty();
  if (from_file) config = scenario_config_from_file(args.config_file);
  require(from_file || cmd.count("--scenario") > 0, errc::config_mismatch,
          "either --scenario or --config is required");
  require(!(cmd.count("--n") && cmd.count("--rho")), errc::config_mismatch,
          "give exactly one of --n / --rho");
  if (cmd.count("--scenario")) config.scenario = scenario_from_string(args.scenario);
  if (cmd.count("--p1")) config.p1 = args.p1;
  if (cmd.count("--p2")) config.p2 = args.p2;
  if (cmd.count("--n")) {
    config.n = args.n;
    config.rho.reset();
  }
  if (cmd.count("--rho")) {
    config.rho = args.rho;
    config.n.reset();
  }
  if (cmd.count("--family")) config.family = family_from_string(args.family);
  if (cmd.count("--seed")) config.seed = args.seed;
  if (cmd.count("--replicates")) config.replicates = args.replicates;
  if (cmd.count("--folds")) config.folds = args.folds;
  if (const auto ranks = parse_ranks(args.ranks)) config.ranks_override = ranks;
  config.center |= args.center;
  config.fixed_truth |= args.fixed_truth;
  config.timing |= args.timing;
  config.apply_scenario_defaults();
  config.validate();

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  const ExperimentResult result = run_experiment(config);
  const std::vector<SummaryRow> summary = result.summarize();
  write_summary_csv(out_dir / "results.csv", summary);

  {
    CsvWriter ranks_csv(out_dir / "ranks.csv");
    ranks_csv.write_row({"replicate", "fold", "k1", "k2"});
    for (const auto& record : result.ranks) {
      ranks_csv.write_row({std::to_string(record.replicate), std::to_string(record.fold),
                           std::to_string(record.k1), std::to_string(record.k2)});
    }
  }
  if (!result.roc_curve.empty()) {
    write_curve_csv(out_dir / "roc.csv", result.roc_curve);
    write_curve_csv(out_dir / "pr.csv", result.pr_curve);
  }
  if (config.timing) {
    CsvWriter timing_csv(out_dir / "timing.csv");
    timing_csv.write_row({"method", "median_seconds"});
    for (const auto& m : result.methods) {
      if (!m.fit_seconds.empty()) {
        timing_csv.write_row({m.method, format_float(median(m.fit_seconds))});
      }
    }
  }

  for (const auto& failure : result.failures) {
    std::cerr << "replicate " << failure.replicate << " [" << failure.method
              << "] failed: " << failure.message << '\n';
  }
  for (const auto& row : summary) {
    std::cout << row.method << ' ' << row.metric << ' ' << format_float(row.mean)
              << " (" << format_float(row.stddev) << ")\n";
  }
  return 0;
}

ModelBundle bundle_from_pipeline(const PipelineModel& model, Family family,
                                 const CorpusManifest& manifest, bool centered,
                                 double recon_error, Index covariate_count) {
  ModelBundle bundle;
  bundle.family = family;
  bundle.p1 = static_cast<int>(model.loadings.p1());
  bundle.p2 = static_cast<int>(model.loadings.p2());
  bundle.k1 = static_cast<int>(model.k1());
  bundle.k2 = static_cast<int>(model.k2());
  bundle.covariate_count = static_cast<int>(covariate_count);
  bundle.target_height = manifest.target_height;
  bundle.target_width = manifest.target_width;
  bundle.centered_moments = centered;
  bundle.intercept = model.glm.intercept;
  bundle.training_reconstruction_error = recon_error;
  bundle.row_loading = model.loadings.row_loading;
  bundle.col_loading = model.loadings.col_loading;
  const Index score_len = model.k1() * model.k2();
  bundle.score_coefficients = model.glm.coefficients.head(score_len);
  bundle.covariate_coefficients = model.glm.coefficients.tail(covariate_count);
  return bundle;
}

FactorLoadings loadings_from_bundle(const ModelBundle& bundle) {
  FactorLoadings loadings;
  loadings.row_loading = bundle.row_loading;
  loadings.col_loading = bundle.col_loading;
  return loadings;
}

double bundle_linear(const ModelBundle& bundle, const Matrix& score,
                     const Vector& covariates) {
  return bundle.intercept + bundle.score_coefficients.dot(vec(score)) +
         bundle.covariate_coefficients.dot(covariates);
}

int cmd_fit(const std::string& manifest_path, const std::string& family_name,
            const std::string& ranks, bool center, int height, int width,
            const std::string& out) {
  CorpusManifest manifest = read_manifest(manifest_path);
  manifest.target_height = height;
  manifest.target_width = width;
  const Family family = family_from_string(family_name);

  const LabeledDataset data = load_corpus(manifest);
  if (family == Family::binomial) {
    bool pos = false, neg = false;
    for (Index i = 0; i < data.n(); ++i) (data.response(i) == 1.0 ? pos : neg) = true;
    require(pos && neg, errc::one_class_only,
            "binomial fit needs both classes in the training corpus");
  }

  PipelineOptions options;
  options.ranks = parse_ranks(ranks);
  options.center = center;
  std::vector<Index> all(static_cast<std::size_t>(data.n()));
  std::iota(all.begin(), all.end(), Index{0});
  const PipelineModel model = fit_pipeline(data, all, family, options);

  const MatrixCorpus corpus{std::vector<Matrix>(data.predictors)};
  const FactorScores scores = extract_scores(model.loadings, corpus);
  const double recon_error = reconstruction_error(corpus, model.loadings, scores);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  const ModelBundle bundle = bundle_from_pipeline(model, family, manifest, center,
                                                  recon_error, data.covariate_count());
  save_model(bundle, out_dir / "model.fam");

  CsvWriter pred_csv(out_dir / "train_predictions.csv");
  const bool binomial = family == Family::binomial;
  if (binomial) pred_csv.write_row({"path", "linear", "mean", "class"});
  else pred_csv.write_row({"path", "linear", "mean"});
  for (Index i = 0; i < data.n(); ++i) {
    const double linear =
        bundle_linear(bundle, scores.scores[static_cast<std::size_t>(i)],
                      data.covariates.cols() > 0 ? Vector(data.covariates.row(i)) : Vector(0));
    const double mean = mean_from_linear(family, linear);
    std::vector<std::string> row{data.ids[static_cast<std::size_t>(i)],
                                 format_float(linear), format_float(mean)};
    if (binomial) row.push_back(mean >= 0.5 ? "1" : "0");
    pred_csv.write_row(row);
  }

  std::cout << "fit " << to_string(family) << " model: ranks (" << bundle.k1 << ","
            << bundle.k2 << "), reconstruction error "
            << format_float(recon_error) << ", glm "
            << (model.glm.converged ? "converged" : "not converged") << " in "
            << model.glm.iterations << " iterations\n";
  for (const auto& warning : model.glm.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  return 0;
}

LabeledDataset corpus_for_model(const ModelBundle& bundle, const std::string& manifest_path) {
  CorpusManifest manifest = read_manifest(manifest_path);
  manifest.target_height = bundle.target_height;
  manifest.target_width = bundle.target_width;
  LabeledDataset data = load_corpus(manifest);
  require(data.covariate_count() == bundle.covariate_count, errc::shape_mismatch,
          "manifest provides " + std::to_string(data.covariate_count()) +
              " covariates, model expects " + std::to_string(bundle.covariate_count));
  return data;
}

int cmd_predict(const std::string& model_path, const std::string& manifest_path,
                const std::string& out) {
  const ModelBundle bundle = load_model(model_path);
  const LabeledDataset data = corpus_for_model(bundle, manifest_path);
  const FactorLoadings loadings = loadings_from_bundle(bundle);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  CsvWriter csv(out_dir / "predictions.csv");
  const bool binomial = bundle.family == Family::binomial;
  if (binomial) csv.write_row({"path", "linear", "mean", "class"});
  else csv.write_row({"path", "linear", "mean"});
  for (Index i = 0; i < data.n(); ++i) {
    const Matrix score =
        extract_score(loadings, data.predictors[static_cast<std::size_t>(i)]);
    const double linear = bundle_linear(
        bundle, score,
        data.covariates.cols() > 0 ? Vector(data.covariates.row(i)) : Vector(0));
    const double mean = mean_from_linear(bundle.family, linear);
    std::vector<std::string> row{data.ids[static_cast<std::size_t>(i)],
                                 format_float(linear), format_float(mean)};
    if (binomial) row.push_back(mean >= 0.5 ? "1" : "0");
    csv.write_row(row);
  }
  return 0;
}

int cmd_reconstruct(const std::string& model_path, const std::string& manifest_path,
                    const std::string& out) {
  const ModelBundle bundle = load_model(model_path);
  const LabeledDataset data = corpus_for_model(bundle, manifest_path);
  const FactorLoadings loadings = loadings_from_bundle(bundle);

  const MatrixCorpus corpus{std::vector<Matrix>(data.predictors)};
  const FactorScores scores = extract_scores(loadings, corpus);
  const MatrixCorpus rebuilt = reconstruct(loadings, scores);
  const double mean_error = reconstruction_error(corpus, loadings, scores);
  const double pixel_count =
      static_cast<double>(bundle.p1) * static_cast<double>(bundle.p2);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  CsvWriter error_csv(out_dir / "recon_error.csv");
  error_csv.write_row({"path", "error"});
  for (Index i = 0; i < data.n(); ++i) {
    const double err = (corpus.samples[static_cast<std::size_t>(i)] -
                        rebuilt.samples[static_cast<std::size_t>(i)])
                           .squaredNorm() /
                       pixel_count;
    error_csv.write_row({data.ids[static_cast<std::size_t>(i)], format_float(err)});

    char name[32];
    std::snprintf(name, sizeof name, "recon_%04d.csv", static_cast<int>(i));
    CsvWriter grid(out_dir / name);
    std::vector<std::string> row(static_cast<std::size_t>(bundle.p2));
    for (Index r = 0; r < bundle.p1; ++r) {
      for (Index c = 0; c < bundle.p2; ++c) {
        row[static_cast<std::size_t>(c)] =
            format_float(rebuilt.samples[static_cast<std::size_t>(i)](r, c));
      }
      grid.write_row(row);
    }
  }
  error_csv.write_row({"__mean__", format_float(mean_error)});
  std::cout << "mean reconstruction error " << format_float(mean_error) << '\n';
  return 0;
}

int cmd_evaluate(const std::string& predictions_path, const std::string& manifest_path,
                 const std::string& family_name, const std::string& out) {
  const Family family = family_from_string(family_name);
  const auto rows = read_csv(predictions_path);
  require(rows.size() >= 2, errc::config_mismatch,
          predictions_path + ": no prediction rows");
  const auto& header = rows.front();
  std::size_t mean_col = header.size(), path_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "mean") mean_col = c;
    if (header[c] == "path") path_col = c;
  }
  require(mean_col < header.size(), errc::config_mismatch,
          predictions_path + ": no 'mean' column");

  const CorpusManifest manifest = read_manifest(manifest_path);
  require(rows.size() - 1 == manifest.entries.size(), errc::config_mismatch,
          "predictions and manifest row counts differ");

  Vector y_true(static_cast<Index>(manifest.entries.size()));
  Vector y_hat(static_cast<Index>(manifest.entries.size()));
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& row = rows[i + 1];
    require(row.size() == header.size(), errc::config_mismatch,
            predictions_path + ": ragged row " + std::to_string(i + 1));
    if (path_col < header.size()) {
      const fs::path got(row[path_col]);
      const fs::path want(manifest.entries[i].path);
      require(got.filename() == want.filename(), errc::config_mismatch,
              "row " + std::to_string(i + 1) + ": prediction path '" +
                  row[path_col] + "' does not match manifest path '" +
                  manifest.entries[i].path + "'");
    }
    y_true(static_cast<Index>(i)) = manifest.entries[i].label;
    y_hat(static_cast<Index>(i)) = parse_float(row[mean_col]);
  }

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  CsvWriter csv(out_dir / "metrics.csv");
  csv.write_row({"metric", "value"});
  if (family == Family::binomial) {
    const auto summary = confusion_metrics(y_true, y_hat, 0.5);
    const double area = auc(y_true, y_hat);
    csv.write_row({"ca", format_float(summary.accuracy)});
    csv.write_row({"kappa", format_float(summary.kappa)});
    csv.write_row({"sensitivity", format_float(summary.sensitivity)});
    csv.write_row({"f1", format_float(summary.f1)});
    csv.write_row({"auc", format_float(area)});
    write_curve_csv(out_dir / "roc.csv", roc_points(y_true, y_hat));
    write_curve_csv(out_dir / "pr.csv", pr_points(y_true, y_hat));
  } else {
    const auto summary = regression_metrics(y_true, y_hat);
    csv.write_row({"rmse", format_float(summary.rmse)});
    csv.write_row({"mae", format_float(summary.mae)});
    if (summary.nmse) csv.write_row({"nmse", format_float(*summary.nmse)});
  }
  return 0;
}

bool is_config_error(errc code) {
  switch (code) {
    case errc::config_mismatch:
    case errc::fold_too_small:
    case errc::cutoff_out_of_range:
    case errc::invalid_target:
    case errc::rank_too_large:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent matrix-factor regression toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a replicated simulation study");
  simulate_cmd->add_option("--scenario", sim.scenario,
                           "goodnessOfFit | threeFamily | covidLike");
  simulate_cmd->add_option("--config", sim.config_file, "key-value scenario config file");
  simulate_cmd->add_option("--p1", sim.p1, "predictor rows");
  simulate_cmd->add_option("--p2", sim.p2, "predictor columns");
  simulate_cmd->add_option("--n", sim.n, "sample size");
  simulate_cmd->add_option("--rho", sim.rho, "sample size as a multiple of p1*p2");
  simulate_cmd->add_option("--family", sim.family, "gaussian | binomial | poisson");
  simulate_cmd->add_option("--seed", sim.seed, "random seed");
  simulate_cmd->add_option("--replicates", sim.replicates, "replicate count");
  simulate_cmd->add_option("--folds", sim.folds, "cross-validation folds");
  simulate_cmd->add_option("--ranks", sim.ranks, "fixed factor ranks k1,k2");
  simulate_cmd->add_flag("--center", sim.center, "center the moment matrices");
  simulate_cmd->add_flag("--fixed-truth", sim.fixed_truth,
                         "freeze the generating loadings across replicates");
  simulate_cmd->add_flag("--timing", sim.timing, "report median fit time per method");
  simulate_cmd->add_option("--out", sim.out, "output directory")->required();

  std::string fit_manifest, fit_family = "binomial", fit_ranks, fit_out;
  bool fit_center = false;
  int fit_height = 150, fit_width = 150;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model on an image corpus");
  fit_cmd->add_option("--manifest", fit_manifest, "corpus manifest CSV")->required();
  fit_cmd->add_option("--family", fit_family, "gaussian | binomial | poisson");
  fit_cmd->add_option("--ranks", fit_ranks, "fixed factor ranks k1,k2");
  fit_cmd->add_flag("--center", fit_center, "center the moment matrices");
  fit_cmd->add_option("--height", fit_height, "target image height");
  fit_cmd->add_option("--width", fit_width, "target image width");
  fit_cmd->add_option("--out", fit_out, "output directory")->required();

  std::string predict_model, predict_manifest, predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "Score a corpus with a fitted model");
  predict_cmd->add_option("--model", predict_model, "model file")->required();
  predict_cmd->add_option("--manifest", predict_manifest, "corpus manifest CSV")->required();
  predict_cmd->add_option("--out", predict_out, "output directory")->required();

  std::string recon_model, recon_manifest, recon_out;
  auto* recon_cmd = app.add_subcommand("reconstruct",
                                       "Rebuild images from their factor scores");
  recon_cmd->add_option("--model", recon_model, "model file")->required();
  recon_cmd->add_option("--manifest", recon_manifest, "corpus manifest CSV")->required();
  recon_cmd->add_option("--out", recon_out, "output directory")->required();

  std::string eval_predictions, eval_manifest, eval_family = "binomial", eval_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against labels");
  eval_cmd->add_option("--predictions", eval_predictions, "predictions CSV")->required();
  eval_cmd->add_option("--manifest", eval_manifest, "manifest CSV with labels")->required();
  eval_cmd->add_option("--family", eval_family, "gaussian | binomial | poisson");
  eval_cmd->add_option("--out", eval_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(sim, *simulate_cmd);
    if (fit_cmd->parsed()) {
      return cmd_fit(fit_manifest, fit_family, fit_ranks, fit_center, fit_height,
                     fit_width, fit_out);
    }
    if (predict_cmd->parsed()) return cmd_predict(predict_model, predict_manifest, predict_out);
    if (recon_cmd->parsed()) return cmd_reconstruct(recon_model, recon_manifest, recon_out);
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval_predictions, eval_manifest, eval_family, eval_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
