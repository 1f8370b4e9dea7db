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
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "famglm/core.hpp"
#include "famglm/csv.hpp"
#include "famglm/dataset.hpp"
#include "famglm/glm.hpp"
#include "famglm/linalg.hpp"
#include "famglm/metrics.hpp"
#include "famglm/pipeline.hpp"
#include "famglm/rng.hpp"

namespace famglm {

enum class Scenario { goodness_of_fit, three_family, covid_like };

inline const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::goodness_of_fit: return "goodnessOfFit";
    case Scenario::three_family: return "threeFamily";
    case Scenario::covid_like: return "covidLike";
  }
  return "unknown";
}

inline Scenario scenario_from_string(const std::string& name) {
  if (name == "goodnessOfFit") return Scenario::goodness_of_fit;
  if (name == "threeFamily") return Scenario::three_family;
  if (name == "covidLike") return Scenario::covid_like;
  fail(errc::config_mismatch, "unknown scenario '" + name + "'");
}

/// A fully specified simulation run. Exactly one of `n` / `rho` must be set
/// (rho resolves to n = ceil(rho * p1 * p2)); covidLike fills its fixed
/// dimensions when none are given.
struct ScenarioConfig {
  Scenario scenario = Scenario::goodness_of_fit;
  int p1 = 0;
  int p2 = 0;
  std::optional<int> n;
  std::optional<double> rho;
  Family family = Family::binomial;  // consulted by threeFamily only
  std::uint64_t seed = 0;
  int replicates = 1;
  int folds = 5;
  std::optional<std::pair<int, int>> ranks_override;
  bool center = false;
  bool fixed_truth = false;
  bool timing = false;

  void apply_scenario_defaults() {
    if (scenario == Scenario::covid_like) {
      if (p1 == 0) p1 = 150;
      if (p2 == 0) p2 = 150;
      if (!n && !rho) n = 746;
    }
  }

  Family effective_family() const {
    if (scenario == Scenario::three_family) return family;
    require(family == Family::binomial, errc::config_mismatch,
            std::string(to_string(scenario)) + " uses a binomial response");
    return Family::binomial;
  }

  Index covariate_count() const { return scenario == Scenario::three_family ? 3 : 0; }

  int sample_count() const {
    require(p1 > 0 && p2 > 0, errc::config_mismatch, "p1 and p2 must be positive");
    require(n.has_value() != rho.has_value(), errc::config_mismatch,
            "exactly one of n / rho must be given");
    if (n) {
      require(*n >= 1, errc::config_mismatch, "n must be positive");
      return *n;
    }
    require(*rho > 0.0, errc::config_mismatch, "rho must be positive");
    return static_cast<int>(std::ceil(*rho * p1 * p2));
  }

  void validate() const {
    (void)sample_count();
    (void)effective_family();
    require(replicates >= 1, errc::config_mismatch, "replicates must be positive");
    require(folds >= 2, errc::config_mismatch, "folds must be at least 2");
    if (ranks_override) {
      require(ranks_override->first >= 1 && ranks_override->second >= 1 &&
                  ranks_override->first <= p1 && ranks_override->second <= p2,
              errc::config_mismatch, "rank override exceeds matrix dimensions");
    }
  }
};

/// Parameters of the generating model: loadings, GLM coefficients, and the
/// latent score distribution.
struct GroundTruth {
  Matrix row_loading;             // p1 x 3
  Matrix col_loading;             // p2 x 3
  double intercept = 0.0;
  Vector score_coefficients;      // length 9
  Vector covariate_coefficients;  // length m
  Vector score_mean;              // length 9
  Matrix score_covariance;        // 9 x 9
};

namespace detail {

constexpr int kLatentRank = 3;  // per side; scores are 3 x 3

inline Matrix banded_score_covariance() {
  const int k = kLatentRank * kLatentRank;
  Matrix sigma(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sigma(i, j) = std::pow(0.5, std::abs(i - j));
  }
  return sigma;
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace detail

/// Draws the per-replicate loading matrices and fills in the scenario's fixed
/// coefficients. Loading entries are uniform on (-sqrt(p), sqrt(p)).
inline GroundTruth make_ground_truth(const ScenarioConfig& config, Rng& rng) {
  const int k = detail::kLatentRank;
  GroundTruth truth;
  truth.row_loading.resize(config.p1, k);
  truth.col_loading.resize(config.p2, k);
  const double r_bound = std::sqrt(static_cast<double>(config.p1));
  const double c_bound = std::sqrt(static_cast<double>(config.p2));
  for (Index i = 0; i < truth.row_loading.rows(); ++i) {
    for (Index j = 0; j < k; ++j) truth.row_loading(i, j) = rng.uniform(-r_bound, r_bound);
  }
  for (Index i = 0; i < truth.col_loading.rows(); ++i) {
    for (Index j = 0; j < k; ++j) truth.col_loading(i, j) = rng.uniform(-c_bound, c_bound);
  }

  truth.score_covariance = detail::banded_score_covariance();
  truth.score_mean = Vector::Zero(k * k);
  truth.score_coefficients.resize(k * k);
  switch (config.scenario) {
    case Scenario::goodness_of_fit:
      truth.intercept = 1.0;
      truth.score_coefficients << 1, -1, 0.5, 0.5, 0.5, 0.5, -0.5, -0.5, -0.5;
      truth.covariate_coefficients.resize(0);
      break;
    case Scenario::three_family:
      truth.intercept = 1.0;
      truth.score_coefficients << 2, -2, 1, 1, 1, -1, -1, -1, -1;
      truth.covariate_coefficients = Vector::Ones(3);
      break;
    case Scenario::covid_like:
      truth.score_coefficients << 2, -2, 1, 1, 1, -1, -1, -1, -1;
      truth.score_mean << 1, 0.5, 1, -0.5, 1, 0.5, 1, -0.5, 1;
      // centers the mean regression so the marginal positive rate is ~0.47
      truth.intercept = detail::logit(0.47) - truth.score_coefficients.dot(truth.score_mean);
      truth.covariate_coefficients.resize(0);
      break;
  }
  return truth;
}

struct GenerationOptions {
  double noise_scale = 1.0;  // 0 gives a noiseless corpus (testing hook)
};

/// Generates `count` samples: latent scores are multivariate normal, the
/// predictor is the bilinear loading product plus standard normal noise, and
/// the response follows the family's canonical model. Poisson rates are
/// clamped below at 1 to keep small linear predictors from producing
/// degenerate counts. Draws are strictly sample-sequential, so a dataset of
/// size n is a prefix of the same stream's dataset of size n' > n.
inline LabeledDataset generate_dataset(const ScenarioConfig& config,
                                       const GroundTruth& truth, Index count, Rng& rng,
                                       const GenerationOptions& options = {}) {
  require(truth.row_loading.rows() == config.p1 && truth.col_loading.rows() == config.p2,
          errc::config_mismatch, "generate_dataset: truth does not match config dims");
  const Family family = config.effective_family();
  const Index m = config.covariate_count();
  const int k = detail::kLatentRank;
  const Matrix chol = cholesky(truth.score_covariance);

  LabeledDataset data;
  data.predictors.reserve(static_cast<std::size_t>(count));
  data.response.resize(count);
  data.covariates.resize(count, m);
  Matrix noise(config.p1, config.p2);
  for (Index i = 0; i < count; ++i) {
    const Vector score_vec = mvn_sample(truth.score_mean, chol, rng);
    const Matrix score = unvec(score_vec, k, k);
    for (Index r = 0; r < noise.rows(); ++r) {
      for (Index c = 0; c < noise.cols(); ++c) noise(r, c) = rng.normal();
    }
    data.predictors.push_back(truth.row_loading * score * truth.col_loading.transpose() +
                              options.noise_scale * noise);
    for (Index c = 0; c < m; ++c) data.covariates(i, c) = rng.normal();

    double mu = truth.intercept + truth.score_coefficients.dot(score_vec);
    if (m > 0) mu += truth.covariate_coefficients.dot(data.covariates.row(i));
    switch (family) {
      case Family::gaussian:
        data.response(i) = mu + rng.normal();
        break;
      case Family::binomial:
        data.response(i) = rng.bernoulli(detail::sigmoid(mu)) ? 1.0 : 0.0;
        break;
      case Family::poisson:
        data.response(i) = static_cast<double>(rng.poisson(std::max(std::exp(mu), 1.0)));
        break;
    }
  }
  data.validate();
  return data;
}

/// Assigns each sample to a fold. Plain mode deals a shuffled permutation
/// round-robin; stratified mode deals each class separately so per-fold class
/// ratios match the sample.
inline std::vector<int> fold_assignment(Index count, int folds, bool stratified,
                                        const Vector& response, Rng& rng) {
  require(folds >= 2, errc::fold_too_small, "need at least two folds");
  require(folds <= count, errc::fold_too_small,
          "more folds than samples (" + std::to_string(folds) + " > " +
              std::to_string(count) + ")");

  auto shuffled = [&](std::vector<Index> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(items[i - 1], items[j]);
    }
    return items;
  };

  std::vector<int> fold_of(static_cast<std::size_t>(count), 0);
  if (!stratified) {
    std::vector<Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), Index{0});
    order = shuffled(std::move(order));
    for (std::size_t i = 0; i < order.size(); ++i) {
      fold_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i % folds);
    }
    return fold_of;
  }

  require(response.size() == count, errc::shape_mismatch,
          "fold_assignment: response length mismatch");
  std::vector<Index> positives, negatives;
  for (Index i = 0; i < count; ++i) {
    require(response(i) == 0.0 || response(i) == 1.0, errc::invalid_response,
            "stratified folds require 0/1 labels");
    (response(i) == 1.0 ? positives : negatives).push_back(i);
  }
  positives = shuffled(std::move(positives));
  negatives = shuffled(std::move(negatives));
  for (std::size_t i = 0; i < positives.size(); ++i) {
    fold_of[static_cast<std::size_t>(positives[i])] = static_cast<int>(i % folds);
  }
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    fold_of[static_cast<std::size_t>(negatives[i])] = static_cast<int>(i % folds);
  }
  return fold_of;
}

/// Rank choices observed while fitting (one entry per fold; fold -1 denotes a
/// single train/validation split).
struct RankRecord {
  int replicate = 0;
  int fold = 0;
  int k1 = 0;
  int k2 = 0;
};

/// Out-of-fold predicted means for a precomputed fold assignment. Every model
/// ingredient is refit on each training fold alone.
inline Vector cross_validate_assigned(const LabeledDataset& data,
                                      const std::vector<int>& fold_of, int folds,
                                      const MatrixGlmMethod& method,
                                      std::vector<RankRecord>* ranks = nullptr,
                                      int replicate = 0) {
  Vector predictions(data.n());
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train, held_out;
    for (Index i = 0; i < data.n(); ++i) {
      (fold_of[static_cast<std::size_t>(i)] == f ? held_out : train).push_back(i);
    }
    require(!held_out.empty() && !train.empty(), errc::fold_too_small,
            "fold " + std::to_string(f) + " leaves an empty split");
    const auto fitted = method.fit(data, train);
    for (Index i : held_out) predictions(i) = fitted->predict_mean(data, i);
    if (ranks) {
      if (const auto chosen = fitted->selected_ranks()) {
        ranks->push_back({replicate, f, chosen->first, chosen->second});
      }
    }
  }
  return predictions;
}

/// Convenience wrapper that also draws the fold assignment.
inline Vector cross_validate(const LabeledDataset& data, int folds,
                             const MatrixGlmMethod& method, bool stratified, Rng& rng,
                             std::vector<RankRecord>* ranks = nullptr,
                             int replicate = 0) {
  const auto fold_of = fold_assignment(data.n(), folds, stratified, data.response, rng);
  return cross_validate_assigned(data, fold_of, folds, method, ranks, replicate);
}

struct FailureRecord {
  int replicate = 0;
  std::string method;
  std::string message;
};

struct MethodResults {
  std::string method;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> values;  // [metric][replicate], NaN when absent
  std::vector<double> fit_seconds;          // per successful replicate
};

struct SummaryRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct ExperimentResult {
  ScenarioConfig config;
  std::vector<MethodResults> methods;
  std::vector<RankRecord> ranks;
  std::vector<FailureRecord> failures;
  std::vector<std::pair<double, double>> roc_curve;  // first replicate, first method
  std::vector<std::pair<double, double>> pr_curve;
  std::vector<double> positive_rates;  // per replicate, binomial scenarios

  const MethodResults* find(const std::string& name) const {
    for (const auto& m : methods) {
      if (m.method == name) return &m;
    }
    return nullptr;
  }

  /// Mean and across-replicate standard deviation per (method, metric), plus
  /// the paired winning percentage when both bundled methods ran, the
  /// empirical positive rate for binomial scenarios, and per-method failure
  /// counts.
  std::vector<SummaryRow> summarize() const {
    std::vector<SummaryRow> rows;
    for (const auto& m : methods) {
      for (std::size_t k = 0; k < m.metric_names.size(); ++k) {
        double sum = 0.0;
        int count = 0;
        for (double v : m.values[k]) {
          if (std::isfinite(v)) {
            sum += v;
            ++count;
          }
        }
        const double mean = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
        double ss = 0.0;
        for (double v : m.values[k]) {
          if (std::isfinite(v)) ss += (v - mean) * (v - mean);
        }
        const double sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
        rows.push_back({m.method, m.metric_names[k], mean, sd, count});
      }
    }
    const MethodResults* fam = find("famglm");
    const MethodResults* vec = find("vecglm");
    if (fam && vec && !fam->metric_names.empty() && fam->metric_names[0] == "ca") {
      std::vector<double> fam_ca, vec_ca;
      for (std::size_t r = 0; r < fam->values[0].size(); ++r) {
        if (std::isfinite(fam->values[0][r]) && std::isfinite(vec->values[0][r])) {
          fam_ca.push_back(fam->values[0][r]);
          vec_ca.push_back(vec->values[0][r]);
        }
      }
      if (!fam_ca.empty()) {
        rows.push_back({"famglm", "wp", winning_percentage(fam_ca, vec_ca), 0.0,
                        static_cast<int>(fam_ca.size())});
      }
    }
    if (!positive_rates.empty()) {
      double sum = 0.0;
      for (double v : positive_rates) sum += v;
      const double mean = sum / static_cast<double>(positive_rates.size());
      double ss = 0.0;
      for (double v : positive_rates) ss += (v - mean) * (v - mean);
      const double sd = positive_rates.size() > 1
                            ? std::sqrt(ss / (static_cast<double>(positive_rates.size()) - 1.0))
                            : 0.0;
      rows.push_back({"data", "positive_rate", mean, sd,
                      static_cast<int>(positive_rates.size())});
    }
    for (const auto& m : methods) {
      int failed = 0;
      for (const auto& f : failures) {
        if (f.method == m.method) ++failed;
      }
      rows.push_back({m.method, "failed_replicates", static_cast<double>(failed), 0.0,
                      config.replicates});
    }
    return rows;
  }
};

inline double median(std::vector<double> values) {
  require(!values.empty(), errc::empty_input, "median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

/// Wall-clock source in seconds; injectable so timing aggregation is testable.
using Clock = std::function<double()>;

inline Clock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

/// The estimators a scenario runs by default: the goodness-of-fit comparison
/// pits the two-stage model against the vectorized baseline; the other
/// scenarios evaluate the two-stage model alone (the baseline is infeasible
/// at their dimensions and their published comparisons use external tools).
inline std::vector<std::unique_ptr<MatrixGlmMethod>> default_methods(
    const ScenarioConfig& config) {
  std::vector<std::unique_ptr<MatrixGlmMethod>> methods;
  PipelineOptions options;
  options.ranks = config.ranks_override;
  options.center = config.center;
  methods.push_back(std::make_unique<FamGlmMethod>(config.effective_family(), options));
  if (config.scenario == Scenario::goodness_of_fit) {
    methods.push_back(std::make_unique<VecGlmMethod>(config.effective_family()));
  }
  return methods;
}

/// Runs the replicated experiment. Replicate r draws everything from stream
/// seed xor r (a fixed-truth run draws the loadings once from a dedicated
/// stream), fits every method, and scores it under the scenario's protocol:
/// goodnessOfFit holds out a fresh validation half of equal size, the other
/// scenarios pool out-of-fold predictions from k-fold cross-validation.
/// A failed fit is recorded and skipped, never silently dropped.
inline ExperimentResult run_experiment(const ScenarioConfig& config,
                                       const std::vector<const MatrixGlmMethod*>& methods,
                                       const Clock& clock = steady_clock_seconds()) {
  config.validate();
  const Family family = config.effective_family();
  const Index n = config.sample_count();
  const bool single_split = config.scenario == Scenario::goodness_of_fit;
  const bool binomial = family == Family::binomial;

  ExperimentResult result;
  result.config = config;
  const std::vector<std::string> metric_names =
      binomial ? std::vector<std::string>{"ca", "kappa", "sensitivity", "f1", "auc"}
               : std::vector<std::string>{"rmse", "mae", "nmse"};
  for (const auto* method : methods) {
    MethodResults mr;
    mr.method = method->name();
    mr.metric_names = metric_names;
    mr.values.assign(metric_names.size(),
                     std::vector<double>(static_cast<std::size_t>(config.replicates),
                                         std::numeric_limits<double>::quiet_NaN()));
    result.methods.push_back(std::move(mr));
  }

  // Stream layout: replicate r uses stream seed^r; a frozen truth comes from
  // its own stream so it collides with no replicate.
  constexpr std::uint64_t kTruthStream = 0x9E3779B97F4A7C15ULL;
  std::optional<GroundTruth> frozen_truth;
  if (config.fixed_truth) {
    Rng truth_rng = Rng::stream(config.seed, kTruthStream);
    frozen_truth = make_ground_truth(config, truth_rng);
  }

  for (int r = 0; r < config.replicates; ++r) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(r));
    const GroundTruth truth =
        frozen_truth ? *frozen_truth : make_ground_truth(config, rng);
    const Index count = single_split ? 2 * n : n;
    const LabeledDataset data = generate_dataset(config, truth, count, rng);
    if (binomial) {
      result.positive_rates.push_back(data.response.mean());
    }

    std::vector<int> fold_of;
    std::vector<Index> train_half, eval_half;
    if (single_split) {
      for (Index i = 0; i < n; ++i) train_half.push_back(i);
      for (Index i = n; i < count; ++i) eval_half.push_back(i);
    } else {
      fold_of = fold_assignment(count, config.folds, binomial, data.response, rng);
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const MatrixGlmMethod& method = *methods[mi];
      try {
        std::vector<RankRecord> ranks;
        Vector predictions;
        Vector truth_labels;
        const double t0 = clock();
        if (single_split) {
          const auto fitted = method.fit(data, train_half);
          predictions.resize(n);
          for (Index i = 0; i < n; ++i) {
            predictions(i) = fitted->predict_mean(data, eval_half[static_cast<std::size_t>(i)]);
          }
          truth_labels = data.response.tail(n);
          if (const auto chosen = fitted->selected_ranks()) {
            ranks.push_back({r, -1, chosen->first, chosen->second});
          }
        } else {
          predictions = cross_validate_assigned(data, fold_of, config.folds, method,
                                                &ranks, r);
          truth_labels = data.response;
        }
        const double elapsed = clock() - t0;

        auto& mr = result.methods[mi];
        mr.fit_seconds.push_back(elapsed);
        if (binomial) {
          const auto summary = confusion_metrics(truth_labels, predictions, 0.5);
          mr.values[0][static_cast<std::size_t>(r)] = summary.accuracy;
          mr.values[1][static_cast<std::size_t>(r)] = summary.kappa;
          mr.values[2][static_cast<std::size_t>(r)] = summary.sensitivity;
          mr.values[3][static_cast<std::size_t>(r)] = summary.f1;
          mr.values[4][static_cast<std::size_t>(r)] = auc(truth_labels, predictions);
          if (r == 0 && mi == 0) {
            result.roc_curve = roc_points(truth_labels, predictions);
            result.pr_curve = pr_points(truth_labels, predictions);
          }
        } else {
          const auto summary = regression_metrics(truth_labels, predictions);
          mr.values[0][static_cast<std::size_t>(r)] = summary.rmse;
          mr.values[1][static_cast<std::size_t>(r)] = summary.mae;
          mr.values[2][static_cast<std::size_t>(r)] =
              summary.nmse.value_or(std::numeric_limits<double>::quiet_NaN());
        }
        for (const auto& record : ranks) result.ranks.push_back(record);
      } catch (const Error& e) {
        result.failures.push_back({r, method.name(), e.what()});
      }
    }
  }
  return result;
}

inline ExperimentResult run_experiment(const ScenarioConfig& config,
                                       const Clock& clock = steady_clock_seconds()) {
  const auto owned = default_methods(config);
  std::vector<const MatrixGlmMethod*> views;
  views.reserve(owned.size());
  for (const auto& m : owned) views.push_back(m.get());
  return run_experiment(config, views, clock);
}

/// Parses a scenario config written as `key value` (or `key=value`) lines;
/// `#` starts a comment. Keys mirror the CLI flags: scenario, p1, p2, n, rho,
/// family, seed, replicates, folds, ranks, center, fixed-truth, timing.
inline ScenarioConfig scenario_config_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  ScenarioConfig config;
  std::string line;
  int line_no = 0;
  auto bad = [&](const std::string& why) {
    fail(errc::config_mismatch,
         path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    std::string value;
    if (!(fields >> value)) bad("missing value for '" + key + "'");

    try {
      if (key == "scenario") config.scenario = scenario_from_string(value);
      else if (key == "p1") config.p1 = static_cast<int>(parse_float(value));
      else if (key == "p2") config.p2 = static_cast<int>(parse_float(value));
      else if (key == "n") config.n = static_cast<int>(parse_float(value));
      else if (key == "rho") config.rho = parse_float(value);
      else if (key == "family") config.family = family_from_string(value);
      else if (key == "seed") config.seed = static_cast<std::uint64_t>(std::stoull(value));
      else if (key == "replicates") config.replicates = static_cast<int>(parse_float(value));
      else if (key == "folds") config.folds = static_cast<int>(parse_float(value));
      else if (key == "center") config.center = value == "1" || value == "true";
      else if (key == "fixed-truth") config.fixed_truth = value == "1" || value == "true";
      else if (key == "timing") config.timing = value == "1" || value == "true";
      else if (key == "ranks") {
        const auto comma = value.find(',');
        require(comma != std::string::npos, errc::config_mismatch,
                "ranks must be given as k1,k2");
        config.ranks_override = std::make_pair(
            static_cast<int>(parse_float(value.substr(0, comma))),
            static_cast<int>(parse_float(value.substr(comma + 1))));
      } else {
        bad("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  config.apply_scenario_defaults();
  return config;
}

}  // namespace famglm
