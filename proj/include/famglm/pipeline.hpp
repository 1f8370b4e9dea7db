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

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "famglm/core.hpp"
#include "famglm/dataset.hpp"
#include "famglm/factor.hpp"
#include "famglm/glm.hpp"
#include "famglm/linalg.hpp"

namespace famglm {

struct PipelineOptions {
  std::optional<std::pair<int, int>> ranks;  // bypasses rank selection
  bool center = false;
};

/// A fitted two-stage model: spectral loadings plus the GLM on the vectorized
/// scores (and any extra covariates appended after them).
struct PipelineModel {
  FactorLoadings loadings;
  GlmFit glm;

  Index k1() const { return loadings.k1(); }
  Index k2() const { return loadings.k2(); }
};

/// Design row for one sample: vec(score) followed by the covariate vector.
inline Vector pipeline_design_row(const FactorLoadings& loadings, const Matrix& x,
                                  const Vector& covariates) {
  const Matrix score = extract_score(loadings, x);
  Vector row(score.size() + covariates.size());
  row.head(score.size()) = vec(score);
  row.tail(covariates.size()) = covariates;
  return row;
}

/// Fits the two-stage model on the subset of `data` given by `train`:
/// second-moment matrices and rank choice from the training samples only,
/// loadings cut from the spectra, then a GLM on [vec(score) | covariates].
inline PipelineModel fit_pipeline(const LabeledDataset& data,
                                  const std::vector<Index>& train, Family family,
                                  const PipelineOptions& options = {}) {
  require(!train.empty(), errc::empty_corpus, "fit_pipeline: empty training set");
  const Index p1 = data.p1(), p2 = data.p2();
  auto [row_moment, col_moment] = detail::accumulate_moments(
      static_cast<Index>(train.size()), p1, p2,
      [&](Index i) -> const Matrix& {
        return data.predictors[static_cast<std::size_t>(train[static_cast<std::size_t>(i)])];
      },
      options.center);

  const EigenResult row_spectrum = sym_eigen(row_moment);
  const EigenResult col_spectrum = sym_eigen(col_moment);
  int k1 = 0, k2 = 0;
  if (options.ranks) {
    std::tie(k1, k2) = *options.ranks;
  } else {
    std::tie(k1, k2) =
        select_ranks(row_spectrum.eigenvalues, col_spectrum.eigenvalues, p1, p2);
  }

  PipelineModel model;
  model.loadings = loadings_from_spectra(row_spectrum, col_spectrum, k1, k2);

  const Index m = data.covariate_count();
  Matrix design(static_cast<Index>(train.size()), static_cast<Index>(k1) * k2 + m);
  Vector response(static_cast<Index>(train.size()));
  for (std::size_t r = 0; r < train.size(); ++r) {
    const Index i = train[r];
    const Matrix score =
        extract_score(model.loadings, data.predictors[static_cast<std::size_t>(i)]);
    design.row(static_cast<Index>(r)).head(score.size()) = vec(score).transpose();
    if (m > 0) design.row(static_cast<Index>(r)).tail(m) = data.covariates.row(i);
    response(static_cast<Index>(r)) = data.response(i);
  }
  model.glm = fit_glm(design, response, family);
  return model;
}

inline double pipeline_predict_mean(const PipelineModel& model,
                                    const LabeledDataset& data, Index i) {
  const Vector row = pipeline_design_row(
      model.loadings, data.predictors[static_cast<std::size_t>(i)],
      data.covariates.cols() > 0 ? Vector(data.covariates.row(i)) : Vector(0));
  return predict(model.glm, row, PredictScale::mean);
}

/// Interface for anything the experiment harness can fit and score; the
/// bundled implementations are the two-stage model and the vectorize-
/// everything baseline, and external estimators can plug in the same way.
class MatrixGlmMethod {
 public:
  virtual ~MatrixGlmMethod() = default;
  virtual std::string name() const = 0;

  class Fitted {
   public:
    virtual ~Fitted() = default;
    virtual double predict_mean(const LabeledDataset& data, Index i) const = 0;
    /// Factor ranks chosen during the fit, when the method has any.
    virtual std::optional<std::pair<int, int>> selected_ranks() const { return {}; }
  };

  virtual std::unique_ptr<Fitted> fit(const LabeledDataset& data,
                                      const std::vector<Index>& train) const = 0;
};

/// Two-stage method: latent score extraction followed by a GLM.
class FamGlmMethod final : public MatrixGlmMethod {
 public:
  FamGlmMethod(Family family, PipelineOptions options = {})
      : family_(family), options_(std::move(options)) {}

  std::string name() const override { return "famglm"; }

  std::unique_ptr<Fitted> fit(const LabeledDataset& data,
                              const std::vector<Index>& train) const override {
    auto model = std::make_unique<FittedImpl>();
    model->model = fit_pipeline(data, train, family_, options_);
    return model;
  }

 private:
  struct FittedImpl final : Fitted {
    PipelineModel model;
    double predict_mean(const LabeledDataset& data, Index i) const override {
      return pipeline_predict_mean(model, data, i);
    }
    std::optional<std::pair<int, int>> selected_ranks() const override {
      return std::make_pair(static_cast<int>(model.k1()), static_cast<int>(model.k2()));
    }
  };

  Family family_;
  PipelineOptions options_;
};

/// Baseline that regresses directly on the stacked predictor entries.
class VecGlmMethod final : public MatrixGlmMethod {
 public:
  explicit VecGlmMethod(Family family) : family_(family) {}

  std::string name() const override { return "vecglm"; }

  std::unique_ptr<Fitted> fit(const LabeledDataset& data,
                              const std::vector<Index>& train) const override {
    const Index m = data.covariate_count();
    const Index d = data.p1() * data.p2() + m;
    Matrix design(static_cast<Index>(train.size()), d);
    Vector response(static_cast<Index>(train.size()));
    for (std::size_t r = 0; r < train.size(); ++r) {
      const Index i = train[r];
      design.row(static_cast<Index>(r)).head(d - m) =
          vec(data.predictors[static_cast<std::size_t>(i)]).transpose();
      if (m > 0) design.row(static_cast<Index>(r)).tail(m) = data.covariates.row(i);
      response(static_cast<Index>(r)) = data.response(i);
    }
    auto fitted = std::make_unique<FittedImpl>();
    fitted->glm = fit_glm(design, response, family_);
    return fitted;
  }

 private:
  struct FittedImpl final : Fitted {
    GlmFit glm;
    double predict_mean(const LabeledDataset& data, Index i) const override {
      const Index m = data.covariate_count();
      Vector row(data.p1() * data.p2() + m);
      row.head(row.size() - m) = vec(data.predictors[static_cast<std::size_t>(i)]);
      if (m > 0) row.tail(m) = data.covariates.row(i);
      return predict(glm, row, PredictScale::mean);
    }
  };

  Family family_;
};

}  // namespace famglm
