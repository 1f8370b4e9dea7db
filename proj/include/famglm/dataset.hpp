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

#include <string>
#include <vector>

#include "famglm/core.hpp"

namespace famglm {

/// A labeled sample set: matrix predictors, scalar responses, and an optional
/// block of vector covariates (zero columns when unused).
struct LabeledDataset {
  std::vector<Matrix> predictors;
  Vector response;
  Matrix covariates;             // n x m, m may be 0
  std::vector<std::string> ids;  // optional source identifiers (file paths)

  Index n() const { return static_cast<Index>(predictors.size()); }
  Index p1() const { return predictors.empty() ? 0 : predictors.front().rows(); }
  Index p2() const { return predictors.empty() ? 0 : predictors.front().cols(); }
  Index covariate_count() const { return covariates.cols(); }

  void validate() const {
    require(!predictors.empty(), errc::empty_corpus, "dataset has no samples");
    require(response.size() == n(), errc::shape_mismatch,
            "dataset: response length does not match the sample count");
    require(covariates.rows() == n() || covariates.size() == 0, errc::shape_mismatch,
            "dataset: covariate rows do not match the sample count");
    const Index r = p1(), c = p2();
    for (std::size_t i = 0; i < predictors.size(); ++i) {
      require(predictors[i].rows() == r && predictors[i].cols() == c,
              errc::shape_mismatch,
              "dataset: sample " + std::to_string(i) + " has inconsistent shape");
    }
  }
};

}  // namespace famglm
