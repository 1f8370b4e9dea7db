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

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace famglm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Error categories raised by the library. Every throw site uses Error with
/// one of these codes so callers can branch without string matching.
enum class errc {
  non_finite,
  non_symmetric,
  not_positive_definite,
  empty_corpus,
  degenerate_spectrum,
  rank_too_large,
  shape_mismatch,
  singular_design,
  invalid_response,
  wrong_family,
  empty_input,
  cutoff_out_of_range,
  one_class_only,
  config_mismatch,
  fold_too_small,
  unsupported_format,
  malformed_file,
  out_of_range,
  invalid_target,
  io_error,
  bad_model_file,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::non_finite: return "non_finite";
    case errc::non_symmetric: return "non_symmetric";
    case errc::not_positive_definite: return "not_positive_definite";
    case errc::empty_corpus: return "empty_corpus";
    case errc::degenerate_spectrum: return "degenerate_spectrum";
    case errc::rank_too_large: return "rank_too_large";
    case errc::shape_mismatch: return "shape_mismatch";
    case errc::singular_design: return "singular_design";
    case errc::invalid_response: return "invalid_response";
    case errc::wrong_family: return "wrong_family";
    case errc::empty_input: return "empty_input";
    case errc::cutoff_out_of_range: return "cutoff_out_of_range";
    case errc::one_class_only: return "one_class_only";
    case errc::config_mismatch: return "config_mismatch";
    case errc::fold_too_small: return "fold_too_small";
    case errc::unsupported_format: return "unsupported_format";
    case errc::malformed_file: return "malformed_file";
    case errc::out_of_range: return "out_of_range";
    case errc::invalid_target: return "invalid_target";
    case errc::io_error: return "io_error";
    case errc::bad_model_file: return "bad_model_file";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace famglm
