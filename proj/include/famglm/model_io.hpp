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

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "famglm/core.hpp"
#include "famglm/csv.hpp"
#include "famglm/glm.hpp"

namespace famglm {

/// Everything needed to score new images: preprocessing target size, the two
/// loading matrices, and the GLM coefficients split into the score block and
/// the covariate block.
struct ModelBundle {
  Family family = Family::binomial;
  int p1 = 0, p2 = 0;      // predictor shape after preprocessing
  int k1 = 0, k2 = 0;      // factor ranks
  int covariate_count = 0;
  int target_height = 0, target_width = 0;
  bool centered_moments = false;
  double intercept = 0.0;
  double training_reconstruction_error = 0.0;
  Matrix row_loading;             // p1 x k1
  Matrix col_loading;             // p2 x k2
  Vector score_coefficients;      // k1 * k2
  Vector covariate_coefficients;  // covariate_count
};

namespace detail {

constexpr int kModelVersion = 1;
constexpr const char* kModelMagic = "famglm-model";

inline void write_f64_le(std::ostream& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof bits);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  out.write(bytes, 8);
}

inline double read_f64_le(std::istream& in, const std::string& path) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  require(in.gcount() == 8, errc::bad_model_file, path + ": truncated data block");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  double value;
  std::memcpy(&value, &bits, sizeof value);
  return value;
}

inline void write_block(std::ostream& out, const double* data, Index count) {
  for (Index i = 0; i < count; ++i) write_f64_le(out, data[i]);
}

inline void read_block(std::istream& in, double* data, Index count, const std::string& path) {
  for (Index i = 0; i < count; ++i) data[i] = read_f64_le(in, path);
}

}  // namespace detail

/// Writes a model file: an ASCII key-value header terminated by `end`, then
/// the matrix blocks as little-endian float64 in column-major order, in the
/// fixed order row_loading, col_loading, score_coefficients,
/// covariate_coefficients.
inline void save_model(const ModelBundle& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::io_error, "cannot open " + path.string() + " for writing");
  out << detail::kModelMagic << ' ' << detail::kModelVersion << '\n'
      << "family " << to_string(model.family) << '\n'
      << "p1 " << model.p1 << '\n'
      << "p2 " << model.p2 << '\n'
      << "k1 " << model.k1 << '\n'
      << "k2 " << model.k2 << '\n'
      << "covariates " << model.covariate_count << '\n'
      << "target-height " << model.target_height << '\n'
      << "target-width " << model.target_width << '\n'
      << "centered " << (model.centered_moments ? 1 : 0) << '\n'
      << "intercept " << format_float(model.intercept) << '\n'
      << "reconstruction-error " << format_float(model.training_reconstruction_error) << '\n'
      << "end\n";
  detail::write_block(out, model.row_loading.data(), model.row_loading.size());
  detail::write_block(out, model.col_loading.data(), model.col_loading.size());
  detail::write_block(out, model.score_coefficients.data(), model.score_coefficients.size());
  detail::write_block(out, model.covariate_coefficients.data(),
                      model.covariate_coefficients.size());
  require(out.good(), errc::io_error, "write failed on " + path.string());
}

inline ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  const std::string name = path.string();

  std::string magic;
  int version = -1;
  in >> magic >> version;
  require(magic == detail::kModelMagic, errc::bad_model_file, name + ": not a model file");
  require(version == detail::kModelVersion, errc::bad_model_file,
          name + ": unsupported model version " + std::to_string(version));

  std::map<std::string, std::string> header;
  std::string key;
  while (in >> key && key != "end") {
    std::string value;
    in >> value;
    require(in.good(), errc::bad_model_file, name + ": truncated header");
    header[key] = value;
  }
  require(key == "end", errc::bad_model_file, name + ": missing header terminator");
  in.get();  // newline after "end"

  auto field = [&](const char* k) -> const std::string& {
    auto it = header.find(k);
    require(it != header.end(), errc::bad_model_file,
            name + ": missing header field '" + std::string(k) + "'");
    return it->second;
  };
  auto int_field = [&](const char* k) { return static_cast<int>(parse_float(field(k))); };

  ModelBundle model;
  model.family = family_from_string(field("family"));
  model.p1 = int_field("p1");
  model.p2 = int_field("p2");
  model.k1 = int_field("k1");
  model.k2 = int_field("k2");
  model.covariate_count = int_field("covariates");
  model.target_height = int_field("target-height");
  model.target_width = int_field("target-width");
  model.centered_moments = int_field("centered") != 0;
  model.intercept = parse_float(field("intercept"));
  model.training_reconstruction_error = parse_float(field("reconstruction-error"));
  require(model.p1 > 0 && model.p2 > 0 && model.k1 > 0 && model.k2 > 0 &&
              model.k1 <= model.p1 && model.k2 <= model.p2 && model.covariate_count >= 0,
          errc::bad_model_file, name + ": inconsistent dimensions");

  model.row_loading.resize(model.p1, model.k1);
  model.col_loading.resize(model.p2, model.k2);
  model.score_coefficients.resize(static_cast<Index>(model.k1) * model.k2);
  model.covariate_coefficients.resize(model.covariate_count);
  detail::read_block(in, model.row_loading.data(), model.row_loading.size(), name);
  detail::read_block(in, model.col_loading.data(), model.col_loading.size(), name);
  detail::read_block(in, model.score_coefficients.data(), model.score_coefficients.size(), name);
  detail::read_block(in, model.covariate_coefficients.data(),
                     model.covariate_coefficients.size(), name);
  return model;
}

}  // namespace famglm
