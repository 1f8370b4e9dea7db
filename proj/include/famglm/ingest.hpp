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

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "famglm/core.hpp"
#include "famglm/csv.hpp"
#include "famglm/dataset.hpp"

namespace famglm {

/// One labeled image reference. Paths are stored as resolved at read time.
struct ManifestEntry {
  std::string path;
  double label = 0.0;
  std::vector<double> covariates;
};

/// Image corpus description: entries plus the common target size every image
/// is resampled to.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  int target_height = 150;
  int target_width = 150;
};

/// Reads a manifest CSV with header `path,label[,v1,v2,...]`. Relative image
/// paths are resolved against the manifest's directory.
inline CorpusManifest read_manifest(const std::filesystem::path& csv_path) {
  const auto rows = read_csv(csv_path);
  require(rows.size() >= 2, errc::malformed_file,
          csv_path.string() + ": manifest needs a header and at least one entry");
  const auto& header = rows.front();
  require(header.size() >= 2 && header[0] == "path" && header[1] == "label",
          errc::malformed_file, csv_path.string() + ": header must start with path,label");
  const std::size_t covariate_count = header.size() - 2;
  const auto base = csv_path.has_parent_path() ? csv_path.parent_path()
                                               : std::filesystem::path(".");

  CorpusManifest manifest;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    require(row.size() == header.size(), errc::malformed_file,
            csv_path.string() + ": row " + std::to_string(r) + " has " +
                std::to_string(row.size()) + " fields, expected " +
                std::to_string(header.size()));
    ManifestEntry entry;
    std::filesystem::path p(row[0]);
    entry.path = (p.is_absolute() ? p : base / p).string();
    entry.label = parse_float(row[1]);
    entry.covariates.reserve(covariate_count);
    for (std::size_t c = 2; c < row.size(); ++c) {
      entry.covariates.push_back(parse_float(row[c]));
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

namespace detail {

// Reads the next header token of a PGM, skipping whitespace and '#' comments.
inline std::string pgm_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token += static_cast<char>(c);
    c = in.get();
  }
  return token;
}

inline long pgm_int(std::istream& in, const std::string& path, const char* what) {
  const std::string token = pgm_token(in);
  require(!token.empty(), errc::malformed_file, path + ": missing " + what);
  for (char ch : token) {
    require(std::isdigit(static_cast<unsigned char>(ch)), errc::malformed_file,
            path + ": bad " + what + " '" + token + "'");
  }
  return std::stol(token);
}

inline Matrix load_pgm(std::ifstream& in, const std::string& path, bool binary) {
  const long width = pgm_int(in, path, "width");
  const long height = pgm_int(in, path, "height");
  const long maxval = pgm_int(in, path, "maxval");
  require(width >= 1 && height >= 1, errc::malformed_file, path + ": empty image");
  require(maxval >= 1 && maxval <= 65535, errc::malformed_file,
          path + ": maxval " + std::to_string(maxval) + " out of range");

  Matrix image(height, width);
  if (binary) {
    // single whitespace byte separates the header from the raster
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raster(static_cast<std::size_t>(width * height * bytes));
    in.read(reinterpret_cast<char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
    require(in.gcount() == static_cast<std::streamsize>(raster.size()),
            errc::malformed_file, path + ": truncated raster");
    std::size_t k = 0;
    for (long i = 0; i < height; ++i) {
      for (long j = 0; j < width; ++j) {
        long value = raster[k++];
        if (bytes == 2) value = value * 256 + raster[k++];  // big-endian
        require(value <= maxval, errc::malformed_file,
                path + ": pixel exceeds maxval");
        image(i, j) = static_cast<double>(value);
      }
    }
  } else {
    for (long i = 0; i < height; ++i) {
      for (long j = 0; j < width; ++j) {
        const long value = pgm_int(in, path, "pixel");
        require(value <= maxval, errc::malformed_file, path + ": pixel exceeds maxval");
        image(i, j) = static_cast<double>(value);
      }
    }
  }
  if (maxval != 255) image *= 255.0 / static_cast<double>(maxval);
  return image;
}

inline Matrix load_csv_grid(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  require(!rows.empty(), errc::malformed_file, path.string() + ": empty grid");
  const std::size_t width = rows.front().size();
  Matrix image(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == width, errc::malformed_file,
            path.string() + ": ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < width; ++j) {
      image(static_cast<Index>(i), static_cast<Index>(j)) = parse_float(rows[i][j]);
    }
  }
  require(image.allFinite() && image.minCoeff() >= 0.0 && image.maxCoeff() <= 255.0,
          errc::malformed_file, path.string() + ": values outside [0, 255]");
  return image;
}

}  // namespace detail

/// Decodes one grayscale source into a matrix of intensities in [0, 255].
/// Supported formats: PGM (ASCII P2 and binary P5, maxval up to 65535 with
/// rescaling to the 255 range) and plain numeric CSV grids. Row index is the
/// image height index.
inline Matrix load_grayscale(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() == 2 && magic[0] == 'P') {
    if (magic[1] == '2') return detail::load_pgm(in, path.string(), false);
    if (magic[1] == '5') return detail::load_pgm(in, path.string(), true);
    if (magic[1] >= '1' && magic[1] <= '7') {
      fail(errc::unsupported_format,
           path.string() + ": only P2/P5 grayscale PGM is supported");
    }
  }
  in.close();
  return detail::load_csv_grid(path);
}

/// Rescales intensities from [0, 255] to [0, 1].
inline Matrix normalize_pixels(const Matrix& image) {
  require(image.allFinite() && image.minCoeff() >= 0.0 && image.maxCoeff() <= 255.0,
          errc::out_of_range, "normalize_pixels: entries must lie in [0, 255]");
  return image / 255.0;
}

/// Corner-aligned bilinear resampling: output corners sample input corners,
/// interior points interpolate the four surrounding pixels. Constant images
/// stay exactly constant. A singleton target dimension samples index 0.
inline Matrix resize_bilinear(const Matrix& image, int target_height, int target_width) {
  require(target_height >= 1 && target_width >= 1, errc::invalid_target,
          "resize_bilinear: target dimensions must be positive");
  const Index h = image.rows(), w = image.cols();
  require(h >= 1 && w >= 1, errc::shape_mismatch, "resize_bilinear: empty source");
  if (h == target_height && w == target_width) return image;

  const double row_step = target_height > 1
                              ? static_cast<double>(h - 1) / (target_height - 1)
                              : 0.0;
  const double col_step = target_width > 1
                              ? static_cast<double>(w - 1) / (target_width - 1)
                              : 0.0;
  Matrix out(target_height, target_width);
  for (int i = 0; i < target_height; ++i) {
    const double y = i * row_step;
    const Index y0 = std::min(static_cast<Index>(std::floor(y)), h - 1);
    const Index y1 = std::min(y0 + 1, h - 1);
    const double fy = y - static_cast<double>(y0);
    for (int j = 0; j < target_width; ++j) {
      const double x = j * col_step;
      const Index x0 = std::min(static_cast<Index>(std::floor(x)), w - 1);
      const Index x1 = std::min(x0 + 1, w - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = (1.0 - fx) * image(y0, x0) + fx * image(y0, x1);
      const double bottom = (1.0 - fx) * image(y1, x0) + fx * image(y1, x1);
      out(i, j) = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

/// Loads every manifest entry: decode, resample to the target size, rescale
/// to [0, 1]. Order is preserved; the first failing entry aborts the load
/// with its index and path in the message.
inline LabeledDataset load_corpus(const CorpusManifest& manifest) {
  require(!manifest.entries.empty(), errc::empty_corpus, "manifest has no entries");
  const std::size_t covariate_count = manifest.entries.front().covariates.size();

  LabeledDataset data;
  data.predictors.reserve(manifest.entries.size());
  data.response.resize(static_cast<Index>(manifest.entries.size()));
  data.covariates.resize(static_cast<Index>(manifest.entries.size()),
                         static_cast<Index>(covariate_count));
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& entry = manifest.entries[i];
    require(entry.covariates.size() == covariate_count, errc::shape_mismatch,
            "manifest entry " + std::to_string(i) + " (" + entry.path +
                "): covariate count differs from the first entry");
    try {
      Matrix image = load_grayscale(entry.path);
      image = resize_bilinear(image, manifest.target_height, manifest.target_width);
      data.predictors.push_back(normalize_pixels(image));
    } catch (const Error& e) {
      fail(e.code(), "manifest entry " + std::to_string(i) + " (" + entry.path +
                         "): " + e.what());
    }
    data.response(static_cast<Index>(i)) = entry.label;
    for (std::size_t c = 0; c < covariate_count; ++c) {
      data.covariates(static_cast<Index>(i), static_cast<Index>(c)) = entry.covariates[c];
    }
    data.ids.push_back(entry.path);
  }
  data.validate();
  return data;
}

}  // namespace famglm
