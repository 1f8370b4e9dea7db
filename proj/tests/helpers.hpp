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

// Test-only oracles, kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "famglm/core.hpp"
#include "famglm/rng.hpp"

namespace testutil {

using famglm::Index;
using famglm::Matrix;
using famglm::Vector;

/// Eigenvalues of a symmetric 2x2 matrix from the characteristic polynomial.
inline std::vector<double> eig2_oracle(const Matrix& m) {
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

/// Eigenvalues of a symmetric 3x3 matrix via the trigonometric solution of
/// the characteristic cubic; returns them descending.
inline std::vector<double> eig3_oracle(const Matrix& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  std::vector<double> out(3);
  if (p1 == 0.0) {
    out = {a(0, 0), a(1, 1), a(2, 2)};
    std::sort(out.rbegin(), out.rend());
    return out;
  }
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix b = (a - q * Matrix::Identity(3, 3)) / p;
  const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  out[0] = q + 2.0 * p * std::cos(phi);
  out[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  out[1] = 3.0 * q - out[0] - out[2];
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// All-pairs Mann-Whitney statistic, the brute-force reference for auc().
inline double auc_bruteforce(const Vector& y, const Vector& scores) {
  double wins = 0.0;
  long pairs = 0;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) != 1.0) continue;
    for (Index j = 0; j < y.size(); ++j) {
      if (y(j) != 0.0) continue;
      ++pairs;
      if (scores(i) > scores(j)) wins += 1.0;
      else if (scores(i) == scores(j)) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

inline Matrix random_matrix(Index rows, Index cols, famglm::Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

inline Matrix random_psd(Index p, famglm::Rng& rng) {
  const Matrix a = random_matrix(p, p + 2, rng);
  return a * a.transpose() / static_cast<double>(p);
}

/// Gram-Schmidt orthonormal columns, scaled so q^T q = rows * I.
inline Matrix scaled_orthonormal(const Matrix& a) {
  Matrix q = a;
  for (Index j = 0; j < q.cols(); ++j) {
    for (Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return std::sqrt(static_cast<double>(a.rows())) * q;
}

/// Random orthogonal matrix (Haar-ish via Gram-Schmidt of a Gaussian draw).
inline Matrix random_orthogonal(Index k, famglm::Rng& rng) {
  return scaled_orthonormal(random_matrix(k, k, rng)) / std::sqrt(static_cast<double>(k));
}

/// Ordinary least squares through a fully pivoted LU of the normal equations;
/// an independent route from the library's QR-based path.
inline Vector ols_oracle(const Matrix& design_with_intercept, const Vector& y) {
  const Matrix gram = design_with_intercept.transpose() * design_with_intercept;
  const Vector rhs = design_with_intercept.transpose() * y;
  return Eigen::FullPivLU<Matrix>(gram).solve(rhs);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("famglm_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Path of the CLI binary under test (exported by the test harness).
inline std::string cli_path() {
  const char* env = std::getenv("FAMGLM_CLI");
  return env ? env : "";
}

inline std::string data_dir() {
  const char* env = std::getenv("FAMGLM_DATA");
  return env ? env : "";
}

/// Runs the CLI with the given arguments; returns the process exit code.
inline int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args;
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

}  // namespace testutil
