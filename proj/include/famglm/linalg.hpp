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
#include <cmath>
#include <numeric>
#include <vector>

#include "famglm/core.hpp"

namespace famglm {

/// Full spectrum of a symmetric matrix. Eigenvalues are sorted descending and
/// column j of `eigenvectors` pairs with `eigenvalues[j]`.
struct EigenResult {
  Vector eigenvalues;
  Matrix eigenvectors;
};

namespace detail {

// Flips eigenvector signs so the entry of largest magnitude in each column is
// nonnegative (ties resolved by the lowest row index). Removes the sign
// ambiguity of eigenvectors so identical inputs give identical outputs.
inline void canonicalize_column_signs(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
  }
}

inline void check_square_symmetric_finite(const Matrix& m, const char* who) {
  require(m.rows() > 0 && m.rows() == m.cols(), errc::non_symmetric,
          std::string(who) + ": matrix must be square and nonempty");
  require(m.allFinite(), errc::non_finite,
          std::string(who) + ": matrix has NaN or Inf entries");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * scale, errc::non_symmetric,
          std::string(who) + ": asymmetry " + std::to_string(asym) +
              " exceeds tolerance");
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix.
///
/// The result is deterministic: eigenvalues descend, equal eigenvalues keep
/// the solver's ascending-slot order, and each eigenvector's dominant entry is
/// made nonnegative. Eigenvalues whose magnitude is below 1e-12 times the
/// leading eigenvalue are snapped to zero so downstream eigenvalue ratios are
/// not driven by round-off noise.
inline EigenResult sym_eigen(const Matrix& m) {
  detail::check_square_symmetric_finite(m, "sym_eigen");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  require(solver.info() == Eigen::Success, errc::non_finite,
          "sym_eigen: eigensolver failed to converge");

  const Index p = m.rows();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& ascending = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return ascending(a) > ascending(b); });

  EigenResult out;
  out.eigenvalues.resize(p);
  out.eigenvectors.resize(p, p);
  for (Index j = 0; j < p; ++j) {
    out.eigenvalues(j) = ascending(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  const double lead = out.eigenvalues(0);
  if (lead > 0.0) {
    for (Index j = 0; j < p; ++j) {
      if (std::abs(out.eigenvalues(j)) < 1e-12 * lead) out.eigenvalues(j) = 0.0;
    }
  }
  detail::canonicalize_column_signs(out.eigenvectors);
  return out;
}

/// Cholesky factor of a symmetric positive definite matrix: returns lower
/// triangular L with L * L^T = s. Throws not_positive_definite when a pivot
/// is not strictly positive.
inline Matrix cholesky(const Matrix& s) {
  detail::check_square_symmetric_finite(s, "cholesky");
  const Index p = s.rows();
  Matrix lower = Matrix::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    double diag = s(j, j);
    for (Index k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    require(diag > 0.0, errc::not_positive_definite,
            "cholesky: pivot " + std::to_string(j) + " is not positive");
    lower(j, j) = std::sqrt(diag);
    for (Index i = j + 1; i < p; ++i) {
      double acc = s(i, j);
      for (Index k = 0; k < j; ++k) acc -= lower(i, k) * lower(j, k);
      lower(i, j) = acc / lower(j, j);
    }
  }
  return lower;
}

/// Column-stacking vectorization: entry (i, j) lands at position i + rows * j.
inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

/// Inverse of vec for the given shape.
inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  require(v.size() == rows * cols, errc::shape_mismatch,
          "unvec: length does not match the requested shape");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace famglm
