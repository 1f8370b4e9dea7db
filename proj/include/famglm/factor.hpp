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

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "famglm/core.hpp"
#include "famglm/linalg.hpp"

namespace famglm {

/// A set of equally sized matrix observations.
struct MatrixCorpus {
  std::vector<Matrix> samples;
  Index rows = 0;
  Index cols = 0;

  MatrixCorpus() = default;

  explicit MatrixCorpus(std::vector<Matrix> data) : samples(std::move(data)) {
    require(!samples.empty(), errc::empty_corpus, "corpus has no samples");
    rows = samples.front().rows();
    cols = samples.front().cols();
    require(rows > 0 && cols > 0, errc::shape_mismatch, "corpus samples are empty");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      require(samples[i].rows() == rows && samples[i].cols() == cols,
              errc::shape_mismatch,
              "corpus sample " + std::to_string(i) + " has inconsistent shape");
      require(samples[i].allFinite(), errc::non_finite,
              "corpus sample " + std::to_string(i) + " has NaN or Inf entries");
    }
  }

  Index n() const { return static_cast<Index>(samples.size()); }
};

/// Row and column loading matrices with the spectra they were cut from.
/// Loadings satisfy row_loading^T row_loading = p1 * I and the column analog.
struct FactorLoadings {
  Matrix row_loading;      // p1 x k1
  Matrix col_loading;      // p2 x k2
  Vector row_eigenvalues;  // descending, full spectrum
  Vector col_eigenvalues;

  Index p1() const { return row_loading.rows(); }
  Index p2() const { return col_loading.rows(); }
  Index k1() const { return row_loading.cols(); }
  Index k2() const { return col_loading.cols(); }
};

/// Per-sample latent score matrices, aligned with the corpus order.
struct FactorScores {
  std::vector<Matrix> scores;

  Index n() const { return static_cast<Index>(scores.size()); }
};

namespace detail {

// Accumulates both second-moment matrices over `count` samples provided by
// `sample_at`. Shared by the corpus-level entry point and the fold-indexed
// pipeline so the two paths cannot drift apart.
inline std::pair<Matrix, Matrix> accumulate_moments(
    Index count, Index p1, Index p2,
    const std::function<const Matrix&(Index)>& sample_at, bool center) {
  require(count > 0, errc::empty_corpus, "moment_matrices: no samples");
  require(!center || count >= 2, errc::config_mismatch,
          "moment_matrices: centering needs at least two samples");

  Matrix mean;
  if (center) {
    mean = Matrix::Zero(p1, p2);
    for (Index i = 0; i < count; ++i) mean += sample_at(i);
    mean /= static_cast<double>(count);
  }

  Matrix row_moment = Matrix::Zero(p1, p1);
  Matrix col_moment = Matrix::Zero(p2, p2);
  Matrix centered;
  for (Index i = 0; i < count; ++i) {
    const Matrix* x = &sample_at(i);
    if (center) {
      centered = *x - mean;
      x = &centered;
    }
    row_moment.selfadjointView<Eigen::Lower>().rankUpdate(*x, 1.0);
    col_moment.selfadjointView<Eigen::Lower>().rankUpdate(x->transpose(), 1.0);
  }
  const double scale = 1.0 / (static_cast<double>(count) * static_cast<double>(p1) *
                              static_cast<double>(p2));
  row_moment = scale * row_moment.selfadjointView<Eigen::Lower>();
  col_moment = scale * col_moment.selfadjointView<Eigen::Lower>();
  return {std::move(row_moment), std::move(col_moment)};
}

}  // namespace detail

/// Sample second-moment matrices of a corpus:
///   row moment    = sum_i X_i X_i^T / (n p1 p2)
///   column moment = sum_i X_i^T X_i / (n p1 p2)
/// With `center` set, the per-entry sample mean matrix is subtracted from
/// every observation first.
inline std::pair<Matrix, Matrix> moment_matrices(const MatrixCorpus& corpus,
                                                 bool center = false) {
  return detail::accumulate_moments(
      corpus.n(), corpus.rows, corpus.cols,
      [&](Index i) -> const Matrix& { return corpus.samples[static_cast<std::size_t>(i)]; },
      center);
}

namespace detail {

// Largest-ratio rank pick over the leading half of one spectrum. Ratios whose
// denominator has collapsed below 1e-12 of the top eigenvalue end the search.
inline int select_rank_one_dim(const Vector& eigenvalues, Index p) {
  require(eigenvalues.size() >= 1, errc::empty_input, "select_ranks: empty spectrum");
  require(eigenvalues(0) > 0.0, errc::degenerate_spectrum,
          "select_ranks: leading eigenvalue is zero");
  for (Index j = 1; j < eigenvalues.size(); ++j) {
    require(eigenvalues(j) >= 0.0 && eigenvalues(j) <= eigenvalues(j - 1) * (1.0 + 1e-9),
            errc::out_of_range, "select_ranks: spectrum is not descending nonnegative");
  }
  const Index bound = (p + 1) / 2;  // ceil(p / 2)
  int best_rank = 1;
  double best_ratio = -1.0;
  for (Index j = 1; j <= bound && j < eigenvalues.size(); ++j) {
    const double denom = eigenvalues(j);
    if (denom < 1e-12 * eigenvalues(0)) break;
    const double ratio = eigenvalues(j - 1) / denom;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_rank = static_cast<int>(j);
    }
  }
  return best_rank;
}

}  // namespace detail

/// Picks (k1, k2) as the argmax of consecutive eigenvalue ratios over the
/// leading ceil(p/2) positions of each spectrum; ties go to the smallest
/// index. Scale-invariant in the spectra.
inline std::pair<int, int> select_ranks(const Vector& row_eigenvalues,
                                        const Vector& col_eigenvalues, Index p1,
                                        Index p2) {
  return {detail::select_rank_one_dim(row_eigenvalues, p1),
          detail::select_rank_one_dim(col_eigenvalues, p2)};
}

/// Builds loadings from precomputed spectra: sqrt(p) times the top-k
/// eigenvector columns per side.
inline FactorLoadings loadings_from_spectra(const EigenResult& row_spectrum,
                                            const EigenResult& col_spectrum,
                                            int k1, int k2) {
  const Index p1 = row_spectrum.eigenvectors.rows();
  const Index p2 = col_spectrum.eigenvectors.rows();
  require(k1 >= 1 && k2 >= 1 && k1 <= p1 && k2 <= p2, errc::rank_too_large,
          "estimate_loadings: requested ranks exceed matrix dimensions");
  FactorLoadings out;
  out.row_loading = std::sqrt(static_cast<double>(p1)) * row_spectrum.eigenvectors.leftCols(k1);
  out.col_loading = std::sqrt(static_cast<double>(p2)) * col_spectrum.eigenvectors.leftCols(k2);
  out.row_eigenvalues = row_spectrum.eigenvalues;
  out.col_eigenvalues = col_spectrum.eigenvalues;
  return out;
}

/// Spectral loading estimate from the two moment matrices.
inline FactorLoadings estimate_loadings(const Matrix& row_moment,
                                        const Matrix& col_moment, int k1, int k2) {
  require(k1 >= 1 && k2 >= 1 && k1 <= row_moment.rows() && k2 <= col_moment.rows(),
          errc::rank_too_large, "estimate_loadings: requested ranks exceed matrix dimensions");
  return loadings_from_spectra(sym_eigen(row_moment), sym_eigen(col_moment), k1, k2);
}

/// Latent score of a single observation: R^T X C / (p1 p2).
inline Matrix extract_score(const FactorLoadings& loadings, const Matrix& x) {
  require(x.rows() == loadings.p1() && x.cols() == loadings.p2(), errc::shape_mismatch,
          "extract_score: sample shape does not match the loadings");
  const double scale = 1.0 / (static_cast<double>(loadings.p1()) *
                              static_cast<double>(loadings.p2()));
  return scale * (loadings.row_loading.transpose() * x * loadings.col_loading);
}

/// Scores for every corpus sample, order preserved.
inline FactorScores extract_scores(const FactorLoadings& loadings,
                                   const MatrixCorpus& corpus) {
  FactorScores out;
  out.scores.reserve(corpus.samples.size());
  for (const Matrix& x : corpus.samples) out.scores.push_back(extract_score(loadings, x));
  return out;
}

/// Low-rank reconstruction R Z C^T of every score matrix.
inline MatrixCorpus reconstruct(const FactorLoadings& loadings,
                                const FactorScores& scores) {
  require(scores.n() > 0, errc::empty_corpus, "reconstruct: no scores");
  std::vector<Matrix> rebuilt;
  rebuilt.reserve(scores.scores.size());
  for (const Matrix& z : scores.scores) {
    require(z.rows() == loadings.k1() && z.cols() == loadings.k2(), errc::shape_mismatch,
            "reconstruct: score shape does not match the loadings");
    rebuilt.push_back(loadings.row_loading * z * loadings.col_loading.transpose());
  }
  return MatrixCorpus(std::move(rebuilt));
}

/// Mean squared reconstruction residual,
///   sum_i ||X_i - R Z_i C^T||_F^2 / (p1 p2 n).
inline double reconstruction_error(const MatrixCorpus& corpus,
                                   const FactorLoadings& loadings,
                                   const FactorScores& scores) {
  require(corpus.n() == scores.n(), errc::shape_mismatch,
          "reconstruction_error: corpus and scores disagree in length");
  require(corpus.rows == loadings.p1() && corpus.cols == loadings.p2(),
          errc::shape_mismatch, "reconstruction_error: corpus does not match loadings");
  double total = 0.0;
  for (Index i = 0; i < corpus.n(); ++i) {
    const Matrix& z = scores.scores[static_cast<std::size_t>(i)];
    require(z.rows() == loadings.k1() && z.cols() == loadings.k2(), errc::shape_mismatch,
            "reconstruction_error: score shape does not match the loadings");
    total += (corpus.samples[static_cast<std::size_t>(i)] -
              loadings.row_loading * z * loadings.col_loading.transpose())
                 .squaredNorm();
  }
  return total / (static_cast<double>(corpus.rows) * static_cast<double>(corpus.cols) *
                  static_cast<double>(corpus.n()));
}

}  // namespace famglm
