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
#include <optional>
#include <utility>
#include <vector>

#include "famglm/core.hpp"

namespace famglm {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
};

struct ClassificationSummary {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double kappa = 0.0;
  double sensitivity = 0.0;
  double f1 = 0.0;
};

namespace detail {

inline void check_binary_labels(const Vector& y_true, const char* who) {
  require(y_true.size() > 0, errc::empty_input, std::string(who) + ": empty input");
  for (Index i = 0; i < y_true.size(); ++i) {
    require(y_true(i) == 0.0 || y_true(i) == 1.0, errc::invalid_response,
            std::string(who) + ": labels must be 0 or 1");
  }
}

inline void check_both_classes(const Vector& y_true, const char* who) {
  bool has_pos = false, has_neg = false;
  for (Index i = 0; i < y_true.size(); ++i) {
    (y_true(i) == 1.0 ? has_pos : has_neg) = true;
  }
  require(has_pos && has_neg, errc::one_class_only,
          std::string(who) + ": both classes must be present");
}

}  // namespace detail

/// Confusion table and the four threshold metrics at the given cutoff
/// (inclusive: predicted mean >= cutoff counts as positive). Ratios with a
/// zero denominator are reported as 0, and kappa is 0 when the chance
/// agreement is 1.
inline ClassificationSummary confusion_metrics(const Vector& y_true,
                                               const Vector& p_hat, double cutoff) {
  detail::check_binary_labels(y_true, "confusion_metrics");
  require(p_hat.size() == y_true.size(), errc::shape_mismatch,
          "confusion_metrics: length mismatch");
  require(cutoff >= 0.0 && cutoff <= 1.0, errc::cutoff_out_of_range,
          "confusion_metrics: cutoff must lie in [0, 1]");

  ClassificationSummary out;
  for (Index i = 0; i < y_true.size(); ++i) {
    const bool predicted = p_hat(i) >= cutoff;
    const bool actual = y_true(i) == 1.0;
    if (predicted && actual) ++out.counts.tp;
    else if (predicted && !actual) ++out.counts.fp;
    else if (!predicted && !actual) ++out.counts.tn;
    else ++out.counts.fn;
  }
  const double n = static_cast<double>(y_true.size());
  const auto& c = out.counts;
  out.accuracy = static_cast<double>(c.tp + c.tn) / n;

  const double actual_pos = static_cast<double>(c.tp + c.fn);
  const double predicted_pos = static_cast<double>(c.tp + c.fp);
  out.sensitivity = actual_pos > 0 ? static_cast<double>(c.tp) / actual_pos : 0.0;
  const double precision = predicted_pos > 0 ? static_cast<double>(c.tp) / predicted_pos : 0.0;
  out.f1 = (precision + out.sensitivity) > 0.0
               ? 2.0 * precision * out.sensitivity / (precision + out.sensitivity)
               : 0.0;

  const double chance = (actual_pos * predicted_pos +
                         static_cast<double>(c.tn + c.fp) * static_cast<double>(c.tn + c.fn)) /
                        (n * n);
  out.kappa = chance < 1.0 ? (out.accuracy - chance) / (1.0 - chance) : 0.0;
  return out;
}

/// Probability that a random positive outscores a random negative, ties
/// counted as one half. Computed through midranks, which is exactly the
/// all-pairs count.
inline double auc(const Vector& y_true, const Vector& scores) {
  detail::check_binary_labels(y_true, "auc");
  require(scores.size() == y_true.size(), errc::shape_mismatch, "auc: length mismatch");
  detail::check_both_classes(y_true, "auc");

  const Index n = y_true.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) < scores(b); });

  double rank_sum_pos = 0.0;
  long n_pos = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores(order[j + 1]) == scores(order[i])) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) {
      if (y_true(order[k]) == 1.0) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const long n_neg = n - n_pos;
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) *
                                      (static_cast<double>(n_pos) + 1.0);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace detail {

// Sweep of cumulative positive/negative counts over thresholds taken at every
// distinct score, descending.
struct ThresholdSweep {
  std::vector<long> tp, fp;  // one entry per distinct threshold
  long n_pos = 0, n_neg = 0;
};

inline ThresholdSweep sweep_thresholds(const Vector& y_true, const Vector& scores,
                                       const char* who) {
  check_binary_labels(y_true, who);
  require(scores.size() == y_true.size(), errc::shape_mismatch,
          std::string(who) + ": length mismatch");
  check_both_classes(y_true, who);

  const Index n = y_true.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) > scores(b); });

  ThresholdSweep sweep;
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores(order[j + 1]) == scores(order[i])) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      if (y_true(order[k]) == 1.0) ++tp; else ++fp;
    }
    sweep.tp.push_back(tp);
    sweep.fp.push_back(fp);
    i = j + 1;
  }
  for (Index k = 0; k < n; ++k) {
    if (y_true(k) == 1.0) ++sweep.n_pos; else ++sweep.n_neg;
  }
  return sweep;
}

}  // namespace detail

/// ROC curve: one (fpr, tpr) point per distinct threshold, descending, with
/// the (0,0) and (1,1) endpoints included. Its trapezoidal area equals auc().
inline std::vector<std::pair<double, double>> roc_points(const Vector& y_true,
                                                         const Vector& scores) {
  const auto sweep = detail::sweep_thresholds(y_true, scores, "roc_points");
  std::vector<std::pair<double, double>> points;
  points.reserve(sweep.tp.size() + 2);
  points.emplace_back(0.0, 0.0);
  for (std::size_t t = 0; t < sweep.tp.size(); ++t) {
    const double fpr = static_cast<double>(sweep.fp[t]) / static_cast<double>(sweep.n_neg);
    const double tpr = static_cast<double>(sweep.tp[t]) / static_cast<double>(sweep.n_pos);
    if (points.back() != std::make_pair(fpr, tpr)) points.emplace_back(fpr, tpr);
  }
  if (points.back() != std::make_pair(1.0, 1.0)) points.emplace_back(1.0, 1.0);
  return points;
}

/// Precision-recall curve: one (recall, precision) point per distinct
/// threshold, descending.
inline std::vector<std::pair<double, double>> pr_points(const Vector& y_true,
                                                        const Vector& scores) {
  const auto sweep = detail::sweep_thresholds(y_true, scores, "pr_points");
  std::vector<std::pair<double, double>> points;
  points.reserve(sweep.tp.size());
  for (std::size_t t = 0; t < sweep.tp.size(); ++t) {
    const double recall = static_cast<double>(sweep.tp[t]) / static_cast<double>(sweep.n_pos);
    const double predicted = static_cast<double>(sweep.tp[t] + sweep.fp[t]);
    const double precision = static_cast<double>(sweep.tp[t]) / predicted;
    points.emplace_back(recall, precision);
  }
  return points;
}

/// Trapezoidal area under a curve given as (x, y) points with ascending x.
inline double trapezoid_area(const std::vector<std::pair<double, double>>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += 0.5 * (points[i].first - points[i - 1].first) *
            (points[i].second + points[i - 1].second);
  }
  return area;
}

struct RegressionSummary {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> nmse;  // absent when the truth has no variance
};

/// Root mean squared error, mean absolute error, and the mean squared error
/// normalized by the sample variance of the truth. When that variance is
/// zero, nmse is left empty and the other two are still returned.
inline RegressionSummary regression_metrics(const Vector& y_true, const Vector& y_hat) {
  require(y_true.size() > 0, errc::empty_input, "regression_metrics: empty input");
  require(y_hat.size() == y_true.size(), errc::shape_mismatch,
          "regression_metrics: length mismatch");
  const double n = static_cast<double>(y_true.size());
  double sq = 0.0, abs_sum = 0.0;
  for (Index i = 0; i < y_true.size(); ++i) {
    const double r = y_true(i) - y_hat(i);
    sq += r * r;
    abs_sum += std::abs(r);
  }
  RegressionSummary out;
  const double mse = sq / n;
  out.rmse = std::sqrt(mse);
  out.mae = abs_sum / n;
  if (y_true.size() >= 2) {
    const double mean = y_true.mean();
    double var = 0.0;
    for (Index i = 0; i < y_true.size(); ++i) {
      const double c = y_true(i) - mean;
      var += c * c;
    }
    var /= (n - 1.0);
    if (var > 0.0) out.nmse = mse / var;
  }
  return out;
}

/// Fraction of replicates where the first method's accuracy strictly beats
/// the second's.
inline double winning_percentage(const std::vector<double>& accuracy_a,
                                 const std::vector<double>& accuracy_b) {
  require(!accuracy_a.empty(), errc::empty_input, "winning_percentage: empty input");
  require(accuracy_a.size() == accuracy_b.size(), errc::shape_mismatch,
          "winning_percentage: length mismatch");
  long wins = 0;
  for (std::size_t i = 0; i < accuracy_a.size(); ++i) {
    if (accuracy_a[i] > accuracy_b[i]) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(accuracy_a.size());
}

}  // namespace famglm
