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
#include <string>
#include <vector>

#include "famglm/core.hpp"

namespace famglm {

enum class Family { gaussian, binomial, poisson };

inline const char* to_string(Family family) {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::binomial: return "binomial";
    case Family::poisson: return "poisson";
  }
  return "unknown";
}

inline Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "binomial") return Family::binomial;
  if (name == "poisson") return Family::poisson;
  fail(errc::config_mismatch, "unknown family '" + name + "'");
}

/// Result of a maximum-likelihood fit with the canonical link. The intercept
/// is kept apart from the slope coefficients; `coefficients[j]` multiplies
/// design column j.
struct GlmFit {
  Family family = Family::gaussian;
  double intercept = 0.0;
  Vector coefficients;
  double deviance = 0.0;
  int iterations = 0;
  bool converged = false;
  int rank = 0;  // numerical rank of the weighted design, intercept included
  std::vector<double> deviance_trace;  // accepted deviance per iteration
  std::vector<std::string> warnings;
};

struct GlmOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;       // relative deviance change
  int max_step_halvings = 30;
  double pivot_threshold = 1e-7; // relative pivot cutoff for the QR solve
  double separation_bound = 1e4; // coefficient magnitude that flags separation
};

namespace detail {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

constexpr double kMeanClamp = 1e-10;   // binomial mean bounds inside IRLS
constexpr double kEtaClamp = 30.0;     // poisson linear-predictor bound inside IRLS

inline double glm_deviance(const Vector& y, const Vector& eta, Family family) {
  double dev = 0.0;
  switch (family) {
    case Family::gaussian:
      for (Index i = 0; i < y.size(); ++i) {
        const double r = y(i) - eta(i);
        dev += r * r;
      }
      return dev;
    case Family::binomial:
      for (Index i = 0; i < y.size(); ++i) {
        double mu = sigmoid(eta(i));
        mu = std::min(std::max(mu, kMeanClamp), 1.0 - kMeanClamp);
        dev += y(i) * std::log(mu) + (1.0 - y(i)) * std::log(1.0 - mu);
      }
      return -2.0 * dev;
    case Family::poisson:
      for (Index i = 0; i < y.size(); ++i) {
        const double mu = std::exp(std::min(std::max(eta(i), -kEtaClamp), kEtaClamp));
        const double t = y(i) > 0.0 ? y(i) * std::log(y(i) / mu) : 0.0;
        dev += t - (y(i) - mu);
      }
      return 2.0 * dev;
  }
  return dev;
}

inline void check_response(const Vector& y, Family family) {
  for (Index i = 0; i < y.size(); ++i) {
    require(std::isfinite(y(i)), errc::invalid_response, "response has NaN or Inf");
    if (family == Family::binomial) {
      require(y(i) == 0.0 || y(i) == 1.0, errc::invalid_response,
              "binomial response must be 0 or 1");
    } else if (family == Family::poisson) {
      require(y(i) >= 0.0 && std::floor(y(i)) == y(i), errc::invalid_response,
              "poisson response must be a nonnegative integer");
    }
  }
}

}  // namespace detail

/// Maximum-likelihood GLM fit via iteratively reweighted least squares.
///
/// An intercept column of ones is prepended internally; `design` carries only
/// the predictors (zero columns is allowed for an intercept-only model). Each
/// weighted least-squares step is solved by rank-revealing pivoted QR, so
/// aliased or surplus columns are dropped (their coefficients are zero) the
/// way classical GLM software behaves when the design is rank deficient.
/// Step-halving keeps the deviance nonincreasing; fits hitting the iteration
/// cap or a separation-scale coefficient are flagged, not failed.
inline GlmFit fit_glm(const Matrix& design, const Vector& y, Family family,
                      const GlmOptions& options = {}) {
  const Index n = y.size();
  const Index d = design.cols();
  require(n > 0, errc::empty_input, "fit_glm: empty response");
  require(design.rows() == n, errc::shape_mismatch,
          "fit_glm: design rows do not match the response length");
  require(design.allFinite(), errc::non_finite, "fit_glm: design has NaN or Inf");
  detail::check_response(y, family);

  Matrix full(n, d + 1);
  full.col(0).setOnes();
  if (d > 0) full.rightCols(d) = design;

  // Classical starting values: begin from a data-driven mean, not from zero
  // coefficients, so the first Poisson step already works on the log scale.
  Vector mu(n), eta(n);
  for (Index i = 0; i < n; ++i) {
    switch (family) {
      case Family::gaussian:
        mu(i) = y(i);
        eta(i) = mu(i);
        break;
      case Family::binomial:
        mu(i) = (y(i) + 0.5) / 2.0;
        eta(i) = std::log(mu(i) / (1.0 - mu(i)));
        break;
      case Family::poisson:
        mu(i) = y(i) + 0.1;
        eta(i) = std::log(mu(i));
        break;
    }
  }

  GlmFit fit;
  fit.family = family;
  Vector beta = Vector::Zero(d + 1);
  double dev_old = 0.0;
  bool have_dev = false;

  Vector w(n), z(n), wsqrt(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    fit.iterations = iter;
    for (Index i = 0; i < n; ++i) {
      switch (family) {
        case Family::gaussian:
          w(i) = 1.0;
          break;
        case Family::binomial: {
          const double m = std::min(std::max(mu(i), detail::kMeanClamp),
                                    1.0 - detail::kMeanClamp);
          w(i) = m * (1.0 - m);
          break;
        }
        case Family::poisson:
          w(i) = std::exp(std::min(std::max(eta(i), -detail::kEtaClamp),
                                   detail::kEtaClamp));
          break;
      }
      z(i) = eta(i) + (y(i) - mu(i)) / w(i);
      wsqrt(i) = std::sqrt(w(i));
    }

    Matrix weighted = wsqrt.asDiagonal() * full;
    Eigen::ColPivHouseholderQR<Matrix> qr(weighted);
    qr.setThreshold(options.pivot_threshold);
    Vector beta_new = qr.solve((wsqrt.array() * z.array()).matrix());
    fit.rank = static_cast<int>(qr.rank());
    require(beta_new.allFinite(), errc::singular_design,
            "fit_glm: weighted least-squares step produced a non-finite solution");
    if (fit.rank < d + 1 && fit.warnings.empty()) {
      fit.warnings.push_back("rank-deficient design: " +
                             std::to_string(d + 1 - fit.rank) + " column(s) dropped");
    }

    double dev = detail::glm_deviance(y, full * beta_new, family);
    int halvings = 0;
    while (have_dev && (!std::isfinite(dev) || dev > dev_old) &&
           halvings < options.max_step_halvings) {
      beta_new = 0.5 * (beta_new + beta);
      dev = detail::glm_deviance(y, full * beta_new, family);
      ++halvings;
    }

    beta = beta_new;
    eta = full * beta;
    for (Index i = 0; i < n; ++i) {
      switch (family) {
        case Family::gaussian: mu(i) = eta(i); break;
        case Family::binomial:
          mu(i) = std::min(std::max(detail::sigmoid(eta(i)), detail::kMeanClamp),
                           1.0 - detail::kMeanClamp);
          break;
        case Family::poisson:
          mu(i) = std::exp(std::min(std::max(eta(i), -detail::kEtaClamp),
                                    detail::kEtaClamp));
          break;
      }
    }
    fit.deviance = dev;
    fit.deviance_trace.push_back(dev);

    if (beta.cwiseAbs().maxCoeff() > options.separation_bound) {
      fit.converged = false;
      fit.warnings.push_back("separation: coefficient magnitudes exceed " +
                             std::to_string(options.separation_bound));
      break;
    }
    if (have_dev && std::abs(dev - dev_old) / (std::abs(dev) + 0.1) < options.tolerance) {
      fit.converged = true;
      break;
    }
    dev_old = dev;
    have_dev = true;
  }

  fit.intercept = beta(0);
  fit.coefficients = beta.tail(d);
  return fit;
}

enum class PredictScale { linear, mean };

/// Inverse canonical link.
inline double mean_from_linear(Family family, double linear) {
  switch (family) {
    case Family::gaussian: return linear;
    case Family::binomial: return detail::sigmoid(linear);
    case Family::poisson: return std::exp(linear);
  }
  return linear;
}

inline double predict(const GlmFit& fit, const Vector& design_row,
                      PredictScale scale = PredictScale::mean) {
  require(design_row.size() == fit.coefficients.size(), errc::shape_mismatch,
          "predict: design row length does not match the fit");
  const double linear = fit.intercept + fit.coefficients.dot(design_row);
  return scale == PredictScale::linear ? linear : mean_from_linear(fit.family, linear);
}

inline Vector predict(const GlmFit& fit, const Matrix& design,
                      PredictScale scale = PredictScale::mean) {
  require(design.cols() == fit.coefficients.size(), errc::shape_mismatch,
          "predict: design width does not match the fit");
  Vector linear = (design * fit.coefficients).array() + fit.intercept;
  if (scale == PredictScale::linear) return linear;
  for (Index i = 0; i < linear.size(); ++i) {
    linear(i) = mean_from_linear(fit.family, linear(i));
  }
  return linear;
}

/// Hard 0/1 call at the given cutoff; the boundary is inclusive.
inline int classify(const GlmFit& fit, const Vector& design_row, double cutoff) {
  require(fit.family == Family::binomial, errc::wrong_family,
          "classify: requires a binomial fit");
  return predict(fit, design_row, PredictScale::mean) >= cutoff ? 1 : 0;
}

}  // namespace famglm
