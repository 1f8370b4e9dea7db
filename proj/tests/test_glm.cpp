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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "famglm/glm.hpp"
#include "famglm/rng.hpp"
#include "helpers.hpp"

using namespace famglm;
using testutil::random_matrix;

TEST_CASE("gaussian fit equals the least-squares oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 40, d = 5;
    const Matrix x = random_matrix(n, d, rng);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = rng.normal() + x(i, 0) - 2.0 * x(i, 2);

    const GlmFit fit = fit_glm(x, y, Family::gaussian);
    Matrix with_intercept(n, d + 1);
    with_intercept.col(0).setOnes();
    with_intercept.rightCols(d) = x;
    const Vector oracle = testutil::ols_oracle(with_intercept, y);
    CHECK(std::abs(fit.intercept - oracle(0)) < 1e-10);
    for (Index j = 0; j < d; ++j) CHECK(std::abs(fit.coefficients(j) - oracle(j + 1)) < 1e-10);
    CHECK(fit.converged);
    CHECK(fit.iterations == 2);  // one reweighting settles the gaussian case
  }
}

TEST_CASE("intercept-only maximum likelihood identities") {
  const Matrix empty_design(4, 0);
  Vector y(4);
  y << 1, 0, 0, 0;
  const GlmFit binom = fit_glm(empty_design, y, Family::binomial);
  CHECK(std::abs(binom.intercept - std::log(0.25 / 0.75)) < 1e-8);

  Vector counts(5);
  counts << 0, 1, 2, 3, 4;
  const GlmFit pois = fit_glm(Matrix(5, 0), counts, Family::poisson);
  CHECK(std::abs(pois.intercept - std::log(2.0)) < 1e-8);
}

TEST_CASE("score equations vanish at convergence") {
  Rng rng(32);
  const Index n = 200, d = 4;
  const Matrix x = random_matrix(n, d, rng);
  for (Family family : {Family::gaussian, Family::binomial, Family::poisson}) {
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
      const double mu = 0.3 + 0.8 * x(i, 0) - 0.5 * x(i, 1);
      switch (family) {
        case Family::gaussian: y(i) = mu + rng.normal(); break;
        case Family::binomial: y(i) = rng.bernoulli(detail::sigmoid(mu)) ? 1.0 : 0.0; break;
        case Family::poisson: y(i) = static_cast<double>(rng.poisson(std::exp(mu))); break;
      }
    }
    const GlmFit fit = fit_glm(x, y, family);
    REQUIRE(fit.converged);
    Vector mu_hat = predict(fit, x, PredictScale::mean);
    Matrix with_intercept(n, d + 1);
    with_intercept.col(0).setOnes();
    with_intercept.rightCols(d) = x;
    const Vector score = with_intercept.transpose() * (y - mu_hat);
    CHECK(score.cwiseAbs().maxCoeff() < 1e-6 * static_cast<double>(n));
  }
}

TEST_CASE("deviance trace never increases") {
  Rng rng(33);
  const Index n = 120, d = 3;
  const Matrix x = random_matrix(n, d, rng);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    y(i) = rng.bernoulli(detail::sigmoid(x(i, 0) - x(i, 1))) ? 1.0 : 0.0;
  }
  const GlmFit fit = fit_glm(x, y, Family::binomial);
  for (std::size_t t = 1; t < fit.deviance_trace.size(); ++t) {
    CHECK(fit.deviance_trace[t] <= fit.deviance_trace[t - 1] + 1e-9);
  }
}

TEST_CASE("predict scales and the classify cutoff") {
  GlmFit zero;
  zero.family = Family::binomial;
  zero.intercept = 0.0;
  zero.coefficients = Vector::Zero(2);
  const Vector zero_row = Vector::Zero(2);
  CHECK(predict(zero, zero_row, PredictScale::mean) == 0.5);

  zero.family = Family::poisson;
  CHECK(predict(zero, zero_row, PredictScale::mean) == 1.0);

  GlmFit affine;
  affine.family = Family::gaussian;
  affine.intercept = 1.0;
  affine.coefficients = Vector(2);
  affine.coefficients << 1.0, -1.0;
  Vector scores(2);
  scores << 2.0, 3.0;
  CHECK(predict(affine, scores, PredictScale::mean) == 0.0);
  CHECK(predict(affine, scores, PredictScale::linear) == 0.0);

  GlmFit binom;
  binom.family = Family::binomial;
  binom.coefficients = Vector(1);
  binom.coefficients << 1.0;
  Vector row(1);
  binom.intercept = std::log(0.7 / 0.3);
  row << 0.0;
  CHECK(classify(binom, row, 0.5) == 1);
  binom.intercept = 0.0;  // mean exactly 0.5, boundary is inclusive
  CHECK(classify(binom, row, 0.5) == 1);
  binom.intercept = std::log(0.49 / 0.51);
  CHECK(classify(binom, row, 0.5) == 0);

  GlmFit gauss;
  gauss.family = Family::gaussian;
  gauss.coefficients = Vector::Zero(1);
  CHECK_THROWS_MATCHES(classify(gauss, row, 0.5), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::wrong_family;
                       }));
}

TEST_CASE("response domain validation") {
  const Matrix x = Matrix::Zero(3, 1);
  Vector bad_binom(3);
  bad_binom << 0, 1, 2;
  CHECK_THROWS_MATCHES(fit_glm(x, bad_binom, Family::binomial), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::invalid_response;
                       }));
  Vector negative(3);
  negative << 1, -1, 2;
  CHECK_THROWS_MATCHES(fit_glm(x, negative, Family::poisson), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::invalid_response;
                       }));
  Vector fractional(3);
  fractional << 1, 1.5, 2;
  CHECK_THROWS_MATCHES(fit_glm(x, fractional, Family::poisson), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::invalid_response;
                       }));
}

TEST_CASE("rank-deficient designs drop aliased columns") {
  Rng rng(34);
  const Index n = 30;
  Matrix x(n, 3);
  for (Index i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = x(i, 0);  // aliased copy
    x(i, 2) = rng.normal();
  }
  Vector y(n);
  for (Index i = 0; i < n; ++i) y(i) = 2.0 * x(i, 0) + x(i, 2) + 0.1 * rng.normal();

  const GlmFit fit = fit_glm(x, y, Family::gaussian);
  CHECK(fit.rank == 3);  // intercept + 2 independent columns
  REQUIRE_FALSE(fit.warnings.empty());
  CHECK(fit.warnings.front().find("rank-deficient") != std::string::npos);
  // one of the twin columns carries the whole effect, the other is dropped
  CHECK(std::abs(fit.coefficients(0) + fit.coefficients(1) - 2.0) < 0.2);
  CHECK((fit.coefficients(0) == 0.0 || fit.coefficients(1) == 0.0));
  CHECK(fit.converged);
}

TEST_CASE("separation is flagged, predictions still produced") {
  Matrix x(4, 1);
  x << -2e-6, -1e-6, 1e-6, 2e-6;
  Vector y(4);
  y << 0, 0, 1, 1;
  const GlmFit fit = fit_glm(x, y, Family::binomial);
  CHECK_FALSE(fit.converged);
  bool noted = false;
  for (const auto& w : fit.warnings) {
    if (w.find("separation") != std::string::npos) noted = true;
  }
  CHECK(noted);
  const Vector first_row = x.row(0);
  CHECK(std::isfinite(predict(fit, first_row, PredictScale::mean)));
}

TEST_CASE("fitted means are invariant to invertible recoding of the design") {
  // re-expressing the regressors through any invertible linear map plus the
  // intercept leaves the fitted means unchanged
  Rng rng(35);
  const Index n = 150, d = 4;
  const Matrix x = random_matrix(n, d, rng);
  Matrix map = random_matrix(d, d, rng);
  map += 3.0 * Matrix::Identity(d, d);
  const Matrix x2 = x * map;

  for (Family family : {Family::gaussian, Family::binomial, Family::poisson}) {
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
      const double mu = 0.2 + 0.6 * x(i, 0) - 0.4 * x(i, 3);
      switch (family) {
        case Family::gaussian: y(i) = mu + rng.normal(); break;
        case Family::binomial: y(i) = rng.bernoulli(detail::sigmoid(mu)) ? 1.0 : 0.0; break;
        case Family::poisson: y(i) = static_cast<double>(rng.poisson(std::exp(mu))); break;
      }
    }
    const Vector mean_a = predict(fit_glm(x, y, family), x, PredictScale::mean);
    const Vector mean_b = predict(fit_glm(x2, y, family), x2, PredictScale::mean);
    CHECK((mean_a - mean_b).cwiseAbs().maxCoeff() < 1e-8);
  }
}
