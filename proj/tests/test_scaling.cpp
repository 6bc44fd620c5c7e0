// Copyright 2026 the qbattery authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"
#include "scaling.hpp"

using namespace qb;

TEST_CASE("exact monomial recovery") {
    std::vector<ScalingPoint> pts;
    for (int n = 3; n <= 10; ++n) pts.push_back({double(n), double(n) * n, 0.0});
    const ScalingFit fit = fit_power_law(pts);
    CHECK(std::abs(fit.exponent - 2.0) < 1e-10);
    CHECK(fit.exponent_stderr < 1e-10);
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.n_points == 8);
}

TEST_CASE("constant data has zero exponent") {
    std::vector<ScalingPoint> pts;
    for (int n = 2; n <= 6; ++n) pts.push_back({double(n), 7.0, 0.0});
    CHECK(std::abs(fit_power_law(pts).exponent) < 1e-12);
}

TEST_CASE("scale equivariance") {
    std::vector<ScalingPoint> pts;
    for (int n = 3; n <= 9; ++n) pts.push_back({double(n), std::pow(n, 1.7), 0.1});
    const double base = fit_power_law(pts).exponent;
    for (auto& p : pts) {
        p.value *= 123.456;
        p.stderr_ *= 123.456;
    }
    CHECK(std::abs(fit_power_law(pts).exponent - base) < 1e-12);
}

TEST_CASE("noisy synthetic exponent") {
    Rng rng(2024);
    std::vector<ScalingPoint> pts;
    for (int n = 3; n <= 10; ++n) {
        const double noise = 1.0 + 0.05 * rng.gaussian();
        const double value = std::pow(double(n), 1.5) * noise;
        pts.push_back({double(n), value, 0.05 * value});
    }
    const ScalingFit fit = fit_power_law(pts);
    CHECK(std::abs(fit.exponent - 1.5) < 0.15);
}

TEST_CASE("fit input validation") {
    std::vector<ScalingPoint> two = {{3.0, 1.0, 0.0}, {4.0, 2.0, 0.0}};
    CHECK_THROWS_AS(fit_power_law(two), InvalidArgumentError);

    std::vector<ScalingPoint> bad = {{3.0, 1.0, 0.0}, {4.0, -2.0, 0.0}, {5.0, 2.0, 0.0}};
    CHECK_THROWS_AS(fit_power_law(bad), InvalidArgumentError);
}

TEST_CASE("predicted exponents") {
    CHECK(predicted_exponent(ScalingQuantity::advantage, 4, 4.0) == doctest::Approx(1.0));
    CHECK(predicted_exponent(ScalingQuantity::advantage, 4, 3.0) == doctest::Approx(0.5));
    CHECK(predicted_exponent(ScalingQuantity::advantage, 4, 2.0) == doctest::Approx(0.0));
    CHECK(predicted_exponent(ScalingQuantity::advantage, 4, 0.0) == doctest::Approx(1.0));

    // Variance: q x theta(x) + 2 + alpha - q.
    CHECK(predicted_exponent(ScalingQuantity::variance_h1, 4, 4.0) == doctest::Approx(2.0));
    CHECK(predicted_exponent(ScalingQuantity::variance_h1, 4, 3.0) == doctest::Approx(1.0));
    CHECK(predicted_exponent(ScalingQuantity::variance_h1, 2, 1.0) == doctest::Approx(1.0));
    CHECK(predicted_exponent(ScalingQuantity::variance_h1, 2, 2.0) == doctest::Approx(2.0));

    CHECK(predicted_exponent(ScalingQuantity::connection, 4, 3.0) == doctest::Approx(3.0));
    // Lambda2: -(x + 1) with x = 1 - 2 alpha / q.
    CHECK(predicted_exponent(ScalingQuantity::lambda2, 2, 1.0) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(predicted_exponent(ScalingQuantity::advantage, 3, 1.0),
                    InvalidArgumentError);
    CHECK_THROWS_AS(predicted_exponent(ScalingQuantity::advantage, 4, 5.0),
                    InvalidArgumentError);
}

TEST_CASE("branch continuity at alpha = q/2") {
    for (int q : {2, 4, 6}) {
        const double at_boundary =
            predicted_exponent(ScalingQuantity::advantage, q, q / 2.0);
        CHECK(at_boundary == doctest::Approx(1.0 - q / 4.0));
        const double below =
            predicted_exponent(ScalingQuantity::advantage, q, q / 2.0 - 1e-9);
        CHECK(std::abs(at_boundary - below) < 1e-8);
    }
}

TEST_CASE("class exponents") {
    // l = q/2 reproduces the top advantage class for alpha >= q/2.
    CHECK(predicted_class_exponent(4, 4.0, 2) == doctest::Approx(1.0));
    CHECK(predicted_class_exponent(4, 3.0, 2) == doctest::Approx(0.5));
    CHECK(predicted_class_exponent(4, 0.0, 2) ==
          doctest::Approx(4.0 * 1.0 / 2.0 + 1.0 + (-4.0) * 2.0 / 4.0));
    CHECK_THROWS_AS(predicted_class_exponent(4, 2.0, 3), InvalidArgumentError);
}

TEST_CASE("verdict comparison") {
    ScalingFit fit;
    fit.exponent = 1.95;
    fit.exponent_stderr = 0.05;
    Prediction pred;
    pred.quantity = ScalingQuantity::variance_h1;
    pred.exponent = 2.0;
    CHECK(compare(fit, pred, 0.2).pass);

    fit.exponent = 1.0;
    fit.exponent_stderr = 0.0;
    CHECK_FALSE(compare(fit, pred, 0.2).pass);

    // Large stderr widens the band to 3 sigma.
    fit.exponent = 0.45;
    fit.exponent_stderr = 0.2;
    pred.quantity = ScalingQuantity::advantage;
    pred.exponent = 0.5;
    CHECK(compare(fit, pred, 0.2).pass);
}
