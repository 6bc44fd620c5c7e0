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

#pragma once

#include <string>
#include <vector>

namespace qb {

struct ScalingPoint {
    double n = 0.0;       // system size
    double value = 0.0;   // must be > 0 (log-log fit)
    double stderr_ = 0.0; // standard error of value; 0 means unweighted
};

struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;  // ln-space
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

// Weighted least squares on (ln N, ln value); weights from stderr propagated
// to log space. Requires >= 3 strictly positive values.
ScalingFit fit_power_law(const std::vector<ScalingPoint>& points);

enum class ScalingQuantity {
    advantage,     // Gamma
    variance_h1,   // disorder-averaged Delta H1^2
    connection,    // C_q
    lambda2,       // mean simplified-model contraction
};

std::string quantity_name(ScalingQuantity q);

// Predicted asymptotic exponents:
//   Gamma:     (alpha - q)/2 + 1 for alpha >= q/2, else 1 - alpha/2
//   VarianceH1: q x theta(x) + 2 + alpha - q, x = 1 - 2 alpha / q
//   C_q:       alpha
//   Lambda2:   -(x + 1)
double predicted_exponent(ScalingQuantity quantity, int q, double alpha);

// Gamma class exponent q x theta(x)/2 + 1 + (alpha - q)(q - l)/q, l = 1..q/2.
double predicted_class_exponent(int q, double alpha, int l);

struct Prediction {
    ScalingQuantity quantity;
    int q = 2;
    double alpha = 0.0;
    double exponent = 0.0;
};

struct Verdict {
    std::string quantity;
    double fitted = 0.0;
    double fitted_stderr = 0.0;
    double predicted = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline constexpr double kDefaultExponentTolerance = 0.3;

// Pass iff |fit - prediction| <= max(tolerance, 3 * stderr).
Verdict compare(const ScalingFit& fit, const Prediction& pred,
                double tolerance = kDefaultExponentTolerance);

}  // namespace qb
