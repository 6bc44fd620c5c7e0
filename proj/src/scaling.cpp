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

#include "scaling.hpp"

#include <cmath>

#include "errors.hpp"

namespace qb {

ScalingFit fit_power_law(const std::vector<ScalingPoint>& points) {
    if (points.size() < 3) {
        throw InvalidArgumentError("fit_power_law: need at least 3 points");
    }
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0, swyy = 0;
    for (const auto& p : points) {
        if (!(p.value > 0.0) || !(p.n > 0.0)) {
            throw InvalidArgumentError("fit_power_law: values and sizes must be > 0");
        }
        const double x = std::log(p.n);
        const double y = std::log(p.value);
        // Multiplicative noise: sigma_ln = stderr / value.
        const double sigma = p.stderr_ > 0 ? p.stderr_ / p.value : 0.0;
        const double w = sigma > 0 ? 1.0 / (sigma * sigma) : 1.0;
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
        swyy += w * y * y;
    }
    const double det = sw * swxx - swx * swx;
    if (det <= 0) throw InvalidArgumentError("fit_power_law: degenerate abscissae");

    ScalingFit fit;
    fit.n_points = static_cast<int>(points.size());
    fit.exponent = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;

    // Residual-scaled parameter uncertainty (reduces to the exact-fit zero
    // when the data is a pure monomial).
    double chi2 = 0.0;
    for (const auto& p : points) {
        const double x = std::log(p.n);
        const double y = std::log(p.value);
        const double sigma = p.stderr_ > 0 ? p.stderr_ / p.value : 0.0;
        const double w = sigma > 0 ? 1.0 / (sigma * sigma) : 1.0;
        const double r = y - (fit.intercept + fit.exponent * x);
        chi2 += w * r * r;
    }
    const int dof = fit.n_points - 2;
    const double scale = dof > 0 ? chi2 / dof : 0.0;
    fit.exponent_stderr = std::sqrt(std::max(0.0, scale * sw / det));

    const double mean_y = swy / sw;
    double ss_tot = swyy - sw * mean_y * mean_y;
    fit.r_squared = ss_tot > 0 ? 1.0 - chi2 / ss_tot : 1.0;
    return fit;
}

std::string quantity_name(ScalingQuantity q) {
    switch (q) {
        case ScalingQuantity::advantage: return "advantage";
        case ScalingQuantity::variance_h1: return "variance_h1";
        case ScalingQuantity::connection: return "connection";
        case ScalingQuantity::lambda2: return "lambda2";
    }
    throw InvalidArgumentError("unknown scaling quantity");
}

namespace {

void check_params(int q, double alpha) {
    if (q < 2 || q % 2 != 0) throw InvalidArgumentError("predicted_exponent: q must be even >= 2");
    if (alpha < 0 || alpha > q) {
        throw InvalidArgumentError("predicted_exponent: alpha must be in [0, q]");
    }
}

double theta(double x) { return x >= 0 ? 1.0 : 0.0; }

}  // namespace

double predicted_exponent(ScalingQuantity quantity, int q, double alpha) {
    check_params(q, alpha);
    const double x = 1.0 - 2.0 * alpha / q;
    switch (quantity) {
        case ScalingQuantity::advantage:
            return alpha >= q / 2.0 ? (alpha - q) / 2.0 + 1.0 : 1.0 - alpha / 2.0;
        case ScalingQuantity::variance_h1:
            return q * x * theta(x) + 2.0 + alpha - q;
        case ScalingQuantity::connection:
            return alpha;
        case ScalingQuantity::lambda2:
            return -(x + 1.0);
    }
    throw InvalidArgumentError("unknown scaling quantity");
}

double predicted_class_exponent(int q, double alpha, int l) {
    check_params(q, alpha);
    if (l < 1 || l > q / 2) throw InvalidArgumentError("class index l must be in [1, q/2]");
    const double x = 1.0 - 2.0 * alpha / q;
    return q * x * theta(x) / 2.0 + 1.0 + (alpha - q) * (q - l) / q;
}

Verdict compare(const ScalingFit& fit, const Prediction& pred, double tolerance) {
    Verdict v;
    v.quantity = quantity_name(pred.quantity);
    v.fitted = fit.exponent;
    v.fitted_stderr = fit.exponent_stderr;
    v.predicted = pred.exponent;
    v.tolerance = tolerance;
    const double band = std::max(tolerance, 3.0 * fit.exponent_stderr);
    v.pass = std::abs(fit.exponent - pred.exponent) <= band;
    return v;
}

}  // namespace qb
