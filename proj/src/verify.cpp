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

#include "verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "charging.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "models.hpp"
#include "scaling.hpp"
#include "states.hpp"

namespace qb {

namespace {

InvariantResult check(const std::string& name,
                      const std::function<std::string()>& body) {
    InvariantResult result;
    result.name = name;
    try {
        result.detail = body();
        result.pass = true;
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail = e.what();
    }
    return result;
}

std::string deviation(double worst, double tol) {
    std::ostringstream os;
    os << "worst deviation " << worst << " (tol " << tol << ")";
    if (worst > tol) throw NumericalError(os.str());
    return os.str();
}

std::string jw_anticommutation(int n_max) {
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const Eigen::MatrixXd table = anticommutation_table(n);
        const Eigen::MatrixXd expected = 2.0 * Eigen::MatrixXd::Identity(2 * n, 2 * n);
        worst = std::max(worst, (table - expected).cwiseAbs().maxCoeff());
    }
    return deviation(worst, 1e-12);
}

std::string jw_mutation_detected(int n) {
    // A sign error on one gamma must break the Clifford relations.
    auto broken = [n](int m, int cells) {
        PauliTerm t = jw_majorana(m, cells);
        if (m == 2) t.coeff = cplx{0.0, 1.0} * t.coeff;
        return t;
    };
    try {
        anticommutation_table(n, broken);
    } catch (const AlgebraViolationError&) {
        return "mutated map rejected as expected";
    }
    throw NumericalError("mutated Jordan-Wigner map was not detected");
}

std::string hermiticity(int n_max, std::uint64_t seed) {
    const Family families[] = {Family::disordered_quadratic, Family::sparse_syk,
                               Family::simplified_vk};
    double worst = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        for (Family f : families) {
            ModelSpec spec;
            spec.family = f;
            spec.n_cells = n;
            spec.q = f == Family::sparse_syk ? 4 : 2;
            spec.alpha = spec.q;  // dense connectivity: never degenerate
            const BuiltModel bm = build_charging_hamiltonian(spec, derive_seed(seed, n, 0));
            if (bm.has_op && !bm.op.is_hermitian()) {
                throw AlgebraViolationError("non-real literal coefficient in " + family_name(f));
            }
            const Eigen::MatrixXcd dense = bm.has_dense ? bm.dense : to_dense(bm.op);
            worst = std::max(worst,
                             (dense - dense.adjoint().eval()).cwiseAbs().maxCoeff());
        }
        ModelSpec ortho;
        ortho.family = Family::disordered_quadratic;
        ortho.n_cells = n;
        const auto [op, real] = build_orthogonal_quadratic(ortho, derive_seed(seed, n, 1));
        if (!op.is_hermitian()) {
            throw AlgebraViolationError("non-real literal coefficient in orthogonal variant");
        }
        const Eigen::MatrixXcd dense = to_dense(op);
        worst = std::max(worst, (dense - dense.adjoint().eval()).cwiseAbs().maxCoeff());
    }
    return deviation(worst, 1e-10);
}

std::string bhatia_davis(int n_max, std::uint64_t seed, int realizations) {
    double worst_slack = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        const Eigen::VectorXcd psi0 = ground_state(n);
        for (int r = 0; r < realizations; ++r) {
            ModelSpec spec;
            spec.family = Family::disordered_quadratic;
            spec.n_cells = n;
            const BuiltModel bm =
                build_charging_hamiltonian(spec, derive_seed(seed, n, r));
            // Throws InequalityViolationError if the bound is broken.
            const double slack = bhatia_davis_slack(to_dense(bm.op), psi0);
            worst_slack = std::min(worst_slack, slack);
        }
    }
    std::ostringstream os;
    os << "minimum slack " << worst_slack << " over all realizations";
    return os.str();
}

std::string cumulant_consistency(int n_max, std::uint64_t seed, int realizations) {
    double worst = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        const Eigen::VectorXcd psi0 = ground_state(n);
        for (int r = 0; r < realizations; ++r) {
            ModelSpec spec;
            spec.family = Family::disordered_quadratic;
            spec.n_cells = n;
            const BuiltModel bm =
                build_charging_hamiltonian(spec, derive_seed(seed, n, r));
            const Spectral s = diagonalize(to_dense(bm.op));
            worst = std::max(worst, cumulant_g2_check(s, psi0));
        }
    }
    return deviation(worst, 1e-5);
}

std::string sandwich_identity(int n_max, std::uint64_t seed, int realizations) {
    const double eps0 = 1.0;
    double worst = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        const Eigen::VectorXcd psi0 = ground_state(n);
        for (int r = 0; r < realizations; ++r) {
            ModelSpec spec;
            spec.family = Family::disordered_quadratic;
            spec.n_cells = n;
            const BuiltModel bm =
                build_charging_hamiltonian(spec, derive_seed(seed, n, r));
            const Eigen::VectorXcd hpsi = qb::apply(bm.op, psi0);
            const double scale = std::max(1.0, 2.0 * eps0 * hpsi.squaredNorm());
            for (int i = 1; i <= n; ++i) {
                const double lhs = sandwich_moment(bm.op, i, eps0, psi0);
                const auto [block, count] = anticommuting_block(bm.op, i);
                const cplx rhs = 2.0 * eps0 * hpsi.dot(qb::apply(block, psi0));
                worst = std::max(worst, std::abs(lhs - rhs.real()) / scale);
                worst = std::max(worst, std::abs(rhs.imag()) / scale);
            }
        }
    }
    return deviation(worst, 1e-9);
}

std::string closed_form_parallel(int n_max) {
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double eps0 = 1.0, lambda0 = 1.0;
        const Eigen::MatrixXcd h0 = to_dense(build_h0(n, eps0));
        const Eigen::MatrixXcd h1 = to_dense(build_parallel_drive(n, lambda0));
        const Eigen::VectorXcd psi0 = ground_state(n);
        const ChargingReport rep = run_charging(h0, h1, psi0);
        const double pi = std::numbers::pi;
        worst = std::max(worst, std::abs(rep.tau - pi / (2.0 * lambda0)) / (pi / 2.0));
        worst = std::max(worst, std::abs(rep.work - 2.0 * n * eps0) / (2.0 * n * eps0));
        worst = std::max(worst, std::abs(rep.variance - n * lambda0 * lambda0) / n);
    }
    return deviation(worst, 1e-6);
}

std::string closed_form_geodesic(int n_max) {
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double eps0 = 1.0, lambda = 1.0;
        const OperatorSum h0op = build_h0(n, eps0);
        const Eigen::MatrixXcd h0 = to_dense(h0op);
        const Eigen::VectorXcd psi0 = ground_state(n);
        const Eigen::MatrixXcd h1 = build_geodesic(h0op, lambda, psi0, top_state(n));
        const ChargingReport rep = run_charging(h0, h1, psi0);
        const double pi = std::numbers::pi;
        worst = std::max(worst, std::abs(rep.length - pi / 2.0) / (pi / 2.0));
        worst = std::max(worst, std::abs(rep.gap - 2.0 * n * lambda) / (2.0 * n));
        worst = std::max(worst, std::abs(rep.work - 2.0 * n * eps0) / (2.0 * n * eps0));
    }
    return deviation(worst, 1e-6);
}

std::string onsite_gap(int n_max) {
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double gap = spectral_gap(to_dense(build_h0(n, 1.0)));
        worst = std::max(worst, std::abs(gap - 2.0 * n));
    }
    return deviation(worst, 1e-10);
}

std::string correlation_cross_check(int n_max) {
    // Pauli-apply path vs dense-matrix path, entry by entry.
    double worst = 0.0;
    for (int n = 1; n <= std::min(n_max, 3); ++n) {
        const Eigen::VectorXcd psi0 = ground_state(n);
        const Eigen::MatrixXd corr = correlation_matrix(psi0, n);
        for (int a = 1; a <= 2 * n; ++a) {
            for (int b = 1; b <= 2 * n; ++b) {
                cplx expected;
                if (a == b) {
                    expected = cplx{1.0, 0.0};
                } else {
                    const Eigen::MatrixXcd ga = to_dense(jw_majorana(a, n));
                    const Eigen::MatrixXcd gb = to_dense(jw_majorana(b, n));
                    expected = cplx{0.0, 1.0} * psi0.dot((ga * gb * psi0).eval());
                }
                worst = std::max(worst, std::abs(corr(a - 1, b - 1) - expected));
            }
        }
        worst = std::max(worst, (corr + corr.transpose() -
                                 2.0 * Eigen::MatrixXd::Identity(2 * n, 2 * n))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return deviation(worst, 1e-10);
}

std::string scaling_self_checks() {
    double worst = 0.0;
    for (int q : {2, 4, 6}) {
        const double a = predicted_exponent(ScalingQuantity::advantage, q, q / 2.0);
        const double b = 1.0 - q / 4.0;
        worst = std::max(worst, std::abs(a - b));
    }
    std::vector<ScalingPoint> pts;
    for (int n = 3; n <= 10; ++n) {
        pts.push_back({double(n), std::pow(double(n), 2.0), 0.0});
    }
    const ScalingFit fit = fit_power_law(pts);
    worst = std::max(worst, std::abs(fit.exponent - 2.0));
    for (auto& p : pts) p.value *= 37.5;  // scale equivariance
    const ScalingFit scaled = fit_power_law(pts);
    worst = std::max(worst, std::abs(scaled.exponent - fit.exponent));
    return deviation(worst, 1e-10);
}

}  // namespace

std::vector<InvariantResult> run_verification(int n_max, std::uint64_t seed,
                                              int realizations) {
    std::vector<InvariantResult> results;
    results.push_back(check("jw_anticommutation", [&] { return jw_anticommutation(n_max); }));
    results.push_back(check("jw_mutation_detected", [&] { return jw_mutation_detected(2); }));
    results.push_back(check("hermiticity", [&] { return hermiticity(n_max, seed); }));
    results.push_back(
        check("bhatia_davis", [&] { return bhatia_davis(n_max, seed, realizations); }));
    results.push_back(check("cumulant_consistency",
                            [&] { return cumulant_consistency(n_max, seed, realizations); }));
    results.push_back(check("sandwich_identity",
                            [&] { return sandwich_identity(n_max, seed, realizations); }));
    results.push_back(check("closed_form_parallel", [&] { return closed_form_parallel(n_max); }));
    results.push_back(check("closed_form_geodesic", [&] { return closed_form_geodesic(n_max); }));
    results.push_back(check("onsite_gap", [&] { return onsite_gap(n_max); }));
    results.push_back(
        check("correlation_cross_check", [&] { return correlation_cross_check(n_max); }));
    results.push_back(check("scaling_self_checks", [&] { return scaling_self_checks(); }));
    return results;
}

}  // namespace qb
