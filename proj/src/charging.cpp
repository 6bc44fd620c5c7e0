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

#include "charging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qb {

namespace {

constexpr double kTauRelTol = 1e-6;

Eigen::VectorXcd eigenbasis_coeffs(const Spectral& s, const Eigen::VectorXcd& psi) {
    return s.evecs.adjoint() * psi;
}

}  // namespace

Spectral diagonalize(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
    }
    return Spectral{solver.eigenvalues(), solver.eigenvectors()};
}

double variance(const Eigen::MatrixXcd& h1, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd hpsi = h1 * psi;
    const double mu = psi.dot(hpsi).real();
    const double second = hpsi.squaredNorm();
    return second - mu * mu;
}

double variance(const OperatorSum& h1, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd hpsi = qb::apply(h1, psi);
    const double mu = psi.dot(hpsi).real();
    return hpsi.squaredNorm() - mu * mu;
}

double spectral_gap(const Spectral& s) {
    return s.evals(s.evals.size() - 1) - s.evals(0);
}

double spectral_gap(const Eigen::MatrixXcd& h1) { return spectral_gap(diagonalize(h1)); }

double bhatia_davis_slack(const Spectral& s, double mu, double var) {
    const double e_min = s.evals(0);
    const double e_max = s.evals(s.evals.size() - 1);
    const double slack = (e_max - mu) * (mu - e_min) - var;
    if (slack < -1e-9 * std::max(1.0, var)) {
        throw InequalityViolationError("Bhatia-Davis inequality violated: slack = " +
                                       std::to_string(slack));
    }
    return slack;
}

double bhatia_davis_slack(const Eigen::MatrixXcd& h1, const Eigen::VectorXcd& psi) {
    const Spectral s = diagonalize(h1);
    const double mu = psi.dot(h1 * psi).real();
    return bhatia_davis_slack(s, mu, variance(h1, psi));
}

std::function<double(double)> work_evaluator(const Eigen::MatrixXcd& h0, const Spectral& h1,
                                             const Eigen::VectorXcd& psi0) {
    // W(t) = c(t)^dag A c(t) with A = U^dag H0 U and c(t) = e^{-i L t} U^dag psi0.
    const Eigen::MatrixXcd a = h1.evecs.adjoint() * h0 * h1.evecs;
    const Eigen::VectorXcd c0 = eigenbasis_coeffs(h1, psi0);
    const Eigen::VectorXd evals = h1.evals;
    return [a, c0, evals](double t) {
        Eigen::VectorXcd c(c0.size());
        for (Eigen::Index k = 0; k < c0.size(); ++k) {
            c(k) = std::polar(1.0, -evals(k) * t) * c0(k);
        }
        return c.dot(a * c).real();
    };
}

WorkCurve evolve_work_curve(const Eigen::MatrixXcd& h0, const Spectral& h1,
                            const Eigen::VectorXcd& psi0, double t_max, int n_samples) {
    if (t_max <= 0) throw InvalidArgumentError("evolve_work_curve: t_max must be > 0");
    if (n_samples < 2) throw InvalidArgumentError("evolve_work_curve: need >= 2 samples");
    const auto work_at = work_evaluator(h0, h1, psi0);
    WorkCurve curve;
    curve.times.resize(n_samples);
    curve.works.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = t_max * i / (n_samples - 1);
        curve.times[i] = t;
        curve.works[i] = work_at(t);
    }
    return curve;
}

TauResult optimal_tau(const WorkCurve& curve, double target_fraction,
                      const std::function<double(double)>& work_at) {
    if (curve.times.empty()) throw InvalidArgumentError("optimal_tau: empty curve");
    if (target_fraction <= 0 || target_fraction > 1) {
        throw InvalidArgumentError("optimal_tau: target_fraction must be in (0, 1]");
    }
    const double w_max = *std::max_element(curve.works.begin(), curve.works.end());
    if (w_max <= kDegenerateVariance) {
        throw DegenerateError("optimal_tau: work curve is identically zero");
    }
    const double threshold = target_fraction * w_max;
    const double tol = 1e-12 * std::max(1.0, std::abs(w_max));
    std::size_t idx = 0;
    while (idx < curve.works.size() && curve.works[idx] < threshold - tol) ++idx;

    const double t_hi = curve.times[idx];
    const double t_lo = idx == 0 ? 0.0 : curve.times[idx - 1];

    if (threshold >= w_max - tol) {
        // Target is the grid maximum: refine the peak position itself.
        const double a0 = t_lo;
        const double b0 = std::min(curve.times.back(),
                                   idx + 1 < curve.times.size() ? curve.times[idx + 1] : t_hi);
        double a = a0, b = b0;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - gr * (b - a);
        double x2 = a + gr * (b - a);
        double f1 = work_at(x1);
        double f2 = work_at(x2);
        while ((b - a) > kTauRelTol * std::max(1.0, b)) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a);
                f2 = work_at(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a);
                f1 = work_at(x1);
            }
        }
        const double tau = 0.5 * (a + b);
        return TauResult{tau, work_at(tau)};
    }

    // Ordinary crossing: bisect W(t) = threshold on the bracketing interval.
    double lo = t_lo, hi = t_hi;
    while ((hi - lo) > kTauRelTol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (work_at(mid) >= threshold) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double tau = hi;
    return TauResult{tau, work_at(tau)};
}

double fubini_length(double delta_h1, double tau) {
    if (delta_h1 < 0 || tau < 0) {
        throw InvalidArgumentError("fubini_length: arguments must be >= 0");
    }
    return delta_h1 * tau;
}

double advantage(const ChargingReport& parallel, const ChargingReport& sharp) {
    if (sharp.tau <= 0) throw DegenerateError("advantage: tau_sharp is zero");
    return parallel.tau / sharp.tau;
}

double cumulant_g2_check(const Spectral& h1, const Eigen::VectorXcd& psi, double step) {
    const Eigen::VectorXcd c = eigenbasis_coeffs(h1, psi);
    const Eigen::VectorXd weights = c.cwiseAbs2();
    const Eigen::VectorXd& evals = h1.evals;

    const double mu = weights.dot(evals);
    double second = 0.0;
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
        second += weights(k) * evals(k) * evals(k);
    }
    const double var = second - mu * mu;
    if (var <= kDegenerateVariance) return 0.0;  // G(u) = i mu u identically

    const double dh = std::sqrt(var);
    double h = step > 0 ? step : 1e-3 / std::max(1.0, dh);

    auto moment = [&](double u) {
        cplx m{0.0, 0.0};
        for (Eigen::Index k = 0; k < evals.size(); ++k) {
            m += weights(k) * std::polar(1.0, evals(k) * u);
        }
        return m;
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        const cplx mp = moment(h);
        const cplx mm = moment(-h);
        if (std::abs(mp) < 0.1 || std::abs(mm) < 0.1) {  // log branch hazard
            h *= 0.5;
            continue;
        }
        const cplx g2 = (std::log(mp) + std::log(mm)) / (h * h);  // G(0) = 0
        const double estimate = -g2.real();  // -G''(0)
        return std::abs(estimate - var) / var;
    }
    throw NumericalError("cumulant_g2_check: characteristic function too close to zero");
}

double sandwich_moment(const OperatorSum& h1, int cell, double eps0,
                       const Eigen::VectorXcd& psi) {
    const int n = h1.n_cells();
    if (cell < 1 || cell > n) throw IndexError("sandwich_moment: cell out of range");
    const Eigen::VectorXcd phi = qb::apply(h1, psi);
    OperatorSum sy(n);
    const mask_t bit = mask_t{1} << (cell - 1);
    sy.add(PauliTerm{1.0, bit, bit, n});
    const double val = eps0 * (phi.dot(qb::apply(sy, phi)).real() + phi.squaredNorm());
    return val;
}

double sandwich_moment(const Eigen::MatrixXcd& h1, int cell, double eps0,
                       const Eigen::VectorXcd& psi) {
    const int n = static_cast<int>(std::round(std::log2(static_cast<double>(h1.rows()))));
    if (cell < 1 || cell > n) throw IndexError("sandwich_moment: cell out of range");
    const Eigen::VectorXcd phi = h1 * psi;
    OperatorSum sy(n);
    const mask_t bit = mask_t{1} << (cell - 1);
    sy.add(PauliTerm{1.0, bit, bit, n});
    return eps0 * (phi.dot(qb::apply(sy, phi)).real() + phi.squaredNorm());
}

std::pair<OperatorSum, std::size_t> anticommuting_block(const OperatorSum& h1, int cell) {
    const int n = h1.n_cells();
    if (cell < 1 || cell > n) throw IndexError("anticommuting_block: cell out of range");
    const mask_t bit = mask_t{1} << (cell - 1);
    OperatorSum block(n);
    std::size_t count = 0;
    // A string anticommutes with sigma^y_i iff its factor at cell i is X or Z,
    // i.e. exactly one of the two mask bits is set.
    for (const auto& [key, c] : h1.terms()) {
        const bool has_x = (key.first & bit) != 0;
        const bool has_z = (key.second & bit) != 0;
        if (has_x != has_z) {
            block.add(PauliTerm{c, key.first, key.second, n});
            ++count;
        }
    }
    return {std::move(block), count};
}

Eigen::MatrixXd correlation_matrix(const Eigen::VectorXcd& psi, int n_cells) {
    const int dim = 2 * n_cells;
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(dim, dim);
    for (int a = 1; a <= dim; ++a) {
        for (int b = 1; b <= dim; ++b) {
            if (a == b) continue;
            PauliTerm t = multiply(jw_majorana(a, n_cells), jw_majorana(b, n_cells));
            OperatorSum op(n_cells);
            op.add(t);
            const cplx value = cplx{0.0, 1.0} * expectation(op, psi);
            if (std::abs(value.imag()) > 1e-10) {
                throw NumericalError("correlation_matrix: non-real off-diagonal entry");
            }
            corr(a - 1, b - 1) = value.real();
        }
    }
    return corr;
}

double lambda_n(const DisorderRealization& real, const Eigen::MatrixXd& corr, int n) {
    if (n != 2 && n != 4) {
        throw InvalidArgumentError("lambda_n: only n in {2, 4} is supported");
    }
    // Expand the retained unordered pairs into ordered (i, j) with the
    // antisymmetric coupling convention lambda_ji = -lambda_ij.
    struct Pair {
        int i, j;
        double lambda;
    };
    std::vector<Pair> pairs;
    pairs.reserve(2 * real.couplings.size());
    for (const auto& [tuple, lambda] : real.couplings) {
        if (tuple.size() != 2) {
            throw InvalidArgumentError("lambda_n: realization is not a pair family");
        }
        pairs.push_back({tuple[0] - 1, tuple[1] - 1, lambda});
        pairs.push_back({tuple[1] - 1, tuple[0] - 1, -lambda});
    }
    const double n_cells = corr.rows() / 2.0;
    const double norm = std::pow(n_cells, n);

    if (n == 2) {
        double sum = 0.0;
        for (const auto& p1 : pairs) {
            for (const auto& p2 : pairs) {
                sum += p1.lambda * p2.lambda * corr(p1.i, p2.j) * corr(p2.i, p1.j);
            }
        }
        return sum / norm;
    }
    double sum = 0.0;
    for (const auto& p1 : pairs) {
        for (const auto& p2 : pairs) {
            const double c12 = corr(p1.i, p2.j) * corr(p2.i, p1.j);
            if (c12 == 0.0) continue;
            for (const auto& p3 : pairs) {
                for (const auto& p4 : pairs) {
                    sum += p1.lambda * p2.lambda * p3.lambda * p4.lambda * c12 *
                           corr(p3.i, p4.j) * corr(p4.i, p3.j);
                }
            }
        }
    }
    return sum / norm;
}

double sandwich_fraction(const OperatorSum& h1, double eps0, const Eigen::VectorXcd& psi,
                         double threshold) {
    const int n = h1.n_cells();
    const Eigen::VectorXcd phi = qb::apply(h1, psi);
    const double total = 2.0 * eps0 * phi.squaredNorm();  // 2 eps0 <H1^2>_0
    if (total <= kDegenerateVariance) return 0.0;
    int hits = 0;
    for (int i = 1; i <= n; ++i) {
        if (sandwich_moment(h1, i, eps0, psi) >= threshold * total) ++hits;
    }
    return static_cast<double>(hits) / n;
}

ChargingReport run_charging(const Eigen::MatrixXcd& h0, const Eigen::MatrixXcd& h1,
                            const Eigen::VectorXcd& psi0, double target_fraction,
                            int n_samples) {
    ChargingReport report;
    const Eigen::VectorXcd hpsi = h1 * psi0;
    report.mu = psi0.dot(hpsi).real();
    report.variance = hpsi.squaredNorm() - report.mu * report.mu;
    if (report.variance <= kDegenerateVariance) {
        report.degenerate = true;
        return report;
    }
    const Spectral spec = diagonalize(h1);
    report.gap = spectral_gap(spec);
    report.bhatia_slack = bhatia_davis_slack(spec, report.mu, report.variance);

    const double dh = std::sqrt(report.variance);
    const double t_max = 4.0 * std::numbers::pi / dh;
    const auto work_at = work_evaluator(h0, spec, psi0);
    const WorkCurve curve = evolve_work_curve(h0, spec, psi0, t_max, n_samples);
    const TauResult opt = optimal_tau(curve, target_fraction, work_at);
    report.tau = opt.tau;
    report.work = opt.work;
    report.power = opt.tau > 0 ? opt.work / opt.tau : 0.0;
    report.length = fubini_length(dh, opt.tau);
    return report;
}

}  // namespace qb
