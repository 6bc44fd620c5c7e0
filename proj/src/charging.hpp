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

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "models.hpp"
#include "pauli.hpp"
#include "states.hpp"

namespace qb {

// Variances below this are treated as a non-charging (degenerate) Hamiltonian.
inline constexpr double kDegenerateVariance = 1e-12;

// Eigendecomposition of a charging Hamiltonian together with the initial
// state expanded in its eigenbasis; computed once per realization.
struct Spectral {
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
};

Spectral diagonalize(const Eigen::MatrixXcd& h);

double variance(const Eigen::MatrixXcd& h1, const Eigen::VectorXcd& psi);
double variance(const OperatorSum& h1, const Eigen::VectorXcd& psi);

double spectral_gap(const Spectral& s);
double spectral_gap(const Eigen::MatrixXcd& h1);

// (E_max - mu)(mu - E_min) - Var; throws InequalityViolationError when the
// Bhatia-Davis bound is broken beyond floating tolerance.
double bhatia_davis_slack(const Eigen::MatrixXcd& h1, const Eigen::VectorXcd& psi);
double bhatia_davis_slack(const Spectral& s, double mu, double var);

struct WorkCurve {
    std::vector<double> times;
    std::vector<double> works;
};

inline constexpr int kWorkSamplesDefault = 2048;

// W(t) = <psi(t)| H0 |psi(t)> with psi(t) = e^{-i H1 t} psi0 via the spectral
// decomposition of H1.
WorkCurve evolve_work_curve(const Eigen::MatrixXcd& h0, const Spectral& h1,
                            const Eigen::VectorXcd& psi0, double t_max,
                            int n_samples = kWorkSamplesDefault);

// Reusable exact evaluator for W(t); what optimal_tau refines against.
std::function<double(double)> work_evaluator(const Eigen::MatrixXcd& h0, const Spectral& h1,
                                             const Eigen::VectorXcd& psi0);

struct TauResult {
    double tau = 0.0;
    double work = 0.0;
};

// Earliest grid time reaching target_fraction of the curve's maximum,
// refined against work_at: by bisection of the threshold crossing, or by
// golden-section peak search when the threshold is the grid maximum itself.
// Relative time tolerance 1e-6 (much better near smooth peaks).
TauResult optimal_tau(const WorkCurve& curve, double target_fraction,
                      const std::function<double(double)>& work_at);

double fubini_length(double delta_h1, double tau);

// Per-realization outcome of the two-quench protocol.
struct ChargingReport {
    double variance = 0.0;      // energy^2
    double gap = 0.0;           // energy
    double mu = 0.0;            // <H1>_0
    double bhatia_slack = 0.0;  // energy^2
    double tau = 0.0;           // time
    double work = 0.0;          // energy
    double power = 0.0;         // energy / time
    double length = 0.0;        // dimensionless
    bool degenerate = false;
};

// Gamma = tau_parallel / tau_sharp; the caller matches the work fraction.
double advantage(const ChargingReport& parallel, const ChargingReport& sharp);

// Relative deviation |-G''(0) - Var| / Var with G(u) = ln <e^{i H1 u}>_0 by
// second central difference; one automatic step halving on log-branch hazard.
double cumulant_g2_check(const Spectral& h1, const Eigen::VectorXcd& psi,
                         double step = 0.0);

// <psi| H1 h_i H1 |psi> with h_i = eps0 (sigma^y_i + 1).
double sandwich_moment(const OperatorSum& h1, int cell, double eps0,
                       const Eigen::VectorXcd& psi);
double sandwich_moment(const Eigen::MatrixXcd& h1, int cell, double eps0,
                       const Eigen::VectorXcd& psi);

// Terms of h1 that anticommute with sigma^y at the given cell, decided
// exactly from the masks, plus their count N_i.
std::pair<OperatorSum, std::size_t> anticommuting_block(const OperatorSum& h1, int cell);

// C_ab = i <gamma_a gamma_b>; stored real with the documented diagonal
// convention C_aa = 1 (the literal diagonal i<gamma^2> = i has unit weight).
Eigen::MatrixXd correlation_matrix(const Eigen::VectorXcd& psi, int n_cells);

// Brute-force contraction of Eq.-style cyclic pattern over the retained
// pairs of a simplified_vk realization; n in {2, 4}.
double lambda_n(const DisorderRealization& real, const Eigen::MatrixXd& corr, int n);

// Fraction of cells whose sandwich moment carries at least `threshold` of
// 2 eps0 <H1^2>_0; the block-dominance diagnostic.
double sandwich_fraction(const OperatorSum& h1, double eps0, const Eigen::VectorXcd& psi,
                         double threshold = 0.25);

// Full single-realization pipeline. t_max = 4 pi / Delta H1, 2048 samples.
ChargingReport run_charging(const Eigen::MatrixXcd& h0, const Eigen::MatrixXcd& h1,
                            const Eigen::VectorXcd& psi0, double target_fraction = 1.0,
                            int n_samples = kWorkSamplesDefault);

}  // namespace qb
