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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pauli.hpp"

namespace qb {

enum class Family {
    onsite,
    parallel_drive,
    clean_quadratic,
    disordered_quadratic,
    sparse_syk,
    rescaled_sparse_syk,
    simplified_vk,
    geodesic,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Declarative description of one Hamiltonian family.
struct ModelSpec {
    Family family = Family::disordered_quadratic;
    int n_cells = 1;
    int q = 2;              // SYK / simplified families; even, >= 2
    double alpha = 0.0;     // connectivity exponent, in [0, q]
    double eps0 = 1.0;      // on-site energy scale
    double lambda0 = 1.0;   // parallel drive strength
    double j = 1.0;         // SYK coupling scale
    double geodesic_lambda = 1.0;
};

void validate(const ModelSpec& spec);

// One quenched disorder draw. Reconstruction from (spec, seed) is
// bit-identical: builders consume the stream in a fixed tuple order.
struct DisorderRealization {
    std::uint64_t seed = 0;
    // Retained index tuples -> coupling value. The key set is the mask.
    std::map<std::vector<int>, double> couplings;
    double w = 0.0;  // simplified_vk only
};

std::size_t connection_count(const DisorderRealization& real);

// Tuple retention probability p = min(1, N^{alpha - q}).
double retention_probability(const ModelSpec& spec);

// x = 1 - 2 alpha / q.
double sparsity_x(const ModelSpec& spec);

// Spectrum rescaling factor M: N^{q x theta(x)/2 + 1/2} in general,
// N^{1/2 + 1 - alpha} for q = 2 with alpha < 1.
double rescale_factor(const ModelSpec& spec);

// H0 = sum_i eps0 (sigma^y_i + 1); ground energy 0, top 2 N eps0.
OperatorSum build_h0(int n_cells, double eps0);

// lambda0 * sum_i sigma^x_i.
OperatorSum build_parallel_drive(int n_cells, double lambda0);

// i J0 sum_{m > n} gamma_m gamma_n over all 2N Majoranas, J0 = 1/sqrt(N).
OperatorSum build_clean_quadratic(int n_cells);

// i sum_{m > n} J_mn gamma_m gamma_n, J_mn standard normal.
std::pair<OperatorSum, DisorderRealization> build_disordered_quadratic(
    const ModelSpec& spec, std::uint64_t seed);

// i^{q/2} sum_{m1 < ... < mq} x_t j_t gamma_{m1} ... gamma_{mq}; couplings
// Gaussian with variance j^2 (q-1)!/N^{q-1}, tuples kept with probability p.
// An empty mask is a degenerate realization, not an error.
std::pair<OperatorSum, DisorderRealization> build_sparse_syk(
    const ModelSpec& spec, std::uint64_t seed);

OperatorSum rescale_syk(const OperatorSum& h, const ModelSpec& spec);

// (J V)^k with V = N^{x theta(x)} (i sum_{m != n} y_mn lambda_mn gamma_m gamma_n + w N),
// k = q/2, J = N^{-(k-1)/k}, w = p1 = min(1, N^{-(x+1)}). The lambda couplings
// are drawn per unordered pair and extended antisymmetrically.
std::pair<OperatorSum, DisorderRealization> build_simplified(
    const ModelSpec& spec, std::uint64_t seed);

// Diagnostic q = 2 variant: H1 = sum_i lambda_i (i chi_{2i} chi_{2i-1} - 1)
// with chi = W gamma for a random orthogonal W; equivalent in distribution
// to the disordered quadratic family.
std::pair<OperatorSum, DisorderRealization> build_orthogonal_quadratic(
    const ModelSpec& spec, std::uint64_t seed);

// Rank-2 swap N lambda (|top><ground| + |ground><top|); dense only.
Eigen::MatrixXcd build_geodesic(const OperatorSum& h0, double lambda,
                                const Eigen::VectorXcd& ground, const Eigen::VectorXcd& top);

// Unified builder used by the ensemble pipeline.
struct BuiltModel {
    OperatorSum op;            // Pauli-string form (identity for geodesic)
    bool has_op = true;        // false when only the dense form is meaningful
    Eigen::MatrixXcd dense;    // filled lazily by the pipeline; see charging
    bool has_dense = false;
    DisorderRealization realization;
    bool degenerate = false;   // e.g. empty sparse mask
};

BuiltModel build_charging_hamiltonian(const ModelSpec& spec, std::uint64_t seed,
                                      int dense_cap = kDenseCapDefault);

}  // namespace qb
