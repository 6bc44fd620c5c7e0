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

#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "pauli.hpp"

namespace qb {

// Battery ground state |0>^{(x)N}: per cell the sigma^y eigenvector of
// eigenvalue -1, (1, -i)/sqrt(2) in the computational basis. Under the
// cell-1-most-significant ordering the amplitude of basis index b is
// (1/sqrt(2))^N (-i)^{popcount(b)}.
inline Eigen::VectorXcd ground_state(int n_cells, int dense_cap = kDenseCapDefault) {
    if (n_cells > dense_cap) {
        throw ResourceLimitError("ground_state: N exceeds dense cap");
    }
    const std::size_t dim = std::size_t{1} << n_cells;
    const double norm = std::pow(0.5, 0.5 * n_cells);
    static constexpr cplx phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};  // (-i)^k
    Eigen::VectorXcd psi(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        psi(b) = norm * phases[std::popcount(b) % 4];
    }
    return psi;
}

// Top eigenstate of H0: every cell in the sigma^y = +1 eigenvector (1, i)/sqrt(2).
inline Eigen::VectorXcd top_state(int n_cells, int dense_cap = kDenseCapDefault) {
    if (n_cells > dense_cap) {
        throw ResourceLimitError("top_state: N exceeds dense cap");
    }
    const std::size_t dim = std::size_t{1} << n_cells;
    const double norm = std::pow(0.5, 0.5 * n_cells);
    static constexpr cplx phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k
    Eigen::VectorXcd psi(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        psi(b) = norm * phases[std::popcount(b) % 4];
    }
    return psi;
}

}  // namespace qb
