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

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace qb {

using cplx = std::complex<double>;
using mask_t = std::uint64_t;

// Coefficients below this magnitude are dropped when operators are merged.
inline constexpr double kPruneThreshold = 1e-14;

// Hilbert dimension guard for dense realizations (2^12 = 4096).
inline constexpr int kDenseCapDefault = 12;

// One weighted Pauli string on an N-cell register.
//
// Conventions (used consistently everywhere):
//  * Cells are 1-based; cell i occupies bit (i-1) of both masks.
//  * The stored string is the literal tensor product of {I, X, Y, Z}:
//    bit set in x_mask only -> X, in z_mask only -> Z, in both -> Y.
//    The phase of Y = iXZ is absorbed into coeff, so equal-mask terms merge
//    by plain coefficient addition.
//  * For dense realizations cell 1 is the most significant Kronecker factor.
struct PauliTerm {
    cplx coeff{1.0, 0.0};
    mask_t x_mask = 0;
    mask_t z_mask = 0;
    int n_cells = 0;
};

// Exact operator product of two literal Pauli strings; phases are powers of i.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

// Jordan-Wigner Majorana gamma_m, m in [1, 2N]:
//   gamma_{2l}   = (prod_{k<l} Z_k) X_l
//   gamma_{2l-1} = (prod_{k<l} Z_k) Y_l
PauliTerm jw_majorana(int m, int n_cells);

// Canonical linear combination of Pauli strings with a fixed cell count.
// Immutable in spirit: builders construct one and then share it freely.
class OperatorSum {
  public:
    using TermMap = std::map<std::pair<mask_t, mask_t>, cplx>;

    explicit OperatorSum(int n_cells);

    static OperatorSum identity(int n_cells);

    int n_cells() const { return n_cells_; }
    std::size_t size() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    cplx coefficient(mask_t x, mask_t z) const;

    void add(const PauliTerm& t);
    void add_scaled(const cplx& scale, const OperatorSum& other);
    void scale(const cplx& factor);
    void prune(double threshold = kPruneThreshold);

    // Hermitian iff every literal-basis coefficient is real.
    bool is_hermitian(double tol = 1e-12) const;

    std::vector<PauliTerm> term_list() const;

  private:
    int n_cells_;
    TermMap terms_;
};

// Canonical merged sum of scaled operators; zero terms pruned.
OperatorSum combine(const std::vector<std::pair<cplx, OperatorSum>>& ops);

OperatorSum multiply(const OperatorSum& a, const OperatorSum& b,
                     double prune_threshold = kPruneThreshold);
OperatorSum power(const OperatorSum& a, int exponent,
                  double prune_threshold = kPruneThreshold);

// Dense matrix under the cell-1-most-significant ordering. Guarded by the cap.
Eigen::MatrixXcd to_dense(const OperatorSum& op, int dense_cap = kDenseCapDefault);
Eigen::MatrixXcd to_dense(const PauliTerm& t, int dense_cap = kDenseCapDefault);

// out = op |psi>, without materializing the dense matrix.
Eigen::VectorXcd apply(const OperatorSum& op, const Eigen::VectorXcd& psi);
cplx expectation(const OperatorSum& op, const Eigen::VectorXcd& psi);

// Entry (m, n) is the scalar s with {gamma_m, gamma_n} = s * I. Throws
// AlgebraViolationError if any anticommutator is not proportional to identity.
// The gamma builder is injectable so tests can exercise the failure path.
Eigen::MatrixXd anticommutation_table(int n_cells);
Eigen::MatrixXd anticommutation_table(
    int n_cells, const std::function<PauliTerm(int, int)>& gamma_builder);

}  // namespace qb
