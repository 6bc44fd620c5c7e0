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

#include "pauli.hpp"

#include <bit>
#include <cmath>

namespace qb {

namespace {

constexpr cplx kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popcount(mask_t m) { return std::popcount(m); }

// Reverse the low n bits of m (cell 1 -> most significant index bit).
mask_t reverse_bits(mask_t m, int n) {
    mask_t out = 0;
    for (int i = 0; i < n; ++i) {
        if (m & (mask_t{1} << i)) out |= mask_t{1} << (n - 1 - i);
    }
    return out;
}

void check_dense_cap(int n_cells, int cap) {
    if (n_cells > cap) {
        throw ResourceLimitError("dense realization refused: N = " + std::to_string(n_cells) +
                                 " exceeds cap " + std::to_string(cap));
    }
}

}  // namespace

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_cells != b.n_cells) {
        throw DimensionError("PauliTerm product: register sizes differ (" +
                             std::to_string(a.n_cells) + " vs " + std::to_string(b.n_cells) + ")");
    }
    // Literal string P(x, z) = i^{|x&z|} X^x Z^z. Multiply in the X^x Z^z
    // frame where Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1, then convert back.
    PauliTerm out;
    out.n_cells = a.n_cells;
    out.x_mask = a.x_mask ^ b.x_mask;
    out.z_mask = a.z_mask ^ b.z_mask;
    int ipow = popcount(a.x_mask & a.z_mask) + popcount(b.x_mask & b.z_mask) -
               popcount(out.x_mask & out.z_mask);
    ipow = ((ipow % 4) + 4) % 4;
    cplx phase = kPowersOfI[ipow];
    if (popcount(a.z_mask & b.x_mask) % 2 != 0) phase = -phase;
    out.coeff = a.coeff * b.coeff * phase;
    return out;
}

PauliTerm jw_majorana(int m, int n_cells) {
    if (n_cells < 1) throw InvalidArgumentError("jw_majorana: n_cells must be >= 1");
    if (m < 1 || m > 2 * n_cells) {
        throw IndexError("jw_majorana: index m = " + std::to_string(m) + " outside [1, " +
                         std::to_string(2 * n_cells) + "]");
    }
    const int l = (m + 1) / 2;  // cell carrying the X or Y factor
    PauliTerm t;
    t.n_cells = n_cells;
    t.coeff = 1.0;
    t.z_mask = (mask_t{1} << (l - 1)) - 1;  // Z string on cells 1..l-1
    t.x_mask = mask_t{1} << (l - 1);
    if (m % 2 != 0) t.z_mask |= mask_t{1} << (l - 1);  // odd index: Y at cell l
    return t;
}

OperatorSum::OperatorSum(int n_cells) : n_cells_(n_cells) {
    if (n_cells < 1 || n_cells > 63) {
        throw InvalidArgumentError("OperatorSum: n_cells must be in [1, 63]");
    }
}

OperatorSum OperatorSum::identity(int n_cells) {
    OperatorSum op(n_cells);
    PauliTerm one;
    one.n_cells = n_cells;
    op.add(one);
    return op;
}

cplx OperatorSum::coefficient(mask_t x, mask_t z) const {
    auto it = terms_.find({x, z});
    return it == terms_.end() ? cplx{0, 0} : it->second;
}

void OperatorSum::add(const PauliTerm& t) {
    if (t.n_cells != n_cells_) {
        throw DimensionError("OperatorSum::add: register sizes differ");
    }
    auto [it, inserted] = terms_.try_emplace({t.x_mask, t.z_mask}, t.coeff);
    if (!inserted) it->second += t.coeff;
}

void OperatorSum::add_scaled(const cplx& scale, const OperatorSum& other) {
    if (other.n_cells_ != n_cells_) {
        throw DimensionError("OperatorSum::add_scaled: register sizes differ");
    }
    for (const auto& [key, c] : other.terms_) {
        auto [it, inserted] = terms_.try_emplace(key, scale * c);
        if (!inserted) it->second += scale * c;
    }
}

void OperatorSum::scale(const cplx& factor) {
    for (auto& [key, c] : terms_) c *= factor;
}

void OperatorSum::prune(double threshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < threshold) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

bool OperatorSum::is_hermitian(double tol) const {
    // Literal Pauli strings are Hermitian matrices, so the sum is Hermitian
    // exactly when every coefficient is real.
    for (const auto& [key, c] : terms_) {
        if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
}

std::vector<PauliTerm> OperatorSum::term_list() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_) {
        out.push_back(PauliTerm{c, key.first, key.second, n_cells_});
    }
    return out;
}

OperatorSum combine(const std::vector<std::pair<cplx, OperatorSum>>& ops) {
    if (ops.empty()) throw InvalidArgumentError("combine: empty operand list");
    OperatorSum out(ops.front().second.n_cells());
    for (const auto& [scale, op] : ops) out.add_scaled(scale, op);
    out.prune();
    return out;
}

OperatorSum multiply(const OperatorSum& a, const OperatorSum& b, double prune_threshold) {
    if (a.n_cells() != b.n_cells()) {
        throw DimensionError("OperatorSum product: register sizes differ");
    }
    OperatorSum out(a.n_cells());
    for (const auto& [ka, ca] : a.terms()) {
        PauliTerm ta{ca, ka.first, ka.second, a.n_cells()};
        for (const auto& [kb, cb] : b.terms()) {
            PauliTerm tb{cb, kb.first, kb.second, b.n_cells()};
            out.add(multiply(ta, tb));
        }
    }
    out.prune(prune_threshold);
    return out;
}

OperatorSum power(const OperatorSum& a, int exponent, double prune_threshold) {
    if (exponent < 1) throw InvalidArgumentError("power: exponent must be >= 1");
    OperatorSum out = a;
    for (int k = 1; k < exponent; ++k) out = multiply(out, a, prune_threshold);
    return out;
}

Eigen::MatrixXcd to_dense(const PauliTerm& t, int dense_cap) {
    check_dense_cap(t.n_cells, dense_cap);
    OperatorSum op(t.n_cells);
    op.add(t);
    return to_dense(op, dense_cap);
}

Eigen::MatrixXcd to_dense(const OperatorSum& op, int dense_cap) {
    const int n = op.n_cells();
    check_dense_cap(n, dense_cap);
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [key, c] : op.terms()) {
        const mask_t xr = reverse_bits(key.first, n);
        const mask_t zr = reverse_bits(key.second, n);
        const cplx base = c * kPowersOfI[popcount(key.first & key.second) % 4];
        for (std::size_t col = 0; col < dim; ++col) {
            const double sign = (popcount(zr & col) % 2 == 0) ? 1.0 : -1.0;
            out(col ^ xr, col) += base * sign;
        }
    }
    return out;
}

Eigen::VectorXcd apply(const OperatorSum& op, const Eigen::VectorXcd& psi) {
    const int n = op.n_cells();
    const std::size_t dim = std::size_t{1} << n;
    if (static_cast<std::size_t>(psi.size()) != dim) {
        throw DimensionError("apply: state dimension does not match register");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (const auto& [key, c] : op.terms()) {
        const mask_t xr = reverse_bits(key.first, n);
        const mask_t zr = reverse_bits(key.second, n);
        const cplx base = c * kPowersOfI[popcount(key.first & key.second) % 4];
        for (std::size_t b = 0; b < dim; ++b) {
            const double sign = (popcount(zr & b) % 2 == 0) ? 1.0 : -1.0;
            out(b ^ xr) += base * sign * psi(b);
        }
    }
    return out;
}

cplx expectation(const OperatorSum& op, const Eigen::VectorXcd& psi) {
    return psi.dot(qb::apply(op, psi));
}

Eigen::MatrixXd anticommutation_table(int n_cells) {
    return anticommutation_table(
        n_cells, [n_cells](int m, int n) { return jw_majorana(m, n); });
}

Eigen::MatrixXd anticommutation_table(
    int n_cells, const std::function<PauliTerm(int, int)>& gamma_builder) {
    if (n_cells < 1) throw InvalidArgumentError("anticommutation_table: n_cells must be >= 1");
    const int dim = 2 * n_cells;
    Eigen::MatrixXd table(dim, dim);
    for (int m = 1; m <= dim; ++m) {
        for (int n = 1; n <= dim; ++n) {
            const PauliTerm gm = gamma_builder(m, n_cells);
            const PauliTerm gn = gamma_builder(n, n_cells);
            const PauliTerm mn = multiply(gm, gn);
            const PauliTerm nm = multiply(gn, gm);
            OperatorSum anti(n_cells);
            anti.add(mn);
            anti.add(nm);
            anti.prune();
            if (anti.size() == 0) {
                table(m - 1, n - 1) = 0.0;
                continue;
            }
            const cplx c = anti.coefficient(0, 0);
            if (anti.size() != 1 || std::abs(c) == 0.0 ||
                std::abs(c.imag()) > 1e-12 * std::abs(c)) {
                throw AlgebraViolationError(
                    "anticommutator {gamma_" + std::to_string(m) + ", gamma_" +
                    std::to_string(n) + "} is not proportional to identity");
            }
            if (m == n && c.real() <= 0.0) {
                throw AlgebraViolationError(
                    "gamma_" + std::to_string(m) +
                    " is not a hermitian involution: square has negative weight");
            }
            table(m - 1, n - 1) = c.real();
        }
    }
    return table;
}

}  // namespace qb
