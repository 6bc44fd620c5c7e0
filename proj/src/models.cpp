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

#include "models.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"
#include "states.hpp"

namespace qb {

namespace {

const cplx kImag{0.0, 1.0};

// Ascending-lexicographic visit of all q-subsets of [1, 2N]; the fixed order
// is what makes disorder draws reproducible.
template <typename Fn>
void for_each_tuple(int n_majorana, int q, Fn&& fn) {
    std::vector<int> tuple(q);
    for (int i = 0; i < q; ++i) tuple[i] = i + 1;
    while (true) {
        fn(tuple);
        int pos = q - 1;
        while (pos >= 0 && tuple[pos] == n_majorana - (q - 1 - pos)) --pos;
        if (pos < 0) break;
        ++tuple[pos];
        for (int i = pos + 1; i < q; ++i) tuple[i] = tuple[i - 1] + 1;
    }
}

PauliTerm majorana_product(const std::vector<int>& tuple, int n_cells) {
    PauliTerm t = jw_majorana(tuple.front(), n_cells);
    for (std::size_t i = 1; i < tuple.size(); ++i) {
        t = multiply(t, jw_majorana(tuple[i], n_cells));
    }
    return t;
}

double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::onsite: return "onsite";
        case Family::parallel_drive: return "parallel_drive";
        case Family::clean_quadratic: return "clean_quadratic";
        case Family::disordered_quadratic: return "disordered_quadratic";
        case Family::sparse_syk: return "sparse_syk";
        case Family::rescaled_sparse_syk: return "rescaled_sparse_syk";
        case Family::simplified_vk: return "simplified_vk";
        case Family::geodesic: return "geodesic";
    }
    throw InvalidArgumentError("unknown family");
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::onsite, Family::parallel_drive, Family::clean_quadratic,
                     Family::disordered_quadratic, Family::sparse_syk,
                     Family::rescaled_sparse_syk, Family::simplified_vk, Family::geodesic}) {
        if (family_name(f) == name) return f;
    }
    throw ConfigError("unknown model family: '" + name + "'");
}

void validate(const ModelSpec& spec) {
    if (spec.n_cells < 1) throw InvalidArgumentError("ModelSpec: n_cells must be >= 1");
    if (spec.eps0 <= 0) throw InvalidArgumentError("ModelSpec: eps0 must be > 0");
    if (spec.lambda0 <= 0) throw InvalidArgumentError("ModelSpec: lambda0 must be > 0");
    const bool sparse_family = spec.family == Family::sparse_syk ||
                               spec.family == Family::rescaled_sparse_syk ||
                               spec.family == Family::simplified_vk;
    if (sparse_family) {
        if (spec.q < 2 || spec.q % 2 != 0) {
            throw InvalidArgumentError("ModelSpec: q must be even and >= 2");
        }
        if (spec.alpha < 0 || spec.alpha > spec.q) {
            throw InvalidArgumentError("ModelSpec: alpha must be in [0, q]");
        }
        if (2 * spec.n_cells < spec.q) {
            throw InvalidArgumentError("ModelSpec: need 2N >= q");
        }
        if (spec.j <= 0) throw InvalidArgumentError("ModelSpec: j must be > 0");
    }
    if (spec.family == Family::geodesic && spec.geodesic_lambda <= 0) {
        throw InvalidArgumentError("ModelSpec: geodesic_lambda must be > 0");
    }
}

std::size_t connection_count(const DisorderRealization& real) {
    return real.couplings.size();
}

double retention_probability(const ModelSpec& spec) {
    return std::min(1.0, std::pow(static_cast<double>(spec.n_cells), spec.alpha - spec.q));
}

double sparsity_x(const ModelSpec& spec) {
    return 1.0 - 2.0 * spec.alpha / spec.q;
}

double rescale_factor(const ModelSpec& spec) {
    const double n = spec.n_cells;
    if (spec.q == 2 && spec.alpha < 1.0) {
        return std::pow(n, 0.5 + 1.0 - spec.alpha);
    }
    const double x = sparsity_x(spec);
    return std::pow(n, 0.5 * spec.q * x * heaviside(x) + 0.5);
}

OperatorSum build_h0(int n_cells, double eps0) {
    OperatorSum h(n_cells);
    for (int i = 1; i <= n_cells; ++i) {
        const mask_t bit = mask_t{1} << (i - 1);
        h.add(PauliTerm{eps0, bit, bit, n_cells});  // sigma^y_i
    }
    h.add(PauliTerm{static_cast<double>(n_cells) * eps0, 0, 0, n_cells});
    return h;
}

OperatorSum build_parallel_drive(int n_cells, double lambda0) {
    OperatorSum h(n_cells);
    for (int i = 1; i <= n_cells; ++i) {
        h.add(PauliTerm{lambda0, mask_t{1} << (i - 1), 0, n_cells});
    }
    return h;
}

OperatorSum build_clean_quadratic(int n_cells) {
    const double j0 = 1.0 / std::sqrt(static_cast<double>(n_cells));
    OperatorSum h(n_cells);
    for (int n = 1; n <= 2 * n_cells; ++n) {
        for (int m = n + 1; m <= 2 * n_cells; ++m) {
            PauliTerm t = multiply(jw_majorana(m, n_cells), jw_majorana(n, n_cells));
            t.coeff *= kImag * j0;
            h.add(t);
        }
    }
    h.prune();
    return h;
}

std::pair<OperatorSum, DisorderRealization> build_disordered_quadratic(
    const ModelSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n_cells = spec.n_cells;
    Rng rng(seed);
    DisorderRealization real;
    real.seed = seed;
    OperatorSum h(n_cells);
    for (int n = 1; n <= 2 * n_cells; ++n) {
        for (int m = n + 1; m <= 2 * n_cells; ++m) {
            const double coupling = rng.gaussian();
            real.couplings[{n, m}] = coupling;
            PauliTerm t = multiply(jw_majorana(m, n_cells), jw_majorana(n, n_cells));
            t.coeff *= kImag * coupling;
            h.add(t);
        }
    }
    h.prune();
    return {std::move(h), std::move(real)};
}

std::pair<OperatorSum, DisorderRealization> build_sparse_syk(
    const ModelSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n_cells = spec.n_cells;
    const int q = spec.q;
    const double p = retention_probability(spec);
    double lgamma_q = 1.0;
    for (int i = 2; i < q; ++i) lgamma_q *= i;  // (q-1)!
    const double sigma =
        spec.j * std::sqrt(lgamma_q / std::pow(static_cast<double>(n_cells), q - 1));
    cplx phase{1.0, 0.0};
    for (int i = 0; i < q / 2; ++i) phase *= kImag;  // i^{q/2}

    Rng rng(seed);
    DisorderRealization real;
    real.seed = seed;
    OperatorSum h(n_cells);
    for_each_tuple(2 * n_cells, q, [&](const std::vector<int>& tuple) {
        if (!rng.bernoulli(p)) return;
        const double coupling = sigma * rng.gaussian();
        real.couplings[tuple] = coupling;
        PauliTerm t = majorana_product(tuple, n_cells);
        t.coeff *= phase * coupling;
        h.add(t);
    });
    h.prune();
    return {std::move(h), std::move(real)};
}

OperatorSum rescale_syk(const OperatorSum& h, const ModelSpec& spec) {
    OperatorSum out = h;
    out.scale(rescale_factor(spec));
    return out;
}

std::pair<OperatorSum, DisorderRealization> build_simplified(
    const ModelSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n_cells = spec.n_cells;
    const int n_majorana = 2 * n_cells;
    const int k = spec.q / 2;
    const double n = n_cells;
    const double x = sparsity_x(spec);
    const double p1 = std::min(1.0, std::pow(n, -(x + 1.0)));
    const double prefactor = std::pow(n, x * heaviside(x));
    const double coupling_j = std::pow(n, -static_cast<double>(k - 1) / k);

    Rng rng(seed);
    DisorderRealization real;
    real.seed = seed;
    real.w = p1;

    // lambda_mn drawn per unordered pair, extended antisymmetrically; the
    // m != n double sum then collapses to 2 lambda_mn gamma_m gamma_n.
    OperatorSum v(n_cells);
    for (int m = 1; m <= n_majorana; ++m) {
        for (int nn = m + 1; nn <= n_majorana; ++nn) {
            if (!rng.bernoulli(p1)) continue;
            const double lambda = rng.gaussian();
            real.couplings[{m, nn}] = lambda;
            PauliTerm t = multiply(jw_majorana(m, n_cells), jw_majorana(nn, n_cells));
            t.coeff *= kImag * 2.0 * lambda * prefactor;
            v.add(t);
        }
    }
    v.add(PauliTerm{prefactor * real.w * n, 0, 0, n_cells});
    v.prune();

    v.scale(coupling_j);
    OperatorSum h = power(v, k);
    return {std::move(h), std::move(real)};
}

std::pair<OperatorSum, DisorderRealization> build_orthogonal_quadratic(
    const ModelSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n_cells = spec.n_cells;
    const int dim = 2 * n_cells;
    Rng rng(seed);

    Eigen::MatrixXd gauss(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) gauss(r, c) = rng.gaussian();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    Eigen::MatrixXd w = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        if (r(c, c) < 0) w.col(c) *= -1.0;  // Haar sign fix
    }

    DisorderRealization real;
    real.seed = seed;
    OperatorSum h(n_cells);
    for (int i = 1; i <= n_cells; ++i) {
        const double lambda = rng.gaussian();
        real.couplings[{i}] = lambda;
        for (int a = 1; a <= dim; ++a) {
            for (int b = 1; b <= dim; ++b) {
                if (a == b) continue;  // gamma^2 terms cancel exactly by orthogonality
                PauliTerm t = multiply(jw_majorana(a, n_cells), jw_majorana(b, n_cells));
                t.coeff *= kImag * lambda * w(2 * i - 1, a - 1) * w(2 * i - 2, b - 1);
                h.add(t);
            }
        }
        h.add(PauliTerm{-lambda, 0, 0, n_cells});
    }
    h.prune();
    return {std::move(h), std::move(real)};
}

Eigen::MatrixXcd build_geodesic(const OperatorSum& h0, double lambda,
                                const Eigen::VectorXcd& ground, const Eigen::VectorXcd& top) {
    const int n_cells = h0.n_cells();
    const double overlap = std::abs(ground.dot(top));
    if (overlap > 1e-9) {
        throw GeometryError("build_geodesic: ground and top states are not orthogonal");
    }
    const double scale = n_cells * lambda;
    Eigen::MatrixXcd h = scale * (top * ground.adjoint());
    h += h.adjoint().eval();
    return h;
}

BuiltModel build_charging_hamiltonian(const ModelSpec& spec, std::uint64_t seed, int dense_cap) {
    validate(spec);
    BuiltModel out{OperatorSum(spec.n_cells), true, {}, false, {}, false};
    switch (spec.family) {
        case Family::onsite:
            out.op = build_h0(spec.n_cells, spec.eps0);
            break;
        case Family::parallel_drive:
            out.op = build_parallel_drive(spec.n_cells, spec.lambda0);
            break;
        case Family::clean_quadratic:
            out.op = build_clean_quadratic(spec.n_cells);
            break;
        case Family::disordered_quadratic: {
            auto [op, real] = build_disordered_quadratic(spec, seed);
            out.op = std::move(op);
            out.realization = std::move(real);
            break;
        }
        case Family::sparse_syk:
        case Family::rescaled_sparse_syk: {
            auto [op, real] = build_sparse_syk(spec, seed);
            if (spec.family == Family::rescaled_sparse_syk) op = rescale_syk(op, spec);
            out.degenerate = real.couplings.empty();
            out.op = std::move(op);
            out.realization = std::move(real);
            break;
        }
        case Family::simplified_vk: {
            auto [op, real] = build_simplified(spec, seed);
            out.degenerate = real.couplings.empty();
            out.op = std::move(op);
            out.realization = std::move(real);
            break;
        }
        case Family::geodesic: {
            const OperatorSum h0 = build_h0(spec.n_cells, spec.eps0);
            out.dense = build_geodesic(h0, spec.geodesic_lambda,
                                       ground_state(spec.n_cells, dense_cap),
                                       top_state(spec.n_cells, dense_cap));
            out.has_op = false;
            out.has_dense = true;
            break;
        }
    }
    return out;
}

}  // namespace qb
