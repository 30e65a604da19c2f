// Copyright 2026 The dissipctl Authors
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

// Cyclic Jacobi diagonalisation of complex Hermitian matrices.
//
// Each rotation first removes the phase of a(p,q) with a diagonal unitary and
// then applies the real symmetric Schur rotation (Golub & Van Loan 8.4).
// Before sweeping, the matrix is split into the connected components of its
// sparsity graph; Pauli-structured operators fall apart into many small
// blocks, and each block is diagonalised independently.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dissipctl/error.hpp"
#include "dissipctl/operator_algebra.hpp"

namespace dissipctl {

namespace {

constexpr int kMaxSweeps = 100;

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::size_t> parent;
};

double off_diagonal_norm(const Eigen::MatrixXcd &a) {
    double sum = 0.0;
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
        for (Eigen::Index p = 0; p < q; ++p) {
            sum += std::norm(a(p, q));
        }
    }
    return std::sqrt(2.0 * sum);
}

// Diagonalises `a` in place; `v` receives the eigenvectors.
void jacobi_block(Eigen::MatrixXcd &a, Eigen::MatrixXcd &v) {
    const Eigen::Index m = a.rows();
    v = Eigen::MatrixXcd::Identity(m, m);
    if (m < 2) {
        return;
    }
    const double scale = a.norm();
    const double target = std::numeric_limits<double>::epsilon() * scale;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) {
            break;
        }
        for (Eigen::Index p = 0; p < m - 1; ++p) {
            for (Eigen::Index q = p + 1; q < m; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0 || r < 1e-3 * target / static_cast<double>(m)) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = std::conj(apq / r);
                const double tau = (aqq - app) / (2.0 * r);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // R restricted to (p, q): [[c, s], [-s*phase, c*phase]]
                const cplx r_pp = c;
                const cplx r_pq = s;
                const cplx r_qp = -s * phase;
                const cplx r_qq = c * phase;

                for (Eigen::Index k = 0; k < m; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * r_pp + akq * r_qp;
                    a(k, q) = akp * r_pq + akq * r_qq;
                }
                for (Eigen::Index k = 0; k < m; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(r_pp) * apk + std::conj(r_qp) * aqk;
                    a(q, k) = std::conj(r_pq) * apk + std::conj(r_qq) * aqk;
                }
                for (Eigen::Index k = 0; k < m; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * r_pp + vkq * r_qp;
                    v(k, q) = vkp * r_pq + vkq * r_qq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
}

} // namespace

Spectrum hermitian_eig(const Operator &input, double tol) {
    if (input.rows() != input.cols()) {
        throw DimensionError("hermitian_eig: operator is not square");
    }
    if (tol > 0.0 && !is_hermitian(input, tol)) {
        throw NotHermitianError("hermitian_eig: operator is not Hermitian");
    }
    const Eigen::Index n = input.rows();
    Spectrum out;
    out.eigenvalues = Eigen::VectorXd::Zero(n);
    out.eigenvectors = Eigen::MatrixXcd::Zero(n, n);
    if (n == 0) {
        return out;
    }
    const Operator a = hermitian_part(input);

    // Entries below the cutoff cannot move any eigenvalue by more than
    // machine precision and are dropped when forming blocks.
    const double cutoff = 1e-2 * std::numeric_limits<double>::epsilon() * a.norm();
    DisjointSets sets(static_cast<std::size_t>(n));
    for (Eigen::Index q = 0; q < n; ++q) {
        for (Eigen::Index p = 0; p < q; ++p) {
            if (std::abs(a(p, q)) > cutoff) {
                sets.unite(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> blocks;
    std::vector<std::size_t> block_of_root(static_cast<std::size_t>(n),
                                           static_cast<std::size_t>(-1));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto root = sets.find(static_cast<std::size_t>(i));
        if (block_of_root[root] == static_cast<std::size_t>(-1)) {
            block_of_root[root] = blocks.size();
            blocks.emplace_back();
        }
        blocks[block_of_root[root]].push_back(i);
    }

    Eigen::VectorXd values(n);
    Eigen::MatrixXcd vectors = Eigen::MatrixXcd::Zero(n, n);
    Eigen::Index column = 0;
    for (const auto &idx : blocks) {
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd sub(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                sub(i, j) = a(idx[static_cast<std::size_t>(i)],
                              idx[static_cast<std::size_t>(j)]);
            }
        }
        Eigen::MatrixXcd sub_vectors;
        jacobi_block(sub, sub_vectors);
        for (Eigen::Index j = 0; j < m; ++j) {
            values(column) = sub(j, j).real();
            for (Eigen::Index i = 0; i < m; ++i) {
                vectors(idx[static_cast<std::size_t>(i)], column) = sub_vectors(i, j);
            }
            ++column;
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto l, auto r) { return values(l) < values(r); });
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        out.eigenvalues(j) = values(src);
        out.eigenvectors.col(j) = vectors.col(src);
    }
    return out;
}

} // namespace dissipctl
