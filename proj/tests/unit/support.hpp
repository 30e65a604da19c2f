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


#pragma once

#include <random>
#include <string>

#include <Eigen/Dense>

#include "dissipctl/operator_algebra.hpp"

namespace testing {

using dissipctl::cplx;
using dissipctl::Operator;

inline double max_abs(const Eigen::MatrixXcd &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXcd random_matrix(std::size_t rows, std::size_t cols,
                                      std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = cplx(g(rng), g(rng));
        }
    }
    return m;
}

inline Operator random_hermitian(std::size_t n, std::mt19937_64 &rng) {
    const Operator a = random_matrix(n, n, rng);
    return (a + a.adjoint()) / 2.0;
}

/// Haar-ish unitary via Householder QR of a Gaussian matrix.
inline Operator random_unitary(std::size_t n, std::mt19937_64 &rng) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(n, n, rng));
    return qr.householderQ() * Operator::Identity(n, n);
}

/// Orthogonal projection of the given rank onto a random subspace.
inline Operator random_projection(std::size_t n, std::size_t rank,
                                  std::mt19937_64 &rng) {
    const Operator u = random_unitary(n, rng);
    const Eigen::MatrixXcd cols = u.leftCols(static_cast<Eigen::Index>(rank));
    return cols * cols.adjoint();
}

/// Eigen's solver, independent of the library's Jacobi routine.
inline Eigen::VectorXd reference_eigenvalues(const Operator &h) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly)
        .eigenvalues();
}

inline double reference_min_eig(const Operator &h) {
    return reference_eigenvalues(h).minCoeff();
}

inline double reference_max_eig(const Operator &h) {
    return reference_eigenvalues(h).maxCoeff();
}

/// Plain double loop, independent of the library's kron.
inline Operator reference_kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline Operator pauli(char p) {
    Operator m(2, 2);
    switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Operator::Identity(2, 2);
    }
    return m;
}

/// Tensor product of single-letter Paulis, e.g. "ZXZI".
inline Operator pauli_word(const std::string &word) {
    Operator out = Operator::Identity(1, 1);
    for (char p : word) out = reference_kron(out, pauli(p));
    return out;
}

} // namespace testing
