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

/**
 * @file operator_algebra.hpp
 * Dense complex operators on finite-dimensional Hilbert spaces and the
 * composition primitives (Kronecker products, site embeddings) used by all
 * higher layers.
 *
 * Tolerance convention: every semidefiniteness, hermiticity, unitarity and
 * projection test accepts a relative tolerance `tol` which is scaled by
 * max(1, ||A||). Spectral tests use the spectral norm, algebraic identity
 * tests use the Frobenius norm.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dissipctl {

using cplx = std::complex<double>;
/// Square complex matrix. All observables, couplings and states use it.
using Operator = Eigen::MatrixXcd;
using ColumnVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Ordered subsystem dimensions of a composite space. Site indices handed to
/// embed() are 1-based; site 1 is the leftmost Kronecker factor.
class TensorStructure {
  public:
    TensorStructure() = default;
    explicit TensorStructure(std::vector<std::size_t> dims);

    /// `count` two-level sites.
    static TensorStructure qubits(std::size_t count);

    [[nodiscard]] const std::vector<std::size_t> &dims() const noexcept {
        return dims_;
    }
    [[nodiscard]] std::size_t sites() const noexcept { return dims_.size(); }
    [[nodiscard]] std::size_t total_dim() const noexcept { return total_; }

    bool operator==(const TensorStructure &) const = default;

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Operator eigenvectors; ///< columns, orthonormal

    [[nodiscard]] double min() const { return eigenvalues(0); }
    [[nodiscard]] double max() const {
        return eigenvalues(eigenvalues.size() - 1);
    }
    [[nodiscard]] Operator reconstruct() const;
};

// -- standard operators ------------------------------------------------------

Operator identity(std::size_t dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
/// [[0,0],[1,0]]: maps basis state 0 to basis state 1.
Operator sigma_minus();
Operator sigma_plus();
Operator diagonal(std::span<const double> entries);
Operator diagonal(std::initializer_list<double> entries);

// -- predicates and norms ----------------------------------------------------

/// Largest singular value.
double spectral_norm(const Operator &a);

/// Absolute slack tol * max(1, norm).
inline double scaled_tolerance(double tol, double norm) {
    return tol * (norm > 1.0 ? norm : 1.0);
}

bool is_square(const Operator &a) noexcept;
bool is_hermitian(const Operator &a, double tol = kDefaultTol);
bool is_unitary(const Operator &a, double tol = kDefaultTol);
/// Hermitian with smallest eigenvalue >= -tol * max(1, ||a||_2).
bool is_psd(const Operator &a, double tol = kDefaultTol);
/// Hermitian, idempotent and PSD.
bool is_projection(const Operator &a, double tol = kDefaultTol);

/// (a + a^dagger) / 2
Operator hermitian_part(const Operator &a);

// -- composition -------------------------------------------------------------

Operator kron(const Operator &a, const Operator &b);
Operator kron(std::span<const Operator> factors);

/// Acts as `local` on `sites` (1-based, in the order given; the first site
/// is the most significant local index) and as the identity elsewhere.
Operator embed(const Operator &local, std::span<const std::size_t> sites,
               const TensorStructure &structure);
Operator embed(const Operator &local, std::initializer_list<std::size_t> sites,
               const TensorStructure &structure);

/// Traces out the listed 1-based sites; the result lives on the remaining
/// sites in their original order.
Operator partial_trace(const Operator &op, const TensorStructure &structure,
                       std::span<const std::size_t> traced_sites);

// -- spectral ----------------------------------------------------------------

/// Cyclic complex Jacobi eigensolver. Throws NotHermitianError.
Spectrum hermitian_eig(const Operator &a, double tol = kDefaultTol);

double min_eigenvalue(const Operator &hermitian);
double max_eigenvalue(const Operator &hermitian);

/// Moore-Penrose pseudoinverse of a (possibly rectangular) matrix. Singular
/// values at or below rtol * sigma_max are treated as zero.
Eigen::MatrixXcd pinv(const Eigen::MatrixXcd &a, double rtol = kDefaultTol);

/// Principal square root of a PSD operator.
Operator psd_sqrt(const Operator &a, double tol = kDefaultTol);

/// Unitary polar factor: the unitary closest to `a` in Frobenius norm.
/// Rank-deficient inputs get an arbitrary but deterministic completion.
Operator nearest_unitary(const Operator &a);

/// Extends the orthonormal columns of `partial` to an orthonormal basis of
/// C^dim. Returned matrix starts with `partial`.
Operator complete_orthonormal_basis(const Eigen::MatrixXcd &partial,
                                    std::size_t dim);

// -- vectorization and misc --------------------------------------------------

/// Column stacking.
ColumnVector vec(const Operator &a);
Operator unvec(const ColumnVector &v, std::size_t dim);

Operator commutator(const Operator &a, const Operator &b);
Operator anticommutator(const Operator &a, const Operator &b);

/// exp(t * a) by scaling and squaring with a degree-13 Pade approximant.
Operator expm(const Operator &a, double t = 1.0);

} // namespace dissipctl
