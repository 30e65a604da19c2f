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

#include "dissipctl/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

void require_square(const Operator &a, const char *what) {
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(what) + ": operator is " +
                             std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + ", expected square");
    }
}

void require_same_dim(const Operator &a, const Operator &b, const char *what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        throw DimensionError(std::string(what) + ": dimension mismatch " +
                             std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    }
}

// Row-major strides: site 1 is the most significant digit.
std::vector<std::size_t> site_strides(const TensorStructure &s) {
    const auto &dims = s.dims();
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * dims[i];
    }
    return strides;
}

void validate_sites(std::span<const std::size_t> sites,
                    const TensorStructure &structure, const char *what) {
    std::vector<bool> seen(structure.sites(), false);
    for (auto site : sites) {
        if (site == 0 || site > structure.sites()) {
            throw DimensionError(std::string(what) + ": site " +
                                 std::to_string(site) + " out of range 1.." +
                                 std::to_string(structure.sites()));
        }
        if (seen[site - 1]) {
            throw DimensionError(std::string(what) + ": site " +
                                 std::to_string(site) + " repeated");
        }
        seen[site - 1] = true;
    }
}

} // namespace

// -- TensorStructure ---------------------------------------------------------

TensorStructure::TensorStructure(std::vector<std::size_t> dims)
    : dims_(std::move(dims)) {
    for (auto d : dims_) {
        if (d == 0) {
            throw DimensionError("TensorStructure: subsystem dimension 0");
        }
        total_ *= d;
    }
}

TensorStructure TensorStructure::qubits(std::size_t count) {
    return TensorStructure(std::vector<std::size_t>(count, 2));
}

Operator Spectrum::reconstruct() const {
    return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() *
           eigenvectors.adjoint();
}

// -- standard operators ------------------------------------------------------

Operator identity(std::size_t dim) {
    return Operator::Identity(static_cast<Eigen::Index>(dim),
                              static_cast<Eigen::Index>(dim));
}

Operator sigma_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator sigma_y() {
    Operator m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Operator sigma_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator sigma_minus() {
    Operator m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

Operator sigma_plus() { return sigma_minus().adjoint(); }

Operator diagonal(std::span<const double> entries) {
    Operator m = Operator::Zero(static_cast<Eigen::Index>(entries.size()),
                                static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            entries[i];
    }
    return m;
}

Operator diagonal(std::initializer_list<double> entries) {
    return diagonal(std::span<const double>(entries.begin(), entries.size()));
}

// -- predicates --------------------------------------------------------------

double spectral_norm(const Operator &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    if (a.rows() == a.cols() && (a - a.adjoint()).norm() == 0.0) {
        const auto spec = hermitian_eig(a, 0.0);
        return std::max(std::abs(spec.min()), std::abs(spec.max()));
    }
    const Operator gram = hermitian_part(a.adjoint() * a);
    return std::sqrt(std::max(0.0, hermitian_eig(gram, 0.0).max()));
}

bool is_square(const Operator &a) noexcept { return a.rows() == a.cols(); }

bool is_hermitian(const Operator &a, double tol) {
    if (!is_square(a)) {
        return false;
    }
    return (a - a.adjoint()).norm() <= scaled_tolerance(tol, a.norm());
}

bool is_unitary(const Operator &a, double tol) {
    if (!is_square(a)) {
        return false;
    }
    const auto n = static_cast<std::size_t>(a.rows());
    return (a.adjoint() * a - identity(n)).norm() <=
           scaled_tolerance(tol, a.norm());
}

bool is_psd(const Operator &a, double tol) {
    if (!is_hermitian(a, tol)) {
        return false;
    }
    if (a.size() == 0) {
        return true;
    }
    const auto spec = hermitian_eig(hermitian_part(a), tol);
    const double norm = std::max(std::abs(spec.min()), std::abs(spec.max()));
    return spec.min() >= -scaled_tolerance(tol, norm);
}

bool is_projection(const Operator &a, double tol) {
    if (!is_hermitian(a, tol)) {
        return false;
    }
    if ((a * a - a).norm() > scaled_tolerance(tol, a.norm())) {
        return false;
    }
    return is_psd(a, tol);
}

Operator hermitian_part(const Operator &a) {
    return 0.5 * (a + a.adjoint());
}

// -- composition -------------------------------------------------------------

Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

Operator kron(std::span<const Operator> factors) {
    Operator out = Operator::Identity(1, 1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

Operator embed(const Operator &local, std::span<const std::size_t> sites,
               const TensorStructure &structure) {
    require_square(local, "embed");
    validate_sites(sites, structure, "embed");
    const auto &dims = structure.dims();
    std::size_t local_dim = 1;
    for (auto s : sites) {
        local_dim *= dims[s - 1];
    }
    if (static_cast<std::size_t>(local.rows()) != local_dim) {
        throw DimensionError("embed: local operator has dimension " +
                             std::to_string(local.rows()) +
                             " but the named sites span " +
                             std::to_string(local_dim));
    }

    const auto strides = site_strides(structure);
    const std::size_t total = structure.total_dim();
    // local digit weights, first listed site most significant
    std::vector<std::size_t> local_strides(sites.size(), 1);
    for (std::size_t i = sites.size(); i-- > 1;) {
        local_strides[i - 1] = local_strides[i] * dims[sites[i] - 1];
    }

    Operator out = Operator::Zero(static_cast<Eigen::Index>(total),
                                  static_cast<Eigen::Index>(total));
    for (std::size_t row = 0; row < total; ++row) {
        std::size_t local_row = 0;
        std::size_t base = row;
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const std::size_t s = sites[k] - 1;
            const std::size_t digit = (row / strides[s]) % dims[s];
            local_row += digit * local_strides[k];
            base -= digit * strides[s];
        }
        for (std::size_t local_col = 0; local_col < local_dim; ++local_col) {
            const cplx value = local(static_cast<Eigen::Index>(local_row),
                                     static_cast<Eigen::Index>(local_col));
            if (value == cplx(0.0)) {
                continue;
            }
            std::size_t col = base;
            for (std::size_t k = 0; k < sites.size(); ++k) {
                const std::size_t s = sites[k] - 1;
                const std::size_t digit =
                    (local_col / local_strides[k]) % dims[s];
                col += digit * strides[s];
            }
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                value;
        }
    }
    return out;
}

Operator embed(const Operator &local, std::initializer_list<std::size_t> sites,
               const TensorStructure &structure) {
    return embed(local, std::span<const std::size_t>(sites.begin(), sites.size()),
                 structure);
}

Operator partial_trace(const Operator &op, const TensorStructure &structure,
                       std::span<const std::size_t> traced_sites) {
    require_square(op, "partial_trace");
    if (static_cast<std::size_t>(op.rows()) != structure.total_dim()) {
        throw DimensionError("partial_trace: operator dimension does not "
                             "match the tensor structure");
    }
    validate_sites(traced_sites, structure, "partial_trace");
    const auto &dims = structure.dims();
    const auto strides = site_strides(structure);

    std::vector<bool> traced(dims.size(), false);
    for (auto s : traced_sites) {
        traced[s - 1] = true;
    }
    // Offsets of every multi-index over the kept and traced site sets.
    auto offsets = [&](bool want_traced) {
        std::vector<std::size_t> out{0};
        for (std::size_t s = 0; s < dims.size(); ++s) {
            if (traced[s] != want_traced) {
                continue;
            }
            std::vector<std::size_t> next;
            next.reserve(out.size() * dims[s]);
            for (auto o : out) {
                for (std::size_t d = 0; d < dims[s]; ++d) {
                    next.push_back(o + d * strides[s]);
                }
            }
            out = std::move(next);
        }
        return out;
    };
    const auto kept = offsets(false);
    const auto summed = offsets(true);

    const auto m = static_cast<Eigen::Index>(kept.size());
    Operator out = Operator::Zero(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            cplx acc = 0.0;
            for (auto t : summed) {
                acc += op(static_cast<Eigen::Index>(kept[r] + t),
                          static_cast<Eigen::Index>(kept[c] + t));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

// -- spectral helpers --------------------------------------------------------

double min_eigenvalue(const Operator &hermitian) {
    return hermitian_eig(hermitian).min();
}

double max_eigenvalue(const Operator &hermitian) {
    return hermitian_eig(hermitian).max();
}

Eigen::MatrixXcd pinv(const Eigen::MatrixXcd &a, double rtol) {
    if (a.size() == 0) {
        return a.adjoint();
    }
    if (a.rows() < a.cols()) {
        return pinv(a.adjoint(), rtol).adjoint();
    }
    // Right singular vectors from the Gram matrix; singular values from the
    // column norms of a*V, which stay accurate for the null directions.
    const Operator gram = hermitian_part(a.adjoint() * a);
    const auto spec = hermitian_eig(gram, 0.0);
    const Eigen::MatrixXcd image = a * spec.eigenvectors;
    const Eigen::VectorXd sigma = image.colwise().norm().transpose();
    const double sigma_max = sigma.maxCoeff();

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.cols(), a.rows());
    if (sigma_max == 0.0) {
        return out;
    }
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        if (sigma(j) <= rtol * sigma_max) {
            continue;
        }
        out += spec.eigenvectors.col(j) * image.col(j).adjoint() /
               (sigma(j) * sigma(j));
    }
    return out;
}

Operator psd_sqrt(const Operator &a, double tol) {
    require_square(a, "psd_sqrt");
    if (!is_psd(a, tol)) {
        throw PreconditionError("psd_sqrt: operator is not positive "
                                "semidefinite");
    }
    auto spec = hermitian_eig(hermitian_part(a), tol);
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        spec.eigenvalues(i) = std::sqrt(std::max(0.0, spec.eigenvalues(i)));
    }
    return spec.reconstruct();
}

Operator complete_orthonormal_basis(const Eigen::MatrixXcd &partial,
                                    std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd basis(n, n);
    Eigen::Index filled = 0;
    for (Eigen::Index j = 0; j < partial.cols() && filled < n; ++j) {
        basis.col(filled++) = partial.col(j);
    }
    for (Eigen::Index e = 0; e < n && filled < n; ++e) {
        ColumnVector candidate = ColumnVector::Unit(n, e);
        // two Gram-Schmidt passes
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < filled; ++j) {
                candidate -= basis.col(j) * basis.col(j).dot(candidate);
            }
        }
        const double norm = candidate.norm();
        if (norm > 1e-8) {
            basis.col(filled++) = candidate / norm;
        }
    }
    return basis;
}

Operator nearest_unitary(const Operator &a) {
    require_square(a, "nearest_unitary");
    const auto n = a.rows();
    if (n == 0) {
        return a;
    }
    const auto spec = hermitian_eig(hermitian_part(a.adjoint() * a), 0.0);
    const Eigen::MatrixXcd image = a * spec.eigenvectors;
    const Eigen::VectorXd sigma = image.colwise().norm().transpose();
    const double sigma_max = sigma.maxCoeff();

    // Largest singular directions first.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto l, auto r) { return sigma(l) > sigma(r); });

    Eigen::MatrixXcd left(n, 0);
    Eigen::MatrixXcd right(n, n);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Eigen::Index filled = 0;
    for (auto j : order) {
        if (!(sigma(j) > 1e-12 * sigma_max)) {
            continue;
        }
        ColumnVector u = image.col(j) / sigma(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index k = 0; k < left.cols(); ++k) {
                u -= left.col(k) * left.col(k).dot(u);
            }
        }
        const double norm = u.norm();
        if (norm > 1e-8) {
            left.conservativeResize(n, left.cols() + 1);
            left.col(left.cols() - 1) = u / norm;
            right.col(filled++) = spec.eigenvectors.col(j);
            used[static_cast<std::size_t>(j)] = true;
        }
    }
    for (auto j : order) {
        if (!used[static_cast<std::size_t>(j)]) {
            right.col(filled++) = spec.eigenvectors.col(j);
        }
    }
    const Eigen::MatrixXcd left_full =
        complete_orthonormal_basis(left, static_cast<std::size_t>(n));
    return left_full * right.adjoint();
}

// -- vectorization and misc --------------------------------------------------

ColumnVector vec(const Operator &a) {
    return Eigen::Map<const ColumnVector>(a.data(), a.size());
}

Operator unvec(const ColumnVector &v, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (v.size() != n * n) {
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                             " is not " + std::to_string(dim) + "^2");
    }
    return Eigen::Map<const Operator>(v.data(), n, n);
}

Operator commutator(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Operator anticommutator(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

Operator expm(const Operator &a, double t) {
    require_square(a, "expm");
    if (a.size() == 0) {
        return a;
    }
    const Operator scaled = a * t;
    return scaled.exp();
}

} // namespace dissipctl
