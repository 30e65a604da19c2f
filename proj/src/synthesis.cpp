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


#include "dissipctl/synthesis.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

void require_square_hermitian(const Operator &v, const char *what) {
    if (!is_square(v) || v.rows() == 0) {
        throw DimensionError(std::string(what) + ": operator is not square");
    }
    if (!is_hermitian(v)) {
        throw NotHermitianError(std::string(what) + ": v is not Hermitian");
    }
}

void require_rate(double c, double upper, const char *what) {
    if (!(c > 0.0) || c > upper) {
        throw PreconditionError(std::string(what) + ": c = " + std::to_string(c) +
                                " outside (0, " + std::to_string(upper) + "]");
    }
}

double constraint_residual(const Operator &v, const Operator &u, const Operator &q,
                           double c) {
    return (v * u * v - std::sqrt(1.0 - c) * q).norm();
}

SynthesisResult finish(const Operator &v, const Operator &q, double c, Operator u,
                       double tol) {
    const Operator phased = normalize_phase(u, tol);
    if (constraint_residual(v, phased, q, c) <=
        constraint_residual(v, u, q, c) + tol) {
        u = phased;
    }
    SynthesisResult out;
    out.c = c;
    out.coupling = u * v;
    out.residuals.unitarity =
        (u.adjoint() * u - Operator::Identity(u.rows(), u.cols())).norm();
    out.residuals.constraint = constraint_residual(v, u, q, c);
    out.residuals.es_margin = min_eigenvalue(
        hermitian_part(-(generator_single_channel(v, out.coupling) + c * v)));
    out.unitary = std::move(u);
    return out;
}

Operator random_unitary(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Operator g(n, n);
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            g(i, j) = cplx(gauss(rng), gauss(rng));
        }
    }
    return nearest_unitary(g);
}

} // namespace

Operator BilinearSystem::assemble(const ColumnVector &x) const {
    Operator u(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        u.col(static_cast<Eigen::Index>(j)) = a[j] * x + b[j];
    }
    return u;
}

double bilinear_residual(const BilinearSystem &system, const ColumnVector &x) {
    const Operator u = system.assemble(x);
    const Operator gram = u.adjoint() * u - Operator::Identity(u.rows(), u.cols());
    return gram.cwiseAbs().maxCoeff();
}

std::optional<ColumnVector> solve_bilinear(const BilinearSystem &system,
                                           const BilinearOptions &options,
                                           double *best_residual) {
    const auto n = static_cast<Eigen::Index>(system.dim);
    if (system.a.size() != system.dim || system.b.size() != system.dim) {
        throw DimensionError("solve_bilinear: expected one block per column");
    }
    Eigen::MatrixXcd a(n * n, n * n);
    ColumnVector b(n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.middleRows(j * n, n) = system.a[static_cast<std::size_t>(j)];
        b.segment(j * n, n) = system.b[static_cast<std::size_t>(j)];
    }

    double best = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(options.seed);
    for (std::size_t restart = 0; restart < options.restarts; ++restart) {
        Operator u = random_unitary(system.dim, rng);
        double checkpoint = std::numeric_limits<double>::infinity();
        double restart_best = std::numeric_limits<double>::infinity();
        ColumnVector restart_x;
        for (std::size_t it = 0; it < options.iterations; ++it) {
            const ColumnVector x = a * vec(u);
            const Operator candidate = unvec(b + x, system.dim);
            const double res =
                (candidate.adjoint() * candidate - Operator::Identity(n, n))
                    .cwiseAbs()
                    .maxCoeff();
            if (res < restart_best) {
                restart_best = res;
                restart_x = x;
            }
            // Iterate past the acceptance tolerance while it keeps paying off.
            if (res <= 1e-3 * options.tol) {
                break;
            }
            if (it % 50 == 49) {
                if (res > 0.99 * checkpoint) {
                    break;
                }
                checkpoint = res;
            }
            u = nearest_unitary(candidate);
        }
        best = std::min(best, restart_best);
        if (restart_best <= options.tol) {
            if (best_residual != nullptr) {
                *best_residual = restart_best;
            }
            return restart_x;
        }
    }
    if (best_residual != nullptr) {
        *best_residual = best;
    }
    return std::nullopt;
}

SynthesisResult synthesize_projection(const Operator &v, double c, double tol) {
    require_square_hermitian(v, "synthesize_projection");
    require_rate(c, 1.0, "synthesize_projection");
    if (!is_projection(v, tol)) {
        throw PreconditionError("synthesize_projection: v is not a projection");
    }
    const auto n = v.rows();
    const Spectrum spec = hermitian_eig(v, 0.0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (spec.eigenvalues(i) > 0.5) {
            ++r;
        }
    }
    if (r == 0) {
        return finish(v, v, c, Operator::Identity(n, n), tol);
    }
    if (2 * r > n) {
        throw InfeasibleError("synthesize_projection: rank " + std::to_string(r) +
                              " exceeds n - rank = " + std::to_string(n - r) +
                              "; no unitary maps the range of v into its kernel");
    }

    // Eigenvalues ascend, so the range of v occupies the last r columns.
    Operator basis(n, n);
    basis.leftCols(r) = spec.eigenvectors.rightCols(r);
    basis.rightCols(n - r) = spec.eigenvectors.leftCols(n - r);

    const double s = std::sqrt(1.0 - c);
    const double t = std::sqrt(c);
    Operator dilation = Operator::Identity(n, n);
    dilation.block(0, 0, r, r) *= s;
    dilation.block(r, r, r, r) *= -s;
    dilation.block(0, r, r, r) = t * Operator::Identity(r, r);
    dilation.block(r, 0, r, r) = t * Operator::Identity(r, r);

    return finish(v, v, c, basis * dilation * basis.adjoint(), tol);
}

BilinearSystem assemble_bilinear_system(const Operator &v, const Operator &q,
                                        double c, double tol) {
    const auto n = v.rows();
    const Eigen::MatrixXcd m = kron(Operator(v.transpose()), v);
    const Eigen::MatrixXcd mp = pinv(m, tol);
    const ColumnVector target = vec(std::sqrt(1.0 - c) * q);
    const ColumnVector particular = mp * target;
    if ((m * particular - target).norm() > scaled_tolerance(tol, target.norm())) {
        throw InfeasibleError(
            "synthesize_pinv: sqrt(1 - c) Q lies outside the range of V^T (x) V");
    }
    const Eigen::MatrixXcd homogeneous =
        Eigen::MatrixXcd::Identity(n * n, n * n) - mp * m;

    BilinearSystem system;
    system.dim = static_cast<std::size_t>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        system.a.emplace_back(homogeneous.middleRows(j * n, n));
        system.b.emplace_back(particular.segment(j * n, n));
    }
    return system;
}

SynthesisResult synthesize_pinv(const Operator &v, const Operator &q, double c,
                                const BilinearOptions &options) {
    require_square_hermitian(v, "synthesize_pinv");
    require_rate(c, 1.0, "synthesize_pinv");
    if (q.rows() != v.rows() || q.cols() != v.cols()) {
        throw DimensionError("synthesize_pinv: q and v differ in shape");
    }
    if (static_cast<std::size_t>(v.rows()) > kPinvMaxDim) {
        throw BudgetError("synthesize_pinv: dimension " + std::to_string(v.rows()) +
                          " exceeds " + std::to_string(kPinvMaxDim));
    }
    if (!is_psd(v, options.tol)) {
        throw PreconditionError("synthesize_pinv: v is not positive semidefinite");
    }
    if ((q.adjoint() * q - v).norm() > scaled_tolerance(options.tol, v.norm())) {
        throw PreconditionError("synthesize_pinv: q^dag q differs from v");
    }

    const BilinearSystem system = assemble_bilinear_system(v, q, c, options.tol);
    double best = 0.0;
    const auto x = solve_bilinear(system, options, &best);
    if (!x) {
        throw SolverBudgetError("synthesize_pinv: no unitary found within budget "
                                "(best residual " + std::to_string(best) + ")",
                                best);
    }
    return finish(v, q, c, system.assemble(*x), options.tol);
}

MultiChannelResult synthesize_multi(const Operator &v, std::size_t channels,
                                    double c, const BilinearOptions &options) {
    require_square_hermitian(v, "synthesize_multi");
    if (channels == 0) {
        throw PreconditionError("synthesize_multi: at least one channel required");
    }
    const auto k = static_cast<double>(channels);
    require_rate(c, k, "synthesize_multi");
    if (!is_projection(v, options.tol)) {
        throw PreconditionError("synthesize_multi: v is not a projection");
    }

    MultiChannelResult out;
    out.c = c;
    if (channels == 1) {
        out.channels.push_back(synthesize_projection(v, c, options.tol));
    } else {
        // (K - c) V = sum_k Q_k^dag Q_k with Q_k = sqrt((K - c) / K) V.
        for (std::size_t i = 0; i < channels; ++i) {
            BilinearOptions per = options;
            per.seed = options.seed + i;
            out.channels.push_back(synthesize_pinv(v, v, c / k, per));
        }
    }
    Operator total = c * v;
    for (const auto &ch : out.channels) {
        total += generator_single_channel(v, ch.coupling);
    }
    out.es_margin = min_eigenvalue(hermitian_part(-total));
    return out;
}

Factorization check_factorizable(const Operator &l, const Operator &v, double tol) {
    if (!is_square(l) || !is_square(v) || l.rows() != v.rows()) {
        throw DimensionError("check_factorizable: l and v must be square of equal size");
    }
    const auto n = v.rows();
    const Operator vv = v.adjoint() * v;
    const Operator diff = hermitian_part(l.adjoint() * l - vv);

    Factorization out;
    out.residual = diff.norm();
    if (out.residual > scaled_tolerance(tol, vv.norm())) {
        const Spectrum spec = hermitian_eig(diff, 0.0);
        const Eigen::Index idx = std::abs(spec.min()) >= std::abs(spec.max())
                                     ? 0
                                     : spec.eigenvalues.size() - 1;
        out.witness = spec.eigenvectors.col(idx);
        return out;
    }

    const Spectrum spec = hermitian_eig(hermitian_part(vv), 0.0);
    const double sigma_max = std::sqrt(std::max(spec.max(), 0.0));
    const double cut = std::sqrt(tol) * std::max(1.0, sigma_max);
    Eigen::MatrixXcd from(n, 0);
    Eigen::MatrixXcd to(n, 0);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        const double sigma = std::sqrt(std::max(spec.eigenvalues(j), 0.0));
        if (sigma <= cut) {
            break;
        }
        from.conservativeResize(Eigen::NoChange, from.cols() + 1);
        to.conservativeResize(Eigen::NoChange, to.cols() + 1);
        from.rightCols(1) = v * spec.eigenvectors.col(j) / sigma;
        to.rightCols(1) = l * spec.eigenvectors.col(j) / sigma;
    }
    const Operator u = complete_orthonormal_basis(to, static_cast<std::size_t>(n)) *
                       complete_orthonormal_basis(from, static_cast<std::size_t>(n))
                           .adjoint();
    out.factorizable = true;
    out.unitary = nearest_unitary(u);
    return out;
}

bool verify_v2_dominated(const Operator &v, const Operator &u, double c, double tol) {
    require_square_hermitian(v, "verify_v2_dominated");
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw DimensionError("verify_v2_dominated: u and v differ in shape");
    }
    const Operator v2 = v * v;
    if (!is_psd(v, tol) || !is_psd(hermitian_part(v2 - v), tol)) {
        throw PreconditionError("verify_v2_dominated: requires v >= 0 and v^2 >= v");
    }
    if (!is_unitary(u, tol)) {
        throw PreconditionError("verify_v2_dominated: u is not unitary");
    }
    const Operator chain = v * u.adjoint() * v2 * u * v;
    const Operator slack = hermitian_part((1.0 - c) * v - chain);
    return min_eigenvalue(slack) >=
           -scaled_tolerance(tol, std::max(spectral_norm(chain), spectral_norm(v)));
}

Operator normalize_phase(const Operator &u, double tol) {
    if (u.size() == 0) {
        return u;
    }
    const double cut = scaled_tolerance(tol, u.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double mag = std::abs(u(i, j));
            if (mag > cut) {
                return u * (std::conj(u(i, j)) / mag);
            }
        }
    }
    return u;
}

} // namespace dissipctl
