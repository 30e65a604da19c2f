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
 * @file synthesis.hpp
 * Coupling design L = U V for a candidate Lyapunov operator V. Condition ES
 * with a single channel reduces to V U^dag V U V <= (1 - c) V, solved either
 * by a block dilation in the eigenbasis of a projection V or through the
 * linear system V U V = sqrt(1 - c) Q plus unitarity of U.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dissipctl/open_system.hpp"

namespace dissipctl {

struct SynthesisResiduals {
    double unitarity = 0.0;   ///< ||U^dag U - I||_F
    double constraint = 0.0;  ///< ||V U V - sqrt(1 - c) Q||_F
    double es_margin = 0.0;   ///< smallest eigenvalue of -(G(V)_L + c V)
};

struct SynthesisResult {
    Operator unitary;
    Operator coupling;  ///< unitary * v
    double c = 0.0;
    SynthesisResiduals residuals;
};

/// Column j of U is a[j] * x + b[j].
struct BilinearSystem {
    std::size_t dim = 0;
    std::vector<Eigen::MatrixXcd> a;  ///< dim x dim^2 blocks
    std::vector<ColumnVector> b;      ///< dim-vectors

    [[nodiscard]] Operator assemble(const ColumnVector &x) const;
};

struct BilinearOptions {
    std::size_t restarts = 32;
    std::size_t iterations = 4000;  ///< per restart
    std::uint64_t seed = 0;
    double tol = kDefaultTol;
};

/// Largest |x^dag a_i^dag a_j x + x^dag a_i^dag b_j + b_i^dag a_j x + b_i^dag b_j - delta_ij|.
double bilinear_residual(const BilinearSystem &system, const ColumnVector &x);

/// Alternating projection between the affine set {b + A x} and the unitary
/// group, with seeded random restarts. Returns the first restart (in order)
/// reaching the tolerance; none when the budget runs out.
std::optional<ColumnVector> solve_bilinear(const BilinearSystem &system,
                                           const BilinearOptions &options = {},
                                           double *best_residual = nullptr);

/// Eigenbasis dilation for a projection v of rank r. Throws InfeasibleError
/// when r > n - r and PreconditionError for c outside (0, 1] or a
/// non-projection v. v = 0 gives U = I.
SynthesisResult synthesize_projection(const Operator &v, double c,
                                      double tol = kDefaultTol);

inline constexpr std::size_t kPinvMaxDim = 16;

/// General solution of (V^T (x) V) vec(U) = vec(sqrt(1 - c) Q) followed by the
/// bilinear unitarity system. Throws InfeasibleError for an inconsistent
/// linear system, SolverBudgetError when no unitary is found and BudgetError
/// above kPinvMaxDim.
SynthesisResult synthesize_pinv(const Operator &v, const Operator &q, double c,
                                const BilinearOptions &options = {});

/// The system solved by synthesize_pinv, exposed for inspection.
BilinearSystem assemble_bilinear_system(const Operator &v, const Operator &q,
                                        double c, double tol = kDefaultTol);

struct MultiChannelResult {
    std::vector<SynthesisResult> channels;
    double c = 0.0;
    double es_margin = 0.0;  ///< smallest eigenvalue of -(sum_k G(V)_{L_k} + c V)
};

/// K channels for a projection v with (K - c) V split equally between them.
MultiChannelResult synthesize_multi(const Operator &v, std::size_t channels,
                                    double c, const BilinearOptions &options = {});

struct Factorization {
    bool factorizable = false;
    std::optional<Operator> unitary;   ///< set when factorizable
    std::optional<ColumnVector> witness; ///< direction with ||L psi|| != ||V psi||
    double residual = 0.0;             ///< ||L^dag L - V^dag V||_F
};

/// Decides whether l = U v for some unitary U.
Factorization check_factorizable(const Operator &l, const Operator &v,
                                 double tol = kDefaultTol);

/// V U^dag V^2 U V <= (1 - c) V. Requires v^2 >= v and u unitary
/// (PreconditionError otherwise).
bool verify_v2_dominated(const Operator &v, const Operator &u, double c,
                         double tol = kDefaultTol);

/// Multiplies u by a global phase so its first nonzero entry, in column-major
/// order, is real and non-negative.
Operator normalize_phase(const Operator &u, double tol = kDefaultTol);

} // namespace dissipctl
