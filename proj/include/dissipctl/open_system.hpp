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
 * @file open_system.hpp
 * Lindblad dynamics: the Heisenberg-picture generator
 *
 *     G(X) = -i[X, H] + sum_k ( L_k^dag X L_k - 1/2 {L_k^dag L_k, X} ),
 *
 * the dissipation functional D(X) = sum_k [L_k^dag, X][X, L_k], the
 * Schrodinger-picture master equation and its numerical integration.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dissipctl/operator_algebra.hpp"

namespace dissipctl {

/// Hamiltonian plus coupling operators on a composite space (hbar = 1).
class LindbladModel {
  public:
    /// Throws DimensionError / NotHermitianError on invalid input.
    LindbladModel(TensorStructure structure, Operator hamiltonian,
                  std::vector<Operator> couplings, double tol = kDefaultTol);

    /// H = 0.
    static LindbladModel dissipative(TensorStructure structure,
                                     std::vector<Operator> couplings);

    [[nodiscard]] const TensorStructure &structure() const noexcept {
        return structure_;
    }
    [[nodiscard]] const Operator &hamiltonian() const noexcept {
        return hamiltonian_;
    }
    [[nodiscard]] const std::vector<Operator> &couplings() const noexcept {
        return couplings_;
    }
    [[nodiscard]] std::size_t dim() const noexcept {
        return structure_.total_dim();
    }

    [[nodiscard]] LindbladModel with_couplings(std::vector<Operator> couplings) const;

  private:
    TensorStructure structure_;
    Operator hamiltonian_;
    std::vector<Operator> couplings_;
};

/// Unit-trace, Hermitian, PSD operator.
class DensityState {
  public:
    /// Validates; throws PreconditionError naming the failed property.
    explicit DensityState(Operator rho, double tol = kDefaultTol);

    static DensityState maximally_mixed(std::size_t dim);
    static DensityState basis(std::size_t dim, std::size_t index);
    /// |psi><psi| for a (not necessarily normalised) nonzero vector.
    static DensityState pure(const ColumnVector &psi);
    /// Haar-random pure state.
    static DensityState random_pure(std::size_t dim, std::mt19937_64 &rng);

    [[nodiscard]] const Operator &matrix() const noexcept { return rho_; }
    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(rho_.rows());
    }
    [[nodiscard]] double purity() const;

  private:
    Operator rho_;
};

struct NamedObservable {
    std::string name;
    Operator op;
};

/// Sampled solution of the master equation.
class Trajectory {
  public:
    struct Series {
        std::string name;
        std::vector<double> values;
    };

    Trajectory() = default;
    explicit Trajectory(std::vector<NamedObservable> observables);

    void append(double t, DensityState state);

    [[nodiscard]] const std::vector<double> &times() const noexcept {
        return times_;
    }
    [[nodiscard]] const std::vector<DensityState> &states() const noexcept {
        return states_;
    }
    [[nodiscard]] const std::vector<Series> &observables() const noexcept {
        return series_;
    }
    /// Throws std::out_of_range for unknown names.
    [[nodiscard]] const std::vector<double> &series(const std::string &name) const;
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }

    /// CSV: `t,<names...>,trace,purity`, 15 significant digits.
    void write_csv(std::ostream &os) const;

  private:
    std::vector<NamedObservable> observables_;
    std::vector<double> times_;
    std::vector<DensityState> states_;
    std::vector<Series> series_;
};

// -- generator and friends ---------------------------------------------------

/// G(x)_L = L^dag x L - 1/2 L^dag L x - 1/2 x L^dag L
Operator generator_single_channel(const Operator &x, const Operator &l);

/// Full generator. With `assume_commuting`, [x, H] is verified to vanish
/// (PreconditionError otherwise) and the Hamiltonian term is omitted.
Operator generator(const Operator &x, const LindbladModel &model,
                   bool assume_commuting = false, double tol = kDefaultTol);

/// [L^dag, x][x, L] for one channel.
Operator dissipation_single_channel(const Operator &x, const Operator &l);

/// D(x) = sum_k [L_k^dag, x][x, L_k]
Operator dissipation_functional(const Operator &x, const LindbladModel &model,
                                double tol = kDefaultTol);

/// Right-hand side of the master equation at rho.
Operator master_equation_rhs(const LindbladModel &model, const Operator &rho);

/// Superoperator acting on column-stacked density matrices.
Eigen::MatrixXcd liouvillian(const LindbladModel &model);

/// ||rhs(rho)||_F divided by the bound 2||H||_F + 2 sum ||L_k||_F^2 on the
/// superoperator norm. Zero for stationary states.
double stationarity_residual(const LindbladModel &model, const Operator &rho);

inline constexpr double kStationarityThreshold = 1e-8;

bool is_stationary(const LindbladModel &model, const DensityState &rho);

/// tr(x rho); throws NotHermitianError / DimensionError.
double expectation(const Operator &x, const DensityState &rho,
                   double tol = kDefaultTol);

/// 1/2 ||a - b||_1
double trace_distance(const Operator &a, const Operator &b);

// -- integration -------------------------------------------------------------

struct IntegratorOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    /// Emitted states are re-validated with 10x this tolerance.
    double state_tol = kDefaultTol;
    std::size_t max_steps = 5'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of the master equation with
/// post-step Hermitisation. Samples every `dt_hint` (and at t_final).
/// Throws IntegratorError on step-size underflow or invalid states,
/// BudgetError when max_steps is exhausted.
Trajectory evolve(const LindbladModel &model, const DensityState &rho0,
                  double t_final, double dt_hint,
                  std::vector<NamedObservable> observables = {},
                  const IntegratorOptions &options = {});

inline constexpr std::size_t kExactPropagationMaxDim = 16;

/// exp(Lambda t) vec(rho0); the independent reference path for small dims.
Operator propagate_exact(const LindbladModel &model, const Operator &rho0,
                         double t);

// -- adiabatic elimination ---------------------------------------------------

struct AdiabaticRow {
    double k;
    double error; ///< sup over sampled t of the trace distance
};

struct AdiabaticTable {
    std::vector<AdiabaticRow> rows;
    double effective_scale;      ///< limit coupling is effective_scale * L
    bool monotone_top_half;      ///< errors non-increasing over the top half
};

struct AdiabaticOptions {
    std::optional<DensityState> rho0; ///< system state; default basis state 0
    std::size_t samples = 200;
    std::size_t max_joint_dim = 64;
    IntegratorOptions integrator{};
};

/// Limit coupling coefficient of the eliminated ancilla: -2 Omega / sqrt(gamma).
double eliminated_coupling_scale(double omega, double gamma);

/// Compares the ancilla-assisted model
///     H_k = k Omega (L (x) s+ + L^dag (x) s-) + H_S (x) I,  L_k = k sqrt(gamma) (I (x) s-)
/// (ancilla starting in its ground state, traced out) with the limit model
/// H = H_S, L = eliminated_coupling_scale(Omega, gamma) L.
AdiabaticTable adiabatic_limit_check(const LindbladModel &model, double omega,
                                     double gamma,
                                     const std::vector<double> &k_list,
                                     double t_final,
                                     const AdiabaticOptions &options = {});

} // namespace dissipctl
