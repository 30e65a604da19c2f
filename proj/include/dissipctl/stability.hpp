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
 * @file stability.hpp
 * Certificates of ground-state stability for a candidate Lyapunov operator V:
 *
 *  - Lyapunov operator: V >= 0 with smallest eigenvalue 0, and G(V) <= 0.
 *  - Condition ES: G(V) <= -c V for some c > 0 (exponential convergence).
 *  - Condition DS: G(V) <= 0 and D(V) >= c V for some c > 0.
 *
 * Best constants are found by bisection on PSD tests.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dissipctl/open_system.hpp"

namespace dissipctl {

struct ConstantSearchOptions {
    double c_min = 1e-8;
    int iterations = 40;
    double tol = kDefaultTol;
};

/// Largest c in (c_min, c_upper] with `base - c * direction` PSD within tol,
/// found by bisection. `direction` must be PSD so feasibility is monotone.
std::optional<double> largest_feasible_constant(const Operator &base,
                                                const Operator &direction,
                                                double c_upper,
                                                const ConstantSearchOptions &options = {});

/// -(largest eigenvalue) of a Hermitian operator; >= 0 iff it is NSD.
double nsd_margin(const Operator &hermitian);
/// Smallest eigenvalue; >= 0 iff PSD.
double psd_margin(const Operator &hermitian);

struct LyapunovVerdict {
    bool is_lyapunov = false;
    double min_eigenvalue = 0.0;     ///< of V
    double generator_margin = 0.0;   ///< -(max eigenvalue of G(V))
    std::vector<std::string> failures;
};

/// Throws NotHermitianError for non-Hermitian v.
LyapunovVerdict is_lyapunov_operator(const Operator &v, const LindbladModel &model,
                                     double tol = kDefaultTol);

/// Outcome of a best-constant search.
struct ConditionResult {
    std::optional<double> constant;
    double margin = 0.0;  ///< eigenvalue slack of the inequality at `constant`
    std::string diagnostic;

    explicit operator bool() const noexcept { return constant.has_value(); }
};

/// Largest c with G(v) + c v <= 0. Precondition: v Hermitian, v >= 0 with
/// zero smallest eigenvalue (PreconditionError otherwise).
ConditionResult check_condition_es(const Operator &v, const LindbladModel &model,
                                   const ConstantSearchOptions &options = {});

/// G(v) <= 0 and the largest c with D(v) - c v >= 0.
ConditionResult check_condition_ds(const Operator &v, const LindbladModel &model,
                                   const ConstantSearchOptions &options = {});

/// Largest c with D(v) - c v^2 >= 0.
ConditionResult check_lemma_d_v2(const Operator &v, const LindbladModel &model,
                                 const ConstantSearchOptions &options = {});

struct GroundSpace {
    double energy = 0.0;
    Operator projector;
    std::size_t dimension = 0;
};

/// Eigenvalues within degeneracy_tol * max(1, ||v||) of the minimum are grouped.
GroundSpace ground_space(const Operator &v, double degeneracy_tol = 1e-8);

/// Every ground state of sum(terms) is a ground state of each term; for PSD
/// terms this is d(sum) == 0. Throws PreconditionError for non-PSD terms.
bool frustration_free_check(const std::vector<Operator> &terms,
                            double tol = kDefaultTol);

struct SimulationCheck {
    std::size_t runs = 0;
    double t_final = 0.0;
    double max_final_value = 0.0;     ///< largest <V> at t_final
    bool converged = false;           ///< <V> below threshold over the final 10%
    bool monotone = true;             ///< <V>_t non-increasing within tolerance
    std::optional<bool> within_exponential_envelope; ///< set when ES holds
};

struct CertifyOptions {
    bool simulate = false;
    std::size_t initial_states = 20;  ///< maximally mixed + (n-1) random pure
    std::uint64_t seed = 0;
    double t_final = 60.0;
    double dt = 0.05;
    double convergence_threshold = 1e-6;
    double envelope_slack = 1e-6;
    std::size_t max_dim = 64;
    ConstantSearchOptions search{};
    IntegratorOptions integrator{};
};

struct StabilityReport {
    LyapunovVerdict lyapunov;
    ConditionResult es;
    ConditionResult ds;
    double ground_energy = 0.0;
    std::map<std::string, double> margins;
    /// "exponential", "asymptotic only", "trivial" or "none"
    std::string convergence;
    /// The invariant-set criterion quantifies over states; never decided here.
    std::string invariant_set_criterion = "not checked - state-dependent";
    std::optional<SimulationCheck> simulation;

    [[nodiscard]] bool certified() const;
};

/// Runs the Lyapunov, ES and DS checks and, optionally, simulations from a
/// set of initial states. A v that is not a Lyapunov operator yields an
/// uncertified report rather than an exception. Throws BudgetError when a
/// simulation is requested above options.max_dim.
StabilityReport certify_ground_state_stability(const Operator &v,
                                               const LindbladModel &model,
                                               const CertifyOptions &options = {});

} // namespace dissipctl
