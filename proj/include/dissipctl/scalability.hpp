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
 * @file scalability.hpp
 * Aggregation of ground-state certificates for W = sum_lambda W_lambda.
 *
 * Per-term conditions for term W and its assigned channel L_k:
 *   gl   G(W)_{L_k} <= -c W
 *   gl1  G(W)_{L_k} <= 0 and D(W)_{L_k} >= c W
 *   sd1  sum_{k' != k} G(W)_{L_k'} <= 0          (scalability condition)
 *
 * Incremental conditions grow W~_n = W_1 + ... + W_n by one term with extra
 * couplings L_{M+1..K}; d_n is the smallest eigenvalue of W~_n.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dissipctl/open_system.hpp"
#include "dissipctl/stability.hpp"

namespace dissipctl {

struct AggregateSpec {
    TensorStructure structure;
    std::vector<Operator> terms;
    std::vector<Operator> couplings;
    /// assignment[lambda] = index of the stabilising coupling (0-based).
    std::optional<std::vector<std::size_t>> assignment;
    std::vector<std::string> labels;  ///< defaults to W1, W2, ...
    std::optional<Operator> hamiltonian;

    /// Checks dimensions, Hermiticity and PSD terms; throws on violation.
    void validate(double tol = kDefaultTol) const;
    /// Explicit assignment, else the identity map when K = N. Throws
    /// PreconditionError otherwise.
    [[nodiscard]] std::vector<std::size_t> resolved_assignment() const;
    [[nodiscard]] std::string label(std::size_t lambda) const;
    [[nodiscard]] Operator total() const;
    [[nodiscard]] LindbladModel model() const;
};

struct ScalabilityCheck {
    bool holds = false;
    double margin = 0.0;  ///< -(largest eigenvalue) of the summed generator
};

/// sum over k' != k of G(W_lambda)_{L_k'} <= 0.
ScalabilityCheck check_scalability_condition(const AggregateSpec &spec,
                                             std::size_t lambda, std::size_t k,
                                             double tol = kDefaultTol);

struct TermVerdict {
    std::size_t term = 0;
    std::size_t channel = 0;
    std::optional<double> c;   ///< best constant of gl (ES) or gl1 (DS)
    double local_margin = 0.0; ///< slack of gl / gl1 at c (or at c_min)
    bool local = false;
    ScalabilityCheck scalability;
};

struct AggregateReport {
    std::string theorem;  ///< "ES" or "DS"
    std::vector<TermVerdict> terms;
    bool stable = false;
    bool w_is_lyapunov = false;
    std::optional<double> min_constant;
    /// ||D(W) - sum_lambda D(W_lambda)||_F
    double dissipation_cross_norm = 0.0;
};

AggregateReport check_theorem_es_aggregation(const AggregateSpec &spec,
                                             const ConstantSearchOptions &options = {});
AggregateReport check_theorem_ds_aggregation(const AggregateSpec &spec,
                                             const ConstantSearchOptions &options = {});

struct IncrementalReport {
    bool holds = false;
    double margin = 0.0;        ///< thmre1, or min of thmre2 / thmre3
    std::optional<double> dissipative_margin; ///< thmre3 (DS only)
    double generator_margin = 0.0;            ///< thmre1 or thmre2
    double d_n = 0.0;
    double d_next = 0.0;
    bool ladder_ok = true;      ///< d_{n+1} >= d_n
    std::optional<double> prior_c; ///< certificate of W~_n under the old couplings
    double cross_term_norm = 0.0;  ///< ||2 sum_k Re([L_k^dag, W~_n][W_{n+1}, L_k])||_F
};

/// Growth of W~_n (n terms, 1-based count) by W_{n+1} with the extra
/// couplings. spec.couplings are the M couplings certifying W~_n; a missing
/// certificate raises PreconditionError.
IncrementalReport check_incremental_es(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, double tol = kDefaultTol);
IncrementalReport check_incremental_ds(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, double tol = kDefaultTol);

enum class ConditionMode { ES, DS };

struct CorollaryReport {
    bool holds = false;
    double margin = 0.0;
    bool theorem_holds = false;  ///< the d-dependent condition it implies
    double theorem_margin = 0.0;
};

/// d-independent forms (rthmre1 / rthmre3 with thmre2).
CorollaryReport check_corollary_d_free(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, ConditionMode mode,
                                       double tol = kDefaultTol);

struct CommutingReport {
    bool holds = false;
    bool terms_commute = false;
    /// (coupling, term) pairs with [U_k, W_lambda] != 0 for k not assigned to lambda
    std::vector<std::pair<std::size_t, std::size_t>> noncommuting;
    std::vector<std::pair<std::size_t, std::size_t>> noncommuting_terms;
    std::vector<cplx> scales;  ///< s with L_k = s U_k W_lambda
    std::vector<TermVerdict> local;
};

/// Couplings of the form L_k = s U_k W_lambda(k). Throws PreconditionError
/// when a coupling is not of this form.
CommutingReport check_corollary_commuting(const AggregateSpec &spec,
                                          const std::vector<Operator> &unitaries,
                                          const ConstantSearchOptions &options = {});

struct AggregateTrajectory {
    Trajectory trajectory;       ///< observables "W" then one per term
    double additivity_error = 0.0; ///< max |<W> - sum <W_lambda>|
};

inline constexpr std::size_t kAggregateSimulationCap = 64;

AggregateTrajectory simulate_aggregate(const AggregateSpec &spec,
                                       const DensityState &rho0, double t_final,
                                       double dt,
                                       std::size_t max_dim = kAggregateSimulationCap,
                                       const IntegratorOptions &options = {});

} // namespace dissipctl
