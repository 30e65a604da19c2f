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


#include "dissipctl/scalability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

void require_shape(const Operator &op, std::size_t dim, const std::string &what) {
    if (static_cast<std::size_t>(op.rows()) != dim ||
        static_cast<std::size_t>(op.cols()) != dim) {
        throw DimensionError(what + ": expected " + std::to_string(dim) + "x" +
                             std::to_string(dim) + ", got " +
                             std::to_string(op.rows()) + "x" +
                             std::to_string(op.cols()));
    }
}

bool nsd_within(double margin, double scale, double tol) {
    return margin >= -scaled_tolerance(tol, scale);
}

// Smallest eigenvalue of a PSD w above the zero threshold; 0 when w vanishes.
double smallest_positive(const Operator &w, double tol) {
    const Spectrum spec = hermitian_eig(w, 0.0);
    const double cut = scaled_tolerance(tol, std::abs(spec.max()));
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues(i) > cut) {
            return spec.eigenvalues(i);
        }
    }
    return 0.0;
}

TermVerdict local_es(const Operator &w, const Operator &l,
                     const ConstantSearchOptions &options) {
    TermVerdict out;
    const Operator g = hermitian_part(generator_single_channel(w, l));
    const double lambda = smallest_positive(w, options.tol);
    if (lambda == 0.0) {
        out.local = true;
        out.local_margin = nsd_margin(g);
        return out;
    }
    out.c = largest_feasible_constant(-g, w, 2.0 * spectral_norm(g) / lambda, options);
    out.local = out.c.has_value();
    out.local_margin = psd_margin(-g - out.c.value_or(options.c_min) * w);
    return out;
}

TermVerdict local_ds(const Operator &w, const Operator &l,
                     const ConstantSearchOptions &options) {
    TermVerdict out;
    const Operator g = hermitian_part(generator_single_channel(w, l));
    const double g_margin = nsd_margin(g);
    const double lambda = smallest_positive(w, options.tol);
    if (lambda == 0.0) {
        out.local = true;
        out.local_margin = g_margin;
        return out;
    }
    if (!nsd_within(g_margin, spectral_norm(g), options.tol)) {
        out.local_margin = g_margin;
        return out;
    }
    const Operator d = hermitian_part(dissipation_single_channel(w, l));
    out.c = largest_feasible_constant(d, w, 2.0 * spectral_norm(d) / lambda, options);
    out.local = out.c.has_value();
    out.local_margin =
        std::min(g_margin, psd_margin(d - out.c.value_or(options.c_min) * w));
    return out;
}

AggregateReport aggregate(const AggregateSpec &spec, const ConstantSearchOptions &options,
                          bool dissipative) {
    spec.validate(options.tol);
    const auto assignment = spec.resolved_assignment();

    AggregateReport report;
    report.theorem = dissipative ? "DS" : "ES";
    report.stable = true;
    for (std::size_t lambda = 0; lambda < spec.terms.size(); ++lambda) {
        const std::size_t k = assignment[lambda];
        TermVerdict verdict = dissipative
                                  ? local_ds(spec.terms[lambda], spec.couplings[k], options)
                                  : local_es(spec.terms[lambda], spec.couplings[k], options);
        verdict.term = lambda;
        verdict.channel = k;
        verdict.scalability = check_scalability_condition(spec, lambda, k, options.tol);
        report.stable = report.stable && verdict.local && verdict.scalability.holds;
        if (verdict.c) {
            report.min_constant = std::min(report.min_constant.value_or(*verdict.c),
                                           *verdict.c);
        }
        report.terms.push_back(std::move(verdict));
    }
    report.w_is_lyapunov = report.stable;

    const LindbladModel model = spec.model();
    Operator cross = dissipation_functional(spec.total(), model, options.tol);
    for (const Operator &w : spec.terms) {
        cross -= dissipation_functional(w, model, options.tol);
    }
    report.dissipation_cross_norm = cross.norm();
    return report;
}

struct IncrementalSetup {
    Operator grown;  // W~_n
    Operator next;   // W_{n+1}
    double d_n = 0.0;
    double d_next = 0.0;
    LindbladModel full;
    std::vector<Operator> new_couplings;
    std::vector<Operator> all_couplings;
    std::optional<double> prior_c;
};

IncrementalSetup setup_incremental(const AggregateSpec &spec, std::size_t n,
                                   const std::vector<Operator> &new_couplings,
                                   double c, bool dissipative, double tol) {
    spec.validate(tol);
    if (n < 1 || n >= spec.terms.size()) {
        throw PreconditionError("incremental check: n = " + std::to_string(n) +
                                " outside 1.." +
                                std::to_string(spec.terms.empty() ? 0
                                                                  : spec.terms.size() - 1));
    }
    if (!(c > 0.0)) {
        throw PreconditionError("incremental check: c must be positive");
    }
    const std::size_t dim = spec.structure.total_dim();
    for (std::size_t i = 0; i < new_couplings.size(); ++i) {
        require_shape(new_couplings[i], dim, "new coupling " + std::to_string(i));
    }

    Operator grown = Operator::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        grown += spec.terms[i];
    }
    const Operator next = spec.terms[n];
    const double d_n = min_eigenvalue(hermitian_part(grown));
    const double d_next = min_eigenvalue(hermitian_part(grown + next));

    std::vector<Operator> all = spec.couplings;
    all.insert(all.end(), new_couplings.begin(), new_couplings.end());
    const Operator h = spec.hamiltonian.value_or(Operator::Zero(dim, dim));
    LindbladModel old_model(spec.structure, h, spec.couplings, tol);

    ConstantSearchOptions search;
    search.tol = tol;
    const Operator shifted = grown - d_n * Operator::Identity(dim, dim);
    const ConditionResult prior = dissipative
                                      ? check_condition_ds(shifted, old_model, search)
                                      : check_condition_es(shifted, old_model, search);
    const bool vanishes = spectral_norm(shifted) <= tol;
    if (!prior && !vanishes) {
        throw PreconditionError(
            std::string("incremental check: the existing couplings do not certify "
                        "the first ") +
            std::to_string(n) + " terms (" + prior.diagnostic + ")");
    }
    return IncrementalSetup{grown,
                            next,
                            d_n,
                            d_next,
                            LindbladModel(spec.structure, h, all, tol),
                            new_couplings,
                            all,
                            prior.constant};
}

bool prior_covers(const IncrementalSetup &s, double c) {
    return !s.prior_c || c <= *s.prior_c * (1.0 + 1e-6);
}

// G(W_{n+1}) + sum_new G(W~_n)_{L_k}
Operator generator_side(const IncrementalSetup &s, double tol) {
    Operator lhs = generator(s.next, s.full, false, tol);
    for (const Operator &l : s.new_couplings) {
        lhs += generator_single_channel(s.grown, l);
    }
    return hermitian_part(lhs);
}

Operator cross_terms(const IncrementalSetup &s) {
    Operator cross = Operator::Zero(s.next.rows(), s.next.cols());
    for (const Operator &l : s.all_couplings) {
        cross += commutator(l.adjoint(), s.grown) * commutator(s.next, l);
    }
    return 2.0 * hermitian_part(cross);
}

// D(W_{n+1}) + 2 sum_k Re([L_k^dag, W~_n][W_{n+1}, L_k])
Operator dissipation_side(const IncrementalSetup &s, double tol) {
    return hermitian_part(dissipation_functional(s.next, s.full, tol)) + cross_terms(s);
}

double nsd_slack(const Operator &lhs, const Operator &rhs, double tol, bool &ok) {
    const double margin = nsd_margin(hermitian_part(lhs - rhs));
    ok = nsd_within(margin, std::max(spectral_norm(lhs), spectral_norm(rhs)), tol);
    return margin;
}

double psd_slack(const Operator &lhs, const Operator &rhs, double tol, bool &ok) {
    const double margin = psd_margin(hermitian_part(lhs - rhs));
    ok = margin >= -scaled_tolerance(tol, std::max(spectral_norm(lhs), spectral_norm(rhs)));
    return margin;
}

} // namespace

void AggregateSpec::validate(double tol) const {
    const std::size_t dim = structure.total_dim();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string what = "term " + label(i);
        require_shape(terms[i], dim, what);
        if (!is_hermitian(terms[i], tol)) {
            throw NotHermitianError(what + " is not Hermitian");
        }
        if (!is_psd(terms[i], tol)) {
            throw PreconditionError(what + " is not positive semidefinite");
        }
    }
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        require_shape(couplings[k], dim, "coupling " + std::to_string(k));
    }
    if (assignment) {
        if (assignment->size() != terms.size()) {
            throw PreconditionError("assignment must have one entry per term");
        }
        for (std::size_t k : *assignment) {
            if (k >= couplings.size()) {
                throw PreconditionError("assignment refers to coupling " +
                                        std::to_string(k) + " of " +
                                        std::to_string(couplings.size()));
            }
        }
    }
    if (!labels.empty() && labels.size() != terms.size()) {
        throw PreconditionError("labels must have one entry per term");
    }
    if (hamiltonian) {
        require_shape(*hamiltonian, dim, "hamiltonian");
        if (!is_hermitian(*hamiltonian, tol)) {
            throw NotHermitianError("hamiltonian is not Hermitian");
        }
    }
}

std::vector<std::size_t> AggregateSpec::resolved_assignment() const {
    if (assignment) {
        return *assignment;
    }
    if (couplings.size() != terms.size()) {
        throw PreconditionError("no assignment given and the number of couplings (" +
                                std::to_string(couplings.size()) +
                                ") differs from the number of terms (" +
                                std::to_string(terms.size()) + ")");
    }
    std::vector<std::size_t> out(terms.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = i;
    }
    return out;
}

std::string AggregateSpec::label(std::size_t lambda) const {
    if (lambda < labels.size()) {
        return labels[lambda];
    }
    return "W" + std::to_string(lambda + 1);
}

Operator AggregateSpec::total() const {
    const std::size_t dim = structure.total_dim();
    Operator w = Operator::Zero(dim, dim);
    for (const Operator &t : terms) {
        w += t;
    }
    return w;
}

LindbladModel AggregateSpec::model() const {
    const std::size_t dim = structure.total_dim();
    return LindbladModel(structure, hamiltonian.value_or(Operator::Zero(dim, dim)),
                         couplings);
}

ScalabilityCheck check_scalability_condition(const AggregateSpec &spec,
                                             std::size_t lambda, std::size_t k,
                                             double tol) {
    if (lambda >= spec.terms.size()) {
        throw std::out_of_range("check_scalability_condition: term index " +
                                std::to_string(lambda) + " out of range");
    }
    if (k >= spec.couplings.size()) {
        throw std::out_of_range("check_scalability_condition: coupling index " +
                                std::to_string(k) + " out of range");
    }
    const Operator &w = spec.terms[lambda];
    Operator sum = Operator::Zero(w.rows(), w.cols());
    for (std::size_t other = 0; other < spec.couplings.size(); ++other) {
        if (other != k) {
            sum += generator_single_channel(w, spec.couplings[other]);
        }
    }
    ScalabilityCheck out;
    out.margin = nsd_margin(hermitian_part(sum));
    out.holds = nsd_within(out.margin, spectral_norm(sum), tol);
    return out;
}

AggregateReport check_theorem_es_aggregation(const AggregateSpec &spec,
                                             const ConstantSearchOptions &options) {
    return aggregate(spec, options, false);
}

AggregateReport check_theorem_ds_aggregation(const AggregateSpec &spec,
                                             const ConstantSearchOptions &options) {
    return aggregate(spec, options, true);
}

IncrementalReport check_incremental_es(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, double tol) {
    const IncrementalSetup s = setup_incremental(spec, n, new_couplings, c, false, tol);
    const auto dim = s.next.rows();
    IncrementalReport out;
    out.d_n = s.d_n;
    out.d_next = s.d_next;
    out.ladder_ok = s.d_next >= s.d_n - scaled_tolerance(tol, std::abs(s.d_n));
    out.prior_c = s.prior_c;
    out.cross_term_norm = cross_terms(s).norm();

    const Operator rhs =
        -c * s.next + c * (s.d_next - s.d_n) * Operator::Identity(dim, dim);
    bool ok = false;
    out.generator_margin = nsd_slack(generator_side(s, tol), rhs, tol, ok);
    out.margin = out.generator_margin;
    out.holds = ok && prior_covers(s, c);
    return out;
}

IncrementalReport check_incremental_ds(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, double tol) {
    const IncrementalSetup s = setup_incremental(spec, n, new_couplings, c, true, tol);
    const auto dim = s.next.rows();
    IncrementalReport out;
    out.d_n = s.d_n;
    out.d_next = s.d_next;
    out.ladder_ok = s.d_next >= s.d_n - scaled_tolerance(tol, std::abs(s.d_n));
    out.prior_c = s.prior_c;
    out.cross_term_norm = cross_terms(s).norm();

    bool gen_ok = false;
    out.generator_margin =
        nsd_slack(generator_side(s, tol), Operator::Zero(dim, dim), tol, gen_ok);
    const Operator rhs =
        c * s.next - c * (s.d_next - s.d_n) * Operator::Identity(dim, dim);
    bool diss_ok = false;
    out.dissipative_margin = psd_slack(dissipation_side(s, tol), rhs, tol, diss_ok);
    out.margin = std::min(out.generator_margin, *out.dissipative_margin);
    out.holds = gen_ok && diss_ok && prior_covers(s, c);
    return out;
}

CorollaryReport check_corollary_d_free(const AggregateSpec &spec, std::size_t n,
                                       const std::vector<Operator> &new_couplings,
                                       double c, ConditionMode mode, double tol) {
    CorollaryReport out;
    const bool ds = mode == ConditionMode::DS;
    const IncrementalSetup s = setup_incremental(spec, n, new_couplings, c, ds, tol);
    if (!ds) {
        bool ok = false;
        out.margin = nsd_slack(generator_side(s, tol), -c * s.next, tol, ok);
        out.holds = ok && prior_covers(s, c);
        const IncrementalReport theorem = check_incremental_es(spec, n, new_couplings, c, tol);
        out.theorem_holds = theorem.holds;
        out.theorem_margin = theorem.margin;
    } else {
        const auto dim = s.next.rows();
        bool gen_ok = false;
        const double gen =
            nsd_slack(generator_side(s, tol), Operator::Zero(dim, dim), tol, gen_ok);
        bool diss_ok = false;
        const double diss = psd_slack(dissipation_side(s, tol), c * s.next, tol, diss_ok);
        out.margin = std::min(gen, diss);
        out.holds = gen_ok && diss_ok && prior_covers(s, c);
        const IncrementalReport theorem = check_incremental_ds(spec, n, new_couplings, c, tol);
        out.theorem_holds = theorem.holds;
        out.theorem_margin = theorem.margin;
    }
    return out;
}

CommutingReport check_corollary_commuting(const AggregateSpec &spec,
                                          const std::vector<Operator> &unitaries,
                                          const ConstantSearchOptions &options) {
    spec.validate(options.tol);
    const std::size_t dim = spec.structure.total_dim();
    if (unitaries.size() != spec.couplings.size()) {
        throw PreconditionError("check_corollary_commuting: expected one unitary per "
                                "coupling");
    }
    const auto assignment = spec.resolved_assignment();
    std::vector<std::optional<std::size_t>> owner(spec.couplings.size());
    for (std::size_t lambda = 0; lambda < assignment.size(); ++lambda) {
        if (owner[assignment[lambda]]) {
            throw PreconditionError("check_corollary_commuting: coupling " +
                                    std::to_string(assignment[lambda]) +
                                    " is assigned to more than one term");
        }
        owner[assignment[lambda]] = lambda;
    }

    CommutingReport out;
    for (std::size_t k = 0; k < spec.couplings.size(); ++k) {
        require_shape(unitaries[k], dim, "unitary " + std::to_string(k));
        if (!is_unitary(unitaries[k], options.tol)) {
            throw PreconditionError("check_corollary_commuting: U_" + std::to_string(k) +
                                    " is not unitary");
        }
        if (!owner[k]) {
            throw PreconditionError("check_corollary_commuting: coupling " +
                                    std::to_string(k) + " is not assigned to a term");
        }
        const Operator base = unitaries[k] * spec.terms[*owner[k]];
        const Operator &l = spec.couplings[k];
        const double base_norm2 = base.squaredNorm();
        const cplx s =
            base_norm2 > 0.0 ? (base.adjoint() * l).trace() / base_norm2 : cplx(0.0);
        if ((l - s * base).norm() > scaled_tolerance(options.tol, l.norm())) {
            throw PreconditionError("check_corollary_commuting: coupling " +
                                    std::to_string(k) +
                                    " is not a multiple of U_k W_lambda");
        }
        out.scales.push_back(s);
    }

    out.terms_commute = true;
    for (std::size_t a = 0; a < spec.terms.size(); ++a) {
        for (std::size_t b = a + 1; b < spec.terms.size(); ++b) {
            const Operator comm = commutator(spec.terms[a], spec.terms[b]);
            if (comm.norm() > scaled_tolerance(options.tol, spec.terms[a].norm() *
                                                                spec.terms[b].norm())) {
                out.terms_commute = false;
                out.noncommuting_terms.emplace_back(a, b);
            }
        }
    }
    for (std::size_t k = 0; k < unitaries.size(); ++k) {
        for (std::size_t lambda = 0; lambda < spec.terms.size(); ++lambda) {
            if (owner[k] == lambda) {
                continue;
            }
            const Operator comm = commutator(unitaries[k], spec.terms[lambda]);
            if (comm.norm() > scaled_tolerance(options.tol, spec.terms[lambda].norm())) {
                out.noncommuting.emplace_back(k, lambda);
            }
        }
    }

    bool local_ok = true;
    for (std::size_t lambda = 0; lambda < spec.terms.size(); ++lambda) {
        const std::size_t k = assignment[lambda];
        TermVerdict verdict = local_es(spec.terms[lambda], spec.couplings[k], options);
        if (!verdict.local) {
            verdict = local_ds(spec.terms[lambda], spec.couplings[k], options);
        }
        verdict.term = lambda;
        verdict.channel = k;
        local_ok = local_ok && verdict.local;
        out.local.push_back(std::move(verdict));
    }
    out.holds = out.terms_commute && out.noncommuting.empty() && local_ok;
    return out;
}

AggregateTrajectory simulate_aggregate(const AggregateSpec &spec,
                                       const DensityState &rho0, double t_final,
                                       double dt, std::size_t max_dim,
                                       const IntegratorOptions &options) {
    spec.validate();
    const std::size_t dim = spec.structure.total_dim();
    if (dim > max_dim) {
        throw BudgetError("simulate_aggregate: dimension " + std::to_string(dim) +
                          " exceeds the simulation cap " + std::to_string(max_dim));
    }
    std::vector<NamedObservable> observables;
    observables.push_back({"W", spec.total()});
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        observables.push_back({spec.label(i), spec.terms[i]});
    }

    AggregateTrajectory out;
    out.trajectory = evolve(spec.model(), rho0, t_final, dt, observables, options);
    const auto &series = out.trajectory.observables();
    for (std::size_t t = 0; t < out.trajectory.size(); ++t) {
        double sum = 0.0;
        for (std::size_t i = 1; i < series.size(); ++i) {
            sum += series[i].values[t];
        }
        out.additivity_error =
            std::max(out.additivity_error, std::abs(series[0].values[t] - sum));
    }
    return out;
}

} // namespace dissipctl
