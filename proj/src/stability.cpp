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


#include "dissipctl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

void require_hermitian(const Operator &v, const char *what) {
    if (!is_square(v) || v.rows() == 0) {
        throw DimensionError(std::string(what) + ": operator is not square");
    }
    if (!is_hermitian(v)) {
        throw NotHermitianError(std::string(what) + ": operator is not Hermitian");
    }
}

void require_model_dim(const Operator &v, const LindbladModel &model,
                       const char *what) {
    if (static_cast<std::size_t>(v.rows()) != model.dim()) {
        throw DimensionError(std::string(what) + ": operator dimension " +
                             std::to_string(v.rows()) +
                             " does not match model dimension " +
                             std::to_string(model.dim()));
    }
}

// v >= 0 with smallest eigenvalue zero; returns the spectrum.
Spectrum require_ground_zero(const Operator &v, double tol, const char *what) {
    require_hermitian(v, what);
    Spectrum spec = hermitian_eig(v, 0.0);
    const double scale = std::max(std::abs(spec.min()), std::abs(spec.max()));
    if (std::abs(spec.min()) > scaled_tolerance(tol, scale)) {
        throw PreconditionError(std::string(what) +
                                ": operator must be PSD with smallest eigenvalue 0 "
                                "(found " + std::to_string(spec.min()) + ")");
    }
    return spec;
}

// Smallest eigenvalue of v above the zero threshold; 0 when v vanishes.
double smallest_positive(const Spectrum &spec, double tol) {
    const double scale = std::max(std::abs(spec.min()), std::abs(spec.max()));
    const double cut = scaled_tolerance(tol, scale);
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues(i) > cut) {
            return spec.eigenvalues(i);
        }
    }
    return 0.0;
}

ConditionResult degenerate_result() {
    ConditionResult out;
    out.diagnostic = "v vanishes; the inequality is vacuous";
    return out;
}

ConditionResult search(const Operator &base, const Operator &direction,
                       double c_upper, const ConstantSearchOptions &options,
                       const std::string &label) {
    ConditionResult out;
    out.constant = largest_feasible_constant(base, direction, c_upper, options);
    if (out.constant) {
        out.margin = psd_margin(hermitian_part(base - *out.constant * direction));
    } else {
        out.margin = psd_margin(hermitian_part(base - options.c_min * direction));
        char bound[32];
        std::snprintf(bound, sizeof bound, "%g", options.c_min);
        out.diagnostic = label + " fails for every c > " + bound;
    }
    return out;
}

} // namespace

double nsd_margin(const Operator &hermitian) { return -max_eigenvalue(hermitian); }

double psd_margin(const Operator &hermitian) { return min_eigenvalue(hermitian); }

std::optional<double> largest_feasible_constant(const Operator &base,
                                                const Operator &direction,
                                                double c_upper,
                                                const ConstantSearchOptions &options) {
    if (base.rows() != direction.rows() || base.cols() != direction.cols()) {
        throw DimensionError("largest_feasible_constant: dimension mismatch");
    }
    const double base_norm = spectral_norm(base);
    const double dir_norm = spectral_norm(direction);
    auto feasible = [&](double c) {
        const double slack =
            scaled_tolerance(options.tol, std::max(base_norm, c * dir_norm));
        return min_eigenvalue(hermitian_part(base - c * direction)) >= -slack;
    };

    double lo = options.c_min;
    double hi = std::max(c_upper, 2.0 * options.c_min);
    if (!feasible(lo)) {
        return std::nullopt;
    }
    if (feasible(hi)) {
        return hi;
    }
    for (int i = 0; i < options.iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

LyapunovVerdict is_lyapunov_operator(const Operator &v, const LindbladModel &model,
                                     double tol) {
    require_hermitian(v, "is_lyapunov_operator");
    require_model_dim(v, model, "is_lyapunov_operator");

    LyapunovVerdict out;
    const Spectrum spec = hermitian_eig(v, 0.0);
    out.min_eigenvalue = spec.min();
    const double scale = std::max(std::abs(spec.min()), std::abs(spec.max()));
    const double zero_tol = scaled_tolerance(tol, scale);
    if (spec.min() < -zero_tol) {
        out.failures.push_back("V ⪰ 0 fails (smallest eigenvalue " +
                               std::to_string(spec.min()) + ")");
    } else if (spec.min() > zero_tol) {
        out.failures.push_back("smallest eigenvalue of V is " +
                               std::to_string(spec.min()) + ", not 0");
    }

    const Operator g = hermitian_part(generator(v, model, false, tol));
    out.generator_margin = nsd_margin(g);
    if (out.generator_margin < -scaled_tolerance(tol, spectral_norm(g))) {
        out.failures.push_back("G(V) <= 0 fails (largest eigenvalue " +
                               std::to_string(-out.generator_margin) + ")");
    }
    out.is_lyapunov = out.failures.empty();
    return out;
}

ConditionResult check_condition_es(const Operator &v, const LindbladModel &model,
                                   const ConstantSearchOptions &options) {
    const Spectrum spec = require_ground_zero(v, options.tol, "check_condition_es");
    require_model_dim(v, model, "check_condition_es");
    const double lambda = smallest_positive(spec, options.tol);
    if (lambda == 0.0) {
        return degenerate_result();
    }
    const Operator g = hermitian_part(generator(v, model, false, options.tol));
    const double c_upper = 2.0 * spectral_norm(g) / lambda;
    return search(-g, v, c_upper, options, "G(v) <= -c v");
}

ConditionResult check_condition_ds(const Operator &v, const LindbladModel &model,
                                   const ConstantSearchOptions &options) {
    const Spectrum spec = require_ground_zero(v, options.tol, "check_condition_ds");
    require_model_dim(v, model, "check_condition_ds");
    const double lambda = smallest_positive(spec, options.tol);
    if (lambda == 0.0) {
        return degenerate_result();
    }
    const Operator g = hermitian_part(generator(v, model, false, options.tol));
    const double g_margin = nsd_margin(g);
    if (g_margin < -scaled_tolerance(options.tol, spectral_norm(g))) {
        ConditionResult out;
        out.margin = g_margin;
        out.diagnostic = "G(v) is not negative semidefinite";
        return out;
    }
    const Operator d = hermitian_part(dissipation_functional(v, model, options.tol));
    const double c_upper = 2.0 * spectral_norm(d) / lambda;
    ConditionResult out = search(d, v, c_upper, options, "D(v) >= c v");
    out.margin = std::min(out.margin, g_margin);
    return out;
}

ConditionResult check_lemma_d_v2(const Operator &v, const LindbladModel &model,
                                 const ConstantSearchOptions &options) {
    const Spectrum spec = require_ground_zero(v, options.tol, "check_lemma_d_v2");
    require_model_dim(v, model, "check_lemma_d_v2");
    const double lambda = smallest_positive(spec, options.tol);
    if (lambda == 0.0) {
        return degenerate_result();
    }
    const Operator d = hermitian_part(dissipation_functional(v, model, options.tol));
    const double c_upper = 2.0 * spectral_norm(d) / (lambda * lambda);
    return search(d, hermitian_part(v * v), c_upper, options, "D(v) >= c v^2");
}

GroundSpace ground_space(const Operator &v, double degeneracy_tol) {
    require_hermitian(v, "ground_space");
    const Spectrum spec = hermitian_eig(v, 0.0);
    const double scale = std::max(std::abs(spec.min()), std::abs(spec.max()));
    const double cut = spec.min() + degeneracy_tol * std::max(1.0, scale);

    GroundSpace out;
    out.energy = spec.min();
    out.projector = Operator::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues(i) <= cut) {
            const ColumnVector col = spec.eigenvectors.col(i);
            out.projector += col * col.adjoint();
            ++out.dimension;
        }
    }
    return out;
}

bool frustration_free_check(const std::vector<Operator> &terms, double tol) {
    if (terms.empty()) {
        throw PreconditionError("frustration_free_check: no terms");
    }
    Operator sum = Operator::Zero(terms.front().rows(), terms.front().cols());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        require_hermitian(terms[i], "frustration_free_check");
        if (terms[i].rows() != sum.rows()) {
            throw DimensionError("frustration_free_check: term " + std::to_string(i) +
                                 " has a different dimension");
        }
        if (!is_psd(terms[i], tol)) {
            throw PreconditionError("frustration_free_check: term " +
                                    std::to_string(i) +
                                    " is not positive semidefinite");
        }
        sum += terms[i];
    }
    const double d = min_eigenvalue(hermitian_part(sum));
    return std::abs(d) <= scaled_tolerance(tol, spectral_norm(sum));
}

bool StabilityReport::certified() const {
    return lyapunov.is_lyapunov &&
           (es.constant.has_value() || ds.constant.has_value() ||
            convergence == "trivial");
}

StabilityReport certify_ground_state_stability(const Operator &v,
                                               const LindbladModel &model,
                                               const CertifyOptions &options) {
    require_hermitian(v, "certify_ground_state_stability");
    require_model_dim(v, model, "certify_ground_state_stability");
    if (options.simulate && model.dim() > options.max_dim) {
        throw BudgetError("certify_ground_state_stability: dimension " +
                          std::to_string(model.dim()) +
                          " exceeds the simulation cap " +
                          std::to_string(options.max_dim));
    }

    StabilityReport report;
    const double tol = options.search.tol;
    report.lyapunov = is_lyapunov_operator(v, model, tol);
    report.ground_energy = report.lyapunov.min_eigenvalue;
    report.margins["v_smallest_eigenvalue"] = report.lyapunov.min_eigenvalue;
    report.margins["generator_nsd"] = report.lyapunov.generator_margin;

    const bool vanishes = spectral_norm(v) <= tol;
    if (!report.lyapunov.is_lyapunov) {
        report.es.diagnostic = "v is not a Lyapunov operator";
        report.ds.diagnostic = report.es.diagnostic;
        report.convergence = "none";
    } else if (vanishes) {
        report.es = degenerate_result();
        report.ds = degenerate_result();
        report.convergence = "trivial";
    } else {
        report.es = check_condition_es(v, model, options.search);
        report.ds = check_condition_ds(v, model, options.search);
        report.margins["es"] = report.es.margin;
        report.margins["ds"] = report.ds.margin;
        if (report.es) {
            report.convergence = "exponential";
        } else if (report.ds) {
            report.convergence = "asymptotic only";
        } else {
            report.convergence = "none";
        }
    }

    if (!options.simulate) {
        return report;
    }

    SimulationCheck sim;
    sim.t_final = options.t_final;
    std::mt19937_64 rng(options.seed);
    std::vector<DensityState> initial;
    initial.push_back(DensityState::maximally_mixed(model.dim()));
    while (initial.size() < std::max<std::size_t>(options.initial_states, 1)) {
        initial.push_back(DensityState::random_pure(model.dim(), rng));
    }

    bool converged = true;
    bool envelope = true;
    const double monotone_slack = 1e-8;
    for (const DensityState &rho0 : initial) {
        const Trajectory traj = evolve(model, rho0, options.t_final, options.dt,
                                       {{"V", v}}, options.integrator);
        const auto &times = traj.times();
        const auto &values = traj.series("V");
        const double v0 = values.front();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0 && values[i] > values[i - 1] + monotone_slack) {
                sim.monotone = false;
            }
            if (times[i] >= 0.9 * options.t_final &&
                std::abs(values[i] - report.ground_energy) >
                    options.convergence_threshold) {
                converged = false;
            }
            if (report.es &&
                values[i] > std::exp(-*report.es.constant * times[i]) * v0 +
                                options.envelope_slack) {
                envelope = false;
            }
        }
        sim.max_final_value = std::max(sim.max_final_value, values.back());
        ++sim.runs;
    }
    sim.converged = converged;
    if (report.es) {
        sim.within_exponential_envelope = envelope;
    }
    report.simulation = sim;
    return report;
}

} // namespace dissipctl
