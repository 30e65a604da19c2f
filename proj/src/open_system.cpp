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

#include "dissipctl/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

void require_dim(const Operator &x, std::size_t dim, const char *what) {
    if (x.rows() != x.cols() || static_cast<std::size_t>(x.rows()) != dim) {
        throw DimensionError(std::string(what) + ": expected a " +
                             std::to_string(dim) + "x" + std::to_string(dim) +
                             " operator, got " + std::to_string(x.rows()) + "x" +
                             std::to_string(x.cols()));
    }
}

void require_hermitian(const Operator &x, double tol, const char *what) {
    if (!is_hermitian(x, tol)) {
        throw NotHermitianError(std::string(what) + ": operator is not Hermitian");
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.14e", v);
    return buf;
}

} // namespace

// -- LindbladModel -----------------------------------------------------------

LindbladModel::LindbladModel(TensorStructure structure, Operator hamiltonian,
                             std::vector<Operator> couplings, double tol)
    : structure_(std::move(structure)), hamiltonian_(std::move(hamiltonian)),
      couplings_(std::move(couplings)) {
    const auto n = structure_.total_dim();
    require_dim(hamiltonian_, n, "LindbladModel hamiltonian");
    require_hermitian(hamiltonian_, tol, "LindbladModel hamiltonian");
    for (const auto &l : couplings_) {
        require_dim(l, n, "LindbladModel coupling");
    }
}

LindbladModel LindbladModel::dissipative(TensorStructure structure,
                                         std::vector<Operator> couplings) {
    const auto n = structure.total_dim();
    return LindbladModel(std::move(structure),
                         Operator::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n)),
                         std::move(couplings));
}

LindbladModel LindbladModel::with_couplings(std::vector<Operator> couplings) const {
    return LindbladModel(structure_, hamiltonian_, std::move(couplings));
}

// -- DensityState ------------------------------------------------------------

DensityState::DensityState(Operator rho, double tol) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
        throw PreconditionError("density state: not a nonempty square matrix");
    }
    if (!is_hermitian(rho_, tol)) {
        throw PreconditionError("density state: not Hermitian");
    }
    const cplx trace = rho_.trace();
    if (std::abs(trace - 1.0) > tol) {
        throw PreconditionError("density state: trace " +
                                format_number(trace.real()) + " != 1");
    }
    if (min_eigenvalue(hermitian_part(rho_)) < -tol) {
        throw PreconditionError("density state: not positive semidefinite");
    }
}

DensityState DensityState::maximally_mixed(std::size_t dim) {
    return DensityState(identity(dim) / static_cast<double>(dim));
}

DensityState DensityState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("basis state index out of range");
    }
    Operator rho = Operator::Zero(static_cast<Eigen::Index>(dim),
                                  static_cast<Eigen::Index>(dim));
    rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityState(std::move(rho));
}

DensityState DensityState::pure(const ColumnVector &psi) {
    const double norm = psi.norm();
    if (norm == 0.0) {
        throw PreconditionError("pure state: zero vector");
    }
    const ColumnVector u = psi / norm;
    return DensityState(u * u.adjoint());
}

DensityState DensityState::random_pure(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss;
    ColumnVector psi(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        psi(i) = cplx(re, im);
    }
    return pure(psi);
}

double DensityState::purity() const {
    return (rho_ * rho_).trace().real();
}

// -- Trajectory --------------------------------------------------------------

Trajectory::Trajectory(std::vector<NamedObservable> observables)
    : observables_(std::move(observables)) {
    for (const auto &o : observables_) {
        series_.push_back({o.name, {}});
    }
}

void Trajectory::append(double t, DensityState state) {
    if (!times_.empty() && t < times_.back()) {
        throw std::invalid_argument("Trajectory: times must be ascending");
    }
    for (std::size_t i = 0; i < observables_.size(); ++i) {
        series_[i].values.push_back(expectation(observables_[i].op, state));
    }
    times_.push_back(t);
    states_.push_back(std::move(state));
}

const std::vector<double> &Trajectory::series(const std::string &name) const {
    for (const auto &s : series_) {
        if (s.name == name) {
            return s.values;
        }
    }
    throw std::out_of_range("Trajectory: no observable named " + name);
}

void Trajectory::write_csv(std::ostream &os) const {
    os << "t";
    for (const auto &s : series_) {
        os << ',' << s.name;
    }
    os << ",trace,purity\n";
    for (std::size_t i = 0; i < times_.size(); ++i) {
        os << format_number(times_[i]);
        for (const auto &s : series_) {
            os << ',' << format_number(s.values[i]);
        }
        os << ',' << format_number(states_[i].matrix().trace().real()) << ','
           << format_number(states_[i].purity()) << '\n';
    }
}

// -- generator ---------------------------------------------------------------

Operator generator_single_channel(const Operator &x, const Operator &l) {
    if (x.rows() != x.cols() || l.rows() != l.cols() || x.rows() != l.rows()) {
        throw DimensionError("generator_single_channel: dimension mismatch");
    }
    const Operator ldl = l.adjoint() * l;
    return l.adjoint() * x * l - 0.5 * (ldl * x + x * ldl);
}

Operator generator(const Operator &x, const LindbladModel &model,
                   bool assume_commuting, double tol) {
    require_dim(x, model.dim(), "generator");
    require_hermitian(x, tol, "generator");
    const Operator &h = model.hamiltonian();
    const Operator comm = x * h - h * x;
    Operator out;
    if (assume_commuting) {
        if (comm.norm() > scaled_tolerance(tol, x.norm() * h.norm())) {
            throw PreconditionError("generator: [X, H] does not vanish");
        }
        out = Operator::Zero(x.rows(), x.cols());
    } else {
        out = cplx(0.0, -1.0) * comm;
    }
    for (const auto &l : model.couplings()) {
        out += generator_single_channel(x, l);
    }
    return out;
}

Operator dissipation_single_channel(const Operator &x, const Operator &l) {
    if (x.rows() != x.cols() || l.rows() != l.cols() || x.rows() != l.rows()) {
        throw DimensionError("dissipation_single_channel: dimension mismatch");
    }
    const Operator ld = l.adjoint();
    return (ld * x - x * ld) * (x * l - l * x);
}

Operator dissipation_functional(const Operator &x, const LindbladModel &model,
                                double tol) {
    require_dim(x, model.dim(), "dissipation_functional");
    require_hermitian(x, tol, "dissipation_functional");
    Operator out = Operator::Zero(x.rows(), x.cols());
    for (const auto &l : model.couplings()) {
        out += dissipation_single_channel(x, l);
    }
    return out;
}

Operator master_equation_rhs(const LindbladModel &model, const Operator &rho) {
    const Operator &h = model.hamiltonian();
    Operator out = cplx(0.0, -1.0) * (h * rho - rho * h);
    for (const auto &l : model.couplings()) {
        const Operator ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

Eigen::MatrixXcd liouvillian(const LindbladModel &model) {
    const auto n = model.dim();
    const Operator id = identity(n);
    const Operator &h = model.hamiltonian();
    Eigen::MatrixXcd out = cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto &l : model.couplings()) {
        const Operator ldl = l.adjoint() * l;
        out += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) -
               0.5 * kron(ldl.transpose(), id);
    }
    return out;
}

double stationarity_residual(const LindbladModel &model, const Operator &rho) {
    require_dim(rho, model.dim(), "stationarity_residual");
    double bound = 2.0 * model.hamiltonian().norm();
    for (const auto &l : model.couplings()) {
        bound += 2.0 * l.squaredNorm();
    }
    const double residual = master_equation_rhs(model, rho).norm();
    return bound == 0.0 ? residual : residual / bound;
}

bool is_stationary(const LindbladModel &model, const DensityState &rho) {
    return stationarity_residual(model, rho.matrix()) <= kStationarityThreshold;
}

double expectation(const Operator &x, const DensityState &rho, double tol) {
    require_dim(x, rho.dim(), "expectation");
    require_hermitian(x, tol, "expectation");
    return (x.cwiseProduct(rho.matrix().transpose())).sum().real();
}

double trace_distance(const Operator &a, const Operator &b) {
    const auto spec = hermitian_eig(hermitian_part(a - b), 0.0);
    return 0.5 * spec.eigenvalues.cwiseAbs().sum();
}

// -- integration -------------------------------------------------------------

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                 e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                 e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

class DormandPrince {
  public:
    DormandPrince(const LindbladModel &model, const IntegratorOptions &options)
        : model_(model), options_(options) {}

    // Advances rho from t to t_end; h carries the step size between calls.
    void advance(Operator &rho, double &t, double t_end, double &h) {
        if (!have_k1_) {
            k1_ = master_equation_rhs(model_, rho);
            have_k1_ = true;
        }
        while (t < t_end) {
            if (++steps_ > options_.max_steps) {
                throw BudgetError("evolve: step budget exhausted at t = " +
                                  std::to_string(t));
            }
            const double min_step =
                16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
            const bool last = t + h >= t_end;
            const double step = last ? t_end - t : h;
            if (step < min_step && !last) {
                throw IntegratorError("evolve: step size underflow at t = " +
                                      std::to_string(t));
            }

            const Operator k2 = rhs(rho + step * a21 * k1_);
            const Operator k3 = rhs(rho + step * (a31 * k1_ + a32 * k2));
            const Operator k4 = rhs(rho + step * (a41 * k1_ + a42 * k2 + a43 * k3));
            const Operator k5 =
                rhs(rho + step * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const Operator k6 = rhs(rho + step * (a61 * k1_ + a62 * k2 + a63 * k3 +
                                                  a64 * k4 + a65 * k5));
            Operator next =
                rho + step * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Operator k7 = rhs(next);
            const Operator err = step * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 +
                                         e6 * k6 + e7 * k7);

            double sum = 0.0;
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                for (Eigen::Index i = 0; i < rho.rows(); ++i) {
                    const double scale =
                        options_.abs_tol +
                        options_.rel_tol *
                            std::max(std::abs(rho(i, j)), std::abs(next(i, j)));
                    sum += std::norm(err(i, j)) / (scale * scale);
                }
            }
            const double norm = std::sqrt(sum / static_cast<double>(rho.size()));

            if (!std::isfinite(norm)) {
                h = 0.25 * step;
                continue;
            }
            if (norm <= 1.0) {
                t = last ? t_end : t + step;
                rho = hermitian_part(next);
                k1_ = hermitian_part(k7);
                const double grow =
                    norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -0.2));
                // A step clipped to hit the sample time does not shrink h.
                if (!last) {
                    h = step * std::max(0.2, grow);
                } else {
                    h = std::max(h, step * std::max(0.2, grow));
                }
            } else {
                h = step * std::max(0.2, 0.9 * std::pow(norm, -0.2));
                if (h < min_step) {
                    throw IntegratorError("evolve: step size underflow at t = " +
                                          std::to_string(t));
                }
            }
        }
    }

  private:
    Operator rhs(const Operator &rho) const { return master_equation_rhs(model_, rho); }

    const LindbladModel &model_;
    const IntegratorOptions &options_;
    Operator k1_;
    bool have_k1_ = false;
    std::size_t steps_ = 0;
};

} // namespace

Trajectory evolve(const LindbladModel &model, const DensityState &rho0,
                  double t_final, double dt_hint,
                  std::vector<NamedObservable> observables,
                  const IntegratorOptions &options) {
    if (rho0.dim() != model.dim()) {
        throw DimensionError("evolve: initial state dimension does not match "
                             "the model");
    }
    if (!(t_final > 0.0)) {
        throw PreconditionError("evolve: t_final must be positive");
    }
    if (!(dt_hint > 0.0)) {
        throw PreconditionError("evolve: dt_hint must be positive");
    }
    for (const auto &o : observables) {
        require_dim(o.op, model.dim(), "evolve observable");
    }

    Trajectory trajectory(std::move(observables));
    trajectory.append(0.0, rho0);

    const auto samples =
        static_cast<std::size_t>(std::ceil(t_final / dt_hint - 1e-9));
    DormandPrince stepper(model, options);
    Operator rho = rho0.matrix();
    double t = 0.0;
    double h = std::min(dt_hint, 0.01);
    for (std::size_t s = 1; s <= samples; ++s) {
        const double target =
            s == samples ? t_final : static_cast<double>(s) * dt_hint;
        stepper.advance(rho, t, target, h);
        try {
            trajectory.append(t, DensityState(rho, 10.0 * options.state_tol));
        } catch (const PreconditionError &e) {
            throw IntegratorError(std::string("evolve: integrated state invalid "
                                              "at t = ") +
                                  std::to_string(t) + " (" + e.what() + ")");
        }
    }
    return trajectory;
}

Operator propagate_exact(const LindbladModel &model, const Operator &rho0,
                         double t) {
    if (model.dim() > kExactPropagationMaxDim) {
        throw BudgetError("propagate_exact: dimension " +
                          std::to_string(model.dim()) + " exceeds " +
                          std::to_string(kExactPropagationMaxDim));
    }
    require_dim(rho0, model.dim(), "propagate_exact");
    const ColumnVector out = expm(liouvillian(model), t) * vec(rho0);
    return unvec(out, model.dim());
}

// -- adiabatic elimination ---------------------------------------------------

double eliminated_coupling_scale(double omega, double gamma) {
    return -2.0 * omega / std::sqrt(gamma);
}

AdiabaticTable adiabatic_limit_check(const LindbladModel &model, double omega,
                                     double gamma,
                                     const std::vector<double> &k_list,
                                     double t_final,
                                     const AdiabaticOptions &options) {
    if (model.couplings().size() != 1) {
        throw PreconditionError("adiabatic_limit_check: model must have exactly "
                                "one coupling");
    }
    if (!(gamma > 0.0)) {
        throw PreconditionError("adiabatic_limit_check: gamma must be positive");
    }
    if (!std::is_sorted(k_list.begin(), k_list.end())) {
        throw PreconditionError("adiabatic_limit_check: k_list must be ascending");
    }
    const std::size_t n = model.dim();
    if (2 * n > options.max_joint_dim) {
        throw BudgetError("adiabatic_limit_check: joint dimension " +
                          std::to_string(2 * n) + " exceeds " +
                          std::to_string(options.max_joint_dim));
    }
    const DensityState rho0 = options.rho0 ? *options.rho0 : DensityState::basis(n, 0);
    const double dt = t_final / static_cast<double>(std::max<std::size_t>(options.samples, 1));
    const Operator &l = model.couplings().front();
    const Operator &hs = model.hamiltonian();

    AdiabaticTable table;
    table.effective_scale = eliminated_coupling_scale(omega, gamma);
    const LindbladModel limit(model.structure(), hs, {table.effective_scale * l});
    const Trajectory reference = evolve(limit, rho0, t_final, dt, {}, options.integrator);

    auto joint_dims = model.structure().dims();
    joint_dims.push_back(2);
    const TensorStructure joint(joint_dims);
    const std::size_t ancilla_site = joint_dims.size();
    // sigma_minus lowers basis state 0 to basis state 1, so 1 is the ground state.
    const Operator ancilla_ground = diagonal({0.0, 1.0});
    const DensityState joint0(kron(rho0.matrix(), ancilla_ground));

    for (double k : k_list) {
        const Operator h_joint = k * omega *
                                     (kron(l, sigma_plus()) +
                                      kron(l.adjoint(), sigma_minus())) +
                                 kron(hs, identity(2));
        const Operator decay = k * std::sqrt(gamma) * kron(identity(n), sigma_minus());
        const LindbladModel prelimit(joint, h_joint, {decay});
        const Trajectory run = evolve(prelimit, joint0, t_final, dt, {}, options.integrator);

        double worst = 0.0;
        const std::size_t traced[] = {ancilla_site};
        for (std::size_t i = 0; i < run.size(); ++i) {
            const Operator reduced =
                partial_trace(run.states()[i].matrix(), joint, traced);
            worst = std::max(worst,
                             trace_distance(reduced, reference.states()[i].matrix()));
        }
        table.rows.push_back({k, worst});
    }

    table.monotone_top_half = true;
    for (std::size_t i = table.rows.size() / 2; i + 1 < table.rows.size(); ++i) {
        if (table.rows[i + 1].error > table.rows[i].error + 1e-12) {
            table.monotone_top_half = false;
        }
    }
    return table;
}

} // namespace dissipctl
