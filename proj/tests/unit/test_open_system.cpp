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


#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "dissipctl/error.hpp"
#include "dissipctl/open_system.hpp"
#include "support.hpp"

using namespace dissipctl;
using testing::max_abs;

namespace {

Operator mat2(cplx a, cplx b, cplx c, cplx d) {
    Operator m(2, 2);
    m << a, b, c, d;
    return m;
}

LindbladModel three_level() {
    Operator l1 = Operator::Zero(3, 3), l2 = Operator::Zero(3, 3);
    l1(0, 1) = 1.0;
    l2(1, 2) = 1.0;
    l2(2, 1) = 1.0;
    return LindbladModel::dissipative(TensorStructure({3}), {l1, l2});
}

LindbladModel decay_model() {
    return LindbladModel(TensorStructure({2}), diagonal({0.5, -0.5}), {sigma_minus()});
}

LindbladModel random_model(std::size_t n, std::size_t channels, std::mt19937_64 &rng) {
    std::vector<Operator> ls;
    for (std::size_t k = 0; k < channels; ++k) ls.push_back(testing::random_matrix(n, n, rng) / 2.0);
    return LindbladModel(TensorStructure({n}), testing::random_hermitian(n, rng), ls);
}

// Schrodinger-picture right-hand side written out term by term.
Operator reference_rhs(const LindbladModel &m, const Operator &rho) {
    const cplx i(0, 1);
    Operator out = -i * (m.hamiltonian() * rho - rho * m.hamiltonian());
    for (const auto &l : m.couplings()) {
        const Operator ll = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
    }
    return out;
}

} // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LindbladModel(TensorStructure({2}), sigma_minus(), {}), NotHermitianError);
    CHECK_THROWS_AS(LindbladModel(TensorStructure({2}), identity(3), {}), DimensionError);
    CHECK_THROWS_AS(LindbladModel::dissipative(TensorStructure({2}), {identity(3)}), DimensionError);
    const LindbladModel m = decay_model().with_couplings({});
    CHECK(m.couplings().empty());
    CHECK(m.dim() == 2);
}

TEST_CASE("density states") {
    CHECK_THROWS_AS(DensityState(diagonal({1, 1})), PreconditionError);
    CHECK_THROWS_AS(DensityState(diagonal({1.5, -0.5})), PreconditionError);
    CHECK_THROWS_AS(DensityState{sigma_minus()}, PreconditionError);
    CHECK_THROWS_AS(DensityState::basis(2, 2), DimensionError);
    CHECK_THROWS_AS(DensityState::pure(ColumnVector::Zero(3)), PreconditionError);
    CHECK(DensityState::maximally_mixed(4).purity() == doctest::Approx(0.25));
    std::mt19937_64 rng(1);
    const DensityState psi = DensityState::random_pure(5, rng);
    CHECK(psi.purity() == doctest::Approx(1.0));
    CHECK(psi.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("generator and dissipation of the three-level model") {
    const LindbladModel m = three_level();
    const Operator v = diagonal({0, 1, 2});
    CHECK(max_abs(generator(v, m) - diagonal({0, 0, -1})) <= 1e-12);
    CHECK(max_abs(dissipation_functional(v, m) - diagonal({0, 2, 1})) <= 1e-12);
    // Channel contributions by hand: L1 gives diag(0,-1,0), L2 gives diag(0,1,-1).
    CHECK(max_abs(generator_single_channel(v, m.couplings()[0]) - diagonal({0, -1, 0})) <= 1e-12);
    CHECK(max_abs(generator_single_channel(v, m.couplings()[1]) - diagonal({0, 1, -1})) <= 1e-12);
    CHECK(max_abs(generator(identity(3), m)) <= 1e-15);
    CHECK(max_abs(dissipation_functional(identity(3), m)) <= 1e-15);
}

TEST_CASE("decay channel on a qubit") {
    const LindbladModel m = decay_model();
    const Operator w1 = diagonal({1, 0});
    CHECK(max_abs(generator(w1, m) + w1) <= 1e-15);
    CHECK(max_abs(generator(w1, m, true) + w1) <= 1e-15);
    CHECK_THROWS_AS(generator(sigma_x(), m, true), PreconditionError);
    CHECK_THROWS_AS(generator(sigma_minus(), m), NotHermitianError);
    CHECK_THROWS_AS(dissipation_functional(sigma_minus(), m), NotHermitianError);
    CHECK_THROWS_AS(generator(identity(3), m), DimensionError);

    // General stabilising family [[l00, 0], [l10, 0]].
    const cplx l00(0.3, -0.2), l10(0.7, 0.4);
    const Operator l = mat2(l00, 0, l10, 0);
    const Operator dl = dissipation_single_channel(w1, l);
    CHECK(max_abs(dl - diagonal({std::norm(l10), 0})) <= 1e-15);
}

TEST_CASE("generator identities on random models") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const LindbladModel m = random_model(n, 1 + trial % 3, rng);
        const Operator x = testing::random_hermitian(n, rng);
        const Operator g = generator(x, m);
        CHECK(is_hermitian(g));
        CHECK(max_abs(generator(identity(n), m)) < 1e-12);

        // Heisenberg/Schrodinger duality: tr(G(x) rho) = tr(x rhs(rho)).
        const Operator rho = DensityState::random_pure(n, rng).matrix();
        CHECK(std::abs((g * rho).trace() - (x * reference_rhs(m, rho)).trace()) < 1e-11);
        CHECK(max_abs(master_equation_rhs(m, rho) - reference_rhs(m, rho)) < 1e-12);

        // D(x) = G(x^2) - G(x) x - x G(x), and PSD.
        const Operator d = dissipation_functional(x, m);
        const Operator x2 = x * x;
        CHECK(max_abs(d - (generator(x2, m) - g * x - x * g)) < 1e-10 * std::max(1.0, max_abs(d)));
        CHECK(testing::reference_min_eig(d) >= -1e-10 * std::max(1.0, spectral_norm(d)));

        // Additivity over channels when H = 0.
        Operator sum = Operator::Zero(n, n);
        for (const auto &l : m.couplings()) sum += generator_single_channel(x, l);
        const LindbladModel diss = LindbladModel::dissipative(m.structure(), m.couplings());
        CHECK(max_abs(sum - generator(x, diss)) < 1e-12);

        // Linearity in x.
        const Operator y = testing::random_hermitian(n, rng);
        CHECK(max_abs(generator(Operator(x + 2.0 * y), m) - g - 2.0 * generator(y, m)) < 1e-11);

        // Phase invariance and quadratic scaling of the coupling.
        const Operator &l = m.couplings()[0];
        const Operator gl = generator_single_channel(x, l);
        CHECK(max_abs(generator_single_channel(x, Operator(std::polar(1.0, 0.7) * l)) - gl) < 1e-12);
        CHECK(max_abs(generator_single_channel(x, Operator(3.0 * l)) - 9.0 * gl) < 1e-10);
    }
}

TEST_CASE("liouvillian") {
    const LindbladModel zero = LindbladModel::dissipative(TensorStructure({3}), {});
    CHECK(max_abs(liouvillian(zero)) == 0.0);

    const LindbladModel decay = decay_model();
    CHECK(max_abs(liouvillian(decay) * vec(diagonal({0, 1}))) < 1e-15);
    CHECK(is_stationary(decay, DensityState(diagonal({0, 1}))));
    CHECK_FALSE(is_stationary(decay, DensityState(diagonal({1, 0}))));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const LindbladModel m = random_model(n, 2, rng);
        const Eigen::MatrixXcd lam = liouvillian(m);
        const Operator rho = DensityState::random_pure(n, rng).matrix();
        CHECK(max_abs(unvec(lam * vec(rho), n) - reference_rhs(m, rho)) < 1e-12);
        // Trace preservation: vec(I)^dag Lambda = 0.
        CHECK(max_abs(vec(identity(n)).adjoint() * lam) < 1e-12);
    }
}

TEST_CASE("invariant states annihilate the generator in expectation") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3;
        const LindbladModel m = random_model(n, 2, rng);
        const Eigen::MatrixXcd lam = liouvillian(m);
        // Kernel vector of Lambda via the smallest singular value.
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(lam, Eigen::ComputeFullV);
        ColumnVector k = svd.matrixV().col(lam.cols() - 1);
        Operator rho = unvec(k, n);
        rho = hermitian_part(Operator(rho / rho.trace()));
        const DensityState inv(rho, 1e-8);
        CHECK(stationarity_residual(m, inv.matrix()) < 1e-10);
        for (int j = 0; j < 5; ++j) {
            const Operator x = testing::random_hermitian(n, rng);
            CHECK(std::abs((generator(x, m) * inv.matrix()).trace()) < 1e-10);
        }
    }
}

TEST_CASE("expectation and trace distance") {
    const DensityState mixed = DensityState::maximally_mixed(2);
    CHECK(expectation(identity(2), mixed) == doctest::Approx(1.0));
    CHECK(std::abs(expectation(sigma_z(), mixed)) < 1e-15);
    CHECK(expectation(diagonal({1, 0}), DensityState(diagonal({0, 1}))) == 0.0);
    CHECK_THROWS_AS(expectation(sigma_minus(), mixed), NotHermitianError);
    CHECK_THROWS_AS(expectation(identity(3), mixed), DimensionError);
    CHECK(trace_distance(diagonal({1, 0}), diagonal({0, 1})) == doctest::Approx(1.0));
    CHECK(trace_distance(diagonal({1, 0}), diagonal({1, 0})) == 0.0);
}

TEST_CASE("evolution of the decaying qubit") {
    const LindbladModel m = decay_model();
    const Operator v = diagonal({1, 0});
    const Trajectory tr = evolve(m, DensityState(diagonal({1, 0})), 20.0, 0.1, {{"V", v}});
    CHECK(tr.times().front() == 0.0);
    CHECK(tr.times().back() == doctest::Approx(20.0));
    CHECK(tr.size() == tr.states().size());
    const auto &vs = tr.series("V");
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times()[i];
        CHECK(std::abs(vs[i] - std::exp(-t)) < 1e-7);
        CHECK(std::abs(tr.states()[i].matrix().trace() - cplx(1, 0)) < 1e-8);
    }
    CHECK((tr.states().back().matrix() - diagonal({0, 1})).norm() < 1e-6);
    CHECK_THROWS_AS((void)tr.series("nope"), std::out_of_range);

    // Stationary start stays put.
    const Trajectory still = evolve(m, DensityState(diagonal({0, 1})), 5.0, 0.5);
    for (const auto &s : still.states()) CHECK(max_abs(s.matrix() - diagonal({0, 1})) < 1e-12);

    CHECK_THROWS_AS(evolve(m, DensityState::maximally_mixed(2), 0.0, 0.1), PreconditionError);
    CHECK_THROWS_AS(evolve(m, DensityState::maximally_mixed(2), 1.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(evolve(m, DensityState::maximally_mixed(3), 1.0, 0.1), DimensionError);
    IntegratorOptions tiny;
    tiny.max_steps = 3;
    CHECK_THROWS_AS(evolve(m, DensityState::maximally_mixed(2), 50.0, 0.1, {}, tiny), BudgetError);
}

TEST_CASE("three-level model decays monotonically") {
    const LindbladModel m = three_level();
    const Trajectory tr = evolve(m, DensityState::maximally_mixed(3), 40.0, 0.5,
                                 {{"V", diagonal({0, 1, 2})}});
    const auto &vs = tr.series("V");
    for (std::size_t i = 1; i < vs.size(); ++i) CHECK(vs[i] <= vs[i - 1] + 1e-9);
    CHECK(vs.back() < 1e-4);
}

TEST_CASE("integrator agrees with exact propagation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const LindbladModel m = random_model(n, 2, rng);
        const DensityState rho0 = DensityState::random_pure(n, rng);
        const Trajectory tr = evolve(m, rho0, 2.0, 0.25);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const Operator exact = propagate_exact(m, rho0.matrix(), tr.times()[i]);
            CHECK(max_abs(tr.states()[i].matrix() - exact) < 1e-8);
            CHECK(std::abs(tr.states()[i].matrix().trace() - cplx(1, 0)) < 1e-8);
            CHECK(testing::reference_min_eig(tr.states()[i].matrix()) >= -1e-8);
        }
    }
    const LindbladModel big = LindbladModel::dissipative(TensorStructure::qubits(5), {});
    CHECK_THROWS_AS(propagate_exact(big, identity(32) / 32.0, 1.0), BudgetError);
}

TEST_CASE("Ehrenfest consistency") {
    std::mt19937_64 rng(6);
    const LindbladModel m = random_model(3, 2, rng);
    const Operator x = testing::random_hermitian(3, rng);
    const Operator gx = generator(x, m);
    const DensityState rho0 = DensityState::random_pure(3, rng);
    const double h = 1e-3;
    for (double t : {0.2, 0.7, 1.5}) {
        const Operator plus = propagate_exact(m, rho0.matrix(), t + h);
        const Operator minus = propagate_exact(m, rho0.matrix(), t - h);
        const Operator at = propagate_exact(m, rho0.matrix(), t);
        const double deriv = ((x * plus).trace() - (x * minus).trace()).real() / (2 * h);
        CHECK(std::abs(deriv - (gx * at).trace().real()) < 1e-5);
    }
}

TEST_CASE("trajectory csv") {
    Trajectory tr({{"V", diagonal({1, 0})}});
    tr.append(0.0, DensityState(diagonal({1, 0})));
    tr.append(0.5, DensityState(diagonal({0, 1})));
    CHECK_THROWS(tr.append(0.25, DensityState(diagonal({0, 1}))));
    std::ostringstream os;
    tr.write_csv(os);
    const std::string text = os.str();
    CHECK(text.rfind("t,V,trace,purity\n", 0) == 0);
    CHECK(text.find("5.00000000000000e-01,0.00000000000000e+00,1.00000000000000e+00,1.00000000000000e+00") !=
          std::string::npos);
}

TEST_CASE("adiabatic elimination") {
    CHECK(eliminated_coupling_scale(1.0, 1.0) == doctest::Approx(-2.0));
    CHECK(eliminated_coupling_scale(1.0, 4.0) == doctest::Approx(-1.0));

    const LindbladModel decoupled(TensorStructure({2}), diagonal({0.5, -0.5}), {Operator::Zero(2, 2)});
    const AdiabaticTable zero = adiabatic_limit_check(decoupled, 1.0, 1.0, {2, 4}, 3.0);
    for (const auto &row : zero.rows) CHECK(row.error < 1e-8);

    const LindbladModel m = decay_model();
    const AdiabaticTable table = adiabatic_limit_check(m, 1.0, 1.0, {2, 4, 8}, 5.0);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[2].error < table.rows[0].error);
    CHECK(table.monotone_top_half);

    CHECK_THROWS_AS(adiabatic_limit_check(three_level(), 1.0, 1.0, {2}, 1.0), PreconditionError);
    CHECK_THROWS_AS(adiabatic_limit_check(m, 1.0, 0.0, {2}, 1.0), PreconditionError);
    CHECK_THROWS_AS(adiabatic_limit_check(m, 1.0, 1.0, {4, 2}, 1.0), PreconditionError);
    AdiabaticOptions capped;
    capped.max_joint_dim = 2;
    CHECK_THROWS_AS(adiabatic_limit_check(m, 1.0, 1.0, {2}, 1.0, capped), BudgetError);
}
