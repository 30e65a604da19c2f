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
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <set>
#include <string>

#include "dissipctl/error.hpp"
#include "dissipctl/model_library.hpp"
#include "dissipctl/pauli.hpp"
#include "dissipctl/stability.hpp"
#include "support.hpp"

using namespace dissipctl;
using testing::max_abs;

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string number(std::optional<double> c) {
    if (!c) return "none";
    const double r = std::round(*c * 1e4) / 1e4;
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string diag_text(const Operator &op) {
    if (max_abs(Operator(op - Operator(op.diagonal().asDiagonal()))) > 1e-12) return "not diagonal";
    std::ostringstream os;
    os << "diag(";
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
        const double x = std::round(op(i, i).real() * 1e9) / 1e9;
        os << (i ? ", " : "") << (x == 0.0 ? 0.0 : x);
    }
    os << ")";
    return os.str();
}

bool all_commute(const std::vector<Operator> &ops) {
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a + 1; b < ops.size(); ++b)
            if (max_abs(commutator(ops[a], ops[b])) > 1e-12) return false;
    return true;
}

// Recomputes one expected record of a named model.
std::string derive(const NamedModel &m, const std::string &check) {
    const LindbladModel &model = m.model;
    if (check == "equilibrium") {
        const Trajectory tr = evolve(model, DensityState::maximally_mixed(model.dim()), 30.0, 1.0);
        return diag_text(tr.states().back().matrix());
    }
    if (check == "equilibrium_purity") {
        const Trajectory tr = evolve(model, DensityState::maximally_mixed(model.dim()), 30.0, 1.0);
        return number(tr.states().back().purity());
    }
    if (check == "commutator_v_h") {
        return number(max_abs(commutator(m.candidate("V"), model.hamiltonian())));
    }
    if (check == "c_ds") return number(check_condition_ds(m.candidate("V"), model).constant);
    if (check == "c_es") return number(check_condition_es(m.candidate("V"), model).constant);
    if (check == "c_lemma_d_v2") return number(check_lemma_d_v2(m.candidate("V"), model).constant);
    if (check == "generator") return diag_text(generator(m.candidate("V"), model));
    if (check == "dissipation") return diag_text(dissipation_functional(m.candidate("V"), model));
    if (check == "simulated_v_to_zero") {
        const Trajectory tr = evolve(model, DensityState::maximally_mixed(model.dim()), 60.0, 1.0,
                                     {{"V", m.candidate("V")}});
        return yes_no(tr.series("V").back() < 1e-6);
    }
    if (check == "w_total") return diag_text(m.candidate("W"));
    if (check == "corollary_d_free_es_c1") {
        return yes_no(check_corollary_d_free(*m.spec, 1, m.new_couplings, 1.0, ConditionMode::ES).holds);
    }
    if (check == "frustration_free") return yes_no(frustration_free_check(m.spec->terms));
    if (check == "ground_space_dimension") return std::to_string(ground_space(m.candidate("W")).dimension);
    if (check == "ground_space_dimension_v1_v2") {
        return std::to_string(ground_space(Operator(m.spec->terms[0] + m.spec->terms[1])).dimension);
    }
    if (check == "terms_commute") return yes_no(all_commute(m.spec->terms));
    if (check == "w_u_w_zero") {
        bool ok = true;
        for (std::size_t i = 0; i < m.unitaries.size(); ++i) {
            const Operator &w = m.spec->terms[i];
            ok = ok && max_abs(Operator(w * m.unitaries[i] * w)) < 1e-12;
        }
        return yes_no(ok);
    }
    if (check == "theorem_es_stable") return yes_no(check_theorem_es_aggregation(*m.spec).stable);
    if (check == "term_constant") {
        const AggregateReport r = check_theorem_es_aggregation(*m.spec);
        return number(r.min_constant);
    }
    if (check == "z_i_commutes_with_v2") {
        bool ok = true;
        for (std::size_t i = 1; i <= 4; ++i) {
            ok = ok && max_abs(commutator(pauli_string("Z" + std::to_string(i), model.structure().sites()),
                                          m.spec->terms[1])) < 1e-12;
        }
        return yes_no(ok);
    }
    if (check == "z1_commutes_with_v3") {
        return yes_no(max_abs(commutator(pauli_string("Z1", 9), m.spec->terms[2])) < 1e-12);
    }
    if (check == "scalability_v3_channel0") return yes_no(check_scalability_condition(*m.spec, 2, 0).holds);
    if (check == "ground_energy") return number(ground_space(m.candidate("W")).energy);
    if (check == "w_expectation_constant") {
        const AggregateTrajectory tr =
            simulate_aggregate(*m.spec, DensityState::maximally_mixed(model.dim()), 5.0, 0.5);
        double worst = 0.0;
        for (double w : tr.trajectory.series("W")) worst = std::max(worst, std::abs(w - 1.0));
        return worst < 1e-12 ? "1" : "not constant";
    }
    return "unknown check " + check;
}

} // namespace

TEST_CASE("every expected record is reproduced") {
    std::set<std::string> provenances{"reported", "derived", "trivial"};
    for (const std::string &name : list_models()) {
        const NamedModel m = find_model(name);
        CHECK(m.name == name);
        CHECK_FALSE(m.description.empty());
        CHECK_FALSE(m.expected.empty());
        for (const auto &e : m.expected) {
            CHECK(provenances.count(e.provenance) == 1);
            CHECK_MESSAGE(derive(m, e.check) == e.value, name << ": " << e.check);
        }
    }
}

TEST_CASE("two-level model") {
    const NamedModel m = two_level_example();
    CHECK(max_abs(m.model.hamiltonian() - diagonal({0.5, -0.5})) == 0.0);
    CHECK(max_abs(m.candidate("V") - diagonal({1, 0})) == 0.0);
    CHECK(max_abs(commutator(m.candidate("V"), m.model.hamiltonian())) == 0.0);
    CHECK_THROWS_AS((void)m.candidate("nope"), std::out_of_range);

    // Any l10 != 0 stabilises; D(V) = |l10|^2 V.
    const NamedModel g = two_level_example(cplx(0.5, 0.0), cplx(0.0, 2.0));
    const ConditionResult ds = check_condition_ds(g.candidate("V"), g.model);
    REQUIRE(ds);
    CHECK(*ds.constant == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("three-level model") {
    const NamedModel m = three_level_example();
    CHECK(m.model.couplings().size() == 2);
    CHECK(max_abs(generator(m.candidate("V"), m.model) - diagonal({0, 0, -1})) <= 1e-12);
    CHECK(max_abs(dissipation_functional(m.candidate("V"), m.model) - diagonal({0, 2, 1})) <= 1e-12);
}

TEST_CASE("two-qubit aggregation model") {
    const NamedModel m = two_qubit_aggregation_example();
    CHECK(max_abs(m.candidate("W") - diagonal({2, 1, 0, 1})) == 0.0);
    CHECK(m.new_couplings.size() == 2);
    CHECK(m.model.couplings().size() == 3);
    CHECK(frustration_free_check(m.spec->terms));
}

TEST_CASE("cluster chain") {
    for (std::size_t n : {3u, 4u, 6u}) {
        const NamedModel m = cluster_chain(n);
        REQUIRE(m.spec);
        CHECK(m.spec->terms.size() == n - 2);
        CHECK(m.unitaries.size() == n - 2);
        CHECK(ground_space(m.candidate("W")).dimension == (std::size_t{1} << 2));
        for (std::size_t i = 0; i + 1 < m.spec->terms.size(); ++i) {
            CHECK(max_abs(commutator(m.spec->terms[i], m.spec->terms[i + 1])) < 1e-12);
        }
    }
    // Oracle built from explicit Kronecker products.
    const NamedModel four = cluster_chain(4);
    const Operator w3 = 0.5 * (testing::pauli_word("IZXZ") + Operator::Identity(16, 16));
    CHECK(max_abs(four.spec->terms[1] - w3) < 1e-15);
    CHECK(four.unitary_labels == std::vector<std::string>{"Z2", "Z3"});
    CHECK(find_model("cluster_chain:5").spec->terms.size() == 3);

    CHECK_THROWS_AS(cluster_chain(2), PreconditionError);
    CHECK_THROWS_AS(cluster_chain(kClusterMaxQubits + 1), BudgetError);
    CHECK_THROWS_AS(find_model("cluster_chain:x"), std::out_of_range);
    CHECK_THROWS_AS(find_model("cluster_chain:"), std::out_of_range);
    CHECK_THROWS_AS(find_model("nope"), std::out_of_range);
}

TEST_CASE("toric patch") {
    const NamedModel base = toric_patch(false);
    CHECK(base.model.dim() == 64);
    const Operator v1 = 0.5 * (Operator::Identity(64, 64) - testing::pauli_word("XXXXII"));
    const Operator v2 = 0.5 * (Operator::Identity(64, 64) - testing::pauli_word("IIZZZZ"));
    CHECK(max_abs(base.spec->terms[0] - v1) < 1e-15);
    CHECK(max_abs(base.spec->terms[1] - v2) < 1e-15);
    CHECK(ground_space(Operator(v1 + v2)).dimension == 16);

    const NamedModel ext = toric_patch(true);
    CHECK(ext.model.dim() == 512);
    CHECK(ext.unitary_labels == std::vector<std::string>{"Z1", "X5", "Z1"});
    const double norm = spectral_norm(commutator(ext.unitaries[0], ext.spec->terms[2]));
    CHECK(norm > 0.99);
    CHECK(ext.description.find("7, 8 and 9") != std::string::npos);
}

TEST_CASE("remark counterexample") {
    const NamedModel m = remark_counterexample();
    CHECK(ground_space(m.candidate("W")).energy == doctest::Approx(1.0));
    CHECK_FALSE(frustration_free_check(m.spec->terms));
    CHECK(m.model.couplings().empty());
}
