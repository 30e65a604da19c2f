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


#include "dissipctl/model_library.hpp"

#include <stdexcept>

#include "dissipctl/error.hpp"
#include "dissipctl/pauli.hpp"

namespace dissipctl {

namespace {

Operator matrix_unit(std::size_t dim, std::size_t row, std::size_t col) {
    Operator e = Operator::Zero(dim, dim);
    e(row, col) = 1.0;
    return e;
}

// (1 + sign * P) / 2 for a Pauli string P.
Operator stabilizer_term(const std::string &pauli, std::size_t qubits, double sign) {
    return pauli_term(pauli, qubits, 0.5 * sign, 0.5);
}

} // namespace

const Operator &NamedModel::candidate(const std::string &key) const {
    for (const auto &c : candidates) {
        if (c.name == key) {
            return c.op;
        }
    }
    throw std::out_of_range("model " + name + " has no candidate named " + key);
}

NamedModel two_level_example(cplx l00, cplx l10) {
    Operator l(2, 2);
    l << l00, 0.0, l10, 0.0;
    const Operator v = diagonal({1.0, 0.0});
    return NamedModel{
        "two_level",
        "Two-level system, H = diag(1/2, -1/2), V = diag(1, 0), L = [[l00, 0], [l10, 0]]",
        LindbladModel(TensorStructure({2}), diagonal({0.5, -0.5}), {l}),
        {{"V", v}},
        std::nullopt,
        {},
        {},
        {{"equilibrium", "diag(0, 1)", "reported"},
         {"commutator_v_h", "0", "reported"},
         {"equilibrium_purity", "1", "reported"},
         {"c_ds", "1", "derived"},
         {"c_es", "1", "derived"}},
        {},
    };
}

NamedModel three_level_example() {
    const Operator l1 = matrix_unit(3, 0, 1);
    const Operator l2 = matrix_unit(3, 1, 2) + matrix_unit(3, 2, 1);
    return NamedModel{
        "three_level",
        "Three-level system, V = diag(0, 1, 2), L1 = |0><1|, L2 = |1><2| + |2><1|",
        LindbladModel::dissipative(TensorStructure({3}), {l1, l2}),
        {{"V", diagonal({0.0, 1.0, 2.0})}},
        std::nullopt,
        {},
        {},
        {{"generator", "diag(0, 0, -1)", "reported"},
         {"dissipation", "diag(0, 2, 1)", "reported"},
         {"c_ds", "0.5", "reported"},
         {"c_es", "none", "reported"},
         {"c_lemma_d_v2", "0.25", "derived"},
         {"simulated_v_to_zero", "true", "derived"}},
        {},
    };
}

NamedModel two_qubit_aggregation_example() {
    const auto q = TensorStructure::qubits(2);
    const Operator w1 = stabilizer_term("Z1", 2, 1.0);
    const Operator w2 = stabilizer_term("Z1 Z2", 2, 1.0);
    const Operator l1 = kron(sigma_minus(), identity(2));
    const Operator l2 = matrix_unit(4, 2, 1);
    const Operator l3 = matrix_unit(4, 2, 3);

    AggregateSpec spec{q, {w1, w2}, {l1}, std::nullopt, {"W1", "W2"}, std::nullopt};
    return NamedModel{
        "two_qubit_aggregation",
        "W1 = (1 + Z1)/2, W2 = (1 + Z1 Z2)/2; L1 = s- (x) I certifies W1, L2 and L3 "
        "are added when W2 joins",
        LindbladModel::dissipative(q, {l1, l2, l3}),
        {{"W1", w1}, {"W2", w2}, {"W", w1 + w2}},
        spec,
        {l2, l3},
        {},
        {{"w_total", "diag(2, 1, 0, 1)", "reported"},
         {"corollary_d_free_es_c1", "true", "reported"},
         {"frustration_free", "true", "reported"},
         {"ground_space_dimension", "1", "derived"}},
        {},
    };
}

NamedModel cluster_chain(std::size_t n) {
    if (n < 3) {
        throw PreconditionError("cluster_chain: needs at least 3 qubits");
    }
    if (n > kClusterMaxQubits) {
        throw BudgetError("cluster_chain: " + std::to_string(n) + " qubits exceeds " +
                          std::to_string(kClusterMaxQubits));
    }
    const auto q = TensorStructure::qubits(n);
    std::vector<Operator> terms;
    std::vector<Operator> couplings;
    std::vector<Operator> unitaries;
    std::vector<std::string> labels;
    std::vector<std::string> unitary_labels;
    std::vector<NamedObservable> candidates;
    Operator total = Operator::Zero(q.total_dim(), q.total_dim());
    for (std::size_t site = 2; site + 1 <= n; ++site) {
        const std::string stab = "Z" + std::to_string(site - 1) + " X" +
                                 std::to_string(site) + " Z" + std::to_string(site + 1);
        const Operator w = stabilizer_term(stab, n, 1.0);
        const Operator u = pauli_string("Z" + std::to_string(site), n);
        terms.push_back(w);
        couplings.push_back(u * (pauli_string(stab, n) + identity(q.total_dim())));
        unitaries.push_back(u);
        unitary_labels.push_back("Z" + std::to_string(site));
        labels.push_back("W" + std::to_string(site));
        candidates.push_back({labels.back(), w});
        total += w;
    }
    candidates.push_back({"W", total});

    const std::size_t ground_dim = std::size_t{1} << (n - terms.size());
    AggregateSpec spec{q, terms, couplings, std::nullopt, labels, std::nullopt};
    NamedModel out{
        "cluster_chain",
        "Open " + std::to_string(n) +
            "-qubit cluster chain, W_l = (Z_{l-1} X_l Z_{l+1} + 1)/2 for l = 2.." +
            std::to_string(n - 1) + ", L_l = Z_l (Z_{l-1} X_l Z_{l+1} + 1)",
        LindbladModel::dissipative(q, couplings),
        std::move(candidates),
        spec,
        {},
        std::move(unitaries),
        {{"terms_commute", "true", "reported"},
         {"w_u_w_zero", "true", "reported"},
         {"ground_space_dimension", std::to_string(ground_dim), "derived"},
         {"theorem_es_stable", "true", "derived"},
         {"term_constant", "4", "derived"},
         {"frustration_free", "true", "derived"}},
        {},
    };
    out.unitary_labels = std::move(unitary_labels);
    return out;
}

NamedModel toric_patch(bool extended) {
    const std::size_t n = extended ? 9 : 6;
    const auto q = TensorStructure::qubits(n);
    const Operator v1 = stabilizer_term("X1 X2 X3 X4", n, -1.0);
    const Operator v2 = stabilizer_term("Z3 Z4 Z5 Z6", n, -1.0);
    std::vector<Operator> terms{v1, v2};
    std::vector<std::string> unitary_labels{"Z1", "X5"};
    std::vector<std::string> labels{"V1", "V2"};
    if (extended) {
        terms.push_back(stabilizer_term("X1 X7 X8 X9", n, -1.0));
        unitary_labels.emplace_back("Z1");
        labels.emplace_back("V3");
    }
    std::vector<Operator> unitaries;
    for (const auto &u : unitary_labels) {
        unitaries.push_back(pauli_string(u, n));
    }
    std::vector<Operator> couplings;
    std::vector<NamedObservable> candidates;
    Operator total = Operator::Zero(q.total_dim(), q.total_dim());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        couplings.push_back(unitaries[i] * terms[i]);
        candidates.push_back({labels[i], terms[i]});
        total += terms[i];
    }
    candidates.push_back({"W", total});

    std::vector<ExpectedOutcome> expected{
        {"z_i_commutes_with_v2", "true", "reported"},
        {"ground_space_dimension_v1_v2", extended ? "128" : "16", "derived"}};
    std::string description =
        "Toric-code patch: V1 = (1 - X1 X2 X3 X4)/2 on a star, V2 = (1 - Z3 Z4 Z5 Z6)/2 "
        "on a plaquette sharing qubits 3 and 4; L = Z1 V1, X5 V2";
    if (extended) {
        expected.push_back({"z1_commutes_with_v3", "false", "reported"});
        expected.push_back({"scalability_v3_channel0", "true", "reported"});
        description += "; extended by V3 = (1 - X1 X7 X8 X9)/2, the star at the other "
                       "end of qubit 1 whose remaining edges are qubits 7, 8 and 9, "
                       "with L = Z1 V3";
    }
    AggregateSpec spec{q, terms, couplings, std::nullopt, labels, std::nullopt};
    NamedModel out{
        extended ? "toric_patch_extended" : "toric_patch",
        description,
        LindbladModel::dissipative(q, couplings),
        std::move(candidates),
        spec,
        {},
        std::move(unitaries),
        std::move(expected),
        {},
    };
    out.unitary_labels = std::move(unitary_labels);
    return out;
}

NamedModel remark_counterexample() {
    const Operator w1 = diagonal({1.0, 0.0});
    const Operator w2 = diagonal({0.0, 1.0});
    const TensorStructure q({2});
    AggregateSpec spec{q, {w1, w2}, {}, std::nullopt, {"W1", "W2"}, std::nullopt};
    return NamedModel{
        "remark_counterexample",
        "W1 = diag(1, 0), W2 = diag(0, 1): W = I has ground energy 1",
        LindbladModel::dissipative(q, {}),
        {{"W1", w1}, {"W2", w2}, {"W", w1 + w2}},
        spec,
        {},
        {},
        {{"ground_energy", "1", "reported"},
         {"frustration_free", "false", "trivial"},
         {"w_expectation_constant", "1", "trivial"}},
        {},
    };
}

std::vector<std::string> list_models() {
    return {"two_level",   "three_level",          "two_qubit_aggregation",
            "cluster_chain", "toric_patch",        "toric_patch_extended",
            "remark_counterexample"};
}

NamedModel find_model(const std::string &name) {
    if (name == "two_level") {
        return two_level_example();
    }
    if (name == "three_level") {
        return three_level_example();
    }
    if (name == "two_qubit_aggregation") {
        return two_qubit_aggregation_example();
    }
    if (name == "cluster_chain") {
        return cluster_chain(4);
    }
    if (name.rfind("cluster_chain:", 0) == 0) {
        const std::string size = name.substr(14);
        std::size_t pos = 0;
        unsigned long n = 0;
        try {
            n = std::stoul(size, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos == 0 || pos != size.size()) {
            throw std::out_of_range("unknown model: " + name);
        }
        return cluster_chain(n);
    }
    if (name == "toric_patch") {
        return toric_patch(false);
    }
    if (name == "toric_patch_extended") {
        return toric_patch(true);
    }
    if (name == "remark_counterexample") {
        return remark_counterexample();
    }
    throw std::out_of_range("unknown model: " + name);
}

} // namespace dissipctl
