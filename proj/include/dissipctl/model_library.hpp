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
 * @file model_library.hpp
 * The worked examples as ready-made models, with the outcomes they are
 * expected to produce.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dissipctl/open_system.hpp"
#include "dissipctl/scalability.hpp"

namespace dissipctl {

/// Provenance is one of "reported" (stated in the source), "derived"
/// (independent computation) or "trivial".
struct ExpectedOutcome {
    std::string check;
    std::string value;
    std::string provenance;
};

struct NamedModel {
    std::string name;
    std::string description;
    LindbladModel model;
    std::vector<NamedObservable> candidates;
    std::optional<AggregateSpec> spec;
    /// Couplings added when growing the aggregate by one term.
    std::vector<Operator> new_couplings;
    /// U_k with couplings[k] = s U_k W_lambda(k), when the model has that form.
    std::vector<Operator> unitaries;
    std::vector<ExpectedOutcome> expected;
    /// Pauli strings of `unitaries`, for reports.
    std::vector<std::string> unitary_labels;

    /// Throws std::out_of_range for unknown names.
    [[nodiscard]] const Operator &candidate(const std::string &name) const;
};

NamedModel two_level_example(cplx l00 = 0.0, cplx l10 = 1.0);
NamedModel three_level_example();
NamedModel two_qubit_aggregation_example();

inline constexpr std::size_t kClusterMaxQubits = 12;

/// Open chain, terms for sites 2..n-1. Throws PreconditionError for
/// n < 3 and BudgetError above kClusterMaxQubits.
NamedModel cluster_chain(std::size_t n_qubits);

/// Six-qubit patch with two stabilisers; `extended` adds qubits 7, 8 and 9
/// and the third stabiliser sharing qubit 1.
NamedModel toric_patch(bool extended = false);

NamedModel remark_counterexample();

std::vector<std::string> list_models();

/// Names from list_models(); "cluster_chain" builds the 4-qubit chain and
/// "cluster_chain:<n>" other sizes. Throws std::out_of_range.
NamedModel find_model(const std::string &name);

} // namespace dissipctl
