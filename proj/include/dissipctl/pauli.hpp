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
 * @file pauli.hpp
 * Pauli-string shorthand, e.g. "Z1 X2 Z3": whitespace separated factors, each
 * a letter from {I, X, Y, Z} followed by a 1-based qubit index. Factors on the
 * same qubit multiply left to right. The empty string and "1" denote the
 * identity.
 */
#pragma once

#include <string_view>

#include "dissipctl/operator_algebra.hpp"

namespace dissipctl {

/// Dense operator for a Pauli string on `qubits` two-level sites.
Operator pauli_string(std::string_view text, std::size_t qubits);

/// coefficient * P + offset * I, covering forms such as (P + 1) / 2.
Operator pauli_term(std::string_view text, std::size_t qubits,
                    cplx coefficient, cplx offset = 0.0);

} // namespace dissipctl
