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

#include "dissipctl/pauli.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "dissipctl/error.hpp"

namespace dissipctl {

namespace {

Operator single_qubit(char letter) {
    switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'I':
        return identity(2);
    case 'X':
        return sigma_x();
    case 'Y':
        return sigma_y();
    case 'Z':
        return sigma_z();
    default:
        throw FormatError(std::string("pauli string: unknown factor '") +
                          letter + "'");
    }
}

} // namespace

Operator pauli_string(std::string_view text, std::size_t qubits) {
    std::vector<Operator> local(qubits, identity(2));

    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos >= text.size()) {
            break;
        }
        const std::size_t start = pos;
        while (pos < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        const std::string_view token = text.substr(start, pos - start);
        if (token == "1") {
            continue;
        }
        std::size_t site = 0;
        const auto *first = token.data() + 1;
        const auto *last = token.data() + token.size();
        const auto [ptr, ec] = std::from_chars(first, last, site);
        if (token.size() < 2 || ec != std::errc() || ptr != last) {
            throw FormatError("pauli string: malformed factor '" +
                              std::string(token) + "'");
        }
        if (site == 0 || site > qubits) {
            throw FormatError("pauli string: qubit " + std::to_string(site) +
                              " out of range 1.." + std::to_string(qubits));
        }
        local[site - 1] = local[site - 1] * single_qubit(token[0]);
    }
    return kron(std::span<const Operator>(local));
}

Operator pauli_term(std::string_view text, std::size_t qubits,
                    cplx coefficient, cplx offset) {
    Operator out = coefficient * pauli_string(text, qubits);
    out.diagonal().array() += offset;
    return out;
}

} // namespace dissipctl
