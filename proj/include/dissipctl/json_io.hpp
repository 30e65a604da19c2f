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
 * @file json_io.hpp
 * JSON encodings. A complex entry is [re, im] (a bare number is read as
 * real); a matrix is an array of rows. Wherever an operator is expected on a
 * qubit register the Pauli shorthand is accepted as well:
 *
 *     "Z1 X2 Z3"
 *     {"pauli": "Z1 X2 Z3", "coefficient": 0.5, "offset": 0.5}
 *     {"sum": [op, op, ...]}
 *
 * Output numbers use 15 significant digits in lowercase scientific notation.
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dissipctl/model_library.hpp"
#include "dissipctl/scalability.hpp"
#include "dissipctl/stability.hpp"
#include "dissipctl/synthesis.hpp"

namespace dissipctl {

using Json = nlohmann::ordered_json;

/// Throws FormatError on syntax errors.
Json parse_json(const std::string &text);
/// Throws FormatError when the file cannot be read or parsed.
Json read_json_file(const std::filesystem::path &path);

/// Deterministic text form; floating-point numbers as %.14e.
std::string dump_json(const Json &value, int indent = 2);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

Json to_json(const Operator &op);
Json to_json(cplx z);

/// `field` names the location in error messages. `dims` resolves Pauli
/// shorthand and checks the shape of explicit matrices.
Operator operator_from_json(const Json &value, const std::vector<std::size_t> &dims,
                            const std::string &field);

Json model_to_json(const LindbladModel &model);
/// {"dims": [...], "H": op (optional), "L": [op, ...]}
LindbladModel model_from_json(const Json &value);

struct SpecDocument {
    AggregateSpec spec;
    std::vector<Operator> new_couplings;
    std::vector<Operator> unitaries;
    std::vector<std::string> unitary_labels;
};

Json spec_to_json(const SpecDocument &doc);
/// {"dims", "terms", "couplings", "assignment"?, "labels"?, "H"?,
///  "new_couplings"?, "unitaries"?}; also accepts a document with the spec
/// nested under "spec".
SpecDocument spec_from_json(const Json &value);

Json named_model_to_json(const NamedModel &model);

Json to_json(const StabilityReport &report);
Json to_json(const SynthesisResult &result);
Json to_json(const MultiChannelResult &result);
Json to_json(const AggregateReport &report);
Json to_json(const IncrementalReport &report);
Json to_json(const CorollaryReport &report);
Json to_json(const CommutingReport &report);
Json to_json(const Factorization &result);

} // namespace dissipctl
