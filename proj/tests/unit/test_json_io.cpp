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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "dissipctl/error.hpp"
#include "dissipctl/json_io.hpp"
#include "dissipctl/pauli.hpp"
#include "support.hpp"

using namespace dissipctl;
using testing::max_abs;

namespace {

std::string message_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const FormatError &e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("number formatting") {
    Json v = Json::object();
    v["a"] = 0.5;
    v["b"] = -0.0;
    v["c"] = std::numeric_limits<double>::infinity();
    v["d"] = 3;
    v["e"] = Json::array({1.0, 2.0});
    const std::string text = dump_json(v);
    CHECK(text.find("\"a\": 5.00000000000000e-01") != std::string::npos);
    CHECK(text.find("\"b\": 0.00000000000000e+00") != std::string::npos);
    CHECK(text.find("\"c\": null") != std::string::npos);
    CHECK(text.find("\"d\": 3") != std::string::npos);
    CHECK(text.find("[1.00000000000000e+00, 2.00000000000000e+00]") != std::string::npos);
    CHECK(dump_json(Json::object()) == "{}\n");
    CHECK(dump_json(Json::array()) == "[]\n");
}

TEST_CASE("operator encodings") {
    const std::vector<std::size_t> q2{2, 2};
    const Operator zz = operator_from_json(Json("Z1 Z2"), q2, "H");
    CHECK(max_abs(zz - diagonal({1, -1, -1, 1})) == 0.0);

    const Json term = parse_json(R"({"pauli": "Z1", "coefficient": 0.5, "offset": 0.5})");
    CHECK(max_abs(operator_from_json(term, {2}, "W") - diagonal({1, 0})) == 0.0);

    const Json sum = parse_json(R"({"sum": ["Z1", {"pauli": "Z2", "coefficient": [0, 1]}]})");
    const Operator s = operator_from_json(sum, q2, "X");
    CHECK(max_abs(s - (pauli_string("Z1", 2) + cplx(0, 1) * pauli_string("Z2", 2))) == 0.0);

    const Json matrix = parse_json("[[1, [0, 2]], [[0, -2], 3]]");
    const Operator m = operator_from_json(matrix, {2}, "M");
    CHECK(m(0, 1) == cplx(0, 2));
    CHECK(m(1, 0) == cplx(0, -2));

    std::mt19937_64 rng(1);
    const Operator r = testing::random_matrix(3, 3, rng);
    CHECK(max_abs(operator_from_json(parse_json(dump_json(to_json(r))), {3}, "R") - r) < 1e-13);

    CHECK(message_of([&] { operator_from_json(parse_json("[[1, 0]]"), {2}, "L[0]"); })
              .rfind("L[0]", 0) == 0);
    CHECK(message_of([&] { operator_from_json(parse_json(R"([[1, "x"], [0, 1]])"), {2}, "H"); })
              .find("H[0][1]") != std::string::npos);
    CHECK(message_of([&] { operator_from_json(Json("Z1"), {3}, "V"); }).find("V") == 0);
    CHECK(message_of([&] { operator_from_json(Json("Q1"), {2}, "V"); }).find("V") == 0);
    CHECK(message_of([&] { operator_from_json(parse_json(R"({"foo": 1})"), {2}, "V"); }).find("V") == 0);
    CHECK(message_of([&] { operator_from_json(Json(3), {2}, "V"); }).find("V") == 0);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_json("{"), FormatError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), FormatError);
}

TEST_CASE("model round trip") {
    const NamedModel named = three_level_example();
    const Json j = model_to_json(named.model);
    const LindbladModel back = model_from_json(parse_json(dump_json(j)));
    CHECK(back.structure() == named.model.structure());
    REQUIRE(back.couplings().size() == 2);
    CHECK(max_abs(back.couplings()[1] - named.model.couplings()[1]) == 0.0);

    const LindbladModel pauli = model_from_json(parse_json(R"({"dims": [2, 2], "L": ["Z1", [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]]})"));
    CHECK(max_abs(pauli.hamiltonian()) == 0.0);
    CHECK(pauli.couplings().size() == 2);

    CHECK_THROWS_AS(model_from_json(parse_json(R"({"L": []})")), FormatError);
    CHECK_THROWS_AS(model_from_json(parse_json(R"({"dims": [2], "H": [[0, 1], [0, 0]]})")), FormatError);
    CHECK_THROWS_AS(model_from_json(parse_json("[]")), FormatError);
    CHECK(message_of([] { model_from_json(parse_json(R"({"dims": [2], "L": "Z1"})")); }).find("L") !=
          std::string::npos);
}

TEST_CASE("spec round trip") {
    const NamedModel toric = toric_patch(false);
    const SpecDocument doc{*toric.spec, {}, toric.unitaries, toric.unitary_labels};
    const Json j = spec_to_json(doc);
    CHECK(j["unitaries"][0] == "Z1");
    const SpecDocument back = spec_from_json(parse_json(dump_json(j)));
    CHECK(back.spec.terms.size() == 2);
    CHECK(back.unitary_labels == toric.unitary_labels);
    CHECK(max_abs(back.unitaries[1] - toric.unitaries[1]) == 0.0);
    CHECK(max_abs(back.spec.couplings[0] - toric.spec->couplings[0]) < 1e-13);
    CHECK(back.spec.labels == toric.spec->labels);

    // Nested under "spec", as in exported models.
    const Json nested = named_model_to_json(two_qubit_aggregation_example());
    const SpecDocument two = spec_from_json(nested);
    CHECK(two.new_couplings.size() == 2);
    CHECK(max_abs(two.spec.total() - diagonal({2, 1, 0, 1})) < 1e-15);

    const Json shorthand = parse_json(R"({
        "dims": [2, 2, 2],
        "terms": [{"pauli": "Z1 X2 Z3", "coefficient": 0.5, "offset": 0.5}],
        "couplings": [{"pauli": "Z2", "coefficient": 1}],
        "assignment": [0]
    })");
    const SpecDocument s = spec_from_json(shorthand);
    CHECK(s.spec.assignment == std::vector<std::size_t>{0});
    CHECK(max_abs(s.spec.terms[0] * s.spec.terms[0] - s.spec.terms[0]) < 1e-15);

    CHECK_THROWS_AS(spec_from_json(parse_json(R"({"dims": [2], "terms": [[[1,0],[0,-1]]], "couplings": []})")),
                    FormatError);
    CHECK_THROWS_AS(spec_from_json(parse_json(R"({"dims": [2], "terms": ["Z1"], "couplings": [], "assignment": [-1]})")),
                    FormatError);
}

TEST_CASE("named model export") {
    const Json j = named_model_to_json(cluster_chain(4));
    CHECK(j["name"] == "cluster_chain");
    CHECK(j["dims"].size() == 4);
    CHECK(j["candidates"].contains("W2"));
    CHECK(j["expected"][0].contains("provenance"));
    CHECK(j["spec"]["unitaries"][0] == "Z2");
}

TEST_CASE("report encodings") {
    StabilityReport r;
    r.es.constant = 0.5;
    r.convergence = "exponential";
    const Json j = to_json(r);
    CHECK(j.contains("is_lyapunov"));
    CHECK(j["c_es"].get<double>() == 0.5);
    CHECK(j["c_ds"].is_null());
    CHECK(j["invariant_set_criterion"] == "not checked - state-dependent");

    const SynthesisResult s = synthesize_projection(diagonal({1, 0}), 1.0);
    const Json sj = to_json(s);
    CHECK(sj.contains("U"));
    CHECK(sj.contains("L"));
    CHECK(sj.contains("residuals"));

    Factorization f;
    f.witness = ColumnVector::Zero(2);
    CHECK(to_json(f)["factorizable"] == false);
}

TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "dissipctl_json_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.json";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(write_file_atomic("/nonexistent/dir/out.json", "x"));
}
