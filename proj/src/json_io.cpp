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


#include "dissipctl/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dissipctl/error.hpp"
#include "dissipctl/pauli.hpp"

namespace dissipctl {

namespace {

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", x == 0.0 ? 0.0 : x);
    return buf;
}

bool is_scalar(const Json &v) { return !v.is_array() && !v.is_object(); }

bool is_inline(const Json &v) {
    for (const auto &e : v) {
        if (e.is_object()) {
            return false;
        }
        if (e.is_array()) {
            for (const auto &inner : e) {
                if (!is_scalar(inner)) {
                    return false;
                }
            }
        }
    }
    return true;
}

void dump_to(std::ostringstream &os, const Json &v, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
    case Json::value_t::number_float:
        os << format_double(v.get<double>());
        return;
    case Json::value_t::array: {
        if (v.empty()) {
            os << "[]";
            return;
        }
        if (is_inline(v)) {
            os << '[';
            bool first = true;
            for (const auto &e : v) {
                os << (first ? "" : ", ");
                dump_to(os, e, indent, depth + 1);
                first = false;
            }
            os << ']';
            return;
        }
        os << "[\n";
        bool first = true;
        for (const auto &e : v) {
            os << (first ? "" : ",\n") << pad;
            dump_to(os, e, indent, depth + 1);
            first = false;
        }
        os << '\n' << close_pad << ']';
        return;
    }
    case Json::value_t::object: {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto &[key, e] : v.items()) {
            os << (first ? "" : ",\n") << pad << Json(key).dump() << ": ";
            dump_to(os, e, indent, depth + 1);
            first = false;
        }
        os << '\n' << close_pad << '}';
        return;
    }
    default:
        os << v.dump();
    }
}

[[noreturn]] void fail(const std::string &field, const std::string &what) {
    throw FormatError(field + ": " + what);
}

cplx complex_from_json(const Json &v, const std::string &field) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    fail(field, "expected a number or [re, im]");
}

std::size_t total_dim(const std::vector<std::size_t> &dims) {
    std::size_t n = 1;
    for (auto d : dims) {
        n *= d;
    }
    return n;
}

std::vector<std::size_t> dims_from_json(const Json &v) {
    if (!v.contains("dims")) {
        fail("dims", "missing");
    }
    const Json &d = v.at("dims");
    if (!d.is_array() || d.empty()) {
        fail("dims", "expected a nonempty array of positive integers");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_number_integer() || d[i].get<long long>() < 1) {
            fail("dims[" + std::to_string(i) + "]", "expected a positive integer");
        }
        out.push_back(d[i].get<std::size_t>());
    }
    return out;
}

std::vector<Operator> operator_list(const Json &v, const char *key,
                                    const std::vector<std::size_t> &dims, bool required) {
    if (!v.contains(key)) {
        if (required) {
            fail(key, "missing");
        }
        return {};
    }
    const Json &arr = v.at(key);
    if (!arr.is_array()) {
        fail(key, "expected an array of operators");
    }
    std::vector<Operator> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(operator_from_json(arr[i], dims,
                                         std::string(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Json operator_list_json(const std::vector<Operator> &ops) {
    Json arr = Json::array();
    for (const auto &op : ops) {
        arr.push_back(to_json(op));
    }
    return arr;
}

Json optional_number(const std::optional<double> &x) {
    return x ? Json(*x) : Json(nullptr);
}

Json term_json(const TermVerdict &t) {
    return Json{{"term", t.term},
                {"channel", t.channel},
                {"c", optional_number(t.c)},
                {"local", t.local},
                {"local_margin", t.local_margin},
                {"scalability",
                 {{"holds", t.scalability.holds}, {"margin", t.scalability.margin}}}};
}

Json pairs_json(const std::vector<std::pair<std::size_t, std::size_t>> &pairs) {
    Json arr = Json::array();
    for (const auto &[a, b] : pairs) {
        arr.push_back(Json::array({a, b}));
    }
    return arr;
}

} // namespace

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error &e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
}

std::string dump_json(const Json &value, int indent) {
    std::ostringstream os;
    dump_to(os, value, indent, 0);
    os << '\n';
    return os.str();
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    const std::filesystem::path tmp =
        path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                    ec.message());
    }
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Operator &op) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < op.cols(); ++j) {
            row.push_back(to_json(op(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Operator operator_from_json(const Json &value, const std::vector<std::size_t> &dims,
                            const std::string &field) {
    const std::size_t n = total_dim(dims);
    auto qubits = [&]() {
        for (auto d : dims) {
            if (d != 2) {
                fail(field, "Pauli shorthand requires every site to have dimension 2");
            }
        }
        return dims.size();
    };
    if (value.is_string()) {
        try {
            return pauli_string(value.get<std::string>(), qubits());
        } catch (const FormatError &e) {
            fail(field, e.what());
        }
    }
    if (value.is_object()) {
        if (value.contains("pauli")) {
            if (!value.at("pauli").is_string()) {
                fail(field + ".pauli", "expected a string");
            }
            const cplx coefficient =
                value.contains("coefficient")
                    ? complex_from_json(value.at("coefficient"), field + ".coefficient")
                    : cplx(1.0);
            const cplx offset = value.contains("offset")
                                    ? complex_from_json(value.at("offset"), field + ".offset")
                                    : cplx(0.0);
            try {
                return pauli_term(value.at("pauli").get<std::string>(), qubits(),
                                  coefficient, offset);
            } catch (const FormatError &e) {
                fail(field, e.what());
            }
        }
        if (value.contains("sum")) {
            const Json &parts = value.at("sum");
            if (!parts.is_array()) {
                fail(field + ".sum", "expected an array of operators");
            }
            Operator total = Operator::Zero(n, n);
            for (std::size_t i = 0; i < parts.size(); ++i) {
                total += operator_from_json(parts[i], dims,
                                            field + ".sum[" + std::to_string(i) + "]");
            }
            return total;
        }
        fail(field, "expected a matrix, a Pauli string, {\"pauli\": ...} or {\"sum\": ...}");
    }
    if (!value.is_array()) {
        fail(field, "expected a matrix (array of rows)");
    }
    if (value.size() != n) {
        fail(field, "expected " + std::to_string(n) + " rows, got " +
                        std::to_string(value.size()));
    }
    Operator out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Json &row = value[i];
        const std::string row_field = field + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n) {
            fail(row_field, "expected a row of " + std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                complex_from_json(row[j], row_field + "[" + std::to_string(j) + "]");
        }
    }
    return out;
}

Json model_to_json(const LindbladModel &model) {
    return Json{{"dims", model.structure().dims()},
                {"H", to_json(model.hamiltonian())},
                {"L", operator_list_json(model.couplings())}};
}

LindbladModel model_from_json(const Json &value) {
    if (!value.is_object()) {
        fail("model", "expected an object");
    }
    const auto dims = dims_from_json(value);
    const std::size_t n = total_dim(dims);
    const Operator h = value.contains("H") ? operator_from_json(value.at("H"), dims, "H")
                                           : Operator::Zero(n, n);
    try {
        return LindbladModel(TensorStructure(dims), h, operator_list(value, "L", dims, false));
    } catch (const NotHermitianError &e) {
        fail("H", e.what());
    }
}

Json spec_to_json(const SpecDocument &doc) {
    const AggregateSpec &s = doc.spec;
    Json out{{"dims", s.structure.dims()},
             {"terms", operator_list_json(s.terms)},
             {"couplings", operator_list_json(s.couplings)}};
    if (s.assignment) {
        out["assignment"] = *s.assignment;
    }
    if (!s.labels.empty()) {
        out["labels"] = s.labels;
    }
    if (s.hamiltonian) {
        out["H"] = to_json(*s.hamiltonian);
    }
    if (!doc.new_couplings.empty()) {
        out["new_couplings"] = operator_list_json(doc.new_couplings);
    }
    if (!doc.unitaries.empty()) {
        if (doc.unitary_labels.size() == doc.unitaries.size()) {
            out["unitaries"] = doc.unitary_labels;
        } else {
            out["unitaries"] = operator_list_json(doc.unitaries);
        }
    }
    return out;
}

SpecDocument spec_from_json(const Json &root) {
    if (!root.is_object()) {
        fail("spec", "expected an object");
    }
    const Json &value = (!root.contains("terms") && root.contains("spec")) ? root.at("spec")
                                                                          : root;
    const auto dims = dims_from_json(value);
    SpecDocument doc;
    doc.spec.structure = TensorStructure(dims);
    doc.spec.terms = operator_list(value, "terms", dims, true);
    doc.spec.couplings = operator_list(value, "couplings", dims, false);
    if (value.contains("assignment")) {
        const Json &a = value.at("assignment");
        if (!a.is_array()) {
            fail("assignment", "expected an array of coupling indices");
        }
        std::vector<std::size_t> assignment;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number_integer() || a[i].get<long long>() < 0) {
                fail("assignment[" + std::to_string(i) + "]",
                     "expected a non-negative integer");
            }
            assignment.push_back(a[i].get<std::size_t>());
        }
        doc.spec.assignment = assignment;
    }
    if (value.contains("labels")) {
        const Json &l = value.at("labels");
        if (!l.is_array()) {
            fail("labels", "expected an array of strings");
        }
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (!l[i].is_string()) {
                fail("labels[" + std::to_string(i) + "]", "expected a string");
            }
            doc.spec.labels.push_back(l[i].get<std::string>());
        }
    }
    if (value.contains("H")) {
        doc.spec.hamiltonian = operator_from_json(value.at("H"), dims, "H");
    }
    doc.new_couplings = operator_list(value, "new_couplings", dims, false);
    doc.unitaries = operator_list(value, "unitaries", dims, false);
    if (value.contains("unitaries")) {
        const Json &u = value.at("unitaries");
        for (std::size_t i = 0; i < u.size(); ++i) {
            doc.unitary_labels.push_back(u[i].is_string() ? u[i].get<std::string>()
                                                          : "U" + std::to_string(i));
        }
    }
    try {
        doc.spec.validate();
    } catch (const Error &e) {
        fail("spec", e.what());
    }
    return doc;
}

Json named_model_to_json(const NamedModel &m) {
    Json out = model_to_json(m.model);
    Json doc{{"name", m.name}, {"description", m.description}};
    doc.update(out);
    Json candidates = Json::object();
    for (const auto &c : m.candidates) {
        candidates[c.name] = to_json(c.op);
    }
    doc["candidates"] = std::move(candidates);
    if (m.spec) {
        doc["spec"] = spec_to_json(SpecDocument{*m.spec, m.new_couplings, m.unitaries,
                                                m.unitary_labels});
    }
    Json expected = Json::array();
    for (const auto &e : m.expected) {
        expected.push_back(
            Json{{"check", e.check}, {"value", e.value}, {"provenance", e.provenance}});
    }
    doc["expected"] = std::move(expected);
    return doc;
}

Json to_json(const StabilityReport &r) {
    Json margins = Json::object();
    for (const auto &[k, v] : r.margins) {
        margins[k] = v;
    }
    Json out{{"is_lyapunov", r.lyapunov.is_lyapunov},
             {"c_es", optional_number(r.es.constant)},
             {"c_ds", optional_number(r.ds.constant)},
             {"d", r.ground_energy},
             {"margins", std::move(margins)},
             {"certified", r.certified()},
             {"convergence", r.convergence},
             {"invariant_set_criterion", r.invariant_set_criterion},
             {"diagnostics",
              {{"lyapunov", r.lyapunov.failures},
               {"es", r.es.diagnostic},
               {"ds", r.ds.diagnostic}}}};
    if (r.simulation) {
        const SimulationCheck &s = *r.simulation;
        out["simulation"] = Json{{"runs", s.runs},
                                 {"t_final", s.t_final},
                                 {"max_final_value", s.max_final_value},
                                 {"converged", s.converged},
                                 {"monotone", s.monotone},
                                 {"within_exponential_envelope",
                                  s.within_exponential_envelope
                                      ? Json(*s.within_exponential_envelope)
                                      : Json(nullptr)}};
    } else {
        out["simulation"] = nullptr;
    }
    return out;
}

Json to_json(const SynthesisResult &r) {
    return Json{{"U", to_json(r.unitary)},
                {"L", to_json(r.coupling)},
                {"c", r.c},
                {"residuals",
                 {{"unitarity", r.residuals.unitarity},
                  {"constraint", r.residuals.constraint},
                  {"es_margin", r.residuals.es_margin}}}};
}

Json to_json(const MultiChannelResult &r) {
    Json channels = Json::array();
    for (const auto &ch : r.channels) {
        channels.push_back(to_json(ch));
    }
    return Json{{"c", r.c}, {"es_margin", r.es_margin}, {"channels", std::move(channels)}};
}

Json to_json(const AggregateReport &r) {
    Json terms = Json::array();
    for (const auto &t : r.terms) {
        terms.push_back(term_json(t));
    }
    return Json{{"theorem", r.theorem},
                {"stable", r.stable},
                {"w_is_lyapunov", r.w_is_lyapunov},
                {"min_constant", optional_number(r.min_constant)},
                {"dissipation_cross_norm", r.dissipation_cross_norm},
                {"terms", std::move(terms)}};
}

Json to_json(const IncrementalReport &r) {
    return Json{{"holds", r.holds},
                {"margin", r.margin},
                {"generator_margin", r.generator_margin},
                {"dissipative_margin", optional_number(r.dissipative_margin)},
                {"d_n", r.d_n},
                {"d_next", r.d_next},
                {"ladder_ok", r.ladder_ok},
                {"prior_c", optional_number(r.prior_c)},
                {"cross_term_norm", r.cross_term_norm}};
}

Json to_json(const CorollaryReport &r) {
    return Json{{"holds", r.holds},
                {"margin", r.margin},
                {"theorem_holds", r.theorem_holds},
                {"theorem_margin", r.theorem_margin}};
}

Json to_json(const CommutingReport &r) {
    Json scales = Json::array();
    for (const auto &s : r.scales) {
        scales.push_back(to_json(s));
    }
    Json local = Json::array();
    for (const auto &t : r.local) {
        local.push_back(term_json(t));
    }
    return Json{{"holds", r.holds},
                {"terms_commute", r.terms_commute},
                {"noncommuting", pairs_json(r.noncommuting)},
                {"noncommuting_terms", pairs_json(r.noncommuting_terms)},
                {"scales", std::move(scales)},
                {"local", std::move(local)}};
}

Json to_json(const Factorization &r) {
    Json witness = nullptr;
    if (r.witness) {
        witness = Json::array();
        for (Eigen::Index i = 0; i < r.witness->size(); ++i) {
            witness.push_back(to_json((*r.witness)(i)));
        }
    }
    return Json{{"factorizable", r.factorizable},
                {"residual", r.residual},
                {"unitary", r.unitary ? to_json(*r.unitary) : Json(nullptr)},
                {"witness", std::move(witness)}};
}

} // namespace dissipctl
