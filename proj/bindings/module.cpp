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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "dissipctl/error.hpp"
#include "dissipctl/json_io.hpp"
#include "dissipctl/model_library.hpp"
#include "dissipctl/open_system.hpp"
#include "dissipctl/scalability.hpp"
#include "dissipctl/stability.hpp"
#include "dissipctl/synthesis.hpp"

namespace py = pybind11;
using namespace dissipctl;

namespace {

py::object to_python(const Json &value) {
    return py::module_::import("json").attr("loads")(value.dump());
}

Json from_python(const py::object &value) {
    return parse_json(py::module_::import("json").attr("dumps")(value).cast<std::string>());
}

LindbladModel make_model(const std::optional<Operator> &h, const std::vector<Operator> &ls,
                         std::optional<std::vector<std::size_t>> dims) {
    std::size_t n = h ? static_cast<std::size_t>(h->rows())
                      : (ls.empty() ? 0 : static_cast<std::size_t>(ls.front().rows()));
    if (n == 0) throw DimensionError("model needs a Hamiltonian or at least one coupling");
    TensorStructure structure(dims ? *dims : std::vector<std::size_t>{n});
    return LindbladModel(structure, h ? *h : Operator::Zero(n, n), ls);
}

py::dict synthesis_dict(const SynthesisResult &r) {
    py::dict d;
    d["unitary"] = r.unitary;
    d["coupling"] = r.coupling;
    d["c"] = r.c;
    d["unitarity_residual"] = r.residuals.unitarity;
    d["constraint_residual"] = r.residuals.constraint;
    d["es_margin"] = r.residuals.es_margin;
    return d;
}

py::object condition(const ConditionResult &r) {
    py::dict d;
    d["constant"] = r.constant ? py::object(py::float_(*r.constant)) : py::none();
    d["margin"] = r.margin;
    d["diagnostic"] = r.diagnostic;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lyapunov-based dissipative stability checks for open quantum systems.";

    auto base = py::register_exception<Error>(m, "DissipctlError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

    m.def(
        "generator",
        [](const Operator &x, std::optional<Operator> h, const std::vector<Operator> &ls) {
            return generator(x, make_model(h, ls, std::nullopt));
        },
        py::arg("x"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{});
    m.def(
        "dissipation",
        [](const Operator &x, std::optional<Operator> h, const std::vector<Operator> &ls) {
            return dissipation_functional(x, make_model(h, ls, std::nullopt));
        },
        py::arg("x"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{});

    m.def(
        "check_es",
        [](const Operator &v, std::optional<Operator> h, const std::vector<Operator> &ls) {
            return condition(check_condition_es(v, make_model(h, ls, std::nullopt)));
        },
        py::arg("v"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{});
    m.def(
        "check_ds",
        [](const Operator &v, std::optional<Operator> h, const std::vector<Operator> &ls) {
            return condition(check_condition_ds(v, make_model(h, ls, std::nullopt)));
        },
        py::arg("v"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{});
    m.def(
        "certify",
        [](const Operator &v, std::optional<Operator> h, const std::vector<Operator> &ls,
           std::optional<std::vector<std::size_t>> dims, bool simulate, std::uint64_t seed) {
            CertifyOptions options;
            options.simulate = simulate;
            options.seed = seed;
            const StabilityReport r =
                certify_ground_state_stability(v, make_model(h, ls, dims), options);
            py::object d = to_python(to_json(r));
            d["certified"] = r.certified();
            return d;
        },
        py::arg("v"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{},
        py::arg("dims") = py::none(), py::arg("simulate") = false, py::arg("seed") = 0);

    m.def(
        "evolve",
        [](const Operator &rho0, std::optional<Operator> h, const std::vector<Operator> &ls,
           double t_final, double dt, const std::map<std::string, Operator> &observables) {
            std::vector<NamedObservable> obs;
            for (const auto &[name, op] : observables) obs.push_back({name, op});
            const Trajectory tr = evolve(make_model(h, ls, std::nullopt), DensityState(rho0),
                                         t_final, dt, obs);
            py::dict d;
            d["t"] = tr.times();
            for (const auto &s : tr.observables()) d[py::str(s.name)] = s.values;
            d["final_state"] = tr.states().back().matrix();
            return d;
        },
        py::arg("rho0"), py::arg("H") = py::none(), py::arg("L") = std::vector<Operator>{},
        py::arg("t_final") = 10.0, py::arg("dt") = 0.05,
        py::arg("observables") = std::map<std::string, Operator>{});

    m.def(
        "synthesize_projection",
        [](const Operator &v, double c) { return synthesis_dict(synthesize_projection(v, c)); },
        py::arg("v"), py::arg("c") = 1.0);
    m.def(
        "synthesize_pinv",
        [](const Operator &v, std::optional<Operator> q, double c, std::uint64_t seed) {
            BilinearOptions options;
            options.seed = seed;
            return synthesis_dict(synthesize_pinv(v, q ? *q : v, c, options));
        },
        py::arg("v"), py::arg("q") = py::none(), py::arg("c") = 1.0, py::arg("seed") = 0);
    m.def(
        "check_factorizable",
        [](const Operator &l, const Operator &v) {
            const Factorization f = check_factorizable(l, v);
            py::dict d;
            d["factorizable"] = f.factorizable;
            d["residual"] = f.residual;
            d["unitary"] = f.unitary ? py::cast(*f.unitary) : py::none();
            d["witness"] = f.witness ? py::cast(*f.witness) : py::none();
            return d;
        },
        py::arg("L"), py::arg("v"));

    m.def("list_models", &list_models);
    m.def(
        "model",
        [](const std::string &name) {
            const NamedModel nm = find_model(name);
            py::dict d;
            d["name"] = nm.name;
            d["description"] = nm.description;
            d["H"] = nm.model.hamiltonian();
            d["L"] = nm.model.couplings();
            d["dims"] = nm.model.structure().dims();
            py::dict cands;
            for (const auto &c : nm.candidates) cands[py::str(c.name)] = c.op;
            d["candidates"] = cands;
            if (nm.spec) {
                d["spec"] = to_python(spec_to_json(
                    SpecDocument{*nm.spec, nm.new_couplings, nm.unitaries, nm.unitary_labels}));
            }
            return d;
        },
        py::arg("name"));

    m.def(
        "scale",
        [](const py::object &spec, const std::string &theorem) -> py::object {
            const SpecDocument doc = spec_from_json(from_python(spec));
            if (theorem == "es") return to_python(to_json(check_theorem_es_aggregation(doc.spec)));
            if (theorem == "ds") return to_python(to_json(check_theorem_ds_aggregation(doc.spec)));
            if (theorem == "commuting") {
                return to_python(to_json(check_corollary_commuting(doc.spec, doc.unitaries)));
            }
            throw py::value_error("theorem must be one of es, ds, commuting");
        },
        py::arg("spec"), py::arg("theorem") = "es");
}
