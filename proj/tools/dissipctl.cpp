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


#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dissipctl/error.hpp"
#include "dissipctl/json_io.hpp"
#include "dissipctl/model_library.hpp"
#include "dissipctl/scalability.hpp"
#include "dissipctl/stability.hpp"
#include "dissipctl/synthesis.hpp"

#ifndef DISSIPCTL_VERSION
#define DISSIPCTL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace dissipctl;

namespace {

enum Exit : int {
    kOk = 0,
    kInputError = 1,
    kNotCertified = 2,
    kInfeasible = 3,
    kSolverBudget = 4,
    kDimensionCap = 5,
};

constexpr const char *kBuiltin = "builtin:";

struct Common {
    std::uint64_t seed = 0;
    double tol = kDefaultTol;
    std::string out;
};

bool is_builtin(const std::string &ref) { return ref.rfind(kBuiltin, 0) == 0; }

// A model document: the model plus whatever else the JSON carried.
struct ModelDoc {
    LindbladModel model;
    Json raw;
};

ModelDoc load_model(const std::string &ref) {
    if (is_builtin(ref)) {
        try {
            const NamedModel m = find_model(ref.substr(std::char_traits<char>::length(kBuiltin)));
            return {m.model, named_model_to_json(m)};
        } catch (const std::out_of_range &e) {
            throw FormatError(std::string("--model: ") + e.what());
        }
    }
    Json raw = read_json_file(ref);
    return {model_from_json(raw), std::move(raw)};
}

SpecDocument load_spec(const std::string &ref) {
    if (is_builtin(ref)) {
        NamedModel m = [&] {
            try {
                return find_model(ref.substr(std::char_traits<char>::length(kBuiltin)));
            } catch (const std::out_of_range &e) {
                throw FormatError(std::string("--spec: ") + e.what());
            }
        }();
        if (!m.spec) {
            throw FormatError("--spec: model " + m.name + " has no aggregate spec");
        }
        return SpecDocument{*m.spec, m.new_couplings, m.unitaries, m.unitary_labels};
    }
    return spec_from_json(read_json_file(ref));
}

// --v: a JSON file (matrix, Pauli form or {"V": ...}) or a candidate name of the model.
Operator load_candidate(const std::string &ref, const ModelDoc &doc) {
    const auto dims = doc.model.structure().dims();
    if (fs::exists(ref)) {
        const Json v = read_json_file(ref);
        if (v.is_object() && v.contains("V")) {
            return operator_from_json(v.at("V"), dims, "V");
        }
        return operator_from_json(v, dims, "V");
    }
    if (doc.raw.contains("candidates") && doc.raw.at("candidates").contains(ref)) {
        return operator_from_json(doc.raw.at("candidates").at(ref), dims,
                                  "candidates." + ref);
    }
    throw FormatError("--v: " + ref + " is neither a readable file nor a candidate of the model");
}

Json with_metadata(const std::string &command, const Common &common, Json body) {
    Json out{{"tool", "dissipctl"},
             {"version", DISSIPCTL_VERSION},
             {"command", command},
             {"seed", common.seed},
             {"tol", common.tol}};
    out.update(body);
    return out;
}

void emit(const Common &common, const std::string &text) {
    if (common.out.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(common.out, text);
    }
}

std::size_t simulation_cap(std::optional<std::size_t> flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("DISSIPCTL_SIM_CAP")) {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception &) {
            throw FormatError(std::string("DISSIPCTL_SIM_CAP: not an integer: ") + env);
        }
    }
    return kAggregateSimulationCap;
}

// check ------------------------------------------------------------------------

struct CheckArgs {
    std::string model;
    std::string v;
    bool simulate = false;
    double t_final = 60.0;
    double dt = 0.05;
    std::size_t initial_states = 20;
    std::optional<std::size_t> sim_cap;
};

int run_check(const CheckArgs &args, const Common &common) {
    const ModelDoc doc = load_model(args.model);
    const Operator v = load_candidate(args.v, doc);

    CertifyOptions options;
    options.simulate = args.simulate;
    options.seed = common.seed;
    options.t_final = args.t_final;
    options.dt = args.dt;
    options.initial_states = args.initial_states;
    options.max_dim = simulation_cap(args.sim_cap);
    options.search.tol = common.tol;
    const StabilityReport report = certify_ground_state_stability(v, doc.model, options);

    emit(common, dump_json(with_metadata("check", common, to_json(report))));
    if (!report.lyapunov.is_lyapunov) {
        std::string why;
        for (const auto &f : report.lyapunov.failures) {
            why += (why.empty() ? "" : "; ") + f;
        }
        std::cerr << "not a Lyapunov operator: " << why << '\n';
        return kNotCertified;
    }
    if (!report.certified()) {
        std::cerr << "not certified: neither condition ES nor condition DS holds\n";
        return kNotCertified;
    }
    return kOk;
}

// synthesize ---------------------------------------------------------------------

struct SynthesizeArgs {
    std::string v;
    std::optional<double> c;
    std::size_t channels = 1;
    std::size_t dim = 0;
};

Operator load_target(const std::string &ref, std::optional<double> &c,
                     std::size_t &channels) {
    const Json doc = read_json_file(ref);
    const Json &m = (doc.is_object() && doc.contains("V")) ? doc.at("V") : doc;
    if (doc.is_object()) {
        if (!c && doc.contains("c") && !doc.at("c").is_null()) {
            if (!doc.at("c").is_number()) {
                throw FormatError("c: expected a number or null");
            }
            c = doc.at("c").get<double>();
        }
        if (channels == 0 && doc.contains("channels")) {
            if (!doc.at("channels").is_number_integer()) {
                throw FormatError("channels: expected an integer");
            }
            channels = doc.at("channels").get<std::size_t>();
        }
    }
    std::size_t n = 0;
    if (m.is_array()) {
        n = m.size();
    } else if (doc.is_object() && doc.contains("dims")) {
        n = 1;
        for (const auto &d : doc.at("dims")) {
            n *= d.get<std::size_t>();
        }
    }
    if (n == 0) {
        throw FormatError("V: expected a matrix, or \"dims\" alongside Pauli shorthand");
    }
    std::vector<std::size_t> dims{n};
    if (doc.is_object() && doc.contains("dims")) {
        dims = doc.at("dims").get<std::vector<std::size_t>>();
    }
    return operator_from_json(m, dims, "V");
}

int run_synthesize(SynthesizeArgs args, const Common &common) {
    std::size_t channels = args.channels;
    const Operator v = load_target(args.v, args.c, channels);
    if (channels == 0) {
        channels = 1;
    }
    BilinearOptions options;
    options.seed = common.seed;
    options.tol = common.tol;

    auto attempt = [&](double c) -> Json {
        if (channels > 1) {
            return to_json(synthesize_multi(v, channels, c, options));
        }
        if (is_projection(v, common.tol)) {
            return to_json(synthesize_projection(v, c, common.tol));
        }
        return to_json(synthesize_pinv(v, psd_sqrt(v, common.tol), c, options));
    };

    Json result;
    if (args.c) {
        result = attempt(*args.c);
    } else {
        try {
            result = attempt(1.0);
        } catch (const InfeasibleError &) {
            result = attempt(0.5);
        }
    }
    emit(common, dump_json(with_metadata("synthesize", common, std::move(result))));
    return kOk;
}

// simulate -----------------------------------------------------------------------

struct SimulateArgs {
    std::string model;
    std::string v;
    std::string spec;
    double t_final = 0.0;
    double dt = 0.05;
    std::string initial = "mixed";
    std::optional<std::size_t> sim_cap;
};

DensityState initial_state(const std::string &spec, std::size_t dim, std::uint64_t seed) {
    if (spec == "mixed") {
        return DensityState::maximally_mixed(dim);
    }
    if (spec == "random") {
        std::mt19937_64 rng(seed);
        return DensityState::random_pure(dim, rng);
    }
    if (spec.rfind("basis:", 0) == 0) {
        try {
            return DensityState::basis(dim, std::stoul(spec.substr(6)));
        } catch (const std::invalid_argument &) {
        }
    }
    throw FormatError("--initial: expected mixed, random or basis:<index>, got " + spec);
}

int run_simulate(const SimulateArgs &args, const Common &common) {
    std::optional<ModelDoc> doc;
    std::optional<SpecDocument> spec;
    if (!args.model.empty()) {
        doc = load_model(args.model);
    }
    if (!args.spec.empty()) {
        spec = load_spec(args.spec);
    }
    if (!doc && !spec) {
        throw FormatError("simulate: --model or --spec is required");
    }
    const LindbladModel model = doc ? doc->model : spec->spec.model();
    if (!(args.t_final > 0.0)) {
        throw PreconditionError("--t-final must be positive");
    }
    const std::size_t cap = simulation_cap(args.sim_cap);
    if (model.dim() > cap) {
        throw BudgetError("simulate: dimension " + std::to_string(model.dim()) +
                          " exceeds the cap " + std::to_string(cap));
    }

    std::vector<NamedObservable> observables;
    if (!args.v.empty()) {
        if (!doc) {
            throw FormatError("--v requires --model");
        }
        observables.push_back({"V", load_candidate(args.v, *doc)});
    }
    if (spec) {
        if (spec->spec.structure.total_dim() != model.dim()) {
            throw DimensionError("--spec dimension differs from the model");
        }
        observables.push_back({"W", spec->spec.total()});
        for (std::size_t i = 0; i < spec->spec.terms.size(); ++i) {
            observables.push_back({spec->spec.label(i), spec->spec.terms[i]});
        }
    }
    if (observables.empty() && doc && doc->raw.contains("candidates")) {
        for (const auto &[name, op] : doc->raw.at("candidates").items()) {
            observables.push_back(
                {name, operator_from_json(op, model.structure().dims(), "candidates." + name)});
        }
    }

    const DensityState rho0 = initial_state(args.initial, model.dim(), common.seed);
    IntegratorOptions options;
    options.state_tol = common.tol;
    const Trajectory traj = evolve(model, rho0, args.t_final, args.dt, observables, options);
    std::ostringstream csv;
    traj.write_csv(csv);
    emit(common, csv.str());
    return kOk;
}

// scale --------------------------------------------------------------------------

struct ScaleArgs {
    std::string spec;
    std::string theorem;
    double c = 1.0;
    std::size_t n = 1;
    std::string mode = "es";
};

int run_scale(const ScaleArgs &args, const Common &common) {
    const SpecDocument doc = load_spec(args.spec);
    ConstantSearchOptions search;
    search.tol = common.tol;

    Json body{{"theorem", args.theorem}};
    Json labels = Json::array();
    for (std::size_t i = 0; i < doc.spec.terms.size(); ++i) {
        labels.push_back(doc.spec.label(i));
    }
    body["labels"] = std::move(labels);

    bool certified = false;
    if (args.theorem == "es" || args.theorem == "ds") {
        const AggregateReport r = args.theorem == "es"
                                      ? check_theorem_es_aggregation(doc.spec, search)
                                      : check_theorem_ds_aggregation(doc.spec, search);
        certified = r.stable;
        body["report"] = to_json(r);
    } else if (args.theorem == "inc-es" || args.theorem == "inc-ds") {
        const IncrementalReport r =
            args.theorem == "inc-es"
                ? check_incremental_es(doc.spec, args.n, doc.new_couplings, args.c, common.tol)
                : check_incremental_ds(doc.spec, args.n, doc.new_couplings, args.c, common.tol);
        certified = r.holds;
        body["c"] = args.c;
        body["n"] = args.n;
        body["report"] = to_json(r);
    } else if (args.theorem == "d-free") {
        const ConditionMode mode = args.mode == "ds" ? ConditionMode::DS : ConditionMode::ES;
        const CorollaryReport r = check_corollary_d_free(doc.spec, args.n, doc.new_couplings,
                                                         args.c, mode, common.tol);
        certified = r.holds;
        body["c"] = args.c;
        body["n"] = args.n;
        body["mode"] = args.mode;
        body["report"] = to_json(r);
    } else {
        if (doc.unitaries.empty()) {
            throw FormatError("unitaries: required by --theorem commuting");
        }
        const CommutingReport r = check_corollary_commuting(doc.spec, doc.unitaries, search);
        certified = r.holds;
        body["report"] = to_json(r);
        if (!r.noncommuting.empty()) {
            std::string pairs;
            for (const auto &[k, lambda] : r.noncommuting) {
                const std::string u = k < doc.unitary_labels.size() ? doc.unitary_labels[k]
                                                                    : "U" + std::to_string(k);
                pairs += (pairs.empty() ? "(" : ", (") + u + ", " + doc.spec.label(lambda) + ")";
            }
            std::cerr << "commutation clause fails for " << pairs
                      << "; rerun with --theorem es\n";
        }
    }
    body["certified"] = certified;
    emit(common, dump_json(with_metadata("scale", common, std::move(body))));
    return certified ? kOk : kNotCertified;
}

// models -------------------------------------------------------------------------

int run_models_list() {
    for (const auto &name : list_models()) {
        const NamedModel m = find_model(name);
        std::cout << name << "\t" << m.description << '\n';
    }
    return kOk;
}

int run_models_export(const std::string &name, const Common &common) {
    NamedModel m = [&] {
        try {
            return find_model(name);
        } catch (const std::out_of_range &e) {
            throw FormatError(e.what());
        }
    }();
    emit(common, dump_json(named_model_to_json(m)));
    return kOk;
}

void add_common(CLI::App *cmd, Common &common) {
    cmd->add_option("--seed", common.seed, "Random seed");
    cmd->add_option("--tol", common.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out", common.out, "Output file (default: stdout)");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ground-state stabilisation by engineered dissipation"};
    app.set_version_flag("--version", DISSIPCTL_VERSION);
    app.require_subcommand(1);

    Common common;

    CheckArgs check;
    auto *check_cmd = app.add_subcommand("check", "Certify a candidate Lyapunov operator");
    check_cmd->add_option("--model", check.model, "Model JSON or builtin:<name>")->required();
    check_cmd->add_option("--v", check.v, "Candidate V: JSON file or model candidate name")
        ->required();
    check_cmd->add_flag("--simulate", check.simulate, "Also verify by simulation");
    check_cmd->add_option("--t-final", check.t_final, "Simulation horizon");
    check_cmd->add_option("--dt", check.dt, "Sampling interval");
    check_cmd->add_option("--initial-states", check.initial_states, "Simulated initial states");
    check_cmd->add_option("--sim-cap", check.sim_cap, "Simulation dimension cap");
    add_common(check_cmd, common);

    SynthesizeArgs synth;
    auto *synth_cmd = app.add_subcommand("synthesize", "Design couplings L = U V");
    synth_cmd->add_option("--v", synth.v, "JSON file with V or {\"V\", \"c\", \"channels\"}")
        ->required();
    synth_cmd->add_option("--c", synth.c, "Decay constant");
    synth_cmd->add_option("--channels", synth.channels, "Number of channels");
    add_common(synth_cmd, common);
    synth.channels = 0;

    SimulateArgs sim;
    auto *sim_cmd = app.add_subcommand("simulate", "Integrate the master equation to CSV");
    sim_cmd->add_option("--model", sim.model, "Model JSON or builtin:<name>");
    sim_cmd->add_option("--spec", sim.spec, "Aggregate spec for per-term columns");
    sim_cmd->add_option("--v", sim.v, "Observable V: JSON file or model candidate name");
    sim_cmd->add_option("--t-final", sim.t_final, "Horizon")->required();
    sim_cmd->add_option("--dt", sim.dt, "Sampling interval")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--initial", sim.initial, "mixed | random | basis:<index>");
    sim_cmd->add_option("--sim-cap", sim.sim_cap, "Dimension cap");
    add_common(sim_cmd, common);

    ScaleArgs scale;
    auto *scale_cmd = app.add_subcommand("scale", "Check an aggregation theorem");
    scale_cmd->add_option("--spec", scale.spec, "Spec JSON or builtin:<name>")->required();
    scale_cmd->add_option("--theorem", scale.theorem, "Aggregation check")
        ->required()
        ->check(CLI::IsMember({"es", "ds", "inc-es", "inc-ds", "commuting", "d-free"}));
    scale_cmd->add_option("--c", scale.c, "Constant for incremental checks");
    scale_cmd->add_option("--n", scale.n, "Number of already aggregated terms");
    scale_cmd->add_option("--mode", scale.mode, "d-free mode")->check(CLI::IsMember({"es", "ds"}));
    add_common(scale_cmd, common);

    auto *models_cmd = app.add_subcommand("models", "Built-in example models");
    models_cmd->require_subcommand(1);
    models_cmd->add_subcommand("list", "List model names");
    std::string export_name;
    auto *export_cmd = models_cmd->add_subcommand("export", "Export a model as JSON");
    export_cmd->add_option("name", export_name, "Model name")->required();
    export_cmd->add_option("--out", common.out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (check_cmd->parsed()) {
            return run_check(check, common);
        }
        if (synth_cmd->parsed()) {
            return run_synthesize(synth, common);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(sim, common);
        }
        if (scale_cmd->parsed()) {
            return run_scale(scale, common);
        }
        if (export_cmd->parsed()) {
            return run_models_export(export_name, common);
        }
        return run_models_list();
    } catch (const InfeasibleError &e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const SolverBudgetError &e) {
        std::cerr << "solver budget exhausted: " << e.what() << '\n';
        return kSolverBudget;
    } catch (const BudgetError &e) {
        std::cerr << "dimension cap exceeded: " << e.what() << '\n';
        return kDimensionCap;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}
