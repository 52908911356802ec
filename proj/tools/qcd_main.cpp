// Copyright 2026 The qcd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qcd: command line front end.
//
//   qcd validate <circuit>
//   qcd simulate <circuit> <state.json>
//   qcd choi <circuit>
//   qcd distance trace|fidelity <state.json> <state.json>
//   qcd distance dnorm|maxfid <circuit> <circuit> | <instance.json>
//   qcd reduce ci2qcd|tensor|parity|polarize <instance.json> [--out dir]
//   qcd protocol <instance.json> [--trials n]
//
// JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
// 1 validation failure, 2 usage or dimension error, 3 size cap refusal,
// 4 optimizer did not converge (result still printed).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcd/circuit.hpp"
#include "qcd/distances.hpp"
#include "qcd/io.hpp"
#include "qcd/protocol.hpp"
#include "qcd/reductions.hpp"
#include "qcd/simulator.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kUsage = 2, kTooLarge = 3, kNotConverged = 4 };

struct Options {
    std::uint64_t seed = 0;
    std::size_t restarts = 32;
    std::size_t max_iters = 500;
    std::uint64_t trials = 10000;
    double tol = 1e-10;
    std::size_t cap = qcd::kDefaultDimCap;
    std::size_t threads = 1;
    std::string out = ".";
    std::string override_counts;
    std::uint64_t k = 2;
    std::uint64_t r = 2;
    std::uint64_t n = 1;
};

// Raised for bad files and arguments that CLI11 cannot see.
struct UsageError : qcd::Error {
    using qcd::Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw UsageError("cannot write " + path.string());
    }
}

void emit(const qcd::Json &j) {
    std::cout << qcd::dump_json(j) << std::flush;
}

qcd::OptimizerConfig optimizer(const Options &o) {
    qcd::OptimizerConfig cfg;
    cfg.restarts = o.restarts;
    cfg.max_iters = o.max_iters;
    cfg.rel_tol = o.tol;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.check();
    return cfg;
}

qcd::Circuit load_circuit(const std::string &path, std::size_t cap) {
    return qcd::parse_circuit(read_file(path), cap);
}

qcd::ProblemInstance load_instance(const std::string &path, std::size_t cap) {
    return qcd::instance_from_json(qcd::parse_json(read_file(path)), cap);
}

qcd::DensityMatrix load_state(const std::string &path) {
    return qcd::density_from_json(qcd::parse_json(read_file(path)));
}

// Two circuit files, or one instance file.
std::pair<qcd::Circuit, qcd::Circuit> load_pair(const std::vector<std::string> &paths, std::size_t cap) {
    if (paths.size() == 1) {
        auto inst = load_instance(paths[0], cap);
        return {std::move(inst.q0), std::move(inst.q1)};
    }
    if (paths.size() == 2) {
        return {load_circuit(paths[0], cap), load_circuit(paths[1], cap)};
    }
    throw UsageError("expected two circuit files or one instance file");
}

std::optional<qcd::StageCounts> parse_override(const std::string &text) {
    if (text.empty()) {
        return std::nullopt;
    }
    qcd::StageCounts c;
    char comma1 = 0, comma2 = 0;
    std::istringstream in(text);
    if (!(in >> c.r >> comma1 >> c.s >> comma2 >> c.t) || comma1 != ',' || comma2 != ',' || !in.eof() ||
        c.r == 0 || c.s == 0 || c.t == 0) {
        throw UsageError("--override expects three positive integers r,s,t");
    }
    return c;
}

int cmd_validate(const std::string &path, const Options &o) {
    const auto text = read_file(path);
    qcd::Json report = {{"file", path}};
    try {
        const auto c = qcd::parse_circuit(text, o.cap);
        report["valid"] = true;
        report["name"] = c.name;
        report["inputs"] = c.n_in;
        report["outputs"] = c.n_out();
        report["gates"] = c.gates.size();
        report["max_width"] = c.max_width();
        try {
            qcd::choi_of(c, o.cap);
            report["admissible"] = true;
        } catch (const qcd::SizeError &) {
            report["admissible"] = nullptr;
        } catch (const qcd::Error &e) {
            report["valid"] = false;
            report["admissible"] = false;
            report["violations"] = qcd::Json::array({{{"line", nullptr}, {"message", e.what()}}});
            emit(report);
            return kInvalid;
        }
        emit(report);
        return kOk;
    } catch (const qcd::ParseError &e) {
        report["valid"] = false;
        report["violations"] = qcd::Json::array({{{"line", e.line}, {"message", e.what()}}});
    } catch (const qcd::ValidationError &e) {
        report["valid"] = false;
        report["violations"] = qcd::Json::array({{{"line", e.line}, {"message", e.what()}}});
    }
    emit(report);
    return kInvalid;
}

int cmd_simulate(const std::string &circuit, const std::string &state, const Options &o) {
    const auto c = load_circuit(circuit, o.cap);
    emit(qcd::density_to_json(qcd::apply(c, load_state(state), o.cap)));
    return kOk;
}

int cmd_choi(const std::string &circuit, const Options &o) {
    emit(qcd::choi_to_json(qcd::choi_of(load_circuit(circuit, o.cap), o.cap)));
    return kOk;
}

int cmd_distance(const std::string &kind, const std::vector<std::string> &paths, const Options &o) {
    if (kind == "trace" || kind == "fidelity") {
        if (paths.size() != 2) {
            throw UsageError(kind + " expects two state files");
        }
        const auto a = load_state(paths[0]);
        const auto b = load_state(paths[1]);
        if (a.dim() != b.dim()) {
            throw qcd::ShapeError("states have different dimensions");
        }
        const double v = kind == "trace" ? qcd::trace_norm(a.mat() - b.mat()) : qcd::fidelity(a, b);
        emit({{"kind", kind}, {"value", v}});
        return kOk;
    }
    const auto [q0, q1] = load_pair(paths, o.cap);
    const auto cfg = optimizer(o);
    qcd::Json out;
    bool converged = false;
    if (kind == "dnorm") {
        const auto w = qcd::diamond_norm(qcd::choi_of(q0, o.cap), qcd::choi_of(q1, o.cap), cfg);
        out = qcd::witness_to_json(w);
        converged = w.converged;
    } else if (kind == "maxfid") {
        const auto r = qcd::max_image_fidelity(q0, q1, cfg);
        out = qcd::image_fidelity_to_json(r);
        converged = r.converged;
    } else {
        throw UsageError("unknown distance kind " + kind);
    }
    out["kind"] = kind;
    out["seed"] = o.seed;
    emit(out);
    if (!converged) {
        std::cerr << "qcd: optimizer did not converge\n";
        return kNotConverged;
    }
    return kOk;
}

void write_pair(const Options &o, const qcd::CircuitPair &p, const char *n0, const char *n1, qcd::Json &out) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    const auto f0 = dir / (std::string(n0) + ".circuit");
    const auto f1 = dir / (std::string(n1) + ".circuit");
    write_file(f0, qcd::serialize_circuit(p.c0));
    write_file(f1, qcd::serialize_circuit(p.c1));
    out["files"] = {f0.string(), f1.string()};
    std::cerr << "qcd: wrote " << f0.string() << " and " << f1.string() << "\n";
}

int cmd_reduce(const std::string &kind, const std::string &instance, const Options &o) {
    const auto inst = load_instance(instance, o.cap);
    const qcd::Interval yes{inst.a, 2.0};
    const qcd::Interval no{0.0, inst.b};
    qcd::Json out;
    if (kind == "ci2qcd") {
        if (inst.kind != qcd::ProblemKind::CloseImages) {
            throw UsageError("ci2qcd expects a CI instance");
        }
        const auto pair = qcd::ci_to_qcd(inst.q0, inst.q1);
        out = {{"stage", 1},
               {"construction", "ci2qcd"},
               {"params", qcd::Json::object()},
               {"guaranteed_interval_yes", {inst.a, 1.0}},
               {"guaranteed_interval_no", {0.0, inst.b}}};
        write_pair(o, pair, "r0", "r1", out);
    } else if (kind == "tensor") {
        const auto pair = qcd::tensor_power(inst.q0, inst.q1, o.k, o.cap);
        out = qcd::certificate_to_json(qcd::certify_tensor(1, o.k, yes, no));
        write_pair(o, pair, "r0", "r1", out);
    } else if (kind == "parity") {
        const auto pair = qcd::parity_mix(inst.q0, inst.q1, o.r, o.cap);
        out = qcd::certificate_to_json(qcd::certify_parity(1, o.r, yes, no));
        write_pair(o, pair, "r0", "r1", out);
    } else if (kind == "polarize") {
        auto params = qcd::PolarizationParams::derive(o.n, inst.a, inst.b);
        const auto counts = parse_override(o.override_counts);
        if (counts) {
            params.counts = *counts;
        }
        out = qcd::certificate_to_json(qcd::polarization_certificate(params));
        try {
            const auto pair = qcd::polarize(inst.q0, inst.q1, params, counts, o.cap);
            write_pair(o, pair, "s0", "s1", out);
        } catch (const qcd::SizeError &e) {
            out["error"] = e.what();
            emit(out);
            std::cerr << "qcd: " << e.what() << "\n";
            return kTooLarge;
        }
    } else {
        throw UsageError("unknown reduction " + kind);
    }
    emit(out);
    return kOk;
}

int cmd_protocol(const std::string &instance, const Options &o) {
    const auto inst = load_instance(instance, o.cap);
    qcd::DiamondWitness w;
    const auto strat = qcd::optimal_prover(inst.q0, inst.q1, optimizer(o), &w);
    auto result = qcd::run_protocol(inst.q0, inst.q1, strat, o.trials, o.seed);
    result.dnorm_witness_value = w.value;
    auto out = qcd::protocol_result_to_json(result);
    out["converged"] = w.converged;
    emit(out);
    if (!w.converged) {
        std::cerr << "qcd: optimizer did not converge\n";
        return kNotConverged;
    }
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Mixed-state circuits, channel distances and distinguishability reductions"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--seed", o.seed, "Seed for optimizer restarts and protocol trials");
    app.add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
    app.add_option("--max-iters", o.max_iters, "Optimizer iterations per restart")->check(CLI::PositiveNumber);
    app.add_option("--trials", o.trials, "Protocol trials")->check(CLI::PositiveNumber);
    app.add_option("--tol", o.tol, "Relative stopping tolerance of the optimizers")->check(CLI::PositiveNumber);
    app.add_option("--cap", o.cap, "Largest matrix side")->check(CLI::PositiveNumber);
    app.add_option("--threads", o.threads, "Worker threads for optimizer restarts")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "Directory for emitted circuits");
    app.add_option("--override", o.override_counts, "Stage counts r,s,t for polarize");
    app.add_option("--k", o.k, "Copies for the tensor reduction")->check(CLI::PositiveNumber);
    app.add_option("--r", o.r, "Slots for the parity reduction")->check(CLI::PositiveNumber);
    app.add_option("--n", o.n, "Precision parameter for polarize")->check(CLI::PositiveNumber);

    std::string path, path2, kind;
    std::vector<std::string> paths;
    int code = kOk;

    auto *validate = app.add_subcommand("validate", "Check a circuit file");
    validate->add_option("circuit", path)->required();
    validate->callback([&] { code = cmd_validate(path, o); });

    auto *simulate = app.add_subcommand("simulate", "Apply a circuit to a density matrix");
    simulate->add_option("circuit", path)->required();
    simulate->add_option("state", path2)->required();
    simulate->callback([&] { code = cmd_simulate(path, path2, o); });

    auto *choi = app.add_subcommand("choi", "Print the Choi matrix of a circuit");
    choi->add_option("circuit", path)->required();
    choi->callback([&] { code = cmd_choi(path, o); });

    auto *distance = app.add_subcommand("distance", "Distance between two states or two circuits");
    distance->add_option("kind", kind)->required()->check(CLI::IsMember({"trace", "fidelity", "dnorm", "maxfid"}));
    distance->add_option("inputs", paths)->required();
    distance->callback([&] { code = cmd_distance(kind, paths, o); });

    auto *reduce = app.add_subcommand("reduce", "Compile a reduction and write its circuits");
    reduce->add_option("kind", kind)->required()->check(CLI::IsMember({"ci2qcd", "tensor", "parity", "polarize"}));
    reduce->add_option("instance", path)->required();
    reduce->callback([&] { code = cmd_reduce(kind, path, o); });

    auto *protocol = app.add_subcommand("protocol", "Simulate the distinguishability protocol");
    protocol->add_option("instance", path)->required();
    protocol->callback([&] { code = cmd_protocol(path, o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    } catch (const qcd::ParseError &e) {
        std::cerr << "qcd: line " << e.line << ": " << e.what() << "\n";
        return kInvalid;
    } catch (const qcd::ValidationError &e) {
        std::cerr << "qcd: line " << e.line << ": " << e.what() << "\n";
        return kInvalid;
    } catch (const qcd::SizeError &e) {
        std::cerr << "qcd: " << e.what() << "\n";
        return kTooLarge;
    } catch (const qcd::InternalConsistencyError &e) {
        std::cerr << "qcd: internal error: " << e.what() << "\n";
        return kUsage;
    } catch (const qcd::Error &e) {
        std::cerr << "qcd: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "qcd: " << e.what() << "\n";
        return kUsage;
    }
    return code;
}
