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

#include "qcd/io.hpp"

#include <string>

namespace qcd {

namespace {

const Json &field(const Json &j, const char *key) {
    if (!j.is_object()) {
        throw FormatError(std::string("expected an object holding \"") + key + "\"");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw FormatError(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

std::size_t count_field(const Json &j, const char *key) {
    const auto &v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw FormatError(std::string("field \"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

double real_field(const Json &j, const char *key) {
    const auto &v = field(j, key);
    if (!v.is_number()) {
        throw FormatError(std::string("field \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

std::string string_field(const Json &j, const char *key) {
    const auto &v = field(j, key);
    if (!v.is_string()) {
        throw FormatError(std::string("field \"") + key + "\" must be a string");
    }
    return v.get<std::string>();
}

Json interval_to_json(const Interval &iv) {
    return Json::array({iv.lo, iv.hi});
}

Json vector_to_json(const ComplexVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return out;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix &m) {
    Json entries = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json &j) {
    const auto rows = count_field(j, "rows");
    const auto cols = count_field(j, "cols");
    const auto &entries = field(j, "entries");
    if (!entries.is_array() || entries.size() != rows * cols) {
        throw FormatError("\"entries\" must hold rows*cols = " + std::to_string(rows * cols) + " pairs");
    }
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto &e = entries[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw FormatError("entry " + std::to_string(k) + " is not a [re, im] pair");
        }
        m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) =
            Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

Json density_to_json(const DensityMatrix &rho) {
    return {{"qubits", rho.qubits()}, {"matrix", matrix_to_json(rho.mat())}};
}

DensityMatrix density_from_json(const Json &j) {
    const auto qubits = count_field(j, "qubits");
    DensityMatrix rho(matrix_from_json(field(j, "matrix")));
    if (rho.qubits() != qubits) {
        throw ShapeError("\"qubits\" is " + std::to_string(qubits) + " but the matrix has side " +
                         std::to_string(rho.dim()));
    }
    return rho;
}

Json choi_to_json(const Channel &ch) {
    return {{"qubits_in", ch.n_in()}, {"qubits_out", ch.n_out()}, {"matrix", matrix_to_json(ch.choi())}};
}

Json instance_to_json(const ProblemInstance &inst) {
    return {{"q0", serialize_circuit(inst.q0)},
            {"q1", serialize_circuit(inst.q1)},
            {"kind", inst.kind == ProblemKind::CloseImages ? "CI" : "QCD"},
            {"a", inst.a},
            {"b", inst.b}};
}

ProblemInstance instance_from_json(const Json &j, std::size_t cap) {
    ProblemInstance inst;
    inst.q0 = parse_circuit(string_field(j, "q0"), cap);
    inst.q1 = parse_circuit(string_field(j, "q1"), cap);
    const auto kind = string_field(j, "kind");
    if (kind == "CI") {
        inst.kind = ProblemKind::CloseImages;
    } else if (kind == "QCD") {
        inst.kind = ProblemKind::Distinguishability;
    } else {
        throw FormatError("\"kind\" must be \"CI\" or \"QCD\", got \"" + kind + "\"");
    }
    inst.a = real_field(j, "a");
    inst.b = real_field(j, "b");
    inst.check();
    return inst;
}

Json witness_to_json(const DiamondWitness &w) {
    return {{"value", w.value},
            {"converged", w.converged},
            {"restarts_used", w.restarts_used},
            {"dim_in", w.dim_in},
            {"dim_ref", w.dim_ref},
            {"psi", vector_to_json(w.psi)},
            {"measurement", matrix_to_json(w.measurement)}};
}

Json image_fidelity_to_json(const ImageFidelityResult &r) {
    return {{"value", r.value},
            {"converged", r.converged},
            {"restarts_used", r.restarts_used},
            {"rho0", density_to_json(r.rho0)},
            {"rho1", density_to_json(r.rho1)}};
}

Json certificate_to_json(const StageCertificate &c) {
    return {{"stage", c.stage},
            {"construction", c.construction},
            {"params", {{c.construction == "parity" ? "r" : "k", c.param}}},
            {"guaranteed_interval_yes", interval_to_json(c.yes)},
            {"guaranteed_interval_no", interval_to_json(c.no)}};
}

Json certificate_to_json(const PolarizationCertificate &c) {
    Json stages = Json::array();
    for (const auto &s : c.stages) {
        stages.push_back(certificate_to_json(s));
    }
    return {{"params",
             {{"n", c.params.n},
              {"a", c.params.a},
              {"b", c.params.b},
              {"r", c.params.counts.r},
              {"s", c.params.counts.s},
              {"t", c.params.counts.t}}},
            {"stages", std::move(stages)},
            {"guaranteed_interval_yes", interval_to_json(c.final_yes)},
            {"guaranteed_interval_no", interval_to_json(c.final_no)},
            {"target_interval_yes", interval_to_json(c.target_yes)},
            {"target_interval_no", interval_to_json(c.target_no)}};
}

Json protocol_result_to_json(const ProtocolResult &r) {
    Json out = {{"p_accept_exact", r.p_accept_exact},
                {"trials", 0},
                {"accepts", 0},
                {"estimate", nullptr},
                {"dnorm_witness_value", r.dnorm_witness_value},
                {"seed", r.seed}};
    if (r.empirical) {
        out["trials"] = r.empirical->trials;
        out["accepts"] = r.empirical->accepts;
        out["estimate"] = r.empirical->estimate;
    }
    return out;
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

std::string dump_json(const Json &j) {
    return j.dump(2) + "\n";
}

}  // namespace qcd
