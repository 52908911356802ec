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

#include "qcd/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qcd {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double &out) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_count(std::string_view s, std::size_t &out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            i++;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            j++;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

const char *kind_name(GateKind k) {
    switch (k) {
        case GateKind::Unitary:
            return "unitary";
        case GateKind::Ancilla:
            return "ancilla";
        case GateKind::Trace:
            return "trace";
        case GateKind::Decohere:
            return "decohere";
    }
    return "?";
}

}  // namespace

std::optional<ComplexMatrix> standard_gate_matrix(std::string_view name) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix m;
    if (name == "H") {
        m.resize(2, 2);
        m << s, s, s, -s;
    } else if (name == "X") {
        m.resize(2, 2);
        m << 0, 1, 1, 0;
    } else if (name == "Z") {
        m.resize(2, 2);
        m << 1, 0, 0, -1;
    } else if (name == "T") {
        m.resize(2, 2);
        m << 1, 0, 0, Complex(s, s);
    } else if (name == "CNOT") {
        m = ComplexMatrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    } else if (name == "CZ") {
        m = ComplexMatrix::Identity(4, 4);
        m(3, 3) = -1;
    } else if (name == "SWAP") {
        m = ComplexMatrix::Zero(4, 4);
        m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    } else {
        return std::nullopt;
    }
    return m;
}

Gate Gate::unitary(ComplexMatrix u, std::vector<std::size_t> wires, std::string name) {
    Gate g;
    g.kind = GateKind::Unitary;
    g.matrix = std::move(u);
    g.wires = std::move(wires);
    g.name = std::move(name);
    return g;
}

Gate Gate::named(std::string_view name, std::vector<std::size_t> wires) {
    auto m = standard_gate_matrix(name);
    if (!m) {
        throw DomainError("unknown standard gate '" + std::string(name) + "'");
    }
    return unitary(std::move(*m), std::move(wires), std::string(name));
}

Gate Gate::ancilla() {
    Gate g;
    g.kind = GateKind::Ancilla;
    return g;
}

Gate Gate::trace(std::size_t wire) {
    Gate g;
    g.kind = GateKind::Trace;
    g.wires = {wire};
    return g;
}

Gate Gate::decohere(std::size_t wire) {
    Gate g;
    g.kind = GateKind::Decohere;
    g.wires = {wire};
    return g;
}

bool Gate::operator==(const Gate &other) const {
    if (kind != other.kind || wires != other.wires || name != other.name) {
        return false;
    }
    if (kind != GateKind::Unitary) {
        return true;
    }
    return matrix.rows() == other.matrix.rows() && matrix.cols() == other.matrix.cols() &&
           matrix == other.matrix;
}

std::size_t Circuit::n_out() const {
    std::size_t live = n_in;
    for (const auto &g : gates) {
        if (g.kind == GateKind::Ancilla) {
            live++;
        } else if (g.kind == GateKind::Trace && live > 0) {
            live--;
        }
    }
    return live;
}

std::size_t Circuit::max_width() const {
    std::size_t live = n_in;
    std::size_t best = live;
    for (const auto &g : gates) {
        if (g.kind == GateKind::Ancilla) {
            live++;
            best = std::max(best, live);
        } else if (g.kind == GateKind::Trace && live > 0) {
            live--;
        }
    }
    return best;
}

bool Circuit::is_unitary_only() const {
    return std::all_of(gates.begin(), gates.end(), [](const Gate &g) { return g.kind == GateKind::Unitary; });
}

bool Circuit::operator==(const Circuit &other) const {
    return name == other.name && n_in == other.n_in && gates == other.gates;
}

std::vector<Violation> validate(const Circuit &c) {
    std::vector<Violation> out;
    std::size_t live = c.n_in;
    for (std::size_t gi = 0; gi < c.gates.size(); gi++) {
        const auto &g = c.gates[gi];
        auto bad = [&](std::string msg) { out.push_back({gi, std::move(msg)}); };

        for (auto w : g.wires) {
            if (w >= live) {
                bad(std::string(kind_name(g.kind)) + " references wire " + std::to_string(w) + " but only " +
                    std::to_string(live) + " wires are live");
            }
        }
        auto sorted = g.wires;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            bad("gate lists a wire more than once");
        }

        switch (g.kind) {
            case GateKind::Unitary: {
                auto k = g.wires.size();
                if (k == 0 || k > kMaxArity) {
                    bad("unitary arity " + std::to_string(k) + " outside 1.." + std::to_string(kMaxArity));
                    break;
                }
                auto d = static_cast<Eigen::Index>(std::size_t{1} << k);
                if (g.matrix.rows() != d || g.matrix.cols() != d) {
                    bad("unitary matrix is " + std::to_string(g.matrix.rows()) + "x" +
                        std::to_string(g.matrix.cols()) + ", expected " + std::to_string(d) + "x" +
                        std::to_string(d));
                    break;
                }
                if (!all_finite(g.matrix)) {
                    bad("unitary matrix has non-finite entries");
                    break;
                }
                double defect = (g.matrix.adjoint() * g.matrix - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
                if (defect > 1e-9) {
                    bad("matrix is not unitary (max |U^dagger U - I| = " + format_double(defect) + ")");
                }
                break;
            }
            case GateKind::Ancilla:
                if (!g.wires.empty()) {
                    bad("ancilla takes no wires");
                }
                live++;
                break;
            case GateKind::Trace:
                if (g.wires.size() != 1) {
                    bad("trace takes exactly one wire");
                } else if (g.wires[0] < live) {
                    live--;
                }
                break;
            case GateKind::Decohere:
                if (g.wires.size() != 1) {
                    bad("decohere takes exactly one wire");
                }
                break;
        }
    }
    return out;
}

ParseError::ParseError(std::size_t line, const std::string &message)
    : Error("line " + std::to_string(line) + ": " + message), line(line) {
}

ValidationError::ValidationError(std::size_t line, const std::string &message)
    : Error("line " + std::to_string(line) + ": " + message), line(line) {
}

Circuit parse_circuit(std::string_view text, std::size_t cap) {
    Circuit c;
    std::vector<std::size_t> gate_lines;
    bool have_header = false;
    bool have_end = false;

    std::size_t line_no = 0;
    std::size_t last_content = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        line_no++;

        auto hash = raw.find('#');
        if (hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        auto tok = split_tokens(raw);
        if (tok.empty()) {
            continue;
        }
        last_content = line_no;
        if (have_end) {
            throw ParseError(line_no, "content after 'end'");
        }
        if (!have_header) {
            std::size_t n = 0;
            if (tok.size() != 4 || tok[0] != "circuit" || tok[2] != "inputs" || !parse_count(tok[3], n)) {
                throw ParseError(line_no, "expected 'circuit <name> inputs <n>'");
            }
            c.name = std::string(tok[1]);
            c.n_in = n;
            have_header = true;
            continue;
        }

        auto wires_from = [&](std::size_t first, std::size_t count) {
            std::vector<std::size_t> ws;
            for (std::size_t i = 0; i < count; i++) {
                std::size_t w = 0;
                if (!parse_count(tok[first + i], w)) {
                    throw ParseError(line_no, "bad wire index '" + std::string(tok[first + i]) + "'");
                }
                ws.push_back(w);
            }
            return ws;
        };

        const auto &head = tok[0];
        if (head == "end") {
            if (tok.size() != 1) {
                throw ParseError(line_no, "'end' takes no arguments");
            }
            have_end = true;
        } else if (head == "gate") {
            if (tok.size() < 3) {
                throw ParseError(line_no, "expected 'gate <name> <wire...>'");
            }
            auto m = standard_gate_matrix(tok[1]);
            if (!m) {
                throw ParseError(line_no, "unknown gate '" + std::string(tok[1]) + "'");
            }
            auto arity = qubits_for_dim(static_cast<std::size_t>(m->rows()));
            if (tok.size() != 2 + arity) {
                throw ParseError(
                    line_no, "gate " + std::string(tok[1]) + " takes " + std::to_string(arity) + " wire(s)");
            }
            c.gates.push_back(Gate::unitary(std::move(*m), wires_from(2, arity), std::string(tok[1])));
            gate_lines.push_back(line_no);
        } else if (head == "unitary") {
            std::size_t arity = 0;
            if (tok.size() < 2 || !parse_count(tok[1], arity) || arity == 0 || arity > kMaxArity) {
                throw ParseError(line_no, "expected 'unitary <arity 1..3> <wire...> <entries>'");
            }
            std::size_t d = std::size_t{1} << arity;
            if (tok.size() != 2 + arity + d * d) {
                throw ParseError(
                    line_no, "unitary of arity " + std::to_string(arity) + " needs " + std::to_string(arity) +
                                 " wires and " + std::to_string(d * d) + " entries");
            }
            auto ws = wires_from(2, arity);
            ComplexMatrix u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            for (std::size_t e = 0; e < d * d; e++) {
                auto t = tok[2 + arity + e];
                auto comma = t.find(',');
                double re = 0, im = 0;
                if (comma == std::string_view::npos || !parse_double(t.substr(0, comma), re) ||
                    !parse_double(t.substr(comma + 1), im)) {
                    throw ParseError(line_no, "bad complex entry '" + std::string(t) + "', expected re,im");
                }
                u(static_cast<Eigen::Index>(e / d), static_cast<Eigen::Index>(e % d)) = Complex(re, im);
            }
            c.gates.push_back(Gate::unitary(std::move(u), std::move(ws)));
            gate_lines.push_back(line_no);
        } else if (head == "ancilla") {
            if (tok.size() != 1) {
                throw ParseError(line_no, "'ancilla' takes no arguments");
            }
            c.gates.push_back(Gate::ancilla());
            gate_lines.push_back(line_no);
        } else if (head == "trace" || head == "decohere") {
            if (tok.size() != 2) {
                throw ParseError(line_no, "'" + std::string(head) + "' takes exactly one wire");
            }
            auto w = wires_from(1, 1)[0];
            c.gates.push_back(head == "trace" ? Gate::trace(w) : Gate::decohere(w));
            gate_lines.push_back(line_no);
        } else {
            throw ParseError(line_no, "unknown construct '" + std::string(head) + "'");
        }
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'circuit <name> inputs <n>' header");
    }
    if (!have_end) {
        throw ParseError(std::max<std::size_t>(last_content, 1), "missing 'end'");
    }

    auto violations = validate(c);
    if (!violations.empty()) {
        const auto &v = violations.front();
        throw ValidationError(gate_lines[v.gate_index], v.message);
    }
    auto width = c.max_width();
    if (width >= 63 || (std::size_t{1} << width) > cap) {
        throw SizeError(
            "circuit '" + c.name + "' needs " + std::to_string(width) + " live wires, over the dimension cap " +
            std::to_string(cap));
    }
    return c;
}

std::string serialize_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "circuit " << c.name << " inputs " << c.n_in << "\n";
    for (const auto &g : c.gates) {
        switch (g.kind) {
            case GateKind::Unitary:
                if (!g.name.empty()) {
                    out << "gate " << g.name;
                    for (auto w : g.wires) {
                        out << ' ' << w;
                    }
                } else {
                    out << "unitary " << g.wires.size();
                    for (auto w : g.wires) {
                        out << ' ' << w;
                    }
                    for (Eigen::Index i = 0; i < g.matrix.rows(); i++) {
                        for (Eigen::Index j = 0; j < g.matrix.cols(); j++) {
                            out << ' ' << format_double(g.matrix(i, j).real()) << ','
                                << format_double(g.matrix(i, j).imag());
                        }
                    }
                }
                break;
            case GateKind::Ancilla:
                out << "ancilla";
                break;
            case GateKind::Trace:
                out << "trace " << g.wires.at(0);
                break;
            case GateKind::Decohere:
                out << "decohere " << g.wires.at(0);
                break;
        }
        out << "\n";
    }
    out << "end\n";
    return out.str();
}

void ProblemInstance::check() const {
    if (!validate(q0).empty() || !validate(q1).empty()) {
        throw DomainError("instance circuits must be valid");
    }
    if (q0.n_in != q1.n_in || q0.n_out() != q1.n_out()) {
        throw ShapeError(
            "instance circuits disagree on type: (" + std::to_string(q0.n_in) + "," + std::to_string(q0.n_out()) +
            ") vs (" + std::to_string(q1.n_in) + "," + std::to_string(q1.n_out()) + ")");
    }
    double hi = kind == ProblemKind::CloseImages ? 1.0 : 2.0;
    if (!(0 <= b && b < a && a <= hi)) {
        throw DomainError("thresholds must satisfy 0 <= b < a <= " + format_double(hi));
    }
}

}  // namespace qcd
