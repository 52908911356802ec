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

#include "qcd/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qcd {

namespace {

using Index = Eigen::Index;

void check_width(const Circuit &c, std::size_t cap) {
    auto w = c.max_width();
    if (w >= 63 || (std::size_t{1} << w) > cap) {
        throw SizeError("construction '" + c.name + "' needs " + std::to_string(w) +
                        " live wires, over the dimension cap " + std::to_string(cap));
    }
}

void check_same_type(const Circuit &q0, const Circuit &q1, const char *what) {
    if (q0.n_in != q1.n_in || q0.n_out() != q1.n_out()) {
        throw ShapeError(std::string(what) + ": circuits disagree on type (" + std::to_string(q0.n_in) + "," +
                         std::to_string(q0.n_out()) + ") vs (" + std::to_string(q1.n_in) + "," +
                         std::to_string(q1.n_out()) + ")");
    }
}

ComplexMatrix controlled(const ComplexMatrix &u, int control_value) {
    const Index d = u.rows();
    ComplexMatrix c = ComplexMatrix::Identity(2 * d, 2 * d);
    c.block(control_value * d, control_value * d, d, d) = u;
    return c;
}

// Unitary circuit on the same wires whose final layout puts output_wires
// first and garbage_wires after them.
Circuit route_outputs_first(const DilatedCircuit &d) {
    Circuit c = d.unitary_circuit;
    std::vector<std::size_t> at(d.width());  // at[p] = source wire held at position p
    for (std::size_t i = 0; i < at.size(); i++) {
        at[i] = i;
    }
    std::vector<std::size_t> order = d.output_wires;
    order.insert(order.end(), d.garbage_wires.begin(), d.garbage_wires.end());
    for (std::size_t p = 0; p < order.size(); p++) {
        auto cur = static_cast<std::size_t>(std::find(at.begin(), at.end(), order[p]) - at.begin());
        if (cur != p) {
            c.gates.push_back(Gate::named("SWAP", {p, cur}));
            std::swap(at[p], at[cur]);
        }
    }
    return c;
}

}  // namespace

CircuitBuilder::CircuitBuilder(std::string name, std::size_t n_in) : next_(n_in) {
    circuit_.name = std::move(name);
    circuit_.n_in = n_in;
    live_.resize(n_in);
    for (std::size_t i = 0; i < n_in; i++) {
        live_[i] = i;
    }
}

CircuitBuilder::Wire CircuitBuilder::input(std::size_t i) const {
    if (i >= circuit_.n_in) {
        throw ShapeError("builder input " + std::to_string(i) + " out of range");
    }
    return i;
}

std::size_t CircuitBuilder::position(Wire w) const {
    auto it = std::find(live_.begin(), live_.end(), w);
    if (it == live_.end()) {
        throw ShapeError("builder wire handle " + std::to_string(w) + " is not live");
    }
    return static_cast<std::size_t>(it - live_.begin());
}

CircuitBuilder::Wire CircuitBuilder::ancilla() {
    circuit_.gates.push_back(Gate::ancilla());
    live_.push_back(next_);
    return next_++;
}

void CircuitBuilder::unitary(const ComplexMatrix &u, std::span<const Wire> wires, std::string name) {
    std::vector<std::size_t> pos;
    for (auto w : wires) {
        pos.push_back(position(w));
    }
    circuit_.gates.push_back(Gate::unitary(u, std::move(pos), std::move(name)));
}

void CircuitBuilder::named(std::string_view name, std::initializer_list<Wire> wires) {
    std::vector<std::size_t> pos;
    for (auto w : wires) {
        pos.push_back(position(w));
    }
    circuit_.gates.push_back(Gate::named(name, std::move(pos)));
}

void CircuitBuilder::trace(Wire w) {
    auto p = position(w);
    circuit_.gates.push_back(Gate::trace(p));
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(p));
}

void CircuitBuilder::decohere(Wire w) {
    circuit_.gates.push_back(Gate::decohere(position(w)));
}

std::vector<CircuitBuilder::Wire> CircuitBuilder::inline_circuit(const Circuit &c, std::span<const Wire> inputs) {
    if (inputs.size() != c.n_in) {
        throw ShapeError("inline_circuit: '" + c.name + "' takes " + std::to_string(c.n_in) + " inputs");
    }
    std::vector<Wire> local(inputs.begin(), inputs.end());
    for (const auto &g : c.gates) {
        switch (g.kind) {
            case GateKind::Unitary: {
                std::vector<Wire> ws;
                for (auto w : g.wires) {
                    ws.push_back(local.at(w));
                }
                unitary(g.matrix, ws, g.name);
                break;
            }
            case GateKind::Ancilla:
                local.push_back(ancilla());
                break;
            case GateKind::Trace:
                trace(local.at(g.wires[0]));
                local.erase(local.begin() + static_cast<std::ptrdiff_t>(g.wires[0]));
                break;
            case GateKind::Decohere:
                decohere(local.at(g.wires[0]));
                break;
        }
    }
    return local;
}

Circuit CircuitBuilder::finish(std::span<const Wire> outputs) && {
    if (outputs.size() != live_.size()) {
        throw ShapeError("builder finish: " + std::to_string(live_.size()) + " live wires but " +
                         std::to_string(outputs.size()) + " outputs named");
    }
    for (std::size_t p = 0; p < outputs.size(); p++) {
        auto cur = position(outputs[p]);
        if (cur < p) {
            throw ShapeError("builder finish: output handle listed twice");
        }
        if (cur != p) {
            circuit_.gates.push_back(Gate::named("SWAP", {p, cur}));
            std::swap(live_[p], live_[cur]);
        }
    }
    return std::move(circuit_);
}

DilatedCircuit controlled_join(const DilatedCircuit &p0, const DilatedCircuit &p1) {
    if (p0.n != p1.n || p0.m() != p1.m()) {
        throw ShapeError("controlled_join: dilations simulate circuits of different types");
    }
    const std::size_t n = p0.n;
    const std::size_t m = p0.m();
    const std::size_t k = std::max(p0.k, p1.k);
    Circuit c0 = route_outputs_first(p0);
    Circuit c1 = route_outputs_first(p1);
    // Padding wires are appended last and join the garbage.
    c0.n_in = n + k;
    c1.n_in = n + k;

    DilatedCircuit out;
    out.n = n + 1;
    out.k = k;
    out.l = n + k - m;
    out.unitary_circuit.name = "controlled_join";
    out.unitary_circuit.n_in = 1 + n + k;
    for (int branch = 0; branch < 2; branch++) {
        const Circuit &src = branch == 0 ? c0 : c1;
        for (const auto &g : src.gates) {
            if (g.arity() + 1 > kMaxArity) {
                throw ConstructionError("controlled_join: a " + std::to_string(g.arity()) +
                                        "-qubit gate would need a " + std::to_string(g.arity() + 1) +
                                        "-qubit controlled version (cap " + std::to_string(kMaxArity) + ")");
            }
            std::vector<std::size_t> ws{0};
            for (auto w : g.wires) {
                ws.push_back(w + 1);
            }
            out.unitary_circuit.gates.push_back(Gate::unitary(controlled(g.matrix, branch), std::move(ws)));
        }
    }
    for (std::size_t w = 0; w <= m; w++) {
        out.output_wires.push_back(w);
    }
    for (std::size_t w = m + 1; w < 1 + n + k; w++) {
        out.garbage_wires.push_back(w);
    }
    return out;
}

CircuitPair ci_to_qcd(const Circuit &q0, const Circuit &q1) {
    check_same_type(q0, q1, "ci_to_qcd");
    const DilatedCircuit p = controlled_join(dilate(q0), dilate(q1));
    const std::size_t n = q0.n_in;
    const std::size_t m = p.m() - 1;

    CircuitBuilder b("r0", 1 + n);
    std::vector<CircuitBuilder::Wire> wire_of(p.width());
    for (std::size_t i = 0; i < 1 + n; i++) {
        wire_of[i] = b.input(i);
    }
    for (std::size_t i = 1 + n; i < p.width(); i++) {
        wire_of[i] = b.ancilla();
    }
    for (const auto &g : p.unitary_circuit.gates) {
        std::vector<CircuitBuilder::Wire> ws;
        for (auto w : g.wires) {
            ws.push_back(wire_of[w]);
        }
        b.unitary(g.matrix, ws, g.name);
    }
    for (std::size_t w = 1; w <= m; w++) {
        b.trace(wire_of[w]);
    }
    std::vector<CircuitBuilder::Wire> outs{wire_of[0]};
    for (auto g : p.garbage_wires) {
        outs.push_back(wire_of[g]);
    }
    CircuitPair out;
    out.c0 = std::move(b).finish(outs);
    out.c1 = out.c0;
    out.c1.name = "r1";
    out.c1.gates.push_back(Gate::decohere(0));
    return out;
}

CircuitPair tensor_power(const Circuit &q0, const Circuit &q1, std::size_t k, std::size_t cap) {
    check_same_type(q0, q1, "tensor_power");
    if (k < 1) {
        throw DomainError("tensor_power: k must be at least 1");
    }
    auto build = [&](const Circuit &q, const std::string &name) {
        CircuitBuilder b(name, q.n_in * k);
        std::vector<CircuitBuilder::Wire> outs;
        for (std::size_t copy = 0; copy < k; copy++) {
            std::vector<CircuitBuilder::Wire> ins;
            for (std::size_t i = 0; i < q.n_in; i++) {
                ins.push_back(b.input(copy * q.n_in + i));
            }
            auto o = b.inline_circuit(q, ins);
            outs.insert(outs.end(), o.begin(), o.end());
        }
        Circuit c = std::move(b).finish(outs);
        check_width(c, cap);
        return c;
    };
    return CircuitPair{build(q0, q0.name + "_pow" + std::to_string(k)), build(q1, q1.name + "_pow" + std::to_string(k))};
}

CircuitPair parity_combine(std::span<const CircuitPair> slots, std::size_t cap) {
    const std::size_t r = slots.size();
    if (r < 1) {
        throw DomainError("parity_combine: need at least one slot");
    }
    std::vector<DilatedCircuit> joins;
    std::size_t n_total = 0;
    for (const auto &s : slots) {
        check_same_type(s.c0, s.c1, "parity_combine");
        joins.push_back(controlled_join(dilate(s.c0), dilate(s.c1)));
        n_total += s.c0.n_in;
    }

    auto build = [&](bool odd, const std::string &name) {
        CircuitBuilder b(name, n_total);
        std::vector<CircuitBuilder::Wire> controls;
        for (std::size_t i = 0; i + 1 < r; i++) {
            auto coin = b.ancilla();
            b.named("H", {coin});
            b.decohere(coin);
            controls.push_back(coin);
        }
        auto parity = b.ancilla();
        for (auto coin : controls) {
            b.named("CNOT", {coin, parity});
        }
        if (odd) {
            b.named("X", {parity});
        }
        controls.push_back(parity);

        std::vector<CircuitBuilder::Wire> outs;
        std::size_t offset = 0;
        for (std::size_t slot = 0; slot < r; slot++) {
            const auto &p = joins[slot];
            const std::size_t n = p.n - 1;
            std::vector<CircuitBuilder::Wire> wire_of(p.width());
            wire_of[0] = controls[slot];
            for (std::size_t i = 0; i < n; i++) {
                wire_of[1 + i] = b.input(offset + i);
            }
            for (std::size_t i = 1 + n; i < p.width(); i++) {
                wire_of[i] = b.ancilla();
            }
            for (const auto &g : p.unitary_circuit.gates) {
                std::vector<CircuitBuilder::Wire> ws;
                for (auto w : g.wires) {
                    ws.push_back(wire_of[w]);
                }
                b.unitary(g.matrix, ws, g.name);
            }
            for (auto g : p.garbage_wires) {
                b.trace(wire_of[g]);
            }
            b.trace(controls[slot]);
            for (std::size_t w = 1; w < p.output_wires.size(); w++) {
                outs.push_back(wire_of[p.output_wires[w]]);
            }
            offset += n;
        }
        Circuit c = std::move(b).finish(outs);
        check_width(c, cap);
        return c;
    };
    return CircuitPair{build(false, "parity_even"), build(true, "parity_odd")};
}

CircuitPair parity_mix(const Circuit &q0, const Circuit &q1, std::size_t r, std::size_t cap) {
    check_same_type(q0, q1, "parity_mix");
    if (r < 1) {
        throw DomainError("parity_mix: r must be at least 1");
    }
    std::vector<CircuitPair> slots(r, CircuitPair{q0, q1});
    return parity_combine(slots, cap);
}

StageCertificate certify_parity(std::size_t stage, std::uint64_t r, Interval yes, Interval no) {
    // ||R0 - R1|| = 2 (eps / 2)^r is increasing in eps.
    auto law = [r](double eps) { return 2 * std::pow(eps / 2, static_cast<double>(r)); };
    return StageCertificate{stage, "parity", r, {law(yes.lo), law(yes.hi)}, {law(no.lo), law(no.hi)}};
}

StageCertificate certify_tensor(std::size_t stage, std::uint64_t k, Interval yes, Interval no) {
    if (k == 1) {
        return StageCertificate{stage, "tensor", k, yes, no};
    }
    auto kd = static_cast<double>(k);
    auto lower = [kd](double eps) { return 2 - 2 * std::exp(-kd * eps * eps / 8); };
    auto upper = [kd](double eps) { return std::min(kd * eps, 2.0); };
    return StageCertificate{stage, "tensor", k, {lower(yes.lo), upper(yes.hi)}, {lower(no.lo), upper(no.hi)}};
}

PolarizationParams PolarizationParams::derive(std::uint64_t n, double a, double b) {
    if (n < 1) {
        throw DomainError("polarize: n must be at least 1");
    }
    if (!(0 < b && b < a && a < 2 && 2 * b < a * a)) {
        throw DomainError("polarize: need 0 < b < a < 2 and 2b < a^2");
    }
    // The slack keeps exact ratios (log 16 / log 2) from rounding up a step.
    constexpr double slack = 1e-12;
    PolarizationParams p;
    p.n = n;
    p.a = a;
    p.b = b;
    double r = std::ceil(std::log2(16.0 * static_cast<double>(n)) / std::log2(a * a / (2 * b)) - slack);
    p.counts.r = static_cast<std::uint64_t>(std::max(1.0, r));
    double s = std::floor(std::pow(b / 2, -static_cast<double>(p.counts.r)) / 4 * (1 + slack));
    constexpr double max_u64 = static_cast<double>(std::numeric_limits<std::uint64_t>::max());
    p.counts.s = s >= max_u64 ? std::numeric_limits<std::uint64_t>::max()
                              : static_cast<std::uint64_t>(std::max(1.0, s));
    p.counts.t = (n + 2) / 2;
    return p;
}

PolarizationCertificate polarization_certificate(const PolarizationParams &params) {
    PolarizationCertificate cert;
    cert.params = params;
    Interval yes{params.a, 2};
    Interval no{0, params.b};
    cert.stages.push_back(certify_parity(1, params.counts.r, yes, no));
    cert.stages.push_back(certify_tensor(2, params.counts.s, cert.stages[0].yes, cert.stages[0].no));
    cert.stages.push_back(certify_parity(3, params.counts.t, cert.stages[1].yes, cert.stages[1].no));
    cert.final_yes = cert.stages.back().yes;
    cert.final_no = cert.stages.back().no;
    double eps = std::pow(2.0, -static_cast<double>(params.n));
    cert.target_yes = {2 - eps, 2};
    cert.target_no = {0, eps};
    return cert;
}

CircuitPair polarize(const Circuit &q0, const Circuit &q1, const PolarizationParams &params,
                     std::optional<StageCounts> override_counts, std::size_t cap) {
    check_same_type(q0, q1, "polarize");
    StageCounts c = override_counts.value_or(params.counts);
    if (c.r < 1 || c.s < 1 || c.t < 1) {
        throw DomainError("polarize: stage parameters must be at least 1");
    }
    // Width lower bound: the final circuits carry (r s t) copies of each input.
    long double copies = static_cast<long double>(c.r) * static_cast<long double>(c.s) * static_cast<long double>(c.t);
    long double width = copies * static_cast<long double>(std::max(q0.n_in, q0.n_out()));
    if (width > std::log2(static_cast<long double>(cap))) {
        std::ostringstream msg;
        msg << std::fixed << std::setprecision(0) << "polarize: (r,s,t) = (" << c.r << "," << c.s << "," << c.t
            << ") needs at least " << width << " qubits but the dimension cap " << cap << " allows "
            << std::floor(std::log2(static_cast<double>(cap)))
            << "; pass explicit stage parameters to run a smaller instance";
        throw SizeError(msg.str());
    }
    CircuitPair cur{q0, q1};
    if (c.r > 1) {
        cur = parity_mix(cur.c0, cur.c1, static_cast<std::size_t>(c.r), cap);
    }
    if (c.s > 1) {
        cur = tensor_power(cur.c0, cur.c1, static_cast<std::size_t>(c.s), cap);
    }
    if (c.t > 1) {
        cur = parity_mix(cur.c0, cur.c1, static_cast<std::size_t>(c.t), cap);
    }
    cur.c0.name = "s0";
    cur.c1.name = "s1";
    return cur;
}

}  // namespace qcd
