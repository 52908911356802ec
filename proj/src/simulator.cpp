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

#include "qcd/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace qcd {

namespace {

using Index = Eigen::Index;

// Register layout: `total` qubits, qubit q is bit (total - 1 - q) of a basis
// index. Circuit wire w sits at qubit w; reference qubits follow the live
// circuit wires.
struct Register {
    ComplexMatrix x;
    std::size_t live;
    std::size_t ref;
    std::size_t cap;

    std::size_t total() const {
        return live + ref;
    }
};

std::size_t bit_of(std::size_t total, std::size_t qubit) {
    return std::size_t{1} << (total - 1 - qubit);
}

// x <- (U on `qubits`) x, acting on the row index.
void apply_left(ComplexMatrix &x, const ComplexMatrix &u, const std::vector<std::size_t> &qubits, std::size_t total) {
    const std::size_t a = qubits.size();
    const std::size_t d = std::size_t{1} << a;
    std::vector<std::size_t> off(d, 0);
    std::size_t mask = 0;
    for (std::size_t j = 0; j < a; j++) {
        mask |= bit_of(total, qubits[j]);
    }
    for (std::size_t local = 0; local < d; local++) {
        for (std::size_t j = 0; j < a; j++) {
            if (local & (std::size_t{1} << (a - 1 - j))) {
                off[local] |= bit_of(total, qubits[j]);
            }
        }
    }
    const std::size_t n = static_cast<std::size_t>(x.rows());
    std::vector<Complex> in(d), out(d);
    for (Index col = 0; col < x.cols(); col++) {
        for (std::size_t base = 0; base < n; base++) {
            if (base & mask) {
                continue;
            }
            for (std::size_t l = 0; l < d; l++) {
                in[l] = x(static_cast<Index>(base | off[l]), col);
            }
            for (std::size_t r = 0; r < d; r++) {
                Complex acc = 0;
                for (std::size_t l = 0; l < d; l++) {
                    acc += u(static_cast<Index>(r), static_cast<Index>(l)) * in[l];
                }
                out[r] = acc;
            }
            for (std::size_t r = 0; r < d; r++) {
                x(static_cast<Index>(base | off[r]), col) = out[r];
            }
        }
    }
}

// x <- U x U^dagger. Uses (U (U x)^dagger)^dagger = U x U^dagger.
void conjugate(ComplexMatrix &x, const ComplexMatrix &u, const std::vector<std::size_t> &qubits, std::size_t total) {
    apply_left(x, u, qubits, total);
    ComplexMatrix y = x.adjoint();
    apply_left(y, u, qubits, total);
    x = y.adjoint();
}

void insert_zero_qubit(Register &reg) {
    const std::size_t total = reg.total();
    const std::size_t p = reg.live;
    const std::size_t new_dim = std::size_t{1} << (total + 1);
    check_dim_cap(new_dim, reg.cap, "ancilla");
    const std::size_t low_bits = total - p;
    const std::size_t low_mask = (std::size_t{1} << low_bits) - 1;
    auto spread = [&](std::size_t i) { return ((i >> low_bits) << (low_bits + 1)) | (i & low_mask); };
    const auto n = static_cast<std::size_t>(reg.x.rows());
    ComplexMatrix y = ComplexMatrix::Zero(static_cast<Index>(new_dim), static_cast<Index>(new_dim));
    for (std::size_t j = 0; j < n; j++) {
        auto nj = static_cast<Index>(spread(j));
        for (std::size_t i = 0; i < n; i++) {
            y(static_cast<Index>(spread(i)), nj) = reg.x(static_cast<Index>(i), static_cast<Index>(j));
        }
    }
    reg.x = std::move(y);
    reg.live++;
}

void trace_qubit(Register &reg, std::size_t w) {
    const std::size_t total = reg.total();
    const std::size_t low_bits = total - 1 - w;
    const std::size_t low_mask = (std::size_t{1} << low_bits) - 1;
    const std::size_t b = std::size_t{1} << low_bits;
    auto spread = [&](std::size_t i) { return ((i >> low_bits) << (low_bits + 1)) | (i & low_mask); };
    const std::size_t n = static_cast<std::size_t>(reg.x.rows()) / 2;
    ComplexMatrix y(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t j = 0; j < n; j++) {
        auto j0 = spread(j);
        for (std::size_t i = 0; i < n; i++) {
            auto i0 = spread(i);
            y(static_cast<Index>(i), static_cast<Index>(j)) =
                reg.x(static_cast<Index>(i0), static_cast<Index>(j0)) +
                reg.x(static_cast<Index>(i0 | b), static_cast<Index>(j0 | b));
        }
    }
    reg.x = std::move(y);
    reg.live--;
}

void decohere_qubit(Register &reg, std::size_t w) {
    const std::size_t b = bit_of(reg.total(), w);
    const auto n = static_cast<std::size_t>(reg.x.rows());
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t i = 0; i < n; i++) {
            if ((i ^ j) & b) {
                reg.x(static_cast<Index>(i), static_cast<Index>(j)) = 0;
            }
        }
    }
}

void run_gate(Register &reg, const Gate &g) {
    for (auto w : g.wires) {
        if (w >= reg.live) {
            throw ShapeError("gate references wire " + std::to_string(w) + " but only " + std::to_string(reg.live) +
                             " wires are live");
        }
    }
    switch (g.kind) {
        case GateKind::Unitary:
            conjugate(reg.x, g.matrix, g.wires, reg.total());
            break;
        case GateKind::Ancilla:
            insert_zero_qubit(reg);
            break;
        case GateKind::Trace:
            trace_qubit(reg, g.wires.at(0));
            break;
        case GateKind::Decohere:
            decohere_qubit(reg, g.wires.at(0));
            break;
    }
}

}  // namespace

ComplexMatrix apply_operator(const Circuit &c, const ComplexMatrix &x, std::size_t ref_qubits, std::size_t cap) {
    const std::size_t total = c.n_in + ref_qubits;
    if (total >= 63 || x.rows() != x.cols() || static_cast<std::size_t>(x.rows()) != (std::size_t{1} << total)) {
        throw ShapeError(
            "apply: operator of side " + std::to_string(x.rows()) + " does not match " + std::to_string(c.n_in) +
            " circuit inputs plus " + std::to_string(ref_qubits) + " reference qubits");
    }
    check_dim_cap(static_cast<std::size_t>(x.rows()), cap, "apply");
    Register reg{x, c.n_in, ref_qubits, cap};
    for (const auto &g : c.gates) {
        run_gate(reg, g);
    }
    return std::move(reg.x);
}

DensityMatrix apply(const Circuit &c, const DensityMatrix &rho, std::size_t cap) {
    return apply_extended(c, rho, 0, cap);
}

DensityMatrix apply_extended(const Circuit &c, const DensityMatrix &rho, std::size_t ref_qubits, std::size_t cap) {
    ComplexMatrix out = apply_operator(c, rho.mat(), ref_qubits, cap);
    // Re-hermitize to absorb round-off before the invariant check.
    out = (out + out.adjoint()) * 0.5;
    return DensityMatrix(std::move(out));
}

Channel::Channel(std::size_t n_in, std::size_t n_out, ComplexMatrix choi, double tolerance)
    : n_in_(n_in), n_out_(n_out), choi_(std::move(choi)) {
    const auto side = static_cast<Index>(dim_in() * dim_out());
    if (choi_.rows() != side || choi_.cols() != side) {
        throw ShapeError("Choi matrix side " + std::to_string(choi_.rows()) + " does not match type (" +
                         std::to_string(n_in) + "," + std::to_string(n_out) + ")");
    }
    if (hermitian_defect(choi_) > tolerance) {
        throw DomainError("Choi matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((choi_ + choi_.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tolerance) {
        throw DomainError("channel is not completely positive (Choi eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()) + ")");
    }
    const std::size_t dims[] = {dim_out(), dim_in()};
    const std::size_t keep[] = {1};
    ComplexMatrix marg = partial_trace(choi_, dims, keep);
    auto din = static_cast<Index>(dim_in());
    if ((marg - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() > tolerance) {
        throw DomainError("channel is not trace preserving");
    }
}

const std::vector<ComplexMatrix> &Channel::kraus() const {
    if (kraus_.empty()) {
        kraus_ = kraus_of(*this);
    }
    return kraus_;
}

Channel choi_of(const Circuit &c, std::size_t cap) {
    auto violations = validate(c);
    if (!violations.empty()) {
        throw DomainError("choi_of: invalid circuit: " + violations.front().message);
    }
    const std::size_t n_out = c.n_out();
    const auto din = static_cast<Index>(std::size_t{1} << c.n_in);
    const auto dout = static_cast<Index>(std::size_t{1} << n_out);
    ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
    ComplexMatrix e = ComplexMatrix::Zero(din, din);
    for (Index i = 0; i < din; i++) {
        for (Index j = i; j < din; j++) {
            e(i, j) = 1;
            ComplexMatrix y = apply_operator(c, e, 0, cap);
            e(i, j) = 0;
            for (Index a = 0; a < dout; a++) {
                for (Index b = 0; b < dout; b++) {
                    choi(a * din + i, b * din + j) = y(a, b);
                    // Phi(|j><i|) = Phi(|i><j|)^dagger for Hermiticity-preserving maps.
                    choi(b * din + j, a * din + i) = std::conj(y(a, b));
                }
            }
        }
    }
    try {
        return Channel(c.n_in, n_out, std::move(choi));
    } catch (const DomainError &ex) {
        throw InternalConsistencyError(std::string("choi_of produced a non-admissible channel: ") + ex.what());
    }
}

std::vector<ComplexMatrix> kraus_of(const Channel &ch) {
    auto s = spectral(ch.choi());
    const auto din = static_cast<Index>(ch.dim_in());
    const auto dout = static_cast<Index>(ch.dim_out());
    std::vector<ComplexMatrix> out;
    for (Index k = 0; k < s.values.size(); k++) {
        double lam = s.values[k];
        if (lam < -1e-9) {
            throw DomainError("kraus_of: channel is not completely positive");
        }
        if (lam < 1e-12) {
            continue;
        }
        ComplexMatrix a(dout, din);
        const double r = std::sqrt(lam);
        for (Index row = 0; row < dout; row++) {
            for (Index col = 0; col < din; col++) {
                a(row, col) = r * s.vectors(row * din + col, k);
            }
        }
        out.push_back(std::move(a));
    }
    return out;
}

ComplexMatrix kraus_apply(const Channel &ch, const ComplexMatrix &x) {
    const auto din = static_cast<Index>(ch.dim_in());
    if (x.rows() != din || x.cols() != din) {
        throw ShapeError("kraus_apply: operator does not match channel input");
    }
    const auto dout = static_cast<Index>(ch.dim_out());
    ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
    for (const auto &a : ch.kraus()) {
        out.noalias() += a * x * a.adjoint();
    }
    return out;
}

ComplexMatrix adjoint_apply(const Channel &ch, const ComplexMatrix &m) {
    const auto dout = static_cast<Index>(ch.dim_out());
    if (m.rows() != dout || m.cols() != dout) {
        throw ShapeError("adjoint_apply: operator does not match channel output");
    }
    const auto din = static_cast<Index>(ch.dim_in());
    ComplexMatrix out = ComplexMatrix::Zero(din, din);
    for (const auto &a : ch.kraus()) {
        out.noalias() += a.adjoint() * m * a;
    }
    return out;
}

ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix> &kraus, std::size_t dim_in) {
    if (kraus.empty()) {
        throw ShapeError("choi_from_kraus: no Kraus operators");
    }
    const auto din = static_cast<Index>(dim_in);
    const auto dout = kraus.front().rows();
    ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
    for (const auto &a : kraus) {
        if (a.rows() != dout || a.cols() != din) {
            throw ShapeError("choi_from_kraus: inconsistent Kraus shapes");
        }
        ComplexVector v(din * dout);
        for (Index row = 0; row < dout; row++) {
            for (Index col = 0; col < din; col++) {
                v(row * din + col) = a(row, col);
            }
        }
        j.noalias() += v * v.adjoint();
    }
    return j;
}

ChoiContraction::ChoiContraction(const ComplexMatrix &choi, std::size_t dim_in, std::size_t dim_out)
    : dim_in_(dim_in), dim_out_(dim_out) {
    const auto din = static_cast<Index>(dim_in);
    const auto dout = static_cast<Index>(dim_out);
    if (choi.rows() != din * dout || choi.cols() != din * dout) {
        throw ShapeError("ChoiContraction: Choi side does not match dims");
    }
    fwd_.resize(din * din, dout * dout);
    adj_.resize(dout * dout, din * din);
    for (Index a = 0; a < dout; a++) {
        for (Index i = 0; i < din; i++) {
            for (Index b = 0; b < dout; b++) {
                for (Index j = 0; j < din; j++) {
                    Complex v = choi(a * din + i, b * din + j);
                    fwd_(i * din + j, a * dout + b) = v;
                    adj_(b * dout + a, j * din + i) = v;
                }
            }
        }
    }
}

ComplexMatrix ChoiContraction::forward(const ComplexMatrix &x, std::size_t dim_ref) const {
    const auto din = static_cast<Index>(dim_in_);
    const auto dout = static_cast<Index>(dim_out_);
    const auto dr = static_cast<Index>(dim_ref);
    if (x.rows() != din * dr || x.cols() != din * dr) {
        throw ShapeError("ChoiContraction::forward: operator does not match input (x) reference");
    }
    ComplexMatrix xp(dr * dr, din * din);
    for (Index i = 0; i < din; i++) {
        for (Index r = 0; r < dr; r++) {
            for (Index j = 0; j < din; j++) {
                for (Index s = 0; s < dr; s++) {
                    xp(r * dr + s, i * din + j) = x(i * dr + r, j * dr + s);
                }
            }
        }
    }
    ComplexMatrix yp = xp * fwd_;
    ComplexMatrix y(dout * dr, dout * dr);
    for (Index a = 0; a < dout; a++) {
        for (Index r = 0; r < dr; r++) {
            for (Index b = 0; b < dout; b++) {
                for (Index s = 0; s < dr; s++) {
                    y(a * dr + r, b * dr + s) = yp(r * dr + s, a * dout + b);
                }
            }
        }
    }
    return y;
}

ComplexMatrix ChoiContraction::adjoint(const ComplexMatrix &m, std::size_t dim_ref) const {
    const auto din = static_cast<Index>(dim_in_);
    const auto dout = static_cast<Index>(dim_out_);
    const auto dr = static_cast<Index>(dim_ref);
    if (m.rows() != dout * dr || m.cols() != dout * dr) {
        throw ShapeError("ChoiContraction::adjoint: operator does not match output (x) reference");
    }
    ComplexMatrix mp(dr * dr, dout * dout);
    for (Index b = 0; b < dout; b++) {
        for (Index s = 0; s < dr; s++) {
            for (Index a = 0; a < dout; a++) {
                for (Index r = 0; r < dr; r++) {
                    mp(s * dr + r, b * dout + a) = m(b * dr + s, a * dr + r);
                }
            }
        }
    }
    ComplexMatrix kp = mp * adj_;
    ComplexMatrix k(din * dr, din * dr);
    for (Index j = 0; j < din; j++) {
        for (Index s = 0; s < dr; s++) {
            for (Index i = 0; i < din; i++) {
                for (Index r = 0; r < dr; r++) {
                    k(j * dr + s, i * dr + r) = kp(s * dr + r, j * din + i);
                }
            }
        }
    }
    return k;
}

DilatedCircuit dilate(const Circuit &c) {
    auto violations = validate(c);
    if (!violations.empty()) {
        throw DomainError("dilate: invalid circuit: " + violations.front().message);
    }
    DilatedCircuit d;
    d.n = c.n_in;
    std::vector<std::size_t> live(c.n_in);
    for (std::size_t i = 0; i < c.n_in; i++) {
        live[i] = i;
    }
    std::size_t next = c.n_in;
    std::vector<Gate> gates;
    for (const auto &g : c.gates) {
        switch (g.kind) {
            case GateKind::Unitary: {
                std::vector<std::size_t> ws;
                for (auto w : g.wires) {
                    ws.push_back(live[w]);
                }
                gates.push_back(Gate::unitary(g.matrix, std::move(ws), g.name));
                break;
            }
            case GateKind::Ancilla:
                live.push_back(next++);
                d.k++;
                break;
            case GateKind::Trace:
                d.garbage_wires.push_back(live[g.wires[0]]);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(g.wires[0]));
                break;
            case GateKind::Decohere: {
                std::size_t anc = next++;
                d.k++;
                gates.push_back(Gate::named("CNOT", {live[g.wires[0]], anc}));
                d.garbage_wires.push_back(anc);
                break;
            }
        }
    }
    d.l = d.garbage_wires.size();
    d.output_wires = live;
    d.unitary_circuit.name = c.name + "_dilated";
    d.unitary_circuit.n_in = c.n_in + d.k;
    d.unitary_circuit.gates = std::move(gates);
    return d;
}

ComplexMatrix run_dilated(const DilatedCircuit &d, const ComplexMatrix &rho, std::size_t cap) {
    if (static_cast<std::size_t>(rho.rows()) != (std::size_t{1} << d.n)) {
        throw ShapeError("run_dilated: input dimension mismatch");
    }
    ComplexMatrix zero = ComplexMatrix::Zero(static_cast<Index>(std::size_t{1} << d.k), static_cast<Index>(std::size_t{1} << d.k));
    zero(0, 0) = 1;
    ComplexMatrix x = apply_operator(d.unitary_circuit, tensor(rho, zero, cap), 0, cap);
    std::vector<std::size_t> dims(d.width(), 2);
    return partial_trace(x, dims, d.output_wires);
}

}  // namespace qcd
