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

#ifndef QCD_REDUCTIONS_HPP
#define QCD_REDUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcd/circuit.hpp"
#include "qcd/simulator.hpp"

namespace qcd {

/// A construction would need a gate wider than kMaxArity.
struct ConstructionError : Error {
    using Error::Error;
};

/// Emits a circuit while addressing wires by stable handles instead of
/// liveness positions. Handles 0..n_in-1 are the inputs.
class CircuitBuilder {
   public:
    using Wire = std::size_t;

    CircuitBuilder(std::string name, std::size_t n_in);

    Wire input(std::size_t i) const;
    Wire ancilla();
    void unitary(const ComplexMatrix &u, std::span<const Wire> wires, std::string name = {});
    void named(std::string_view name, std::initializer_list<Wire> wires);
    void trace(Wire w);
    void decohere(Wire w);

    /// Appends every gate of `c` with its inputs bound to `inputs`; returns
    /// the handles carrying its outputs, in order.
    std::vector<Wire> inline_circuit(const Circuit &c, std::span<const Wire> inputs);

    /// Reorders the live wires into `outputs` with SWAP gates and returns the
    /// circuit. `outputs` must list every live handle exactly once.
    Circuit finish(std::span<const Wire> outputs) &&;

   private:
    std::size_t position(Wire w) const;

    Circuit circuit_;
    std::vector<Wire> live_;
    Wire next_;
};

struct CircuitPair {
    Circuit c0;
    Circuit c1;
};

/// Unitary P with P|0>|psi> = |0> P0|psi> and P|1>|psi> = |1> P1|psi>.
///
/// Both dilations are first routed so that their outputs occupy the leading
/// wires, then the one with fewer ancillas is padded with untouched wires at
/// the end. The control is wire 0 of the result; the output wires are the
/// control followed by the m original outputs, the rest is garbage.
DilatedCircuit controlled_join(const DilatedCircuit &p0, const DilatedCircuit &p1);

/// Close-images to distinguishability: R0 runs the controlled join of both
/// dilations and traces the original outputs, keeping control + garbage; R1
/// is R0 followed by a decoherence gate on the control.
CircuitPair ci_to_qcd(const Circuit &q0, const Circuit &q1);

/// k copies in parallel.
CircuitPair tensor_power(const Circuit &q0, const Circuit &q1, std::size_t k, std::size_t cap = kDefaultDimCap);

/// Slot i runs slots[i].c0 or slots[i].c1 according to bit x_i, with x
/// uniform over even-parity strings for the first circuit and odd-parity
/// strings for the second. Coins come from (ancilla, H, decohere); the last
/// slot is controlled by their parity.
CircuitPair parity_combine(std::span<const CircuitPair> slots, std::size_t cap = kDefaultDimCap);

/// parity_combine over r copies of (q0, q1).
CircuitPair parity_mix(const Circuit &q0, const Circuit &q1, std::size_t r, std::size_t cap = kDefaultDimCap);

struct Interval {
    double lo = 0;
    double hi = 2;
};

/// Guaranteed range of the output distance under each promise branch.
struct StageCertificate {
    std::size_t stage = 0;
    std::string construction;
    std::uint64_t param = 0;
    Interval yes;  // input distance >= a
    Interval no;   // input distance <= b
};

StageCertificate certify_parity(std::size_t stage, std::uint64_t r, Interval yes, Interval no);
StageCertificate certify_tensor(std::size_t stage, std::uint64_t k, Interval yes, Interval no);

struct StageCounts {
    std::uint64_t r = 1;
    std::uint64_t s = 1;
    std::uint64_t t = 1;
};

struct PolarizationParams {
    std::uint64_t n = 1;
    double a = 1;
    double b = 0.25;
    StageCounts counts;

    /// r = ceil(log(16n) / log(a^2 / 2b)), s = floor((b/2)^-r / 4),
    /// t = ceil((n+1)/2). Requires 0 < b < a < 2 and 2b < a^2.
    static PolarizationParams derive(std::uint64_t n, double a, double b);
};

struct PolarizationCertificate {
    PolarizationParams params;
    std::vector<StageCertificate> stages;
    Interval final_yes;
    Interval final_no;
    Interval target_yes;  // (2 - 2^-n, 2]
    Interval target_no;   // [0, 2^-n)
};

PolarizationCertificate polarization_certificate(const PolarizationParams &params);

/// parity_mix(r), then tensor_power(s), then parity_mix(t). A stage whose
/// parameter is 1 leaves the pair untouched. Throws SizeError before building
/// anything if the final circuits would exceed `cap`.
CircuitPair polarize(const Circuit &q0, const Circuit &q1, const PolarizationParams &params,
                     std::optional<StageCounts> override_counts = std::nullopt, std::size_t cap = kDefaultDimCap);

}  // namespace qcd

#endif
