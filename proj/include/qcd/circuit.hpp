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

#ifndef QCD_CIRCUIT_HPP
#define QCD_CIRCUIT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcd/numkernel.hpp"

namespace qcd {

/// Largest arity an explicit unitary gate may have.
inline constexpr std::size_t kMaxArity = 3;

enum class GateKind { Unitary, Ancilla, Trace, Decohere };

/// One gate of a mixed-state circuit.
///
/// Wires are numbered by liveness order: an Ancilla appends a new wire at the
/// highest index, a Trace removes its wire and shifts every higher index down
/// by one. A Unitary on k wires carries a 2^k x 2^k matrix; the first listed
/// wire is the most significant bit of the matrix index.
struct Gate {
    GateKind kind = GateKind::Unitary;
    std::vector<std::size_t> wires;
    ComplexMatrix matrix;
    /// Standard-gate name ("H", "CNOT", ...) when the gate came from parser
    /// sugar; empty for inline matrices.
    std::string name;

    static Gate unitary(ComplexMatrix u, std::vector<std::size_t> wires, std::string name = {});
    static Gate named(std::string_view name, std::vector<std::size_t> wires);
    static Gate ancilla();
    static Gate trace(std::size_t wire);
    static Gate decohere(std::size_t wire);

    std::size_t arity() const {
        return wires.size();
    }
    bool operator==(const Gate &other) const;
};

/// Exact matrix of a standard gate, or nullopt if the name is unknown.
std::optional<ComplexMatrix> standard_gate_matrix(std::string_view name);

/// A sequence of gates realizing an admissible operation of type (n_in, n_out).
struct Circuit {
    std::string name = "circuit";
    std::size_t n_in = 0;
    std::vector<Gate> gates;

    /// n_in + #Ancilla - #Trace. Meaningful for valid circuits.
    std::size_t n_out() const;
    /// Largest number of simultaneously live wires.
    std::size_t max_width() const;
    bool is_unitary_only() const;

    bool operator==(const Circuit &other) const;
};

struct Violation {
    std::size_t gate_index;  // index into Circuit::gates
    std::string message;
};

/// Structural check: liveness, wire distinctness, matrix shapes, unitarity
/// within 1e-9, arity cap. Empty iff valid.
std::vector<Violation> validate(const Circuit &c);

/// Syntax error at a given line (1-based).
struct ParseError : Error {
    ParseError(std::size_t line, const std::string &message);
    std::size_t line;
};

/// Syntactically fine but structurally invalid circuit text.
struct ValidationError : Error {
    ValidationError(std::size_t line, const std::string &message);
    std::size_t line;
};

/// Parses the line-based circuit format. Dimension cap applies to the widest
/// live register (2^width).
Circuit parse_circuit(std::string_view text, std::size_t cap = kDefaultDimCap);

/// Inverse of parse_circuit. Inline matrices are printed with 17 significant
/// digits so parsing reproduces them bit for bit.
std::string serialize_circuit(const Circuit &c);

enum class ProblemKind { CloseImages, Distinguishability };

/// A pair of circuits together with the promise thresholds.
struct ProblemInstance {
    Circuit q0;
    Circuit q1;
    ProblemKind kind = ProblemKind::Distinguishability;
    double a = 0;
    double b = 0;

    /// Throws DomainError/ShapeError if the pair or thresholds are inconsistent.
    void check() const;
};

}  // namespace qcd

#endif
