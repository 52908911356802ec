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

#ifndef QCD_IO_HPP
#define QCD_IO_HPP

// JSON encodings shared by the command line tool and the tests.
//
// Matrix: {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
// Density matrix: {"qubits": n, "matrix": <matrix>}.
// Choi matrix: {"qubits_in": n, "qubits_out": m, "matrix": <matrix>}.
// Instance: {"q0": <circuit text>, "q1": <circuit text>, "kind": "CI"|"QCD", "a": x, "b": y}.

#include <string>

#include "json.hpp"

#include "qcd/circuit.hpp"
#include "qcd/distances.hpp"
#include "qcd/protocol.hpp"
#include "qcd/reductions.hpp"
#include "qcd/simulator.hpp"

namespace qcd {

using Json = nlohmann::json;

/// Malformed JSON document or a field of the wrong type.
struct FormatError : Error {
    using Error::Error;
};

Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

Json density_to_json(const DensityMatrix &rho);
DensityMatrix density_from_json(const Json &j);

Json choi_to_json(const Channel &ch);

Json instance_to_json(const ProblemInstance &inst);
ProblemInstance instance_from_json(const Json &j, std::size_t cap = kDefaultDimCap);

Json witness_to_json(const DiamondWitness &w);
Json image_fidelity_to_json(const ImageFidelityResult &r);
Json certificate_to_json(const StageCertificate &c);
Json certificate_to_json(const PolarizationCertificate &c);
Json protocol_result_to_json(const ProtocolResult &r);

/// Parses a whole document; syntax errors become FormatError.
Json parse_json(const std::string &text);

/// Canonical text form: two-space indent, trailing newline. Doubles print in
/// their shortest round-trip form, so equal values give equal bytes.
std::string dump_json(const Json &j);

}  // namespace qcd

#endif
