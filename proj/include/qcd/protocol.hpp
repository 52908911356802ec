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

#ifndef QCD_PROTOCOL_HPP
#define QCD_PROTOCOL_HPP

// Single-round distinguishability protocol: the prover sends the input part
// of |psi>, the verifier secretly applies Q_i for a uniform i and returns the
// output, the prover measures {M, I - M} and the verifier accepts when the
// announced index matches i.

#include <cstdint>
#include <optional>

#include "qcd/circuit.hpp"
#include "qcd/distances.hpp"

namespace qcd {

struct ProverStrategy {
    ComplexVector psi;          // input (x) private space
    ComplexMatrix measurement;  // projector on output (x) private; outcome 0 claims Q0
    std::size_t private_dim = 0;

    /// Throws ShapeError/DomainError if the strategy does not fit the pair.
    void check(const Circuit &q0, const Circuit &q1) const;
};

struct EmpiricalResult {
    std::uint64_t trials = 0;
    std::uint64_t accepts = 0;
    double estimate = 0;
};

struct ProtocolResult {
    double p_accept_exact = 0;
    std::optional<EmpiricalResult> empirical;
    /// Filled by callers that ran the optimizer; run_protocol leaves it 0.
    double dnorm_witness_value = 0;
    std::uint64_t seed = 0;
};

/// The diamond-norm witness input together with the Helstrom measurement for
/// the two outputs it produces. `witness` receives the optimizer result.
ProverStrategy optimal_prover(const Circuit &q0, const Circuit &q1, const OptimizerConfig &cfg,
                              DiamondWitness *witness = nullptr);

/// 1/2 tr(M rho0) + 1/2 tr((I - M) rho1) with rho_i = (Q_i (x) I)(|psi><psi|).
double acceptance_probability(const Circuit &q0, const Circuit &q1, const ProverStrategy &strat);

/// Monte Carlo over `trials` rounds. Trial t draws from its own stream
/// seeded by (seed, t), so the tally does not depend on evaluation order.
ProtocolResult run_protocol(const Circuit &q0, const Circuit &q1, const ProverStrategy &strat,
                            std::uint64_t trials, std::uint64_t seed);

}  // namespace qcd

#endif
