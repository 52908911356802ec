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

#include "qcd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qcd/simulator.hpp"

namespace qcd {

namespace {

std::size_t ref_qubits_of(std::size_t private_dim) {
    return qubits_for_dim(private_dim);
}

struct Images {
    ComplexMatrix rho0;
    ComplexMatrix rho1;
};

Images images(const Circuit &q0, const Circuit &q1, const ProverStrategy &strat) {
    const auto ref = ref_qubits_of(strat.private_dim);
    const auto input = DensityMatrix::pure(strat.psi);
    return {apply_extended(q0, input, ref).mat(), apply_extended(q1, input, ref).mat()};
}

double prob_claim_zero(const ComplexMatrix &m, const ComplexMatrix &rho) {
    return std::clamp((m * rho).trace().real(), 0.0, 1.0);
}

}  // namespace

void ProverStrategy::check(const Circuit &q0, const Circuit &q1) const {
    if (q0.n_in != q1.n_in || q0.n_out() != q1.n_out()) {
        throw ShapeError("circuits have different types");
    }
    if (private_dim == 0) {
        throw ShapeError("private dimension must be positive");
    }
    ref_qubits_of(private_dim);
    const auto din = (std::size_t{1} << q0.n_in) * private_dim;
    const auto dout = (std::size_t{1} << q0.n_out()) * private_dim;
    if (static_cast<std::size_t>(psi.size()) != din) {
        throw ShapeError("psi has dimension " + std::to_string(psi.size()) + ", expected " + std::to_string(din));
    }
    if (static_cast<std::size_t>(measurement.rows()) != dout || static_cast<std::size_t>(measurement.cols()) != dout) {
        throw ShapeError("measurement has side " + std::to_string(measurement.rows()) + ", expected " +
                         std::to_string(dout));
    }
    if (std::abs(psi.norm() - 1.0) > tol::kNorm) {
        throw DomainError("psi is not a unit vector");
    }
    if (hermitian_defect(measurement) > tol::kHermitian) {
        throw DomainError("measurement is not Hermitian");
    }
    if ((measurement * measurement - measurement).cwiseAbs().maxCoeff() > 1e-9) {
        throw DomainError("measurement is not a projector");
    }
}

ProverStrategy optimal_prover(const Circuit &q0, const Circuit &q1, const OptimizerConfig &cfg,
                              DiamondWitness *witness) {
    if (q0.n_in != q1.n_in || q0.n_out() != q1.n_out()) {
        throw ShapeError("circuits have different types");
    }
    auto w = diamond_norm(choi_of(q0), choi_of(q1), cfg);
    ProverStrategy strat;
    strat.psi = w.psi;
    strat.private_dim = w.dim_ref;
    // Recomputed from the circuits so that the projector matches the exact images.
    const auto im = images(q0, q1, strat);
    strat.measurement = helstrom(im.rho0 - im.rho1).projector;
    if (witness != nullptr) {
        *witness = std::move(w);
    }
    return strat;
}

double acceptance_probability(const Circuit &q0, const Circuit &q1, const ProverStrategy &strat) {
    strat.check(q0, q1);
    const auto im = images(q0, q1, strat);
    const double p0 = prob_claim_zero(strat.measurement, im.rho0);
    const double p1 = prob_claim_zero(strat.measurement, im.rho1);
    return std::clamp(0.5 * p0 + 0.5 * (1.0 - p1), 0.0, 1.0);
}

ProtocolResult run_protocol(const Circuit &q0, const Circuit &q1, const ProverStrategy &strat,
                            std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw DomainError("trials must be at least 1");
    }
    strat.check(q0, q1);
    const auto im = images(q0, q1, strat);
    const double claim0[2] = {prob_claim_zero(strat.measurement, im.rho0),
                              prob_claim_zero(strat.measurement, im.rho1)};

    std::uint64_t accepts = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int i = u(rng) < 0.5 ? 0 : 1;
        const int j = u(rng) < claim0[i] ? 0 : 1;
        accepts += (i == j) ? 1 : 0;
    }

    ProtocolResult r;
    r.p_accept_exact = std::clamp(0.5 * claim0[0] + 0.5 * (1.0 - claim0[1]), 0.0, 1.0);
    r.empirical = EmpiricalResult{trials, accepts, static_cast<double>(accepts) / static_cast<double>(trials)};
    r.seed = seed;
    return r;
}

}  // namespace qcd
