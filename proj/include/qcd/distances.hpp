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

#ifndef QCD_DISTANCES_HPP
#define QCD_DISTANCES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qcd/circuit.hpp"
#include "qcd/numkernel.hpp"
#include "qcd/simulator.hpp"

namespace qcd {

/// Sum of singular values.
double trace_norm(const ComplexMatrix &x);

/// F(rho, xi) = tr sqrt(sqrt(rho) xi sqrt(rho)), clamped to [0, 1].
double fidelity(const DensityMatrix &rho, const DensityMatrix &xi);

/// || tr_H |psi><phi| ||_tr for purifications on H (x) K, where H is the
/// leading factor of dimension `system_dim`. Equals F of the reduced states
/// on H.
double fidelity_via_purification(const StateVector &psi, const StateVector &phi, std::size_t system_dim);

struct HelstromResult {
    ComplexMatrix projector;  // onto the strictly positive eigenspace
    double value = 0;         // trace norm of delta
};

/// Optimal two-outcome measurement for a Hermitian difference delta.
/// Eigenvalues within 1e-9 of zero are left out of the projector.
HelstromResult helstrom(const ComplexMatrix &delta);

struct OptimizerConfig {
    std::size_t restarts = 32;
    std::size_t max_iters = 500;
    double rel_tol = 1e-10;
    std::uint64_t seed = 0;
    /// Worker threads for independent restarts; results do not depend on it.
    std::size_t threads = 1;

    void check() const;
};

struct DiamondWitness {
    double value = 0;
    ComplexVector psi;         // input (x) reference
    ComplexMatrix measurement; // projector on output (x) reference
    std::size_t dim_in = 0;
    std::size_t dim_ref = 0;
    std::size_t restarts_used = 0;
    bool converged = false;
    /// Objective after every half-step of the winning restart.
    std::vector<double> history;
};

/// Seesaw ascent for ||ch0 - ch1||_diamond over pure inputs on
/// input (x) reference. The value is attained by the returned witness, so it
/// is a lower bound on the true norm. `reference_dim` of 0 means the input
/// dimension.
DiamondWitness diamond_norm(
    const Channel &ch0, const Channel &ch1, const OptimizerConfig &cfg, std::size_t reference_dim = 0);

/// tr-norm of ((ch0 - ch1) (x) I)(|psi><psi|) for a given input vector.
double diamond_objective(const Channel &ch0, const Channel &ch1, const ComplexVector &psi);

struct ImageFidelityResult {
    double value = 0;
    DensityMatrix rho0 = DensityMatrix::basis(0, 0);
    DensityMatrix rho1 = DensityMatrix::basis(0, 0);
    std::size_t restarts_used = 0;
    bool converged = false;
};

/// max F(q0(rho0), q1(rho1)) by alternating ascent over purifications of the
/// two inputs. The returned states attain the reported value.
ImageFidelityResult max_image_fidelity(const Circuit &q0, const Circuit &q1, const OptimizerConfig &cfg);

}  // namespace qcd

#endif
