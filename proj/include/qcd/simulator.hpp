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

#ifndef QCD_SIMULATOR_HPP
#define QCD_SIMULATOR_HPP

#include <cstddef>
#include <vector>

#include "qcd/circuit.hpp"
#include "qcd/numkernel.hpp"

namespace qcd {

/// Linear action of a circuit on an arbitrary operator (not necessarily a
/// state) over n_in + ref_qubits qubits; the circuit acts on the leading
/// n_in qubits. Any live register wider than `cap` raises SizeError.
ComplexMatrix apply_operator(
    const Circuit &c, const ComplexMatrix &x, std::size_t ref_qubits = 0, std::size_t cap = kDefaultDimCap);

DensityMatrix apply(const Circuit &c, const DensityMatrix &rho, std::size_t cap = kDefaultDimCap);

/// (Q (x) I)(rho) with `ref_qubits` untouched reference qubits after the
/// circuit's inputs.
DensityMatrix apply_extended(
    const Circuit &c, const DensityMatrix &rho, std::size_t ref_qubits, std::size_t cap = kDefaultDimCap);

/// A superoperator in Choi form.
///
/// Convention: J = sum_ij Phi(|i><j|) (x) |i><j|, output factor first,
/// unnormalized. Kraus operators are derived on demand.
class Channel {
   public:
    /// Checks complete positivity and trace preservation within `tolerance`;
    /// throws DomainError otherwise.
    Channel(std::size_t n_in, std::size_t n_out, ComplexMatrix choi, double tolerance = 1e-9);

    std::size_t n_in() const {
        return n_in_;
    }
    std::size_t n_out() const {
        return n_out_;
    }
    std::size_t dim_in() const {
        return std::size_t{1} << n_in_;
    }
    std::size_t dim_out() const {
        return std::size_t{1} << n_out_;
    }
    const ComplexMatrix &choi() const {
        return choi_;
    }
    const std::vector<ComplexMatrix> &kraus() const;

   private:
    std::size_t n_in_;
    std::size_t n_out_;
    ComplexMatrix choi_;
    mutable std::vector<ComplexMatrix> kraus_;
};

/// Builds the Choi matrix by running the circuit on every |i><j|.
Channel choi_of(const Circuit &c, std::size_t cap = kDefaultDimCap);

/// Kraus operators from the scaled eigenvectors of the Choi matrix; Choi
/// eigenvalues below 1e-12 are dropped.
std::vector<ComplexMatrix> kraus_of(const Channel &ch);

/// Phi(X) evaluated from Kraus operators.
ComplexMatrix kraus_apply(const Channel &ch, const ComplexMatrix &x);

/// Phi^dagger(M) = sum_i A_i^dagger M A_i.
ComplexMatrix adjoint_apply(const Channel &ch, const ComplexMatrix &m);

/// Rebuilds sum_ij Phi(|i><j|) (x) |i><j| from Kraus operators.
ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix> &kraus, std::size_t dim_in);

/// Contraction of a Choi-form matrix (possibly a difference of two Choi
/// matrices) against operators on input (x) reference and output (x)
/// reference spaces. Both directions reduce to one dense matrix product.
class ChoiContraction {
   public:
    ChoiContraction(const ComplexMatrix &choi, std::size_t dim_in, std::size_t dim_out);

    std::size_t dim_in() const {
        return dim_in_;
    }
    std::size_t dim_out() const {
        return dim_out_;
    }

    /// (Phi (x) I_ref)(X) for X on input (x) reference.
    ComplexMatrix forward(const ComplexMatrix &x, std::size_t dim_ref) const;
    /// (Phi^dagger (x) I_ref)(M) for M on output (x) reference.
    ComplexMatrix adjoint(const ComplexMatrix &m, std::size_t dim_ref) const;

   private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    ComplexMatrix fwd_;  // rows (i,j), cols (a,b): J[(a,i),(b,j)]
    ComplexMatrix adj_;  // rows (b,a), cols (j,i): J[(a,i),(b,j)]
};

/// A unitary circuit simulating a mixed-state circuit: run unitary_circuit on
/// rho (x) |0^k><0^k| (ancillas are the last k wires), trace garbage_wires,
/// and read the output in output_wires order.
struct DilatedCircuit {
    Circuit unitary_circuit;
    std::size_t n = 0;  // source circuit inputs
    std::size_t k = 0;
    std::size_t l = 0;
    std::vector<std::size_t> garbage_wires;
    std::vector<std::size_t> output_wires;

    std::size_t width() const {
        return n + k;
    }
    std::size_t m() const {
        return output_wires.size();
    }
};

/// Per-gate minimal dilation: unitaries are kept, Ancilla allocates a fresh
/// |0> wire, Trace reclassifies its wire as garbage, Decohere copies its wire
/// into a fresh ancilla with a CNOT and the ancilla becomes garbage.
DilatedCircuit dilate(const Circuit &c);

/// Evaluates the dilation on rho: tr_garbage U (rho (x) |0^k><0^k|) U^dagger.
ComplexMatrix run_dilated(const DilatedCircuit &d, const ComplexMatrix &rho, std::size_t cap = kDefaultDimCap);

}  // namespace qcd

#endif
