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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "random_circuits.hpp"

namespace qcd {
namespace {

using testing::Rng;

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix ket_bra(std::size_t d, std::size_t i, std::size_t j) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, j) = 1;
    return m;
}

ComplexVector phi_plus() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1 / std::sqrt(2.0);
    return v;
}

// Phi(rho) = tr_in[J (I_out (x) rho^T)], written out entrywise.
ComplexMatrix apply_via_choi(const ComplexMatrix &j, std::size_t din, std::size_t dout, const ComplexMatrix &rho) {
    ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
    for (std::size_t a = 0; a < dout; ++a) {
        for (std::size_t b = 0; b < dout; ++b) {
            for (std::size_t i = 0; i < din; ++i) {
                for (std::size_t k = 0; k < din; ++k) {
                    out(a, b) += j(a * din + i, b * din + k) * rho(i, k);
                }
            }
        }
    }
    return out;
}

TEST(Apply, EmptyCircuitIsIdentity) {
    Rng rng(31);
    const DensityMatrix rho(testing::random_density(4, rng));
    const auto c = parse_circuit("circuit id inputs 2\nend\n");
    EXPECT_LT(max_abs(apply(c, rho).mat() - rho.mat()), 1e-15);
}

TEST(Apply, DecohereOnPlus) {
    ComplexVector plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    const auto out = apply(testing::dephase_1q(), DensityMatrix::pure(plus));
    EXPECT_LT(max_abs(out.mat() - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(Apply, HadamardOnZero) {
    const auto out = apply(parse_circuit("circuit h inputs 1\ngate H 0\nend\n"), DensityMatrix::basis(1, 0));
    EXPECT_LT(max_abs(out.mat() - 0.5 * ComplexMatrix::Ones(2, 2)), 1e-15);
}

TEST(Apply, WireOrderingIsMostSignificantFirst) {
    // X on wire 0 of |00> gives |10>, index 2.
    const auto out = apply(parse_circuit("circuit x inputs 2\ngate X 0\nend\n"), DensityMatrix::basis(2, 0));
    EXPECT_NEAR(out.mat()(2, 2).real(), 1.0, 1e-15);
    // Tracing wire 0 of |10> leaves |0>; tracing wire 1 leaves |1>.
    const auto t0 = apply(parse_circuit("circuit t inputs 2\ntrace 0\nend\n"), DensityMatrix::basis(2, 2));
    const auto t1 = apply(parse_circuit("circuit t inputs 2\ntrace 1\nend\n"), DensityMatrix::basis(2, 2));
    EXPECT_NEAR(t0.mat()(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(t1.mat()(1, 1).real(), 1.0, 1e-15);
    // An ancilla lands after the live wires: |1> (x) |0> = index 2.
    const auto a = apply(parse_circuit("circuit a inputs 1\nancilla\nend\n"), DensityMatrix::basis(1, 1));
    EXPECT_NEAR(a.mat()(2, 2).real(), 1.0, 1e-15);
}

TEST(Apply, MatchesDenseMatrixProduct) {
    Rng rng(32);
    const auto u01 = testing::haar_unitary(4, rng);
    const auto u2 = testing::haar_unitary(2, rng);
    Circuit c;
    c.n_in = 3;
    c.gates.push_back(Gate::unitary(u01, {2, 0}));
    c.gates.push_back(Gate::unitary(u2, {1}));
    // Oracle: permute wires (2,0,1) -> positions, build the dense unitary by hand.
    const auto rho = testing::random_density(8, rng);
    ComplexMatrix big = ComplexMatrix::Zero(8, 8);
    for (std::size_t in = 0; in < 8; ++in) {
        const std::size_t b0 = (in >> 2) & 1, b1 = (in >> 1) & 1, b2 = in & 1;
        for (std::size_t out = 0; out < 8; ++out) {
            const std::size_t o0 = (out >> 2) & 1, o1 = (out >> 1) & 1, o2 = out & 1;
            big(out, in) = u01(o2 * 2 + o0, b2 * 2 + b0) * u2(o1, b1);
        }
    }
    EXPECT_LT(max_abs(apply(c, DensityMatrix(rho)).mat() - big * rho * big.adjoint()), 1e-12);
}

TEST(ApplyExtended, ZeroReferenceIsApply) {
    Rng rng(33);
    const auto c = testing::random_channel_1q(rng);
    const DensityMatrix rho(testing::random_density(2, rng));
    EXPECT_LT(max_abs(apply_extended(c, rho, 0).mat() - apply(c, rho).mat()), 1e-15);
}

TEST(ApplyExtended, IdentityLeavesJointStateAlone) {
    Rng rng(34);
    const DensityMatrix rho(testing::random_density(4, rng));
    EXPECT_LT(max_abs(apply_extended(testing::identity_1q(), rho, 1).mat() - rho.mat()), 1e-15);
}

TEST(ApplyExtended, DecohereOnPhiPlus) {
    const auto out = apply_extended(testing::dephase_1q(), DensityMatrix::pure(phi_plus()), 1);
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 0.5;
    EXPECT_LT(max_abs(out.mat() - expect), 1e-15);
}

TEST(ApplyExtended, EnlargedReferenceAgreesOnProductInputs) {
    Rng rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = testing::random_circuit(1, 3, 6, rng);
        const auto rho = testing::random_density(4, rng);
        const auto extra = testing::random_density(2, rng);
        const auto small = apply_extended(c, DensityMatrix(rho), 1).mat();
        const auto big = apply_extended(c, DensityMatrix(tensor(rho, extra)), 2).mat();
        const std::size_t dout = std::size_t{1} << c.n_out();
        const std::vector<std::size_t> dims{dout * 2, 2};
        const std::vector<std::size_t> keep{0};
        EXPECT_LT(max_abs(partial_trace(big, dims, keep) - small), 1e-12);
    }
}

TEST(ApplyExtended, OutputsHaveUnitTraceNorm) {
    Rng rng(36);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_circuit(2, 4, 8, rng);
        const auto psi = testing::random_unit(16, rng);
        const auto out = apply_extended(c, DensityMatrix::pure(psi), 2).mat();
        EXPECT_NEAR(testing::tnorm_hermitian(out), 1.0, 1e-10);
    }
}

TEST(Apply, RespectsCap) {
    const auto c = parse_circuit("circuit w inputs 1\nancilla\nancilla\nancilla\nend\n");
    EXPECT_NO_THROW(apply(c, DensityMatrix::basis(1, 0), 16));
    EXPECT_THROW(apply(c, DensityMatrix::basis(1, 0), 8), SizeError);
}

TEST(Choi, IdentityIsUnnormalizedPhiPlus) {
    const auto ch = choi_of(testing::identity_1q());
    const ComplexVector v = phi_plus();
    EXPECT_LT(max_abs(ch.choi() - 2.0 * v * v.adjoint()), 1e-15);
}

TEST(Choi, Decohere) {
    const auto ch = choi_of(testing::dephase_1q());
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1;
    EXPECT_LT(max_abs(ch.choi() - expect), 1e-15);
}

TEST(Choi, TraceGate) {
    const auto ch = choi_of(parse_circuit("circuit t inputs 1\ntrace 0\nend\n"));
    EXPECT_EQ(ch.n_out(), 0u);
    EXPECT_LT(max_abs(ch.choi() - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(Choi, ConventionIsOutputFirst) {
    // Constant |1> channel: J = |1><1| (x) I.
    const auto ch = choi_of(testing::constant_1q("gate X 0\n"));
    EXPECT_LT(max_abs(ch.choi() - tensor(ket_bra(2, 1, 1), ComplexMatrix::Identity(2, 2))), 1e-15);
}

TEST(Choi, RandomCircuitsAreAdmissible) {
    Rng rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto c = testing::random_circuit(n, 4, 1 + trial % 8, rng);
        const auto ch = choi_of(c);
        const auto &j = ch.choi();
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(j).eigenvalues().minCoeff(), -1e-10);
        const std::vector<std::size_t> dims{ch.dim_out(), ch.dim_in()};
        const std::vector<std::size_t> keep{1};
        EXPECT_LT(max_abs(partial_trace(j, dims, keep) - ComplexMatrix::Identity(ch.dim_in(), ch.dim_in())), 1e-10);
    }
}

TEST(Choi, ReconstructsApply) {
    Rng rng(38);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 2, 4, 8, rng);
        const auto ch = choi_of(c);
        const auto rho = testing::random_density(ch.dim_in(), rng);
        EXPECT_LT(max_abs(apply(c, DensityMatrix(rho)).mat() -
                          apply_via_choi(ch.choi(), ch.dim_in(), ch.dim_out(), rho)),
                  1e-10);
    }
}

TEST(Channel, RejectsNonAdmissibleChoi) {
    ComplexMatrix j = ComplexMatrix::Zero(4, 4);
    j(0, 0) = 2;
    EXPECT_THROW(Channel(1, 1, j), DomainError);
    j = ComplexMatrix::Identity(4, 4);
    j(0, 0) = -0.5;
    j(2, 2) = 2.5;
    EXPECT_THROW(Channel(1, 1, j), DomainError);
}

TEST(Kraus, UnitaryChannelHasOneOperator) {
    Rng rng(39);
    const auto u = testing::haar_unitary(2, rng);
    Circuit c;
    c.n_in = 1;
    c.gates.push_back(Gate::unitary(u, {0}));
    const auto k = kraus_of(choi_of(c));
    ASSERT_EQ(k.size(), 1u);
    const Complex phase = (u.adjoint() * k[0]).trace() / 2.0;
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_LT(max_abs(k[0] - phase * u), 1e-12);
}

TEST(Kraus, DecohereHasBasisProjectors) {
    const auto k = kraus_of(choi_of(testing::dephase_1q()));
    ASSERT_EQ(k.size(), 2u);
    std::vector<bool> seen(2, false);
    for (const auto &a : k) {
        const ComplexMatrix p = a.adjoint() * a;
        for (std::size_t i = 0; i < 2; ++i) {
            if (max_abs(p - ket_bra(2, i, i)) < 1e-12) {
                seen[i] = true;
            }
        }
    }
    EXPECT_TRUE(seen[0] && seen[1]);
}

TEST(Kraus, EqualMixtureOfIdentityAndZ) {
    const auto c = parse_circuit("circuit mix inputs 1\nancilla\ngate H 1\ndecohere 1\ngate CZ 1 0\ntrace 1\nend\n");
    const auto ch = choi_of(c);
    const auto k = kraus_of(ch);
    ASSERT_EQ(k.size(), 2u);
    ComplexMatrix z = ComplexMatrix::Identity(2, 2);
    z(1, 1) = -1;
    const std::vector<ComplexMatrix> expect{std::sqrt(0.5) * ComplexMatrix::Identity(2, 2), std::sqrt(0.5) * z};
    EXPECT_LT(max_abs(choi_from_kraus(k, 2) - choi_from_kraus(expect, 2)), 1e-12);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto &a : k) {
        sum += a.adjoint() * a;
    }
    EXPECT_LT(max_abs(sum - ComplexMatrix::Identity(2, 2)), 1e-12);
}

TEST(Kraus, RebuildsChoiAndApply) {
    Rng rng(40);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_circuit(2, 4, 8, rng);
        const auto ch = choi_of(c);
        EXPECT_LT(max_abs(choi_from_kraus(ch.kraus(), ch.dim_in()) - ch.choi()), 1e-10);
        const auto rho = testing::random_density(ch.dim_in(), rng);
        EXPECT_LT(max_abs(kraus_apply(ch, rho) - apply(c, DensityMatrix(rho)).mat()), 1e-10);
    }
}

TEST(Adjoint, IdentityAndUnitalityOfDual) {
    Rng rng(41);
    const auto m = testing::random_hermitian(2, rng);
    EXPECT_LT(max_abs(adjoint_apply(choi_of(testing::identity_1q()), m) - m), 1e-14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ch = choi_of(testing::random_circuit(1, 3, 6, rng));
        EXPECT_LT(max_abs(adjoint_apply(ch, ComplexMatrix::Identity(ch.dim_out(), ch.dim_out())) -
                          ComplexMatrix::Identity(ch.dim_in(), ch.dim_in())),
                  1e-10);
    }
}

TEST(Adjoint, Duality) {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 2, 4, 8, rng);
        const auto ch = choi_of(c);
        const auto m = testing::random_hermitian(ch.dim_out(), rng);
        const auto rho = testing::random_density(ch.dim_in(), rng);
        const Complex lhs = (m * apply(c, DensityMatrix(rho)).mat()).trace();
        const Complex rhs = (adjoint_apply(ch, m) * rho).trace();
        EXPECT_LT(std::abs(lhs - rhs), 1e-10);
    }
}

TEST(ChoiContraction, MatchesSimulatorAndDuality) {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 2, 4, 8, rng);
        const auto ch = choi_of(c);
        const ChoiContraction cc(ch.choi(), ch.dim_in(), ch.dim_out());
        const std::size_t dref = 2;
        const auto x = testing::random_density(ch.dim_in() * dref, rng);
        EXPECT_LT(max_abs(cc.forward(x, dref) - apply_operator(c, x, 1)), 1e-10);
        const auto m = testing::random_hermitian(ch.dim_out() * dref, rng);
        EXPECT_LT(std::abs((m * cc.forward(x, dref)).trace() - (cc.adjoint(m, dref) * x).trace()), 1e-10);
    }
}

TEST(Dilate, UnitaryCircuitIsKept) {
    const auto c = parse_circuit("circuit u inputs 2\ngate H 0\ngate CNOT 0 1\nend\n");
    const auto d = dilate(c);
    EXPECT_EQ(d.k, 0u);
    EXPECT_EQ(d.l, 0u);
    EXPECT_EQ(d.unitary_circuit.gates, c.gates);
    EXPECT_EQ(d.output_wires, (std::vector<std::size_t>{0, 1}));
}

TEST(Dilate, DecohereUsesCnotIntoGarbageAncilla) {
    const auto d = dilate(testing::dephase_1q());
    EXPECT_EQ(d.k, 1u);
    EXPECT_EQ(d.l, 1u);
    ASSERT_EQ(d.unitary_circuit.gates.size(), 1u);
    EXPECT_EQ(d.unitary_circuit.gates[0].name, "CNOT");
    EXPECT_EQ(d.unitary_circuit.gates[0].wires, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(d.garbage_wires, (std::vector<std::size_t>{1}));
    Rng rng(44);
    const auto rho = testing::random_density(2, rng);
    EXPECT_LT(max_abs(run_dilated(d, rho) - apply(testing::dephase_1q(), DensityMatrix(rho)).mat()), 1e-12);
}

TEST(Dilate, TraceBecomesGarbage) {
    const auto d = dilate(parse_circuit("circuit t inputs 2\ntrace 0\nend\n"));
    EXPECT_EQ(d.k, 0u);
    EXPECT_EQ(d.l, 1u);
    EXPECT_EQ(d.garbage_wires, (std::vector<std::size_t>{0}));
    EXPECT_EQ(d.output_wires, (std::vector<std::size_t>{1}));
}

TEST(Dilate, ReproducesApplyOnRandomCircuits) {
    Rng rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 2, 4, 8, rng);
        const auto d = dilate(c);
        EXPECT_TRUE(d.unitary_circuit.is_unitary_only());
        EXPECT_TRUE(validate(d.unitary_circuit).empty());
        EXPECT_EQ(d.m(), c.n_out());
        const auto rho = testing::random_density(std::size_t{1} << c.n_in, rng);
        EXPECT_LT(max_abs(run_dilated(d, rho) - apply(c, DensityMatrix(rho)).mat()), 1e-10);
    }
}

}  // namespace
}  // namespace qcd
