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

#include "qcd/circuit.hpp"

#include <gtest/gtest.h>

#include <string>

#include "random_circuits.hpp"

namespace qcd {
namespace {

using testing::Rng;

TEST(Parse, EmptyIdentity) {
    const auto c = parse_circuit("circuit id inputs 1\nend");
    EXPECT_EQ(c.name, "id");
    EXPECT_EQ(c.n_in, 1u);
    EXPECT_EQ(c.n_out(), 1u);
    EXPECT_TRUE(c.gates.empty());
}

TEST(Parse, Decohere) {
    const auto c = parse_circuit("circuit d inputs 1\ndecohere 0\nend\n");
    ASSERT_EQ(c.gates.size(), 1u);
    EXPECT_EQ(c.gates[0].kind, GateKind::Decohere);
    EXPECT_EQ(c.n_out(), 1u);
}

TEST(Parse, CommentsBlankLinesAndSugar) {
    const auto c = parse_circuit(
        "# leading comment\n\ncircuit bell inputs 0   # trailing\nancilla\nancilla\ngate H 0\n"
        "gate CNOT 0 1\ngate SWAP 0 1\ngate CZ 1 0\ngate T 0\ngate X 1\ngate Z 0\nend\n");
    EXPECT_EQ(c.n_in, 0u);
    EXPECT_EQ(c.n_out(), 2u);
    EXPECT_EQ(c.gates.size(), 9u);
    EXPECT_EQ(c.gates[3].name, "CNOT");
    EXPECT_EQ(c.max_width(), 2u);
}

TEST(Parse, TracedWireIsLivenessError) {
    try {
        parse_circuit("circuit bad inputs 2\ntrace 0\ngate H 1\nend\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        EXPECT_EQ(e.line, 3u);
        EXPECT_NE(std::string(e.what()).find("wire 1"), std::string::npos) << e.what();
    }
}

TEST(Parse, SyntaxErrorsCarryLineNumbers) {
    struct Case {
        const char *text;
        std::size_t line;
    };
    const Case cases[] = {
        {"circuit x inputs 1\ngate FOO 0\nend\n", 2},
        {"circuit x inputs\nend\n", 1},
        {"circuit x inputs 1\n\nunitary 1 0 1,0 0,0 0,0\nend\n", 3},
        {"circuit x inputs 1\ntrace\nend\n", 2},
        {"circuit x inputs 1\nend\nancilla\n", 3},
        {"circuit x inputs 1\nancilla\n", 2},
        {"circuit x inputs 1\nunitary 1 0 1,0 0,0 0,0 1;0\nend\n", 2},
    };
    for (const auto &c : cases) {
        try {
            parse_circuit(c.text);
            ADD_FAILURE() << "accepted: " << c.text;
        } catch (const ParseError &e) {
            EXPECT_EQ(e.line, c.line) << c.text << " -> " << e.what();
        }
    }
}

TEST(Parse, RespectsDimensionCap) {
    std::string text = "circuit wide inputs 3\nancilla\nancilla\nend\n";
    EXPECT_NO_THROW(parse_circuit(text, 32));
    EXPECT_THROW(parse_circuit(text, 16), SizeError);
}

TEST(Parse, RejectsArityAboveThree) {
    std::string text = "circuit big inputs 4\nunitary 4 0 1 2 3";
    for (int i = 0; i < 256; ++i) {
        text += (i % 17 == 0) ? " 1,0" : " 0,0";
    }
    text += "\nend\n";
    EXPECT_THROW(parse_circuit(text), ParseError);
}

TEST(Serialize, RoundTripIdentity) {
    const auto c = parse_circuit("circuit id inputs 1\nend\n");
    EXPECT_EQ(parse_circuit(serialize_circuit(c)), c);
    EXPECT_EQ(serialize_circuit(c), "circuit id inputs 1\nend\n");
}

TEST(Serialize, InlineMatrixRoundTripIsExact) {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c;
        c.name = "u";
        c.n_in = 2;
        c.gates.push_back(Gate::unitary(testing::haar_unitary(4, rng), {1, 0}));
        c.gates.push_back(Gate::unitary(testing::haar_unitary(2, rng), {0}));
        const auto text = serialize_circuit(c);
        const auto back = parse_circuit(text);
        ASSERT_EQ(back.gates.size(), 2u);
        for (std::size_t g = 0; g < 2; ++g) {
            EXPECT_TRUE((back.gates[g].matrix.array() == c.gates[g].matrix.array()).all());
        }
        EXPECT_EQ(serialize_circuit(back), text);
    }
}

TEST(Serialize, RandomCircuitsRoundTrip) {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 3, 4, 8, rng);
        ASSERT_TRUE(validate(c).empty());
        EXPECT_EQ(parse_circuit(serialize_circuit(c)), c);
    }
}

TEST(Validate, ValidCircuitHasNoViolations) {
    EXPECT_TRUE(validate(testing::depolarize_1q()).empty());
}

TEST(Validate, WireBeyondLiveCount) {
    Circuit c;
    c.n_in = 1;
    c.gates.push_back(Gate::named("H", {1}));
    const auto v = validate(c);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].gate_index, 0u);
}

TEST(Validate, PerturbedUnitary) {
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    u(0, 0) = std::sqrt(1.1);
    Circuit c;
    c.n_in = 1;
    c.gates.push_back(Gate::unitary(u, {0}));
    const auto v = validate(c);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].message.find("unitary"), std::string::npos);
}

TEST(Validate, RepeatedWireAndShapeMismatch) {
    Circuit c;
    c.n_in = 2;
    c.gates.push_back(Gate::unitary(ComplexMatrix::Identity(4, 4), {0, 0}));
    c.gates.push_back(Gate::unitary(ComplexMatrix::Identity(2, 2), {0, 1}));
    EXPECT_EQ(validate(c).size(), 2u);
}

TEST(Validate, NonFiniteEntry) {
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    u(1, 0) = Complex(std::nan(""), 0);
    Circuit c;
    c.n_in = 1;
    c.gates.push_back(Gate::unitary(u, {0}));
    EXPECT_FALSE(validate(c).empty());
}

TEST(CircuitType, BookkeepingMatchesLiveCount) {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = testing::random_circuit(1 + trial % 3, 4, 8, rng);
        std::size_t live = c.n_in, widest = c.n_in;
        for (const auto &g : c.gates) {
            live += g.kind == GateKind::Ancilla ? 1 : 0;
            live -= g.kind == GateKind::Trace ? 1 : 0;
            widest = std::max(widest, live);
        }
        EXPECT_EQ(c.n_out(), live);
        EXPECT_EQ(c.max_width(), widest);
    }
}

TEST(StandardGates, Matrices) {
    const auto cnot = *standard_gate_matrix("CNOT");
    EXPECT_EQ(cnot(3, 2), Complex(1, 0));
    EXPECT_EQ(cnot(2, 2), Complex(0, 0));
    const auto t = *standard_gate_matrix("T");
    EXPECT_NEAR(std::arg(t(1, 1)), std::numbers::pi / 4, 1e-15);
    EXPECT_FALSE(standard_gate_matrix("Y").has_value());
}

TEST(ProblemInstance, Check) {
    ProblemInstance inst{testing::identity_1q(), testing::dephase_1q(), ProblemKind::Distinguishability, 1.0, 0.25};
    EXPECT_NO_THROW(inst.check());
    inst.b = 1.5;
    EXPECT_THROW(inst.check(), DomainError);
    inst.b = 0.25;
    inst.q1 = parse_circuit("circuit t inputs 1\ntrace 0\nend\n");
    EXPECT_THROW(inst.check(), ShapeError);
    ProblemInstance ci{testing::identity_1q(), testing::identity_1q(), ProblemKind::CloseImages, 1.5, 0.1};
    EXPECT_THROW(ci.check(), DomainError);
}

}  // namespace
}  // namespace qcd
