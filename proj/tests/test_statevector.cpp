// Copyright 2026 The bsap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "bsap/statevector.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace bsap;
using bsap::testing::from_vec;
using bsap::testing::to_vec;

TEST(StateVector, DefaultIsAllZeros) {
    StateVector s(3);
    EXPECT_EQ(s.dimension(), 8u);
    EXPECT_EQ(s[0], cplx(1.0, 0.0));
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(StateVector, BasisAndBounds) {
    auto s = StateVector::basis(4, 5);
    EXPECT_EQ(s[5], cplx(1.0, 0.0));
    EXPECT_EQ(s[0], cplx(0.0, 0.0));
    EXPECT_THROW(StateVector::basis(4, 16), std::invalid_argument);
    EXPECT_THROW(StateVector(2, std::vector<cplx>(3)), std::invalid_argument);
}

TEST(StateVector, SizeGuard) {
    EXPECT_THROW(StateVector(kMaxQubits + 1), ResourceLimitError);
}

TEST(StateVector, XFlipsTheTargetBit) {
    for (int q = 0; q < 4; ++q) {
        auto s = StateVector::basis(4, 0b0110);
        const int t[] = {q};
        s.apply(gates::x(), t);
        EXPECT_EQ(s[0b0110 ^ (1u << q)], cplx(1.0, 0.0)) << "qubit " << q;
    }
}

TEST(StateVector, CnotControlIsLocalQubitZero) {
    auto s = StateVector::basis(3, 0b100);  // qubit 2 set
    s = apply_gate(s, gates::cnot(), {2, 0});
    EXPECT_EQ(s[0b101], cplx(1.0, 0.0));
    auto t = StateVector::basis(3, 0b001);
    t = apply_gate(t, gates::cnot(), {2, 0});
    EXPECT_EQ(t[0b001], cplx(1.0, 0.0));
}

TEST(StateVector, OpenCnotFiresOnZero) {
    auto s = StateVector::basis(2, 0b00);
    s = apply_gate(s, gates::open_cnot(), {0, 1});
    EXPECT_EQ(s[0b10], cplx(1.0, 0.0));
    auto t = StateVector::basis(2, 0b01);
    t = apply_gate(t, gates::open_cnot(), {0, 1});
    EXPECT_EQ(t[0b01], cplx(1.0, 0.0));
}

TEST(StateVector, RotationConventions) {
    const double t = 0.83;
    const auto y = oracle::expm_i(oracle::pauli('Y'), t / 2);
    const auto z = oracle::expm_i(oracle::pauli('Z'), t / 2);
    EXPECT_LT((gates::ry(t).entries - y).norm(), 1e-13);
    EXPECT_LT((gates::rz(t).entries - z).norm(), 1e-13);
    EXPECT_LT((gates::h().entries - oracle::hadamard()).norm(), 1e-15);
}

TEST(StateVector, CzIsSymmetric) {
    const auto cz = gates::cz().entries;
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    EXPECT_LT((swap * cz * swap - cz).norm(), 1e-15);
}

class ApplyAgainstEmbedding : public ::testing::TestWithParam<std::vector<int>> {};

TEST_P(ApplyAgainstEmbedding, MatchesFullOperator) {
    const auto targets = GetParam();
    const int L = 5;
    std::mt19937_64 rng(17 + targets.size());
    const auto u = oracle::random_unitary(Eigen::Index{1} << targets.size(), rng);
    const auto psi = oracle::random_state(1 << L, rng);
    auto s = from_vec(L, psi);
    s.apply(GateMatrix(u), targets);
    const oracle::Vec expected = oracle::embed(u, L, targets) * psi;
    EXPECT_LT((to_vec(s) - expected).norm(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Targets, ApplyAgainstEmbedding,
                         ::testing::Values(std::vector<int>{0}, std::vector<int>{4},
                                           std::vector<int>{2, 0}, std::vector<int>{1, 3},
                                           std::vector<int>{4, 0, 2},
                                           std::vector<int>{3, 1, 4, 0}));

TEST(StateVector, TargetValidation) {
    StateVector s(3);
    EXPECT_THROW(apply_gate(s, gates::cnot(), {1, 1}), std::invalid_argument);
    EXPECT_THROW(apply_gate(s, gates::cnot(), {0, 3}), std::invalid_argument);
    EXPECT_THROW(apply_gate(s, gates::cnot(), {0}), std::invalid_argument);
    EXPECT_THROW(GateMatrix(Eigen::MatrixXcd::Identity(3, 3)), std::invalid_argument);
}

TEST(StateVector, NormPreservedByRandomUnitaries) {
    std::mt19937_64 rng(3);
    auto s = bsap::testing::random_state(6, rng);
    for (int k = 0; k < 20; ++k) {
        std::uniform_int_distribution<int> q(0, 5);
        int a = q(rng), b = q(rng);
        while (b == a) b = q(rng);
        s = apply_gate(s, GateMatrix(oracle::random_unitary(4, rng)), {a, b});
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(StateVector, InnerProductAndArithmetic) {
    std::mt19937_64 rng(5);
    const auto a = oracle::random_state(8, rng);
    const auto b = oracle::random_state(8, rng);
    const auto sa = from_vec(3, a), sb = from_vec(3, b);
    EXPECT_LT(std::abs(inner(sa, sb) - a.dot(b)), 1e-14);
    EXPECT_LT((to_vec(sa + sb) - (a + b)).norm(), 1e-15);
    EXPECT_LT((to_vec(sa - sb) - (a - b)).norm(), 1e-15);
    EXPECT_LT((to_vec(sa * cplx(0, 2)) - a * cplx(0, 2)).norm(), 1e-15);
    EXPECT_THROW(inner(sa, StateVector(2)), std::invalid_argument);
}
