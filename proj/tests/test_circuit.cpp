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

#include "bsap/circuit.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace bsap;
using oracle::Mat;

namespace {

const double kAngles[] = {0.3, 1.1, 2.7, -0.9};

double unitarity_error(const Mat &u) {
    return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm();
}

/// Largest matrix element between different Hamming-weight sectors.
double weight_leak(const Mat &u) {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            if (std::popcount(static_cast<unsigned>(r)) != std::popcount(static_cast<unsigned>(c))) {
                worst = std::max(worst, std::abs(u(r, c)));
            }
        }
    }
    return worst;
}

/// Two-qubit operator with `a` on local qubit 0 and `b` on local qubit 1.
Mat pair(const Mat &a, const Mat &b) { return oracle::kron_chain({a, b}); }

/// G_Y from the drawn gate sequence as Kronecker products.
Mat gy_oracle(double alpha) {
    const Mat hh = pair(oracle::hadamard(), oracle::hadamard());
    Mat cz = Mat::Identity(4, 4);
    cz(3, 3) = -1;
    const Mat rr = pair(oracle::ry(-alpha), oracle::ry(alpha));
    return hh * cz * rr * cz * hh;
}

Mat gx_oracle(double alpha) {
    const double q = std::acos(-1.0) / 4;
    const Mat pre = pair(oracle::rz(-q), oracle::rz(q));
    const Mat post = pair(oracle::rz(q), oracle::rz(-q));
    return post * gy_oracle(alpha) * pre;
}

} // namespace

TEST(Gy2, MatchesDrawnCircuitOracle) {
    for (double a : kAngles) {
        EXPECT_LT((gy2_matrix(a).entries - gy_oracle(a)).norm(), 1e-13) << a;
    }
}

TEST(Gy2, IdentityRealUnitaryGivens) {
    EXPECT_LT((gy2_matrix(0.0).entries - Mat::Identity(4, 4)).norm(), 1e-14);
    for (double a : kAngles) {
        const Mat u = gy2_matrix(a).entries;
        EXPECT_LT(unitarity_error(u), 1e-13);
        EXPECT_LT(u.imag().cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);
        EXPECT_NEAR(std::abs(u(3, 3)), 1.0, 1e-14);
        // Pinned sign: |1_i 0_j> (index 1) -> cos|1_i 0_j> - sin|0_i 1_j>.
        EXPECT_NEAR(u(1, 1).real(), std::cos(a), 1e-13);
        EXPECT_NEAR(u(2, 1).real(), -std::sin(a), 1e-13);
        EXPECT_NEAR(u(1, 2).real(), std::sin(a), 1e-13);
        EXPECT_NEAR(u(2, 2).real(), std::cos(a), 1e-13);
        EXPECT_LT(weight_leak(u), 1e-14);
    }
}

TEST(Gx2, MatchesConjugationOfGy2) {
    EXPECT_LT((gx2_matrix(0.0).entries - Mat::Identity(4, 4)).norm(), 1e-14);
    EXPECT_LT((gx2_matrix(0.7).entries - gx_oracle(0.7)).norm(), 1e-13);
    for (double a : kAngles) {
        const Mat u = gx2_matrix(a).entries;
        EXPECT_LT(unitarity_error(u), 1e-13);
        EXPECT_LT(weight_leak(u), 1e-14);
    }
    EXPECT_GT(gx2_matrix(0.7).entries.imag().norm(), 0.1);
}

TEST(Gz2, DiagonalPhaseFree) {
    EXPECT_LT((gz2_matrix(0.0).entries - Mat::Identity(4, 4)).norm(), 1e-14);
    const Mat u = gz2_matrix(0.5).entries;
    EXPECT_LT((u - Mat(u.diagonal().asDiagonal())).norm(), 1e-15);
    EXPECT_LT(unitarity_error(u), 1e-14);
    EXPECT_LT(std::abs(u(0, 0) - 1.0), 1e-14);
    EXPECT_LT(std::abs(u(3, 3) - 1.0), 1e-14);
    // Commutes with G_Z on another pair.
    const Mat a = oracle::embed(u, 4, {0, 1});
    const Mat b = oracle::embed(gz2_matrix(1.3).entries, 4, {2, 1});
    EXPECT_LT((a * b - b * a).norm(), 1e-14);
}

TEST(FourQubitGates, GivensBetweenPairPatterns) {
    for (auto make : {&gy4_matrix, &gx4_matrix}) {
        EXPECT_LT((make(0.0).entries - Mat::Identity(16, 16)).norm(), 1e-13);
        for (double a : kAngles) {
            const Mat u = make(a).entries;
            EXPECT_LT(unitarity_error(u), 1e-12);
            EXPECT_LT(weight_leak(u), 1e-13);
            // Weight-2 states other than 0011 (sites i,j) and 1100 (sites k,r) are fixed.
            for (int s : {0b0101, 0b1001, 0b0110, 0b1010}) {
                EXPECT_NEAR(std::abs(u(s, s) - 1.0), 0.0, 1e-13) << s;
            }
            EXPECT_NEAR(std::abs(u(0b0011, 0b0011)), std::abs(std::cos(a)), 1e-13);
            EXPECT_NEAR(std::abs(u(0b1100, 0b0011)), std::abs(std::sin(a)), 1e-13);
            EXPECT_NEAR(std::abs(u(0b1100, 0b1100)), std::abs(std::cos(a)), 1e-13);
        }
    }
    const Mat y = gy4_matrix(0.4).entries;
    EXPECT_LT(y.imag().cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(y(0b1100, 0b0011).real(), -std::sin(0.4), 1e-13);
}

TEST(FourQubitGates, EmbeddedOnScatteredSites) {
    // gy4(0,1,3,5) on six qubits rotates {0,1} into {3,5}.
    GateDescriptor g{GateKind::GY4, {0, 1, 3, 5}, 0, std::nullopt};
    CircuitPlan plan{6, {g}, 1, 0};
    plan.validate();
    const double a = 0.6;
    const auto out = explore_state(plan, std::vector<double>{a}, Bitstring::parse("110000"));
    EXPECT_NEAR(out[0b000011].real(), std::cos(a), 1e-13);
    EXPECT_NEAR(out[0b101000].real(), -std::sin(a), 1e-13);
    const auto fixed = explore_state(plan, std::vector<double>{a}, Bitstring::parse("101000"));
    EXPECT_NEAR(fixed[0b000101].real(), 1.0, 1e-13);
}

TEST(Descriptors, CachedFormMatchesLiteralConstruction) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(-7.0, 7.0);
    const std::pair<GateKind, GateMatrix (*)(double)> kinds[] = {
        {GateKind::GY2, &gy2_matrix}, {GateKind::GX2, &gx2_matrix}, {GateKind::GY4, &gy4_matrix},
        {GateKind::GX4, &gx4_matrix}, {GateKind::GZ2, &gz2_matrix}};
    for (const auto &[kind, make] : kinds) {
        GateDescriptor g{kind, {}, 0, std::nullopt};
        for (int t = 0; t < 5; ++t) {
            const double a = ang(rng);
            EXPECT_LT((descriptor_matrix(g, a).entries - make(a).entries).norm(), 1e-12)
                << to_string(kind) << " " << a;
        }
    }
}

class PhiCircuit : public ::testing::TestWithParam<int> {};

TEST_P(PhiCircuit, LadderEqualsSuffixParityOnAllBasisStates) {
    const int L = GetParam();
    for (int branch : {0, 1}) {
        const auto plan = phi_inverse_circuit(L, branch);
        for (std::uint64_t b = 0; b < (1u << L); ++b) {
            auto s = StateVector::basis(L, b);
            apply_plan(s, plan, {});
            auto expected = oracle::text_bits(oracle::suffix_parity_text(oracle::bits_text(b, L)));
            if (branch == 1) expected ^= (1u << L) - 1;
            EXPECT_NEAR(std::abs(s[expected]), 1.0, 1e-14) << L << " " << b;
            if (std::popcount(b) % 2 == 0) {
                const auto w = Bitstring(b, L);
                const auto pre = branch == 0 ? phi_inverse_0(w) : phi_inverse_1(w);
                EXPECT_EQ(pre.bits, expected);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Rings, PhiCircuit, ::testing::Values(2, 4, 6, 8));

class PlanCounts : public ::testing::TestWithParam<int> {};

TEST_P(PlanCounts, FullAndOrthogonal) {
    const int L = GetParam();
    const int d1 = L * (L - 1) / 2;
    const auto full = build_n1_plan(L, PlanMode::FullUnitary);
    full.validate();
    EXPECT_EQ(full.num_parametrized(), L * L - L - 1);
    EXPECT_EQ(full.num_params, 2 * d1 - 1);
    const auto orth = build_n1_plan(L, PlanMode::Orthogonal);
    orth.validate();
    EXPECT_EQ(orth.num_params, d1 - 1);
    EXPECT_EQ(orth.num_params + 1, d1);  // plus the component bit
    for (const auto &g : orth.gates) {
        EXPECT_TRUE(g.kind == GateKind::GY2 || g.kind == GateKind::GY4);
    }
}

INSTANTIATE_TEST_SUITE_P(Rings, PlanCounts, ::testing::Values(4, 6, 8, 10));

TEST(Plan, ListingAsOperatorProduct) {
    const auto plan = build_n1_plan(4, PlanMode::FullUnitary);
    // First listed generator acts last; the trailing G_Z acts first.
    EXPECT_EQ(plan.gates.front().kind, GateKind::GZ2);
    EXPECT_EQ(plan.gates.back().kind, GateKind::GY2);
    EXPECT_EQ(plan.gates.back().qubits, (std::vector<int>{0, 2}));
    EXPECT_EQ(plan.gates.back().param_slot, 0);
    EXPECT_THROW(build_n1_plan(5, PlanMode::Orthogonal), std::invalid_argument);
    EXPECT_THROW(build_n1_plan(2, PlanMode::Orthogonal), std::invalid_argument);
}

TEST(Plan, ValidationCatchesBadDescriptors) {
    CircuitPlan p{4, {{GateKind::GY2, {0, 0}, 0, std::nullopt}}, 1, 0};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gates = {{GateKind::GY2, {0, 1}, 0, std::nullopt}, {GateKind::GY2, {1, 2}, 0, std::nullopt}};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gates = {{GateKind::GY4, {1, 0, 2, 3}, 0, std::nullopt}};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gates = {{GateKind::GY2, {0, 4}, 0, std::nullopt}};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gates = {{GateKind::CNOT, {0, 1}, 0, std::nullopt}};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.gates = {{GateKind::GY2, {0, 1}, 0, std::nullopt}};
    p.component_bit = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ExploreState, StaysInsideTheBranch) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(-3.2, 3.2);
    const auto ref = Bitstring::parse("110000");
    for (auto mode : {PlanMode::FullUnitary, PlanMode::Orthogonal}) {
        const auto plan = build_n1_plan(6, mode);
        const std::vector<double> zeros(static_cast<std::size_t>(plan.num_params), 0.0);
        const auto same = explore_state(plan, zeros, ref);
        EXPECT_NEAR(std::abs(same[ref.bits]), 1.0, 1e-12);
        for (int t = 0; t < 5; ++t) {
            std::vector<double> p(static_cast<std::size_t>(plan.num_params));
            for (auto &x : p) x = ang(rng);
            const auto s = explore_state(plan, p, ref);
            EXPECT_NEAR(s.norm(), 1.0, 1e-12);
            double leak = 0.0, imag = 0.0;
            for (Index b = 0; b < s.dimension(); ++b) {
                if (std::popcount(b) != 2) leak += std::norm(s[b]);
                imag = std::max(imag, std::abs(s[b].imag()));
            }
            EXPECT_LT(std::sqrt(leak), 1e-10);
            if (mode == PlanMode::Orthogonal) {
                EXPECT_LT(imag, 1e-12);
            }
        }
        EXPECT_THROW(explore_state(plan, std::vector<double>{1.0}, ref), std::invalid_argument);
    }
}

TEST(ExploreState, CoarseLatticeReachesEveryBasisDirection) {
    const auto plan0 = build_n1_plan(4, PlanMode::Orthogonal);
    const auto ref = Bitstring::parse("1100");
    const double steps[] = {0.0, std::acos(-1.0) / 2, std::acos(-1.0), -std::acos(-1.0) / 2};
    std::map<Index, double> best;
    for (int bit : {0, 1}) {
        auto plan = plan0;
        plan.component_bit = bit;
        std::vector<int> idx(static_cast<std::size_t>(plan.num_params), 0);
        while (true) {
            std::vector<double> p;
            for (int i : idx) p.push_back(steps[i]);
            const auto s = explore_state(plan, p, ref);
            for (Index b = 0; b < s.dimension(); ++b) {
                if (std::popcount(b) == 2) best[b] = std::max(best[b], s[b].real());
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == 4) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    ASSERT_EQ(best.size(), 6u);
    for (const auto &[b, overlap] : best) EXPECT_GT(overlap, 0.99) << b;
}

TEST(Plan, JsonDescription) {
    auto plan = build_n1_plan(4, PlanMode::Orthogonal);
    plan.gates.push_back({GateKind::Fixed, {2}, std::nullopt, gates::z()});
    const auto j = to_json(plan);
    EXPECT_EQ(j["num_qubits"], 4);
    EXPECT_EQ(j["num_params"], 5);
    EXPECT_EQ(j["gates"].size(), 6u);
    EXPECT_EQ(j["gates"][0]["kind"], "GY4");
    EXPECT_EQ(j["gates"][0]["param_slot"], 4);
    EXPECT_TRUE(j["gates"][5]["param_slot"].is_null());
    EXPECT_EQ(j["gates"][5]["matrix"][1][1][0], -1.0);
    const auto ladder = to_json(phi_inverse_circuit(4, 1));
    EXPECT_EQ(ladder["gates"].back()["kind"], "XLayer");
}
