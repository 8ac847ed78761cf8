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
#pragma once

/// @file circuit.hpp
/// Gate descriptors, circuit plans, and the Hamming-weight-preserving gate set.
///
/// Conventions (fixed here, pinned by matrix-level tests):
///   Ry(t) = exp(-i t Y/2), Rz(t) = exp(-i t Z/2), Rz^{-1}(t) = Rz(-t),
///   CZ is symmetric, an open control fires on |0>.
/// Composite gates are transcribed gate by gate in time order. Their local
/// qubit order is the argument order: gy2(i, j) has local qubit 0 = i and
/// local qubit 1 = j; gy4(i, j, k, r) has local qubits (i, j, k, r).
///
/// On the pair (i, j) the resulting gy2 block is, in the basis
/// {|1_i 0_j>, |0_i 1_j>}, the rotation [[cos a, sin a], [-sin a, cos a]],
/// and the identity on |00> and |11>.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bsap/statevector.hpp"
#include "bsap/subspace.hpp"

namespace bsap {

namespace detail {

struct Step {
    GateMatrix gate;
    std::vector<int> targets;
};

/// Matrix of a circuit on `num_local` qubits, by simulation on each basis state.
inline GateMatrix compose(int num_local, const std::vector<Step> &steps) {
    const Index dim = Index{1} << num_local;
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Index col = 0; col < dim; ++col) {
        auto s = StateVector::basis(num_local, col);
        for (const auto &st : steps) {
            s.apply(st.gate, st.targets);
        }
        for (Index row = 0; row < dim; ++row) {
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s[row];
        }
    }
    return GateMatrix(std::move(m));
}

/// 4-qubit gate applying `inner` on local qubits (1, 2) when local qubits 0
/// and 3 are both |1>.
inline GateMatrix doubly_controlled(const GateMatrix &inner) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(16, 16);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            // inner index bit0 = local qubit 1, bit1 = local qubit 2
            const int row = 1 | ((a & 1) << 1) | ((a >> 1) << 2) | 8;
            const int col = 1 | ((b & 1) << 1) | ((b >> 1) << 2) | 8;
            m(row, col) = inner.entries(a, b);
        }
    }
    return GateMatrix(std::move(m));
}

} // namespace detail

/// G_Y^{(i,j)}(alpha): H H, CZ, Ry(-alpha) x Ry(alpha), CZ, H H.
inline GateMatrix gy2_matrix(double alpha) {
    using namespace gates;
    return detail::compose(2, {{h(), {0}},
                               {h(), {1}},
                               {cz(), {0, 1}},
                               {ry(-alpha), {0}},
                               {ry(alpha), {1}},
                               {cz(), {0, 1}},
                               {h(), {0}},
                               {h(), {1}}});
}

/// G_X^{(i,j)}(alpha): G_Y conjugated by Rz^{-1}(pi/4) x Rz(pi/4).
inline GateMatrix gx2_matrix(double alpha) {
    using namespace gates;
    constexpr double q = std::numbers::pi / 4.0;
    return detail::compose(2, {{rz(-q), {0}},
                               {rz(q), {1}},
                               {gy2_matrix(alpha), {0, 1}},
                               {rz(q), {0}},
                               {rz(-q), {1}}});
}

/// G_Z^{(i,j)}(alpha): Rz(-alpha) on i, Rz(alpha) on j.
inline GateMatrix gz2_matrix(double alpha) {
    using namespace gates;
    return detail::compose(2, {{rz(-alpha), {0}}, {rz(alpha), {1}}});
}

/// Four-qubit sandwich on local qubits (i, j, k, r): open-controlled CNOTs
/// (control j -> target i, control k -> target r), `inner` on (j, k)
/// controlled by i and r, then the same CNOTs again. Rotates the pattern with
/// 1s on {i, j} into the one with 1s on {k, r}; identity elsewhere.
inline GateMatrix four_qubit_sandwich(const GateMatrix &inner) {
    using namespace gates;
    const auto oc = open_cnot();
    return detail::compose(4, {{oc, {1, 0}},
                               {oc, {2, 3}},
                               {detail::doubly_controlled(inner), {0, 1, 2, 3}},
                               {oc, {1, 0}},
                               {oc, {2, 3}}});
}

inline GateMatrix gy4_matrix(double alpha) {
    return four_qubit_sandwich(gy2_matrix(alpha));
}
inline GateMatrix gx4_matrix(double alpha) {
    return four_qubit_sandwich(gx2_matrix(alpha));
}

enum class GateKind { GY2, GX2, GY4, GX4, GZ2, CNOT, XLayer, Fixed };

inline std::string to_string(GateKind k) {
    switch (k) {
    case GateKind::GY2: return "GY2";
    case GateKind::GX2: return "GX2";
    case GateKind::GY4: return "GY4";
    case GateKind::GX4: return "GX4";
    case GateKind::GZ2: return "GZ2";
    case GateKind::CNOT: return "CNOT";
    case GateKind::XLayer: return "XLayer";
    case GateKind::Fixed: return "Fixed";
    }
    return "?";
}

/// One gate of a plan. `qubits` holds (i, j), (i, j, k, r), (control, target)
/// or the targets of a Fixed gate; XLayer ignores it.
struct GateDescriptor {
    GateKind kind = GateKind::Fixed;
    std::vector<int> qubits;
    std::optional<int> param_slot;
    std::optional<GateMatrix> fixed;

    [[nodiscard]] bool parametrized() const {
        switch (kind) {
        case GateKind::GY2:
        case GateKind::GX2:
        case GateKind::GY4:
        case GateKind::GX4:
        case GateKind::GZ2:
            return true;
        default:
            return false;
        }
    }
};

namespace detail {

/// M(alpha) = a + cos(alpha) b + sin(alpha) c, recovered from the drawn
/// circuit at alpha = 0, pi/2, pi. Every parametrized gate here has this form.
struct TrigForm {
    Eigen::MatrixXcd a, b, c;

    explicit TrigForm(GateMatrix (*make)(double)) {
        const auto m0 = make(0.0).entries;
        const auto m1 = make(std::numbers::pi / 2).entries;
        const auto m2 = make(std::numbers::pi).entries;
        a = 0.5 * (m0 + m2);
        b = 0.5 * (m0 - m2);
        c = m1 - a;
    }

    [[nodiscard]] GateMatrix at(double alpha) const {
        return GateMatrix(a + std::cos(alpha) * b + std::sin(alpha) * c);
    }
};

inline const TrigForm &trig_form(GateKind k) {
    static const TrigForm y2(&gy2_matrix), x2(&gx2_matrix), y4(&gy4_matrix),
        x4(&gx4_matrix), z2(&gz2_matrix);
    switch (k) {
    case GateKind::GY2: return y2;
    case GateKind::GX2: return x2;
    case GateKind::GY4: return y4;
    case GateKind::GX4: return x4;
    default: return z2;
    }
}

} // namespace detail

/// Local matrix of a descriptor at angle `alpha` (ignored when unparametrized).
inline GateMatrix descriptor_matrix(const GateDescriptor &g, double alpha) {
    if (g.parametrized()) {
        return detail::trig_form(g.kind).at(alpha);
    }
    switch (g.kind) {
    case GateKind::CNOT: return gates::cnot();
    case GateKind::XLayer: return gates::x();
    case GateKind::Fixed: return g.fixed.value();
    default: return gates::identity();
    }
}

struct CircuitPlan {
    int num_qubits = 0;
    std::vector<GateDescriptor> gates;
    int num_params = 0;
    /// 1 selects the reflection component: a Z on qubit 0 before all gates,
    /// which restricted to W_2 is diagonal with determinant -1 for even L.
    int component_bit = 0;

    [[nodiscard]] int num_parametrized() const {
        int n = 0;
        for (const auto &g : gates) {
            n += g.param_slot.has_value() ? 1 : 0;
        }
        return n;
    }

    /// Checks index ranges, distinctness, ordering of 4-qubit gates and
    /// single use of every parameter slot.
    void validate() const {
        std::vector<int> uses(static_cast<std::size_t>(num_params), 0);
        for (const auto &g : gates) {
            if (g.kind != GateKind::XLayer) {
                detail::check_targets(num_qubits, g.qubits);
            }
            switch (g.kind) {
            case GateKind::GY2:
            case GateKind::GX2:
            case GateKind::GZ2:
            case GateKind::CNOT:
                detail::require(g.qubits.size() == 2, "two-qubit gate needs two indices");
                break;
            case GateKind::GY4:
            case GateKind::GX4:
                detail::require(g.qubits.size() == 4, "four-qubit gate needs four indices");
                detail::require(g.qubits[0] < g.qubits[1] && g.qubits[2] < g.qubits[3],
                                "four-qubit gate needs i < j and k < r");
                break;
            case GateKind::Fixed:
                detail::require(g.fixed.has_value() &&
                                    g.fixed->arity == static_cast<int>(g.qubits.size()),
                                "fixed gate arity mismatch");
                break;
            case GateKind::XLayer:
                break;
            }
            if (g.param_slot) {
                detail::require(g.parametrized(), "unparametrized gate with a slot");
                detail::require(*g.param_slot >= 0 && *g.param_slot < num_params,
                                "parameter slot out of range");
                detail::require(++uses[static_cast<std::size_t>(*g.param_slot)] == 1,
                                "parameter slot used twice");
            }
        }
        detail::require(component_bit == 0 || component_bit == 1,
                        "component bit must be 0 or 1");
    }
};

/// Applies `plan` to `state` in place.
inline void apply_plan(StateVector &state, const CircuitPlan &plan,
                       std::span<const double> params) {
    detail::require(state.num_qubits() == plan.num_qubits,
                    "plan and state sizes differ");
    detail::require(static_cast<int>(params.size()) == plan.num_params,
                    "parameter count does not match the plan");
    if (plan.component_bit == 1) {
        const int q0[] = {0};
        state.apply(gates::z(), q0);
    }
    for (const auto &g : plan.gates) {
        if (g.kind == GateKind::XLayer) {
            const auto x = gates::x();
            for (int q = 0; q < plan.num_qubits; ++q) {
                const int t[] = {q};
                state.apply(x, t);
            }
            continue;
        }
        const double alpha = g.param_slot ? params[static_cast<std::size_t>(*g.param_slot)] : 0.0;
        state.apply(descriptor_matrix(g, alpha), g.qubits);
    }
}

/// CNOT ladder realizing phi_inverse_0 on basis states: for j = L-2 down to
/// 0, CNOT(control j+1, target j). Branch 1 appends a layer of X gates.
inline CircuitPlan phi_inverse_circuit(int num_qubits, int branch) {
    detail::require(branch == 0 || branch == 1, "branch must be 0 or 1");
    detail::require(num_qubits >= 2, "ladder needs at least two qubits");
    CircuitPlan plan{num_qubits, {}, 0, 0};
    for (int j = num_qubits - 2; j >= 0; --j) {
        plan.gates.push_back({GateKind::CNOT, {j + 1, j}, std::nullopt, std::nullopt});
    }
    if (branch == 1) {
        plan.gates.push_back({GateKind::XLayer, {}, std::nullopt, std::nullopt});
    }
    return plan;
}

enum class PlanMode { FullUnitary, Orthogonal };

/// Gate plan for the n = 1 branch with reference |0,1> (1s on sites 0 and 1).
/// The generator list G_Y^(0,a), G_X^(0,a), G_Y^(1,a), G_X^(1,a) for
/// 2 <= a <= L-1, then G_Y^(0,1)(a,b), G_X^(0,1)(a,b) for 2 <= a < b <= L-1,
/// then G_Z^(1,2), is read as an operator product: the last listed gate acts
/// first. Parameter slots follow the listing. Orthogonal mode keeps only the
/// G_Y gates; its component bit starts at 0.
inline CircuitPlan build_n1_plan(int num_qubits, PlanMode mode) {
    detail::require(num_qubits >= 4 && num_qubits % 2 == 0,
                    "n = 1 plan needs an even number of sites >= 4");
    const bool full = mode == PlanMode::FullUnitary;
    CircuitPlan plan{num_qubits, {}, 0, 0};
    auto emit = [&](GateKind k, std::vector<int> q) {
        plan.gates.push_back({k, std::move(q), plan.num_params++, std::nullopt});
    };
    for (int site : {0, 1}) {
        for (int a = 2; a < num_qubits; ++a) {
            emit(GateKind::GY2, {site, a});
        }
        if (full) {
            for (int a = 2; a < num_qubits; ++a) {
                emit(GateKind::GX2, {site, a});
            }
        }
    }
    for (int a = 2; a < num_qubits; ++a) {
        for (int b = a + 1; b < num_qubits; ++b) {
            emit(GateKind::GY4, {0, 1, a, b});
        }
    }
    if (full) {
        for (int a = 2; a < num_qubits; ++a) {
            for (int b = a + 1; b < num_qubits; ++b) {
                emit(GateKind::GX4, {0, 1, a, b});
            }
        }
        emit(GateKind::GZ2, {1, 2});
    }
    std::reverse(plan.gates.begin(), plan.gates.end());
    return plan;
}

/// The plan applied to |reference>.
inline StateVector explore_state(const CircuitPlan &plan, std::span<const double> params,
                                 const Bitstring &reference) {
    detail::require(reference.length == plan.num_qubits,
                    "reference length does not match the plan");
    auto s = StateVector::basis(plan.num_qubits, reference.bits);
    apply_plan(s, plan, params);
    return s;
}

inline nlohmann::json to_json(const CircuitPlan &plan) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : plan.gates) {
        nlohmann::json j{{"kind", to_string(g.kind)}, {"qubits", g.qubits}};
        j["param_slot"] = g.param_slot ? nlohmann::json(*g.param_slot) : nlohmann::json(nullptr);
        if (g.kind == GateKind::Fixed && g.fixed) {
            nlohmann::json rows = nlohmann::json::array();
            const auto &m = g.fixed->entries;
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    row.push_back({m(r, c).real(), m(r, c).imag()});
                }
                rows.push_back(row);
            }
            j["matrix"] = rows;
        }
        gates.push_back(std::move(j));
    }
    return {{"num_qubits", plan.num_qubits},
            {"num_params", plan.num_params},
            {"component_bit", plan.component_bit},
            {"gates", gates}};
}

} // namespace bsap
