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

/// @file statevector.hpp
/// Dense statevector and gate application.
///
/// Basis convention, used by every module in this library: bit j of a basis
/// index is the state of qubit j, so qubit 0 is the least significant bit.
/// |00> -> X on qubit 0 -> basis index 1.
///
/// A k-qubit GateMatrix acting on targets {t_0, ..., t_{k-1}} is indexed the
/// same way locally: bit m of the local row/column index is qubit t_m.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsap/errors.hpp"

namespace bsap {

using cplx = std::complex<double>;
using Index = std::uint64_t;

inline constexpr int kMaxQubits = 16;
inline constexpr int kMaxGateArity = 4;

/// Unitary acting on 1..4 qubits.
struct GateMatrix {
    int arity = 1;
    Eigen::MatrixXcd entries = Eigen::MatrixXcd::Identity(2, 2);

    GateMatrix() = default;
    explicit GateMatrix(Eigen::MatrixXcd m) : entries(std::move(m)) {
        const auto dim = entries.rows();
        detail::require(entries.cols() == dim, "gate matrix must be square");
        arity = 0;
        while ((Eigen::Index{1} << arity) < dim) {
            ++arity;
        }
        detail::require((Eigen::Index{1} << arity) == dim && arity >= 1 &&
                            arity <= kMaxGateArity,
                        "gate dimension must be 2^k with 1 <= k <= 4");
    }

    /// max |U^dagger U - 1|
    [[nodiscard]] double unitarity_defect() const {
        const auto dim = entries.rows();
        Eigen::MatrixXcd d = entries.adjoint() * entries -
                             Eigen::MatrixXcd::Identity(dim, dim);
        return d.cwiseAbs().maxCoeff();
    }
};

class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        check_size(num_qubits);
        amps_.assign(Index{1} << num_qubits, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    StateVector(int num_qubits, std::vector<cplx> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        check_size(num_qubits);
        detail::require(amps_.size() == (Index{1} << num_qubits),
                        "amplitude count must equal 2^num_qubits");
    }

    static StateVector basis(int num_qubits, Index index) {
        StateVector s(num_qubits);
        detail::require(index < s.dimension(), "basis index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] Index dimension() const { return amps_.size(); }

    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }

    cplx &operator[](Index i) { return amps_[i]; }
    const cplx &operator[](Index i) const { return amps_[i]; }

    [[nodiscard]] double squared_norm() const {
        double acc = 0.0;
        for (const auto &a : amps_) {
            acc += std::norm(a);
        }
        return acc;
    }
    [[nodiscard]] double norm() const { return std::sqrt(squared_norm()); }

    StateVector &normalize() {
        const double n = norm();
        detail::require(n > 0.0, "cannot normalize the zero vector");
        for (auto &a : amps_) {
            a /= n;
        }
        return *this;
    }

    StateVector &operator+=(const StateVector &o) {
        same_shape(o);
        for (Index i = 0; i < amps_.size(); ++i) {
            amps_[i] += o.amps_[i];
        }
        return *this;
    }
    StateVector &operator-=(const StateVector &o) {
        same_shape(o);
        for (Index i = 0; i < amps_.size(); ++i) {
            amps_[i] -= o.amps_[i];
        }
        return *this;
    }
    StateVector &operator*=(cplx c) {
        for (auto &a : amps_) {
            a *= c;
        }
        return *this;
    }
    friend StateVector operator+(StateVector a, const StateVector &b) {
        return a += b;
    }
    friend StateVector operator-(StateVector a, const StateVector &b) {
        return a -= b;
    }
    friend StateVector operator*(cplx c, StateVector a) { return a *= c; }
    friend StateVector operator*(StateVector a, cplx c) { return a *= c; }

    /// Applies `gate` in place to `targets` (see file comment for ordering).
    void apply(const GateMatrix &gate, std::span<const int> targets);

  private:
    static void check_size(int n) {
        detail::require(n >= 1, "statevector needs at least one qubit");
        if (n > kMaxQubits) {
            throw ResourceLimitError("statevector limited to " +
                                     std::to_string(kMaxQubits) + " qubits");
        }
    }
    void same_shape(const StateVector &o) const {
        detail::require(o.num_qubits_ == num_qubits_,
                        "statevector qubit counts differ");
    }

    int num_qubits_ = 0;
    std::vector<cplx> amps_;
};

namespace detail {

inline void check_targets(int num_qubits, std::span<const int> targets) {
    for (std::size_t a = 0; a < targets.size(); ++a) {
        require(targets[a] >= 0 && targets[a] < num_qubits,
                "target qubit out of range");
        for (std::size_t b = a + 1; b < targets.size(); ++b) {
            require(targets[a] != targets[b], "duplicate target qubit");
        }
    }
}

/// Spreads the bits of `compact` around the (sorted) positions in `holes`,
/// leaving zeros at those positions.
inline Index insert_zero_bits(Index compact, std::span<const int> holes_sorted) {
    for (int h : holes_sorted) {
        const Index low = compact & ((Index{1} << h) - 1);
        compact = ((compact >> h) << (h + 1)) | low;
    }
    return compact;
}

} // namespace detail

inline void StateVector::apply(const GateMatrix &gate,
                               std::span<const int> targets) {
    detail::require(static_cast<int>(targets.size()) == gate.arity,
                    "gate arity does not match target count");
    detail::check_targets(num_qubits_, targets);

    const int k = gate.arity;
    const Index local_dim = Index{1} << k;
    std::vector<int> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<Index> offsets(local_dim, 0);
    for (Index m = 0; m < local_dim; ++m) {
        for (int q = 0; q < k; ++q) {
            if ((m >> q) & 1U) {
                offsets[m] |= Index{1} << targets[q];
            }
        }
    }

    const auto &u = gate.entries;
    std::vector<cplx> in(local_dim);
    const Index outer = dimension() >> k;
    for (Index c = 0; c < outer; ++c) {
        const Index base = detail::insert_zero_bits(c, sorted);
        for (Index m = 0; m < local_dim; ++m) {
            in[m] = amps_[base | offsets[m]];
        }
        for (Index r = 0; r < local_dim; ++r) {
            cplx acc{0.0, 0.0};
            for (Index m = 0; m < local_dim; ++m) {
                acc += u(static_cast<Eigen::Index>(r),
                         static_cast<Eigen::Index>(m)) *
                       in[m];
            }
            amps_[base | offsets[r]] = acc;
        }
    }
}

/// Returns a copy of `state` with `gate` applied on `targets`.
inline StateVector apply_gate(StateVector state, const GateMatrix &gate,
                              std::span<const int> targets) {
    state.apply(gate, targets);
    return state;
}
inline StateVector apply_gate(StateVector state, const GateMatrix &gate,
                              std::initializer_list<int> targets) {
    const std::vector<int> t(targets);
    state.apply(gate, t);
    return state;
}

/// <a|b>
inline cplx inner(const StateVector &a, const StateVector &b) {
    detail::require(a.num_qubits() == b.num_qubits(),
                    "inner product of states with different qubit counts");
    cplx acc{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (Index i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

/// Standard single- and two-qubit gates.
namespace gates {

inline GateMatrix from_rows(int dim, std::initializer_list<cplx> rowmajor) {
    Eigen::MatrixXcd m(dim, dim);
    auto it = rowmajor.begin();
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = *it++;
        }
    }
    return GateMatrix(std::move(m));
}

inline GateMatrix identity(int arity = 1) {
    const Eigen::Index d = Eigen::Index{1} << arity;
    return GateMatrix(Eigen::MatrixXcd::Identity(d, d));
}
inline GateMatrix x() { return from_rows(2, {0, 1, 1, 0}); }
inline GateMatrix y() {
    return from_rows(2, {0, cplx{0, -1}, cplx{0, 1}, 0});
}
inline GateMatrix z() { return from_rows(2, {1, 0, 0, -1}); }
inline GateMatrix h() {
    const double r = 1.0 / std::sqrt(2.0);
    return from_rows(2, {r, r, r, -r});
}
/// exp(-i theta Y / 2)
inline GateMatrix ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return from_rows(2, {c, -s, s, c});
}
/// exp(-i theta Z / 2)
inline GateMatrix rz(double theta) {
    return from_rows(2, {std::polar(1.0, -theta / 2), 0, 0,
                         std::polar(1.0, theta / 2)});
}
/// Local qubit 0 = control, local qubit 1 = target.
inline GateMatrix cnot() {
    return from_rows(4, {1, 0, 0, 0, //
                         0, 0, 0, 1, //
                         0, 0, 1, 0, //
                         0, 1, 0, 0});
}
/// CNOT that fires when the control (local qubit 0) is |0>.
inline GateMatrix open_cnot() {
    return from_rows(4, {0, 0, 1, 0, //
                         0, 1, 0, 0, //
                         1, 0, 0, 0, //
                         0, 0, 0, 1});
}
inline GateMatrix cz() {
    return from_rows(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
}

} // namespace gates

} // namespace bsap
