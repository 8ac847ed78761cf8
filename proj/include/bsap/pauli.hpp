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

#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsap/statevector.hpp"

namespace bsap {

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

/// Bit masks describing a Pauli string P = i^{ny} X^{x_mask} Z^{z_mask}.
struct PauliMasks {
    Index x_mask = 0;
    Index z_mask = 0;
    int num_y = 0;

    /// P|b> = phase(b) |b ^ x_mask>
    [[nodiscard]] cplx phase(Index b) const {
        static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int sign = std::popcount(b & z_mask) & 1;
        return kIPow[(num_y + 2 * sign) & 3];
    }
};

struct PauliTerm {
    double coefficient = 0.0;
    /// letters[j] acts on site/qubit j.
    std::vector<Pauli> letters;

    PauliTerm() = default;
    PauliTerm(double c, std::vector<Pauli> l)
        : coefficient(c), letters(std::move(l)) {
        detail::require(std::isfinite(coefficient),
                        "Pauli coefficient must be finite");
    }

    /// Sparse constructor: `ops` like "XX" on `sites` {i, j}.
    static PauliTerm on_sites(int num_sites, double c, std::string_view ops,
                              std::initializer_list<int> sites) {
        detail::require(ops.size() == sites.size(),
                        "one Pauli letter per site expected");
        std::vector<Pauli> l(num_sites, Pauli::I);
        auto it = sites.begin();
        for (char op : ops) {
            const int s = *it++;
            detail::require(s >= 0 && s < num_sites, "site out of range");
            detail::require(l[s] == Pauli::I, "site repeated in Pauli term");
            l[s] = static_cast<Pauli>(op);
        }
        return {c, std::move(l)};
    }

    [[nodiscard]] int num_sites() const {
        return static_cast<int>(letters.size());
    }

    [[nodiscard]] PauliMasks masks() const {
        PauliMasks m;
        for (int j = 0; j < num_sites(); ++j) {
            const Index bit = Index{1} << j;
            switch (letters[j]) {
            case Pauli::X:
                m.x_mask |= bit;
                break;
            case Pauli::Y:
                m.x_mask |= bit;
                m.z_mask |= bit;
                ++m.num_y;
                break;
            case Pauli::Z:
                m.z_mask |= bit;
                break;
            case Pauli::I:
                break;
            }
        }
        return m;
    }

    /// Qubits where the letter is not I, ascending.
    [[nodiscard]] std::vector<int> support() const {
        std::vector<int> s;
        for (int j = 0; j < num_sites(); ++j) {
            if (letters[j] != Pauli::I) {
                s.push_back(j);
            }
        }
        return s;
    }

    /// "IXXI"-style label, site 0 first.
    [[nodiscard]] std::string label() const {
        std::string s;
        s.reserve(letters.size());
        for (auto p : letters) {
            s.push_back(static_cast<char>(p));
        }
        return s;
    }
};

struct Couplings {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
};

/// Real-weighted sum of Pauli strings on a ring of `num_sites` qubits.
struct Hamiltonian {
    int num_sites = 0;
    std::vector<PauliTerm> terms;
    std::optional<Couplings> couplings;

    void add(PauliTerm t) {
        detail::require(t.num_sites() == num_sites,
                        "Pauli term length must equal the ring size");
        terms.push_back(std::move(t));
    }
};

/// H|psi>
inline StateVector apply_hamiltonian(const Hamiltonian &h,
                                     const StateVector &psi) {
    detail::require(psi.num_qubits() == h.num_sites,
                    "state and Hamiltonian sizes differ");
    std::vector<cplx> out(psi.dimension(), cplx{0.0, 0.0});
    const auto in = psi.amplitudes();
    for (const auto &t : h.terms) {
        const auto m = t.masks();
        const double c = t.coefficient;
        for (Index b = 0; b < in.size(); ++b) {
            out[b ^ m.x_mask] += c * m.phase(b) * in[b];
        }
    }
    return {psi.num_qubits(), std::move(out)};
}

/// <psi|H|psi> (real part; the imaginary part vanishes for Hermitian H).
inline double expectation(const StateVector &psi, const Hamiltonian &h) {
    return inner(psi, apply_hamiltonian(h, psi)).real();
}

/// Dense 2^L x 2^L matrix. Memory-guarded at 12 sites.
inline Eigen::MatrixXcd dense_matrix(const Hamiltonian &h) {
    if (h.num_sites > 12) {
        throw ResourceLimitError("dense Hamiltonian limited to 12 sites");
    }
    const Index dim = Index{1} << h.num_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &t : h.terms) {
        const auto mk = t.masks();
        for (Index b = 0; b < dim; ++b) {
            m(static_cast<Eigen::Index>(b ^ mk.x_mask),
              static_cast<Eigen::Index>(b)) += t.coefficient * mk.phase(b);
        }
    }
    return m;
}

/// The global spin flip X^{(x)L}, as a Pauli term with unit coefficient.
inline PauliTerm parity_string(int num_sites) {
    return {1.0, std::vector<Pauli>(num_sites, Pauli::X)};
}

} // namespace bsap
