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

/// @file subspace.hpp
/// Bitstring machinery for the degenerate levels of the Ising ring
/// -J sum Z_i Z_{i+1}.
///
/// The bond map phi sends b to the string of neighbour XORs (its domain-wall
/// pattern). It is exactly 2-to-1 onto even-weight strings; the two preimages
/// differ by a global complement and are told apart by bit 0. Level n of the
/// ring consists of the preimages of the weight-2n strings W_2n.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bsap/statevector.hpp"

namespace bsap {

/// Length-L binary word; bit j is site j. The text form lists site 0 first,
/// so "1000" is the integer 1.
struct Bitstring {
    Index bits = 0;
    int length = 0;

    Bitstring() = default;
    Bitstring(Index b, int len) : bits(b), length(len) {
        detail::require(len >= 1 && len <= 63, "bitstring length out of range");
        detail::require(len == 63 || (b >> len) == 0, "bits set beyond the length");
    }

    static Bitstring parse(std::string_view text) {
        Index b = 0;
        for (std::size_t j = 0; j < text.size(); ++j) {
            detail::require(text[j] == '0' || text[j] == '1',
                            "bitstring text must be 0/1 characters");
            if (text[j] == '1') {
                b |= Index{1} << j;
            }
        }
        return {b, static_cast<int>(text.size())};
    }

    [[nodiscard]] bool bit(int j) const { return (bits >> j) & 1U; }
    [[nodiscard]] Index mask() const { return (Index{1} << length) - 1; }

    [[nodiscard]] std::string str() const {
        std::string s(static_cast<std::size_t>(length), '0');
        for (int j = 0; j < length; ++j) {
            if (bit(j)) {
                s[static_cast<std::size_t>(j)] = '1';
            }
        }
        return s;
    }

    friend bool operator==(const Bitstring &, const Bitstring &) = default;
};

inline int hamming_weight(const Bitstring &b) { return std::popcount(b.bits); }

/// Output bit j = b_j xor b_{(j+1) mod L}.
inline Bitstring phi(const Bitstring &b) {
    const Index rotated = (b.bits >> 1) | ((b.bits & 1U) << (b.length - 1));
    return {b.bits ^ rotated, b.length};
}

/// Preimage of `w` under phi with bit 0 clear: bit j = xor_{k=j}^{L-1} w_k.
inline Bitstring phi_inverse_0(const Bitstring &w) {
    detail::require(hamming_weight(w) % 2 == 0,
                    "odd-weight string is outside the image of phi");
    Index out = 0;
    bool suffix = false;
    for (int j = w.length - 1; j >= 0; --j) {
        suffix ^= w.bit(j);
        if (suffix) {
            out |= Index{1} << j;
        }
    }
    return {out, w.length};
}

/// Preimage of `w` under phi with bit 0 set: the complement of phi_inverse_0.
inline Bitstring phi_inverse_1(const Bitstring &w) {
    const auto b = phi_inverse_0(w);
    return {b.bits ^ b.mask(), b.length};
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Size of W_2n (one spin-flip sector of level n).
inline std::uint64_t branch_dimension(int num_sites, int level) {
    return binomial(num_sites, 2 * level);
}

/// Degeneracy of level n of the Ising ring: both preimages of every W_2n string.
inline std::uint64_t level_degeneracy(int num_sites, int level) {
    return 2 * branch_dimension(num_sites, level);
}

enum class Branch { W, B0, B1 };

inline std::string to_string(Branch b) {
    switch (b) {
    case Branch::W:
        return "W";
    case Branch::B0:
        return "B0";
    case Branch::B1:
        return "B1";
    }
    return "W";
}

/// Ordered basis of one branch of level n; members ascend by integer value.
/// The W ordering fixes the row/column order of subspace matrices.
struct SubspaceBasis {
    int num_sites = 0;
    int level = 0;
    Branch branch = Branch::W;
    std::vector<Bitstring> members;

    [[nodiscard]] std::size_t size() const { return members.size(); }

    /// Position of `b` in `members`, or -1.
    [[nodiscard]] int index_of(const Bitstring &b) const {
        for (std::size_t k = 0; k < members.size(); ++k) {
            if (members[k] == b) {
                return static_cast<int>(k);
            }
        }
        return -1;
    }
};

inline SubspaceBasis enumerate_branch(int num_sites, int level, Branch branch) {
    detail::require(num_sites >= 2 && num_sites <= 30, "ring size out of range");
    detail::require(level >= 0 && 2 * level <= num_sites, "level out of range");
    SubspaceBasis out{num_sites, level, branch, {}};
    out.members.reserve(branch_dimension(num_sites, level));
    const Index dim = Index{1} << num_sites;
    for (Index b = 0; b < dim; ++b) {
        if (std::popcount(b) == 2 * level) {
            const Bitstring w{b, num_sites};
            switch (branch) {
            case Branch::W:
                out.members.push_back(w);
                break;
            case Branch::B0:
                out.members.push_back(phi_inverse_0(w));
                break;
            case Branch::B1:
                out.members.push_back(phi_inverse_1(w));
                break;
            }
        }
    }
    std::sort(out.members.begin(), out.members.end(),
              [](const Bitstring &a, const Bitstring &b) { return a.bits < b.bits; });
    return out;
}

/// Applies the spin flip X^{(x)L}.
inline StateVector apply_spin_flip(const StateVector &psi) {
    const Index all = psi.dimension() - 1;
    std::vector<cplx> out(psi.dimension());
    const auto in = psi.amplitudes();
    for (Index b = 0; b < in.size(); ++b) {
        out[b ^ all] = in[b];
    }
    return {psi.num_qubits(), std::move(out)};
}

/// <psi| X^{(x)L} |psi>
inline double spin_flip_expectation(const StateVector &psi) {
    return inner(psi, apply_spin_flip(psi)).real();
}

/// (|psi> + sign X^{(x)L}|psi>)/sqrt(2). The input must live on basis states
/// with bit 0 clear, in which case the result has the input's norm. Weight
/// on bit 0 = 1 or a norm change beyond 1e-10 means the input left that half
/// and is reported.
inline StateVector apply_parity_sector(const StateVector &psi, int sign) {
    detail::require(sign == 1 || sign == -1, "parity sign must be +1 or -1");
    const double before = psi.norm();
    double stray = 0.0;
    const auto amps = psi.amplitudes();
    for (Index b = 1; b < amps.size(); b += 2) {
        stray += std::norm(amps[b]);
    }
    if (std::sqrt(stray) > 1e-10) {
        throw SubspaceViolation("parity projection input has weight on bit0 = 1");
    }
    StateVector out = apply_spin_flip(psi);
    out *= cplx{static_cast<double>(sign), 0.0};
    out += psi;
    out *= cplx{1.0 / std::sqrt(2.0), 0.0};
    if (std::abs(out.norm() - before) > 1e-10) {
        throw SubspaceViolation(
            "parity projection changed the norm: input not confined to bit0 = 0");
    }
    return out;
}

} // namespace bsap
