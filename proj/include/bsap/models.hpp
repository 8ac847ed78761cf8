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

/// @file models.hpp
/// Spin-ring Hamiltonians and the interpolation path H(s) = H0 + f(s)(HT - H0).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "bsap/pauli.hpp"

namespace bsap {

/// Ferromagnetic XYZ ring with periodic wraparound:
///   H = -sum_i [jx X_i X_{i+1} + jy Y_i Y_{i+1} + jz Z_i Z_{i+1}]
/// Terms are emitted bond by bond (XX, YY, ZZ), 3L in total, including
/// zero-weight ones.
///
/// Requires |jz| >= |jx| >= |jy|. When violated, the error message names the
/// axis relabelling that restores the ordering.
inline Hamiltonian build_xyz(int num_sites, double jx, double jy, double jz) {
    detail::require(num_sites >= 4 && num_sites % 2 == 0,
                    "XYZ ring needs an even number of sites >= 4");
    detail::require(std::isfinite(jx) && std::isfinite(jy) && std::isfinite(jz),
                    "couplings must be finite");
    if (!(std::abs(jz) >= std::abs(jx) && std::abs(jx) >= std::abs(jy))) {
        std::array<std::pair<double, char>, 3> c{
            {{std::abs(jx), 'x'}, {std::abs(jy), 'y'}, {std::abs(jz), 'z'}}};
        std::sort(c.begin(), c.end(), [](auto a, auto b) { return a.first > b.first; });
        std::string msg = "couplings violate |Jz| >= |Jx| >= |Jy|; rotate the frame so that ";
        msg += c[0].second;
        msg += "->z, ";
        msg += c[1].second;
        msg += "->x, ";
        msg += c[2].second;
        msg += "->y";
        detail::fail(msg);
    }
    Hamiltonian h{num_sites, {}, Couplings{jx, jy, jz}};
    h.terms.reserve(3 * static_cast<std::size_t>(num_sites));
    for (int i = 0; i < num_sites; ++i) {
        const int j = (i + 1) % num_sites;
        h.add(PauliTerm::on_sites(num_sites, -jx, "XX", {i, j}));
        h.add(PauliTerm::on_sites(num_sites, -jy, "YY", {i, j}));
        h.add(PauliTerm::on_sites(num_sites, -jz, "ZZ", {i, j}));
    }
    return h;
}

/// -jz sum_i Z_i Z_{i+1} on the ring. Levels E_n = -jz (L - 4n), n = 0..L/2,
/// each with degeneracy 2 C(L, 2n).
inline Hamiltonian build_h0_bsap(int num_sites, double jz) {
    detail::require(num_sites >= 4 && num_sites % 2 == 0,
                    "ring needs an even number of sites >= 4");
    Hamiltonian h{num_sites, {}, Couplings{0.0, 0.0, jz}};
    for (int i = 0; i < num_sites; ++i) {
        h.add(PauliTerm::on_sites(num_sites, -jz, "ZZ", {i, (i + 1) % num_sites}));
    }
    return h;
}

/// -jz sum_i Z_i / 2^i. Non-degenerate: the energies are distinct binary
/// fractions.
inline Hamiltonian build_h0_ap(int num_sites, double jz) {
    detail::require(num_sites >= 2 && num_sites % 2 == 0,
                    "site count must be even");
    Hamiltonian h{num_sites, {}, std::nullopt};
    for (int i = 0; i < num_sites; ++i) {
        h.add(PauliTerm::on_sites(num_sites, -jz / std::ldexp(1.0, i), "Z", {i}));
    }
    return h;
}

enum class ScheduleShape { Linear, Smoothstep, SinSquared };

/// Interpolation function f with f(0) = 0 and f(1) = 1.
struct ScheduleFunction {
    ScheduleShape shape = ScheduleShape::Linear;

    [[nodiscard]] double operator()(double s) const {
        switch (shape) {
        case ScheduleShape::Linear:
            return s;
        case ScheduleShape::Smoothstep:
            return s * s * (3.0 - 2.0 * s);
        case ScheduleShape::SinSquared: {
            const double v = std::sin(std::numbers::pi * s / 2.0);
            return v * v;
        }
        }
        return s;
    }

    [[nodiscard]] double derivative(double s) const {
        switch (shape) {
        case ScheduleShape::Linear:
            return 1.0;
        case ScheduleShape::Smoothstep:
            return 6.0 * s * (1.0 - s);
        case ScheduleShape::SinSquared:
            return std::numbers::pi / 2.0 * std::sin(std::numbers::pi * s);
        }
        return 1.0;
    }

    /// max_s |f'(s)|
    [[nodiscard]] double max_slope() const {
        switch (shape) {
        case ScheduleShape::Linear:
            return 1.0;
        case ScheduleShape::Smoothstep:
            return 1.5;
        case ScheduleShape::SinSquared:
            return std::numbers::pi / 2.0;
        }
        return 1.0;
    }
};

inline std::string to_string(ScheduleShape s) {
    switch (s) {
    case ScheduleShape::Linear:
        return "linear";
    case ScheduleShape::Smoothstep:
        return "smoothstep";
    case ScheduleShape::SinSquared:
        return "sin2";
    }
    return "linear";
}

inline ScheduleShape parse_schedule_shape(const std::string &name) {
    if (name == "linear") return ScheduleShape::Linear;
    if (name == "smoothstep") return ScheduleShape::Smoothstep;
    if (name == "sin2") return ScheduleShape::SinSquared;
    detail::fail("unknown schedule function '" + name + "'");
}

/// H0 + f(s) [HT - H0] with like terms merged. Term order: H0's terms, then
/// terms only present in HT. Terms whose merged weight is exactly zero are
/// dropped, so s = 0 gives H0's term list and s = 1 gives HT's non-zero terms.
inline Hamiltonian interpolate(const Hamiltonian &h0, const Hamiltonian &ht,
                               double s, ScheduleFunction f = {}) {
    detail::require(h0.num_sites == ht.num_sites,
                    "interpolated Hamiltonians must share the ring size");
    detail::require(s >= 0.0 && s <= 1.0, "interpolation parameter outside [0, 1]");
    const double w = f(s);

    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<double, double>> coeff;
    std::unordered_map<std::string, const PauliTerm *> proto;
    auto collect = [&](const Hamiltonian &h, bool is_target) {
        for (const auto &t : h.terms) {
            const auto key = t.label();
            auto [it, fresh] = coeff.try_emplace(key, 0.0, 0.0);
            if (fresh) {
                order.push_back(key);
                proto[key] = &t;
            }
            (is_target ? it->second.second : it->second.first) += t.coefficient;
        }
    };
    collect(h0, false);
    collect(ht, true);

    Hamiltonian out{h0.num_sites, {}, std::nullopt};
    for (const auto &key : order) {
        const auto [c0, ct] = coeff[key];
        const double c = (w == 1.0) ? ct : c0 + w * (ct - c0);
        if (c != 0.0) {
            out.add(PauliTerm{c, proto[key]->letters});
        }
    }
    return out;
}

} // namespace bsap
