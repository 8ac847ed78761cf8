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

// Independent reference implementations for the test suites. Nothing here
// calls into the library's simulation or eigen code paths.

#include <algorithm>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace bsap::oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char p) {
    Mat m(2, 2);
    switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
    }
    return m;
}

/// ops[q] acts on qubit q; qubit 0 is the least significant bit, so the full
/// operator is ops[L-1] (x) ... (x) ops[0].
inline Mat kron_chain(const std::vector<Mat> &ops) {
    Mat out = Mat::Identity(1, 1);
    for (const auto &op : ops) {
        out = Eigen::kroneckerProduct(op, out).eval();
    }
    return out;
}

/// Pauli string on L qubits with letters at the given sites.
inline Mat pauli_string(int L, const std::string &letters, const std::vector<int> &sites) {
    std::vector<Mat> ops(static_cast<std::size_t>(L), pauli('I'));
    for (std::size_t k = 0; k < sites.size(); ++k) {
        ops[static_cast<std::size_t>(sites[k])] = pauli(letters[k]);
    }
    return kron_chain(ops);
}

inline Mat xyz_ring(int L, double jx, double jy, double jz) {
    const auto d = Eigen::Index{1} << L;
    Mat h = Mat::Zero(d, d);
    for (int i = 0; i < L; ++i) {
        const int j = (i + 1) % L;
        h -= jx * pauli_string(L, "XX", {i, j});
        h -= jy * pauli_string(L, "YY", {i, j});
        h -= jz * pauli_string(L, "ZZ", {i, j});
    }
    return h;
}

inline Mat ising_ring(int L, double jz) { return xyz_ring(L, 0.0, 0.0, jz); }

inline Mat ap_initial(int L, double jz) {
    const auto d = Eigen::Index{1} << L;
    Mat h = Mat::Zero(d, d);
    for (int i = 0; i < L; ++i) {
        h -= (jz / std::pow(2.0, i)) * pauli_string(L, "Z", {i});
    }
    return h;
}

inline Mat spin_flip(int L) {
    std::vector<Mat> ops(static_cast<std::size_t>(L), pauli('X'));
    return kron_chain(ops);
}

/// Full-register matrix of a local gate on `targets` (local bit m <-> targets[m]),
/// by direct index matching over all row/column pairs.
inline Mat embed(const Mat &u, int L, const std::vector<int> &targets) {
    const auto d = Eigen::Index{1} << L;
    Eigen::Index tmask = 0;
    for (int t : targets) tmask |= Eigen::Index{1} << t;
    auto local = [&](Eigen::Index b) {
        Eigen::Index m = 0;
        for (std::size_t k = 0; k < targets.size(); ++k) {
            if ((b >> targets[k]) & 1) m |= Eigen::Index{1} << k;
        }
        return m;
    };
    Mat out = Mat::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            if ((r & ~tmask) == (c & ~tmask)) {
                out(r, c) = u(local(r), local(c));
            }
        }
    }
    return out;
}

/// exp(-i t H) by Pade approximation (independent of any eigendecomposition).
inline Mat expm_i(const Mat &h, double t) {
    const Mat a = (C(0, -t) * h).eval();
    return a.exp();
}

inline Mat ry(double t) {
    Mat m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}
inline Mat rz(double t) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(C(0, -t / 2));
    m(1, 1) = std::exp(C(0, t / 2));
    return m;
}
inline Mat hadamard() {
    Mat m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

/// Bitstrings as text, site 0 first.
inline std::string bits_text(std::uint64_t b, int L) {
    std::string s;
    for (int j = 0; j < L; ++j) s.push_back(((b >> j) & 1) ? '1' : '0');
    return s;
}

/// Neighbour-XOR string, text in, text out.
inline std::string phi_text(const std::string &b) {
    std::string out;
    const auto L = b.size();
    for (std::size_t j = 0; j < L; ++j) {
        out.push_back(b[j] == b[(j + 1) % L] ? '0' : '1');
    }
    return out;
}

/// Suffix-parity preimage, text in, text out.
inline std::string suffix_parity_text(const std::string &w) {
    std::string out(w.size(), '0');
    int acc = 0;
    for (auto j = static_cast<int>(w.size()) - 1; j >= 0; --j) {
        acc ^= w[static_cast<std::size_t>(j)] == '1';
        out[static_cast<std::size_t>(j)] = acc ? '1' : '0';
    }
    return out;
}

/// All length-L strings of weight k, by permutation of a sorted template.
inline std::vector<std::string> strings_of_weight(int L, int k) {
    std::string s(static_cast<std::size_t>(L - k), '0');
    s += std::string(static_cast<std::size_t>(k), '1');
    std::vector<std::string> out;
    do {
        out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

inline std::uint64_t text_bits(const std::string &s) {
    std::uint64_t b = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == '1') b |= std::uint64_t{1} << j;
    }
    return b;
}

inline Vec random_state(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    Vec v(dim);
    for (auto &x : v) x = C(n(rng), n(rng));
    return v.normalized();
}

inline Mat random_unitary(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    Mat a(dim, dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = C(n(rng), n(rng));
    Eigen::HouseholderQR<Mat> qr(a);
    return qr.householderQ();
}

inline std::uint64_t choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<std::uint64_t>(std::llround(r));
}

} // namespace bsap::oracle
